#include "ncpg/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ncpg {

void Report::check(const std::string& suite, const std::string& name,
                   double measured, double tolerance,
                   const std::string& note) {
  add({suite, name, measured <= tolerance, measured, tolerance, note});
}

void Report::record(const std::string& suite, const std::string& name,
                    double measured, const std::string& note) {
  add({suite, name, true, measured, 0.0,
       note.empty() ? "reported" : note});
}

void Report::expect(const std::string& suite, const std::string& name,
                    bool ok, double measured, const std::string& note) {
  add({suite, name, ok, measured, 0.0, note});
}

bool Report::all_pass() const {
  for (const auto& r : results_)
    if (!r.pass) return false;
  return true;
}

int Report::failures() const {
  int n = 0;
  for (const auto& r : results_)
    if (!r.pass) ++n;
  return n;
}

std::string Report::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : results_) {
    out.push_back({{"suite", r.suite},
                   {"check", r.check},
                   {"status", r.pass ? "pass" : "fail"},
                   {"measured", r.measured},
                   {"tolerance", r.tolerance},
                   {"note", r.note}});
  }
  return out.dump(2);
}

void Report::print(bool verbose) const {
  for (const auto& r : results_) {
    if (!verbose && r.pass) continue;
    std::printf("[%s] %s / %s: measured=%.3e tol=%.3e %s\n",
                r.pass ? "PASS" : "FAIL", r.suite.c_str(), r.check.c_str(),
                r.measured, r.tolerance, r.note.c_str());
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

CsvTable::CsvTable(std::vector<std::string> header)
    : header_(std::move(header)) {}

void CsvTable::add_row(const std::vector<double>& row) {
  if (row.size() != header_.size())
    throw std::runtime_error("CsvTable: row width mismatch");
  rows_.push_back(row);
}

std::string CsvTable::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    out += header_[i];
    out += (i + 1 < header_.size()) ? ',' : '\n';
  }
  char buf[64];
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.12g", row[i]);
      out += buf;
      out += (i + 1 < row.size()) ? ',' : '\n';
    }
  }
  return out;
}

void CsvTable::write(const std::string& path) const {
  write_text_file(path, to_string());
}

}  // namespace ncpg
