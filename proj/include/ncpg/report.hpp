#ifndef NCPG_REPORT_HPP
#define NCPG_REPORT_HPP

#include <string>
#include <vector>

namespace ncpg {

struct CheckResult {
  std::string suite;
  std::string check;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string note;
};

class Report {
 public:
  void add(CheckResult r) { results_.push_back(std::move(r)); }
  void check(const std::string& suite, const std::string& name,
             double measured, double tolerance, const std::string& note = "");
  // For reported-only quantities (no threshold asserted).
  void record(const std::string& suite, const std::string& name,
              double measured, const std::string& note = "");
  void expect(const std::string& suite, const std::string& name, bool ok,
              double measured, const std::string& note = "");

  const std::vector<CheckResult>& results() const { return results_; }
  bool all_pass() const;
  int failures() const;

  std::string to_json() const;
  void print(bool verbose = true) const;

 private:
  std::vector<CheckResult> results_;
};

void write_text_file(const std::string& path, const std::string& content);

// CSV writer with deterministic row ordering (as appended).
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  std::string to_string() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace ncpg

#endif
