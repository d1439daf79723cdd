#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qpsl/types.hpp"

namespace qpsl {

inline constexpr const char* kVersion = "0.1.0";

std::string format_value(double v);  // shortest round-trip decimal
std::string format_value(int v);
std::string format_value(const std::string& v);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  template <typename... Cells>
  void add_row(const Cells&... cells) {
    rows.push_back({format_value(cells)...});
  }
};

struct Verdict {
  std::string check;
  bool pass = false;
  std::string detail;
};

// Command output: named tab-separated tables plus a summary document. Table
// content is a pure function of (config, seed), so reruns diff clean.
class Report {
 public:
  explicit Report(std::string command) : command_(std::move(command)) {}

  void set_config_echo(std::string echo) { config_echo_ = std::move(echo); }
  Table& add_table(std::string name, std::vector<std::string> columns);
  void add_verdict(const std::string& check, bool pass,
                   const std::string& detail = "");

  bool all_passed() const;
  const std::vector<Table>& tables() const { return tables_; }
  const std::vector<Verdict>& verdicts() const { return verdicts_; }
  const std::string& command() const { return command_; }

  // Writes <command>_<table>.tsv per table plus <command>_summary.json.
  void write(const std::string& out_dir) const;
  void print_summary(std::ostream& os) const;

 private:
  std::string command_;
  std::string config_echo_;
  std::vector<Table> tables_;
  std::vector<Verdict> verdicts_;
};

}  // namespace qpsl
