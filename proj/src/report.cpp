#include "qpsl/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qpsl {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Prefer the shortest representation that round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char probe[64];
    std::snprintf(probe, sizeof(probe), "%.*g", prec, v);
    double back = 0.0;
    if (std::sscanf(probe, "%lf", &back) == 1 && back == v) {
      return probe;
    }
  }
  return buf;
}

std::string format_value(int v) { return std::to_string(v); }

std::string format_value(const std::string& v) { return v; }

Table& Report::add_table(std::string name, std::vector<std::string> columns) {
  tables_.push_back({std::move(name), std::move(columns), {}});
  return tables_.back();
}

void Report::add_verdict(const std::string& check, bool pass,
                         const std::string& detail) {
  verdicts_.push_back({check, pass, detail});
}

bool Report::all_passed() const {
  for (const auto& v : verdicts_) {
    if (!v.pass) return false;
  }
  return true;
}

namespace {

void write_table(const std::filesystem::path& path, const Table& table) {
  std::ofstream os(path);
  if (!os) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    os << (c ? "\t" : "") << table.columns[c];
  }
  os << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      throw std::runtime_error("table " + table.name + " row width mismatch");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << (c ? "\t" : "") << row[c];
    }
    os << "\n";
  }
}

}  // namespace

void Report::write(const std::string& out_dir) const {
  namespace fs = std::filesystem;
  fs::path dir(out_dir);
  fs::create_directories(dir);
  for (const auto& table : tables_) {
    write_table(dir / (command_ + "_" + table.name + ".tsv"), table);
  }

  nlohmann::json summary;
  summary["command"] = command_;
  summary["version"] = kVersion;
  summary["config"] = config_echo_;
  summary["tables"] = nlohmann::json::array();
  for (const auto& table : tables_) {
    summary["tables"].push_back({{"name", table.name},
                                 {"rows", table.rows.size()},
                                 {"file", command_ + "_" + table.name + ".tsv"}});
  }
  summary["checks"] = nlohmann::json::array();
  for (const auto& v : verdicts_) {
    summary["checks"].push_back(
        {{"name", v.check}, {"pass", v.pass}, {"detail", v.detail}});
  }
  summary["all_passed"] = all_passed();

  std::ofstream os(dir / (command_ + "_summary.json"));
  if (!os) {
    throw std::runtime_error("cannot write summary json in " + out_dir);
  }
  os << summary.dump(2) << "\n";
}

void Report::print_summary(std::ostream& os) const {
  os << command_ << " (" << kVersion << ")\n";
  if (!config_echo_.empty()) {
    os << "  config: " << config_echo_ << "\n";
  }
  for (const auto& table : tables_) {
    os << "  table " << table.name << ": " << table.rows.size() << " rows\n";
  }
  for (const auto& v : verdicts_) {
    os << "  [" << (v.pass ? "pass" : "FAIL") << "] " << v.check;
    if (!v.detail.empty()) os << ": " << v.detail;
    os << "\n";
  }
  os << (all_passed() ? "all checks passed" : "CHECKS FAILED") << "\n";
}

}  // namespace qpsl
