#pragma once
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "aht/errors.hpp"

namespace aht {

// Shortest round-tripping decimal form of x, locale-independent. All numeric output funnels
// through here so re-runs produce byte-identical files.
std::string format_double(double x);

// Plain CSV table writer: fixed header, LF line endings, deterministic float formatting.
// Alongside `path` a `<path minus .csv>.json` mirror is written carrying the same rows plus a
// provenance block (version string and the constants/config the caller supplies).
class CsvWriter {
 public:
  CsvWriter(std::string path, std::vector<std::string> columns);
  void set_provenance(const nlohmann::json& block);

  void row(const std::vector<std::string>& cells);
  void row_values(const std::vector<double>& values);
  void close();  // writes both files; called by destructor if needed
  ~CsvWriter();

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::string provenance_;  // serialized json
  bool closed_ = false;
};

// Sidecar metadata (timestamps, wall time) — the one file allowed to differ between re-runs.
void write_run_meta(const std::string& dir, double elapsed_seconds);

void ensure_directory(const std::string& dir);

}  // namespace aht
