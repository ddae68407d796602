#include "aht/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

namespace aht {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  // %.17g always round-trips; prefer the shortest representation that does.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> columns)
    : path_(std::move(path)), columns_(std::move(columns)) {}

void CsvWriter::set_provenance(const nlohmann::json& block) { provenance_ = block.dump(2); }

void CsvWriter::row(const std::vector<std::string>& cells) {
  require(cells.size() == columns_.size(), ErrorCode::InvalidArgument,
          "csv row width does not match header: " + path_);
  rows_.push_back(cells);
}

void CsvWriter::row_values(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  row(cells);
}

void CsvWriter::close() {
  if (closed_) return;
  closed_ = true;
  std::ofstream out(path_, std::ios::binary);
  require(out.good(), ErrorCode::IoError, "cannot open " + path_);
  for (size_t c = 0; c < columns_.size(); ++c) out << (c ? "," : "") << columns_[c];
  out << "\n";
  for (const auto& r : rows_) {
    for (size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
    out << "\n";
  }
  out.close();

  nlohmann::json j;
  if (!provenance_.empty()) j["provenance"] = nlohmann::json::parse(provenance_);
  j["columns"] = columns_;
  auto rows = nlohmann::json::array();
  for (const auto& r : rows_) rows.push_back(r);
  j["rows"] = rows;
  std::string jpath = path_;
  if (jpath.size() > 4 && jpath.substr(jpath.size() - 4) == ".csv") jpath.resize(jpath.size() - 4);
  jpath += ".json";
  std::ofstream jout(jpath, std::ios::binary);
  require(jout.good(), ErrorCode::IoError, "cannot open " + jpath);
  jout << j.dump(2) << "\n";
}

CsvWriter::~CsvWriter() {
  try {
    close();
  } catch (...) {
  }
}

void write_run_meta(const std::string& dir, double elapsed_seconds) {
  nlohmann::json j;
  auto now = std::chrono::system_clock::now().time_since_epoch();
  j["unix_time"] = std::chrono::duration_cast<std::chrono::seconds>(now).count();
  j["elapsed_seconds"] = elapsed_seconds;
  std::ofstream out(dir + "/run_meta.json", std::ios::binary);
  require(out.good(), ErrorCode::IoError, "cannot open " + dir + "/run_meta.json");
  out << j.dump(2) << "\n";
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCode::IoError, "cannot create directory " + dir);
}

}  // namespace aht
