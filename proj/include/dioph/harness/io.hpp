#pragma once

// Output files. CSVs open with one `#` comment line carrying the wall-clock
// time; everything after it depends only on the configuration.

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dioph/errors.hpp"
#include "dioph/subspace.hpp"

namespace dioph::harness {

using Json = nlohmann::ordered_json;

/// Shortest decimal that round-trips; inf and nan spelled out.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

/// JSON has no infinities; they become null.
inline Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

inline std::string join_ints(const IntVector& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(v[i]);
  }
  return out;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header) : out_(path) {
    if (!out_) throw Error("cannot write " + path.string());
    out_ << "# generated " << utc_timestamp() << '\n' << header << '\n';
  }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << fields[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

/// CSV content after the timestamp line.
inline std::string csv_payload(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::string line, out;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && !line.empty() && line[0] == '#') {
      first = false;
      continue;
    }
    first = false;
    out += line;
    out += '\n';
  }
  return out;
}

}  // namespace dioph::harness
