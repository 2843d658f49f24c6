// Copyright 2026 The ciesdro Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ciesdro/scenario/clustering.hpp"

namespace ciesdro::io {

/// Malformed or missing input. `line()` is 1-based, 0 when not applicable.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& what, long line = 0)
      : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

/// Shortest decimal text that round-trips to the same double.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  for (auto& f : out) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
  }
  return out;
}

inline double parse_number(std::string_view s, long line) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
    throw InputError("not a number: '" + std::string(s) + "'", line);
  return v;
}

inline std::string sample_header() {
  std::string h = "day";
  for (int t = 0; t < scenario::kHours; ++t) {
    h += ",h";
    if (t < 10) h += '0';
    h += std::to_string(t);
  }
  return h;
}

/// Parses the daily-profile CSV (`day,h00..h23`).
inline scenario::SampleMatrix parse_samples_csv(std::istream& is, scenario::SourceTag tag) {
  std::string line;
  long lineno = 0;
  if (!std::getline(is, line)) throw InputError("empty sample file");
  ++lineno;
  auto header = split_fields(line);
  if (header.size() != scenario::kHours + 1 || header[0] != "day")
    throw InputError("expected header day,h00..h23", lineno);
  for (int t = 0; t < scenario::kHours; ++t) {
    std::string want = (t < 10 ? "h0" : "h") + std::to_string(t);
    if (header[t + 1] != want) throw InputError("expected column " + want, lineno);
  }
  scenario::SampleMatrix m;
  m.tag = tag;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto f = split_fields(line);
    if (f.size() != scenario::kHours + 1)
      throw InputError("expected 25 fields, found " + std::to_string(f.size()), lineno);
    for (int t = 0; t < scenario::kHours; ++t) {
      double v = parse_number(f[t + 1], lineno);
      if (!(v >= 0.0) || !std::isfinite(v)) throw InputError("negative or non-finite value", lineno);
      m.values.push_back(v);
    }
    ++m.rows;
  }
  if (m.rows == 0) throw InputError("sample file has no data rows");
  return m;
}

inline scenario::SampleMatrix read_samples_csv(const std::filesystem::path& path,
                                               scenario::SourceTag tag) {
  std::ifstream is(path);
  if (!is) throw InputError("cannot open " + path.string());
  return parse_samples_csv(is, tag);
}

inline void write_samples_csv(std::ostream& os, const scenario::SampleMatrix& m) {
  os << sample_header() << '\n';
  for (int r = 0; r < m.rows; ++r) {
    os << r;
    for (int t = 0; t < m.cols; ++t) os << ',' << format_number(m.at(r, t));
    os << '\n';
  }
}

/// Minimal CSV table builder with a mandatory header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<std::string>& cells) {
    if (cells.size() != header_.size()) throw std::logic_error("CsvTable: row width mismatch");
    rows_.push_back(cells);
  }

  std::string str() const {
    std::ostringstream os;
    write_line(os, header_);
    for (const auto& r : rows_) write_line(os, r);
    return os.str();
  }

 private:
  static void write_line(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  }
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes through a temporary sibling and renames, so readers never see a
/// partial file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp.string());
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace ciesdro::io
