// Copyright 2026 The Homogeniser Authors
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

#include "homog/records_io.hpp"

#include "homog/errors.hpp"
#include "homog/pulse_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace homog {
namespace {

constexpr const char* kSpinNames = "ABCD";

double entropy_of(double f) { return von_neumann_entropy(std::clamp(f, -1.0, 1.0)); }

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(line, "expected a number, got '" + s + "'");
  return v;
}

}  // namespace

std::string records_header() {
  std::string h = "eta_deg,repeat";
  for (const char* suffix : {"_raw", "_norm"})
    for (int q = 0; q < 4; ++q) h += std::string(",f") + kSpinNames[q] + suffix;
  for (int q = 0; q < 4; ++q) h += std::string(",theory_f") + kSpinNames[q];
  for (int q = 0; q < 4; ++q) h += std::string(",S_") + kSpinNames[q];
  h += ",S_sum,theory_S_sum,mode,scheme";
  return h;
}

std::string format_records(const std::vector<SweepRecord>& records) {
  if (records.empty()) throw ArgumentError("no records to emit");
  std::ostringstream os;
  os << records_header() << '\n';
  for (const auto& r : records) {
    const MarginalSet theory = closed_form_marginals(degrees_to_radians(r.eta_deg));
    os << format_double(r.eta_deg) << ',' << r.repeat_index;
    for (double f : r.f_raw.f) os << ',' << format_double(f);
    for (double f : r.f_normalised.f) os << ',' << format_double(f);
    for (double f : theory.f) os << ',' << format_double(f);
    double sum = 0.0;
    for (double f : r.f_normalised.f) {
      const double s = entropy_of(f);
      sum += s;
      os << ',' << format_double(s);
    }
    double theory_sum = 0.0;
    for (double f : theory.f) theory_sum += entropy_of(f);
    os << ',' << format_double(sum) << ',' << format_double(theory_sum) << ',' << to_string(r.mode)
       << ',' << to_string(r.normalisation) << '\n';
  }
  return os.str();
}

std::vector<SweepRecord> parse_records(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != records_header())
    throw ParseError(1, "unexpected or missing header row");
  const std::size_t n_cols = split_csv(records_header()).size();
  std::vector<SweepRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cols = split_csv(line);
    if (cols.size() != n_cols)
      throw ParseError(line_no, "expected " + std::to_string(n_cols) + " columns");
    SweepRecord r;
    r.eta_deg = to_double(cols[0], line_no);
    r.repeat_index = static_cast<int>(to_double(cols[1], line_no));
    for (int q = 0; q < 4; ++q) {
      r.f_raw.f[q] = to_double(cols[2 + q], line_no);
      r.f_normalised.f[q] = to_double(cols[6 + q], line_no);
    }
    try {
      r.mode = parse_sweep_mode(cols[n_cols - 2]);
      r.normalisation = parse_normalisation(cols[n_cols - 1]);
    } catch (const ArgumentError& e) {
      throw ParseError(line_no, e.what());
    }
    records.push_back(r);
  }
  return records;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw ConfigurationError("failed writing '" + path.string() + "'");
}

void write_records(const std::filesystem::path& path, const std::vector<SweepRecord>& records) {
  write_text_file(path, format_records(records));
}

std::vector<SweepRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_records(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  }
}

std::string format_entropy_table(const std::vector<double>& grid_deg,
                                 const std::vector<EntropyRow>& rows) {
  if (grid_deg.size() != rows.size()) throw ArgumentError("entropy table: grid/row mismatch");
  std::ostringstream os;
  os << "eta_deg";
  for (int q = 0; q < 4; ++q) os << ",S_" << kSpinNames[q];
  os << ",S_sum";
  for (int q = 0; q < 4; ++q) os << ",theory_S_" << kSpinNames[q];
  os << ",theory_S_sum\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const EntropyRow& r = rows[i];
    os << format_double(grid_deg[i]);
    for (double s : r.entropy) os << ',' << format_double(s);
    os << ',' << format_double(r.sum);
    for (double s : r.theory_entropy) os << ',' << format_double(s);
    os << ',' << format_double(r.theory_sum) << '\n';
  }
  return os.str();
}

}  // namespace homog
