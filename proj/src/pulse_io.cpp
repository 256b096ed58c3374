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

#include "homog/pulse_io.hpp"

#include "homog/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace homog {
namespace {

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "expected a number, got '" + std::string(token) + "'");
  return value;
}

long parse_integer(std::string_view token, std::size_t line) {
  long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

std::string format_pulse_file(const PulseFile& file) {
  file.pulse.validate();
  std::ostringstream os;
  os << "# phase-only pulse\n"
     << "format 1\n"
     << "segments " << file.pulse.n_segments() << '\n'
     << "segment_duration_s " << format_double(file.pulse.segment_duration) << '\n'
     << "amplitude_rad_s " << format_double(file.pulse.amplitude) << '\n'
     << "spin_system " << file.spin_system << '\n'
     << "target " << file.target << '\n';
  if (file.fidelity) os << "fidelity " << format_double(*file.fidelity) << '\n';
  if (file.converged) os << "converged " << (*file.converged ? 1 : 0) << '\n';
  os << "phases\n";
  for (double p : file.pulse.phases) os << format_double(p) << '\n';
  return os.str();
}

PulseFile parse_pulse_file(std::string_view text) {
  PulseFile file;
  file.spin_system.clear();
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  long segments = -1;
  bool have_dt = false, have_amp = false, have_format = false, in_phases = false;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (in_phases) {
      file.pulse.phases.push_back(parse_double(line, line_no));
      continue;
    }
    std::istringstream fields(line);
    std::string key, value, extra;
    fields >> key >> value;
    if (key == "phases") {
      if (!value.empty()) throw ParseError(line_no, "'phases' takes no value");
      in_phases = true;
      continue;
    }
    if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");
    if (fields >> extra) throw ParseError(line_no, "trailing text after '" + key + "'");
    if (key == "format") {
      if (parse_integer(value, line_no) != 1) throw ParseError(line_no, "unsupported format version");
      have_format = true;
    } else if (key == "segments") {
      segments = parse_integer(value, line_no);
      if (segments < 1) throw ParseError(line_no, "segments must be positive");
    } else if (key == "segment_duration_s") {
      file.pulse.segment_duration = parse_double(value, line_no);
      have_dt = true;
    } else if (key == "amplitude_rad_s") {
      file.pulse.amplitude = parse_double(value, line_no);
      have_amp = true;
    } else if (key == "spin_system") {
      file.spin_system = value;
    } else if (key == "target") {
      file.target = value;
    } else if (key == "fidelity") {
      file.fidelity = parse_double(value, line_no);
    } else if (key == "converged") {
      const long c = parse_integer(value, line_no);
      if (c != 0 && c != 1) throw ParseError(line_no, "converged must be 0 or 1");
      file.converged = c == 1;
    } else {
      throw ParseError(line_no, "unknown key '" + key + "'");
    }
  }
  if (!have_format) throw ParseError(0, "pulse file lacks 'format'");
  if (segments < 0 || !have_dt || !have_amp || !in_phases)
    throw ParseError(0, "pulse file header is incomplete");
  if (static_cast<long>(file.pulse.phases.size()) != segments)
    throw ParseError(line_no, "expected " + std::to_string(segments) + " phases, found " +
                                  std::to_string(file.pulse.phases.size()));
  try {
    file.pulse.validate();
  } catch (const ArgumentError& e) {
    throw ParseError(0, e.what());
  }
  return file;
}

void write_pulse_file(const std::filesystem::path& path, const PulseFile& file) {
  const std::string text = format_pulse_file(file);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write pulse file '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigurationError("failed writing pulse file '" + path.string() + "'");
}

PulseFile read_pulse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open pulse file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_pulse_file(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  }
}

}  // namespace homog
