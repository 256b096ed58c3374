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

#include "homog/spin_config.hpp"

#include "homog/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace homog {
namespace {

struct Entry {
  std::size_t line;
  std::string key;
  std::string value;
};

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

bool valid_label(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

double parse_number(const std::string& token, std::size_t line, const std::string& field) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    throw ParseError(line, field + ": '" + token + "' is not a finite number");
  return value;
}

std::vector<std::string> split_tokens(const std::string& s) {
  std::string cleaned = s;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream is(cleaned);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

SpinConfig parse_spin_config(std::string_view text) {
  std::map<std::string, std::vector<Entry>> sections;
  std::map<std::string, std::size_t> section_lines;
  std::string current;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string line = raw.substr(0, raw.find('#'));
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      current = trim(std::string_view(line).substr(1, line.size() - 2));
      if (current != "spins" && current != "couplings" && current != "protons")
        throw ParseError(line_no, "unknown section [" + current + "]");
      if (section_lines.count(current)) throw ParseError(line_no, "duplicate section [" + current + "]");
      section_lines[current] = line_no;
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    if (current.empty()) throw ParseError(line_no, "entry outside of any section");
    Entry e{line_no, trim(std::string_view(line).substr(0, eq)),
            trim(std::string_view(line).substr(eq + 1))};
    if (e.key.empty() || e.value.empty()) throw ParseError(line_no, "empty key or value");
    sections[current].push_back(std::move(e));
  }

  SpinConfig config;
  std::vector<std::string> labels = config.system.labels();
  std::vector<double> freqs = config.system.frequencies_hz();
  Eigen::MatrixXd couplings = config.system.couplings_hz();

  if (sections.count("spins")) {
    const auto& entries = sections["spins"];
    if (entries.empty()) throw ParseError(section_lines["spins"], "[spins] section is empty");
    labels.clear();
    freqs.clear();
    for (const auto& e : entries) {
      if (!valid_label(e.key)) throw ParseError(e.line, "invalid spin label '" + e.key + "'");
      if (std::find(labels.begin(), labels.end(), e.key) != labels.end())
        throw ParseError(e.line, "duplicate spin '" + e.key + "'");
      labels.push_back(e.key);
      freqs.push_back(parse_number(e.value, e.line, "spins." + e.key));
    }
    if (static_cast<int>(labels.size()) > kDefaultMaxQubits)
      throw ParseError(section_lines["spins"], "too many spins");
    couplings = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()),
                                      static_cast<Eigen::Index>(labels.size()));
  }
  auto index_of = [&](const std::string& label, std::size_t line) {
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw ParseError(line, "unknown spin '" + label + "'");
    return static_cast<Eigen::Index>(it - labels.begin());
  };

  if (sections.count("couplings")) {
    std::map<std::pair<Eigen::Index, Eigen::Index>, std::size_t> seen;
    for (const auto& e : sections["couplings"]) {
      const auto dash = e.key.find('-');
      if (dash == std::string::npos)
        throw ParseError(e.line, "coupling key '" + e.key + "' must look like 'A-B'");
      const Eigen::Index a = index_of(trim(std::string_view(e.key).substr(0, dash)), e.line);
      const Eigen::Index b = index_of(trim(std::string_view(e.key).substr(dash + 1)), e.line);
      if (a == b) throw ParseError(e.line, "self-coupling '" + e.key + "'");
      const double j = parse_number(e.value, e.line, "couplings." + e.key);
      if (seen.count({a, b})) throw ParseError(e.line, "duplicate coupling '" + e.key + "'");
      if (seen.count({b, a}) && couplings(b, a) != j)
        throw ParseError(e.line, "coupling '" + e.key + "' disagrees with its reverse (line " +
                                     std::to_string(seen[{b, a}]) + "); couplings must be symmetric");
      seen[{a, b}] = e.line;
      couplings(a, b) = j;
      couplings(b, a) = j;
    }
  }

  if (sections.count("protons")) {
    const auto& entries = sections["protons"];
    Eigen::MatrixXd hc(static_cast<Eigen::Index>(entries.size()),
                       static_cast<Eigen::Index>(labels.size()));
    for (std::size_t p = 0; p < entries.size(); ++p) {
      const auto& e = entries[p];
      if (!valid_label(e.key)) throw ParseError(e.line, "invalid proton label '" + e.key + "'");
      if (std::find(config.proton_labels.begin(), config.proton_labels.end(), e.key) !=
          config.proton_labels.end())
        throw ParseError(e.line, "duplicate proton '" + e.key + "'");
      auto tokens = split_tokens(e.value);
      if (!tokens.empty() && tokens.front() == "methyl") {
        config.methyl_group.push_back(static_cast<int>(p));
        tokens.erase(tokens.begin());
      }
      if (tokens.size() != labels.size())
        throw ParseError(e.line, "proton '" + e.key + "' needs " + std::to_string(labels.size()) +
                                     " couplings (one per spin), got " + std::to_string(tokens.size()));
      for (std::size_t c = 0; c < tokens.size(); ++c)
        hc(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(c)) =
            parse_number(tokens[c], e.line, "protons." + e.key);
      config.proton_labels.push_back(e.key);
    }
    config.hc_couplings_hz = std::move(hc);
  }

  config.system = SpinSystem(std::move(labels), std::move(freqs), std::move(couplings));
  return config;
}

SpinConfig load_spin_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigurationError("cannot open spin config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_spin_config(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string(), e);
  }
}

EnvironmentEnsemble ensemble_from_config(const SpinConfig& config) {
  if (!config.hc_couplings_hz) return single_member_ensemble(config.system);
  return environment_ensemble(config.system, *config.hc_couplings_hz, config.methyl_group);
}

}  // namespace homog
