// Copyright 2026 The qpdual Authors
// SPDX-License-Identifier: Apache-2.0
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

#include "qpdual/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "qpdual/duality.hpp"
#include "qpdual/error.hpp"

namespace qpdual {

ModelTag model_tag(const ModelSpec& spec) {
  ModelTag t;
  t.size = spec.size;
  t.p = spec.tau.p;
  t.q = spec.tau.q;
  if (spec.is_diagonal_aah()) {
    t.a = spec.distance_kernel.parameter();
    t.b = spec.distance_kernel.potential();
  } else {
    t.a = parameter_a(spec);
    t.b = parameter_b(spec);
  }
  t.range = std::max(spec.distance_kernel.range(), spec.modulation_kernel.range());
  return t;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw ComputationError("format_double: conversion failed");
  return std::string(buf, end);
}

double parse_double(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw InvalidArgument("cannot parse '" + text + "' as a number");
  }
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

namespace {

template <typename T>
T parse_integer(const std::string& text) {
  T v{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw InvalidArgument("cannot parse '" + text + "' as an integer");
  }
  return v;
}

/// Reads a header-checked CSV and hands each row's fields to the callback.
template <typename F>
void read_table(std::istream& in, const std::string& header, F&& row) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("csv: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw InvalidArgument("csv: expected header '" + header + "', got '" + line + "'");
  const std::size_t columns = split_csv_line(header).size();
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != columns) {
      throw InvalidArgument("csv: line " + std::to_string(number) + " has " + std::to_string(f.size()) +
                            " fields, expected " + std::to_string(columns));
    }
    row(f);
  }
}

const char* const kStatesHeader = "N,p,q,a,b,d,j,E,ipr,fd,label,dual_ipr,dual_fd";
const char* const kSpacingsHeader = "N,j,parity,spacing";
const char* const kLyapunovHeader = "N,a,d,j,E,gamma,regularized_bonds";
const char* const kPopulationsHeader = "t,n,population";
const char* const kSummaryHeader = "t,return_prob,participation";

std::string tag_columns(const ModelTag& t) {
  return std::to_string(t.size) + ',' + std::to_string(t.p) + ',' + std::to_string(t.q) + ',' + format_double(t.a) +
         ',' + format_double(t.b) + ',' + std::to_string(t.range);
}

}  // namespace

void write_states_csv(std::ostream& out, const ModelTag& tag, const std::vector<StateDiagnostics>& states) {
  out << kStatesHeader << '\n';
  const std::string prefix = tag_columns(tag);
  for (const StateDiagnostics& s : states) {
    out << prefix << ',' << s.index << ',' << format_double(s.energy) << ',' << format_double(s.ipr) << ','
        << format_double(s.fd) << ',' << to_string(s.label) << ',' << format_double(s.dual_ipr) << ','
        << format_double(s.dual_fd) << '\n';
  }
}

std::vector<StateRow> read_states_csv(std::istream& in) {
  std::vector<StateRow> rows;
  read_table(in, kStatesHeader, [&](const std::vector<std::string>& f) {
    StateRow r;
    r.tag.size = parse_integer<int>(f[0]);
    r.tag.p = parse_integer<std::int64_t>(f[1]);
    r.tag.q = parse_integer<std::int64_t>(f[2]);
    r.tag.a = parse_double(f[3]);
    r.tag.b = parse_double(f[4]);
    r.tag.range = parse_integer<int>(f[5]);
    r.state.index = parse_integer<int>(f[6]);
    r.state.energy = parse_double(f[7]);
    r.state.ipr = parse_double(f[8]);
    r.state.fd = parse_double(f[9]);
    r.state.label = phase_from_string(f[10]);
    r.state.dual_ipr = parse_double(f[11]);
    r.state.dual_fd = parse_double(f[12]);
    rows.push_back(r);
  });
  return rows;
}

void write_spacings_csv(std::ostream& out, int size, const std::vector<SpacingRecord>& records) {
  out << kSpacingsHeader << '\n';
  for (const SpacingRecord& r : records) {
    out << size << ',' << r.j << ',' << to_string(r.parity) << ',' << format_double(r.spacing) << '\n';
  }
}

std::vector<SpacingRow> read_spacings_csv(std::istream& in) {
  std::vector<SpacingRow> rows;
  read_table(in, kSpacingsHeader, [&](const std::vector<std::string>& f) {
    SpacingRow r;
    r.size = parse_integer<int>(f[0]);
    r.record.j = parse_integer<int>(f[1]);
    r.record.parity = spacing_parity_from_string(f[2]);
    r.record.spacing = parse_double(f[3]);
    rows.push_back(r);
  });
  return rows;
}

void write_lyapunov_csv(std::ostream& out, const ModelTag& tag, const std::vector<LyapunovResult>& results) {
  out << kLyapunovHeader << '\n';
  // The dual family is parametrised by its modulation exponent alone.
  const double a = std::isinf(tag.a) ? tag.b : tag.a;
  int j = 0;
  for (const LyapunovResult& r : results) {
    out << tag.size << ',' << format_double(a) << ',' << tag.range << ',' << ++j << ','
        << format_double(r.energy) << ',' << format_double(r.gamma) << ',' << r.regularized_bonds << '\n';
  }
}

std::vector<LyapunovRow> read_lyapunov_csv(std::istream& in) {
  std::vector<LyapunovRow> rows;
  read_table(in, kLyapunovHeader, [&](const std::vector<std::string>& f) {
    LyapunovRow r;
    r.size = parse_integer<int>(f[0]);
    r.a = parse_double(f[1]);
    r.range = parse_integer<int>(f[2]);
    r.j = parse_integer<int>(f[3]);
    r.energy = parse_double(f[4]);
    r.gamma = parse_double(f[5]);
    r.regularized_bonds = parse_integer<int>(f[6]);
    rows.push_back(r);
  });
  return rows;
}

std::string to_json(const MobilityEdgeSet& set) {
  nlohmann::json j;
  j["N"] = set.size;
  j["p"] = set.tau.p;
  j["q"] = set.tau.q;
  nlohmann::json edges = nlohmann::json::array();
  for (const MobilityEdge& e : set.edges) {
    nlohmann::json item = {{"position", e.position},
                           {"j", e.index},
                           {"below", to_string(e.below)},
                           {"above", to_string(e.above)}};
    if (e.matched.empty()) {
      item["matched"] = nullptr;
    } else {
      item["matched"] = e.matched;
      item["matched_value"] = e.matched_value;
    }
    edges.push_back(item);
  }
  j["edges"] = edges;
  return j.dump(2);
}

MobilityEdgeSet edges_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    MobilityEdgeSet set;
    set.size = j.at("N").get<int>();
    set.tau = make_tau(j.at("p").get<std::int64_t>(), j.at("q").get<std::int64_t>());
    for (const nlohmann::json& item : j.at("edges")) {
      MobilityEdge e;
      e.position = item.at("position").get<double>();
      e.index = item.at("j").get<int>();
      e.below = phase_from_string(item.at("below").get<std::string>());
      e.above = phase_from_string(item.at("above").get<std::string>());
      if (!item.at("matched").is_null()) {
        e.matched = item.at("matched").get<std::string>();
        e.matched_value = item.at("matched_value").get<double>();
      }
      set.edges.push_back(e);
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("edge json: ") + e.what());
  }
}

void write_populations_csv(std::ostream& out, const QuenchResult& r) {
  out << kPopulationsHeader << '\n';
  for (Eigen::Index k = 0; k < r.times.size(); ++k) {
    const std::string t = format_double(r.times(k));
    for (Eigen::Index n = 0; n < r.populations.rows(); ++n) {
      out << t << ',' << n + 1 << ',' << format_double(r.populations(n, k)) << '\n';
    }
  }
}

void write_quench_summary_csv(std::ostream& out, const QuenchResult& r) {
  out << kSummaryHeader << '\n';
  for (Eigen::Index k = 0; k < r.times.size(); ++k) {
    out << format_double(r.times(k)) << ',' << format_double(r.return_probability(k)) << ','
        << format_double(r.participation_ratio(k)) << '\n';
  }
}

QuenchResult read_quench_csv(std::istream& populations, std::istream& summary) {
  std::vector<double> times, ret, part;
  read_table(summary, kSummaryHeader, [&](const std::vector<std::string>& f) {
    times.push_back(parse_double(f[0]));
    ret.push_back(parse_double(f[1]));
    part.push_back(parse_double(f[2]));
  });
  struct Entry {
    std::size_t time_index;
    int site;
    double value;
  };
  std::vector<Entry> entries;
  int sites = 0;
  std::size_t time_index = 0;
  std::string last_time;
  bool first = true;
  read_table(populations, kPopulationsHeader, [&](const std::vector<std::string>& f) {
    if (first) {
      last_time = f[0];
      first = false;
    } else if (f[0] != last_time) {
      ++time_index;
      last_time = f[0];
    }
    const int site = parse_integer<int>(f[1]);
    sites = std::max(sites, site);
    entries.push_back({time_index, site, parse_double(f[2])});
  });
  QuenchResult r;
  const auto nt = static_cast<Eigen::Index>(times.size());
  if (!entries.empty() && entries.back().time_index + 1 != times.size()) {
    throw InvalidArgument("quench csv: population and summary files disagree on the time grid");
  }
  r.times = Eigen::Map<Eigen::VectorXd>(times.data(), nt);
  r.return_probability = Eigen::Map<Eigen::VectorXd>(ret.data(), nt);
  r.participation_ratio = Eigen::Map<Eigen::VectorXd>(part.data(), nt);
  r.populations = Eigen::MatrixXd::Zero(sites, nt);
  for (const Entry& e : entries) {
    if (e.site < 1) throw InvalidArgument("quench csv: site index must be positive");
    r.populations(e.site - 1, static_cast<Eigen::Index>(e.time_index)) = e.value;
  }
  return r;
}

}  // namespace qpdual
