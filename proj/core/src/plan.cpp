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

#include "qpdual/plan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <regex>
#include <set>
#include <sstream>

#include "qpdual/error.hpp"
#include "qpdual/io.hpp"

namespace qpdual {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

bool is_integer(double v) { return std::isfinite(v) && v == std::round(v); }

}  // namespace

void set_param(ModelParams& params, const std::string& key, double value) {
  if (key == "a") params.a = value;
  else if (key == "b") params.b = value;
  else if (key == "t") params.t = value;
  else if (key == "V") params.V = value;
  else if (key == "A") params.A = value;
  else if (key == "d" || key == "p") {
    require(is_integer(value) && value >= 1, "parameter " + key + " must be a positive integer");
    if (key == "d") params.d = static_cast<int>(value);
    else params.p = static_cast<std::int64_t>(value);
  } else {
    throw InvalidArgument("unknown model parameter '" + key + "'");
  }
}

double get_param(const ModelParams& params, const std::string& key) {
  if (key == "a") return params.a;
  if (key == "b") return params.b;
  if (key == "t") return params.t;
  if (key == "V") return params.V;
  if (key == "A") return params.A;
  if (key == "d") return params.d;
  if (key == "p") return static_cast<double>(params.p);
  throw InvalidArgument("unknown model parameter '" + key + "'");
}

bool is_rydberg(const ModelParams& params) { return params.family == "rydberg"; }

ModelSpec make_model(const ModelParams& params, int size) {
  ModelSpec spec;
  const std::string& f = params.family;
  if (f == "power-law") {
    const bool a_inf = std::isinf(params.a);
    const bool b_inf = std::isinf(params.b);
    require(!(a_inf && b_inf), "power-law: a and b cannot both be infinite");
    if (a_inf) spec = power_law_a_infinity(params.b, params.d, size);
    else if (b_inf) spec = power_law_b_infinity(params.a, params.d, size);
    else spec = power_law_model(params.a, params.b, params.d, size);
  } else if (f == "dual-power") {
    spec = power_law_a_infinity(params.a, params.d, size);
  } else if (f == "exponential") {
    spec = exponential_model(params.a, params.b, params.d, size);
  } else if (f == "offdiag-aah") {
    spec = off_diagonal_aah_model(params.a, params.b, size);
  } else if (f == "diag-aah") {
    spec = diagonal_aah_model(params.t, params.V, size);
  } else if (f == "rydberg") {
    spec = make_rydberg(params, size).ideal();
  } else {
    throw InvalidArgument("unknown model family '" + f + "'");
  }
  if (params.p != 0) spec.tau = make_tau(params.p, spec.tau.q);
  spec.validate();
  return spec;
}

RydbergModelSpec make_rydberg(const ModelParams& params, int size) {
  RydbergModelSpec spec = rydberg_model(params.A, params.d, size);
  if (params.p != 0) spec.tau = make_tau(params.p, spec.tau.q);
  spec.validate();
  return spec;
}

std::string to_string(Diagnostic d) {
  switch (d) {
    case Diagnostic::States: return "states";
    case Diagnostic::Spacings: return "spacings";
    case Diagnostic::Edges: return "edges";
    case Diagnostic::Lyapunov: return "lyapunov";
    case Diagnostic::Mfd: return "mfd";
    case Diagnostic::Duality: return "duality";
    case Diagnostic::Values: return "values";
  }
  return "states";
}

Diagnostic diagnostic_from_string(const std::string& text) {
  for (Diagnostic d : {Diagnostic::States, Diagnostic::Spacings, Diagnostic::Edges, Diagnostic::Lyapunov,
                       Diagnostic::Mfd, Diagnostic::Duality, Diagnostic::Values}) {
    if (to_string(d) == text) return d;
  }
  throw InvalidArgument("unknown diagnostic '" + text + "'");
}

void SweepPlan::validate() const {
  require(!sizes.empty(), "plan: sizes must not be empty");
  require(!diagnostics.empty(), "plan: diagnostics must not be empty");
  require(concurrency >= 1, "plan: concurrency must be at least 1");
  require(memory_budget > 0, "plan: memory budget must be positive");
  std::set<std::string> names;
  for (const Axis& a : axes) {
    require(!a.values.empty(), "plan: axis '" + a.name + "' is empty");
    require(names.insert(a.name).second, "plan: axis '" + a.name + "' declared twice");
    get_param(base, a.name);
  }
  for (const Constraint& c : constraints) {
    require(names.count(c.source) == 1, "plan: constraint source '" + c.source + "' is not an axis");
    require(names.count(c.target) == 0, "plan: constraint target '" + c.target + "' is also an axis");
    get_param(base, c.target);
  }
  for (int n : sizes) {
    require(n >= 2, "plan: sizes must be at least 2");
    const int u = fibonacci_index(n);
    require(u >= 3, "plan: size " + std::to_string(n) + " is not a Fibonacci number");
  }
  // Every gridpoint must describe a valid model.
  for (const GridPoint& g : expand_grid(*this)) {
    if (is_rydberg(g.params)) make_rydberg(g.params, g.size);
    else make_model(g.params, g.size);
  }
}

std::vector<GridPoint> expand_grid(const SweepPlan& plan) {
  std::vector<GridPoint> grid;
  std::vector<std::size_t> counter(plan.axes.size(), 0);
  int index = 0;
  while (true) {
    ModelParams params = plan.base;
    for (std::size_t k = 0; k < plan.axes.size(); ++k) {
      set_param(params, plan.axes[k].name, plan.axes[k].values[counter[k]]);
    }
    for (const Constraint& c : plan.constraints) {
      set_param(params, c.target, c.offset + c.sign * get_param(params, c.source));
    }
    for (int n : plan.sizes) grid.push_back({index++, n, params});
    // Odometer over the axes, last axis fastest.
    std::size_t k = plan.axes.size();
    while (k > 0) {
      --k;
      if (++counter[k] < plan.axes[k].values.size()) break;
      counter[k] = 0;
      if (k == 0) return grid;
    }
    if (plan.axes.empty()) return grid;
  }
}

namespace {

double round_grid(double v) {
  // Keeps 0.5 + 3 * 0.05 from printing as 0.6500000000000001.
  return std::round(v * 1e12) / 1e12;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::string body = trim(text);
  if (body.size() >= 2 && body.front() == '{' && body.back() == '}') body = body.substr(1, body.size() - 2);
  const std::vector<std::string> range = split(body, ':');
  if (range.size() == 3 && body.find(',') == std::string::npos) {
    const double lo = parse_double(range[0]);
    const double hi = parse_double(range[1]);
    const double step = parse_double(range[2]);
    require(step > 0.0 && hi >= lo, "range '" + text + "' must have lo <= hi and a positive step");
    const long count = std::lround((hi - lo) / step) + 1;
    require(std::abs(lo + (count - 1) * step - hi) <= 1e-9 * std::max(1.0, std::abs(hi)),
            "range '" + text + "': step does not divide hi - lo");
    for (long i = 0; i < count; ++i) out.push_back(round_grid(lo + static_cast<double>(i) * step));
    return out;
  }
  for (const std::string& item : split(body, ',')) {
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const double lo = parse_double(trim(item.substr(0, dots)));
      const double hi = parse_double(trim(item.substr(dots + 2)));
      require(is_integer(lo) && is_integer(hi) && lo <= hi, "integer range '" + item + "' is malformed");
      for (double v = lo; v <= hi; v += 1.0) out.push_back(v);
    } else {
      out.push_back(parse_double(item));
    }
  }
  require(!out.empty(), "empty value list '" + text + "'");
  return out;
}

std::size_t parse_bytes(const std::string& text) {
  std::string t = trim(text);
  std::size_t scale = 1;
  if (!t.empty()) {
    const char unit = static_cast<char>(std::toupper(static_cast<unsigned char>(t.back())));
    if (unit == 'K' || unit == 'M' || unit == 'G') {
      scale = unit == 'K' ? std::size_t{1} << 10 : unit == 'M' ? std::size_t{1} << 20 : std::size_t{1} << 30;
      t.pop_back();
    }
  }
  const double v = parse_double(trim(t));
  require(v > 0.0, "memory budget must be positive");
  return static_cast<std::size_t>(v * static_cast<double>(scale));
}

void parse_axes(SweepPlan& plan, const std::string& text) {
  static const std::regex constraint(R"(^([A-Za-z]+)\s*=\s*([-+0-9.eE]+)\s*([-+])\s*([A-Za-z]+)$)");
  static const std::regex axis(R"(^([A-Za-z]+)\s*=\s*(.+)$)");
  for (const std::string& item : split(text, ';')) {
    std::smatch m;
    if (std::regex_match(item, m, constraint)) {
      Constraint c;
      c.target = m[1];
      c.offset = parse_double(m[2]);
      c.sign = m[3] == "-" ? -1.0 : 1.0;
      c.source = m[4];
      plan.constraints.push_back(c);
    } else if (std::regex_match(item, m, axis)) {
      plan.axes.push_back({m[1], parse_values(m[2])});
    } else {
      throw InvalidArgument("malformed axis '" + item + "'");
    }
  }
}

}  // namespace

SweepPlan parse_plan(std::istream& in, const std::string& name) {
  SweepPlan plan;
  plan.name = name;
  std::set<std::string> seen;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = name + ":" + std::to_string(number) + ": ";
    if (eq == std::string::npos) throw InvalidArgument(where + "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw InvalidArgument(where + "duplicate key '" + key + "'");
    try {
      if (key == "family") {
        plan.base.family = value;
      } else if (key == "model") {
        for (const std::string& kv : split(value, ' ')) {
          const auto e = kv.find('=');
          if (e == std::string::npos) throw InvalidArgument("expected name=value, got '" + kv + "'");
          set_param(plan.base, trim(kv.substr(0, e)), parse_double(trim(kv.substr(e + 1))));
        }
      } else if (key == "axes") {
        parse_axes(plan, value);
      } else if (key == "sizes") {
        for (double v : parse_values(value)) {
          require(is_integer(v) && v > 0, "sizes must be positive integers");
          plan.sizes.push_back(static_cast<int>(v));
        }
      } else if (key == "diagnostics") {
        for (const std::string& d : split(value, ',')) plan.diagnostics.push_back(diagnostic_from_string(d));
      } else if (key == "output") {
        plan.output = value;
      } else if (key == "concurrency") {
        const double v = parse_double(value);
        require(is_integer(v) && v >= 1, "concurrency must be a positive integer");
        plan.concurrency = static_cast<int>(v);
      } else if (key == "memory") {
        plan.memory_budget = parse_bytes(value);
      } else if (key == "vector_cap") {
        const double v = parse_double(value);
        require(is_integer(v) && v >= 2, "vector_cap must be an integer >= 2");
        plan.vector_cap = static_cast<int>(v);
      } else {
        throw InvalidArgument("unknown key '" + key + "'");
      }
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(where + e.what());
    }
  }
  if (seen.count("family") == 0) throw InvalidArgument(name + ": missing 'family'");
  plan.validate();
  return plan;
}

SweepPlan read_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open plan file '" + path + "'");
  std::string name = path;
  const auto slash = name.find_last_of('/');
  if (slash != std::string::npos) name = name.substr(slash + 1);
  return parse_plan(in, name);
}

}  // namespace qpdual
