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

// qpdual command-line driver.
//
// Exit status: 0 success, 1 computation failure, 2 usage error.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qpdual/calibration.hpp"
#include "qpdual/diagnostics.hpp"
#include "qpdual/duality.hpp"
#include "qpdual/error.hpp"
#include "qpdual/io.hpp"
#include "qpdual/lyapunov.hpp"
#include "qpdual/plan.hpp"
#include "qpdual/rydberg.hpp"
#include "qpdual/spectra.hpp"
#include "qpdual/sweep.hpp"

namespace fs = std::filesystem;
using namespace qpdual;

namespace {

constexpr const char* kOutputEnv = "QPDUAL_OUTPUT_DIR";

fs::path output_dir() {
  const char* env = std::getenv(kOutputEnv);
  return env && *env ? fs::path(env) : fs::path(".");
}

/// Relative paths land in $QPDUAL_OUTPUT_DIR when it is set.
fs::path resolve_output(const std::string& path) {
  const fs::path p(path);
  if (p.is_absolute()) return p;
  return output_dir() / p;
}

void write_text(const std::string& path, const std::string& text) {
  const fs::path p = resolve_output(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ComputationError("cannot write '" + p.string() + "'");
  out << text;
}

struct ModelOptions {
  std::string family;
  std::optional<std::string> a, b;
  std::optional<int> d;
  double t = 1.0;
  std::optional<double> V;
  double A = 1.0;
  std::optional<int> fib_u;
  std::optional<int> size;
  std::optional<std::int64_t> tau_p;
};

void add_model_options(CLI::App* app, ModelOptions& m) {
  app->add_option("--family", m.family,
                  "power-law | dual-power | exponential | offdiag-aah | diag-aah | rydberg")
      ->required();
  app->add_option("--a", m.a, "distance exponent/rate/amplitude a (or 'inf')");
  app->add_option("--b", m.b, "modulation exponent/rate/amplitude b (or 'inf')");
  app->add_option("--d", m.d, "hopping range d");
  app->add_option("--t", m.t, "diag-aah hopping t")->capture_default_str();
  app->add_option("--V", m.V, "diag-aah potential V");
  app->add_option("--A", m.A, "rydberg scale A")->capture_default_str();
  auto* u = app->add_option("--fib-u", m.fib_u, "Fibonacci index u: N = q = Fib(u), p = Fib(u-1)");
  auto* n = app->add_option("--size", m.size, "lattice size N (must be a Fibonacci number)");
  u->excludes(n);
  app->add_option("--tau-p", m.tau_p, "override the numerator p of tau = p/N (must be coprime to N)");
}

double parse_param(const std::string& flag, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const InvalidArgument&) {
    throw InvalidArgument("--" + flag + ": cannot parse '" + text + "'");
  }
}

struct ResolvedModel {
  ModelParams params;
  int size = 0;
};

ResolvedModel resolve_model(const ModelOptions& m) {
  ResolvedModel r;
  r.params.family = m.family;
  const auto need = [&](const std::optional<std::string>& v, const char* flag) {
    if (!v) throw InvalidArgument("--family " + m.family + " requires --" + flag);
    return parse_param(flag, *v);
  };
  const std::string& f = m.family;
  if (f == "power-law" || f == "exponential") {
    r.params.a = need(m.a, "a");
    r.params.b = need(m.b, "b");
    if (!m.d) throw InvalidArgument("--family " + f + " requires --d");
  } else if (f == "dual-power") {
    r.params.a = need(m.a, "a");
    if (!m.d) throw InvalidArgument("--family dual-power requires --d");
  } else if (f == "offdiag-aah") {
    r.params.a = m.a ? parse_param("a", *m.a) : 1.0;
    r.params.b = m.b ? parse_param("b", *m.b) : 1.0;
  } else if (f == "diag-aah") {
    if (!m.V) throw InvalidArgument("--family diag-aah requires --V");
    r.params.t = m.t;
    r.params.V = *m.V;
  } else if (f == "rydberg") {
    r.params.A = m.A;
    r.params.d = 3;
  } else {
    throw InvalidArgument("unknown --family '" + f + "'");
  }
  if (m.d) r.params.d = *m.d;
  if (m.fib_u) r.size = static_cast<int>(fibonacci(*m.fib_u));
  else if (m.size) r.size = *m.size;
  else throw InvalidArgument("one of --fib-u or --size is required");
  if (m.fib_u) require(*m.fib_u >= 3, "--fib-u must be at least 3");
  if (m.tau_p) r.params.p = *m.tau_p;
  return r;
}

SolverPath parse_solver(const std::string& s) {
  if (s == "auto") return SolverPath::Auto;
  if (s == "dense") return SolverPath::Dense;
  if (s == "banded") return SolverPath::Banded;
  throw InvalidArgument("--solver must be auto, dense or banded");
}

Thresholds thresholds_for(const std::string& rule) {
  Thresholds t = default_thresholds();
  if (!rule.empty()) t.rule = classifier_rule_from_string(rule);
  return t;
}

SpectrumResult solve_resolved(const ResolvedModel& r, const ModelSpec& spec, SolverPath path, int cap) {
  if (is_rydberg(r.params)) return solve_rydberg(make_rydberg(r.params, r.size));
  return solve(spec, path, cap);
}

std::string default_name(const std::string& kind, const ModelSpec& spec, const std::string& ext) {
  return kind + "_N" + std::to_string(spec.size) + ext;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-dual quasiperiodic tight-binding models: spectra, duality and localization diagnostics"};
  app.require_subcommand(1);
  app.footer(std::string("Relative output paths are resolved against $") + kOutputEnv + " when it is set.");

  // spectrum
  ModelOptions spec_opts;
  std::string spec_out, spec_spacings, spec_edges, spec_values, spec_matrix, spec_solver = "auto", spec_rule;
  int spec_cap = 10946;
  auto* spectrum = app.add_subcommand("spectrum", "diagonalize one model and write per-state diagnostics");
  add_model_options(spectrum, spec_opts);
  spectrum->add_option("--out", spec_out, "per-state CSV (default spectrum_N<N>.csv)");
  spectrum->add_option("--spacings", spec_spacings, "even-odd spacing CSV");
  spectrum->add_option("--edges", spec_edges, "mobility-edge JSON");
  spectrum->add_option("--values", spec_values, "binary eigenvalue dump");
  spectrum->add_option("--matrix", spec_matrix, "dense matrix text dump");
  spectrum->add_option("--solver", spec_solver, "auto | dense | banded")->capture_default_str();
  spectrum->add_option("--vector-cap", spec_cap, "largest N with eigenvectors")->capture_default_str();
  spectrum->add_option("--rule", spec_rule, "duality-aware | fractal-only (default from calibration)");

  // duality
  ModelOptions dual_opts;
  std::string dual_out;
  auto* duality = app.add_subcommand("duality", "compare H(a,b) with H(b,a) and report both deviations");
  add_model_options(duality, dual_opts);
  duality->add_option("--out", dual_out, "report JSON (stdout when omitted)");

  // sweep
  std::string sweep_plan, sweep_output;
  std::optional<int> sweep_concurrency;
  bool sweep_quiet = false;
  auto* sweep = app.add_subcommand("sweep", "run a plan file");
  sweep->add_option("--plan", sweep_plan, "plan file")->required()->check(CLI::ExistingFile);
  sweep->add_option("--output", sweep_output, "override the plan's output directory");
  sweep->add_option("--concurrency", sweep_concurrency, "override the plan's worker count");
  sweep->add_flag("--quiet", sweep_quiet, "no per-gridpoint progress");

  // scaling
  std::string scaling_mfd, scaling_out;
  auto* scaling = app.add_subcommand("scaling", "fit MFD against 1/log10 N from a sweep's mfd.csv");
  scaling->add_option("--mfd", scaling_mfd, "mfd.csv written by sweep")->required()->check(CLI::ExistingFile);
  scaling->add_option("--out", scaling_out, "fit JSON (stdout when omitted)");

  // le
  ModelOptions le_opts;
  std::string le_out;
  int le_interval = 8;
  auto* le = app.add_subcommand("le", "Lyapunov exponents at every eigenvalue of a nearest-neighbour model");
  add_model_options(le, le_opts);
  le->add_option("--out", le_out, "LE CSV (default le_N<N>.csv)");
  le->add_option("--rescale", le_interval, "renormalization interval k")->capture_default_str();

  // rydberg
  double ry_A = 1.0;
  int ry_d = 3, ry_u = 18, ry_site = 0, ry_times = 200;
  std::string ry_compare, ry_out, ry_pop, ry_summary, ry_rule;
  auto* rydberg = app.add_subcommand("rydberg", "Rydberg-array model: range comparison and quench dynamics");
  rydberg->add_option("--A", ry_A, "scale A")->capture_default_str();
  rydberg->add_option("--d", ry_d, "truncation range")->capture_default_str();
  rydberg->add_option("--fib-u", ry_u, "Fibonacci index u (N = Fib(u))")->capture_default_str();
  rydberg->add_option("--compare", ry_compare, "ranges to compare, e.g. 2..10 or 2,3,5");
  rydberg->add_option("--out", ry_out, "comparison JSON (stdout when omitted)");
  rydberg->add_option("--quench-site", ry_site, "start a quench from this site (1-based)");
  rydberg->add_option("--times", ry_times, "number of time points")->capture_default_str();
  rydberg->add_option("--populations", ry_pop, "population CSV (default quench_populations.csv)");
  rydberg->add_option("--summary", ry_summary, "summary CSV (default quench_summary.csv)");
  rydberg->add_option("--rule", ry_rule, "classifier rule override");

  // calibrate
  int cal_size = 2584;
  std::string cal_out;
  auto* calibrate_cmd = app.add_subcommand("calibrate", "fit classifier thresholds on the anchor models");
  calibrate_cmd->add_option("--size", cal_size, "anchor size N")->capture_default_str();
  calibrate_cmd->add_option("--out", cal_out, "calibration JSON (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (spectrum->parsed()) {
      const ResolvedModel r = resolve_model(spec_opts);
      const ModelSpec spec = make_model(r.params, r.size);
      const Thresholds thresholds = thresholds_for(spec_rule);
      SpectrumResult s = solve_resolved(r, spec, parse_solver(spec_solver), spec_cap);
      std::vector<StateDiagnostics> states = compute_diagnostics(s);
      classify_phases(states, spec.size, thresholds);
      std::ostringstream csv;
      write_states_csv(csv, model_tag(spec), states);
      write_text(spec_out.empty() ? default_name("spectrum", spec, ".csv") : spec_out, csv.str());
      if (!spec_spacings.empty()) {
        std::ostringstream out;
        write_spacings_csv(out, spec.size, even_odd_spacings(s.eigenvalues));
        write_text(spec_spacings, out.str());
      }
      if (!spec_edges.empty()) write_text(spec_edges, to_json(detect_mobility_edges(states, spec.tau)));
      if (!spec_values.empty()) {
        std::ostringstream out(std::ios::binary);
        write_eigenvalues_binary(out, s.eigenvalues);
        write_text(spec_values, out.str());
      }
      if (!spec_matrix.empty()) {
        std::ostringstream out;
        write_dense_text(out, is_rydberg(r.params) ? build_rydberg_hamiltonian(make_rydberg(r.params, r.size))
                                                   : build_hamiltonian(spec));
        write_text(spec_matrix, out.str());
      }
      std::cerr << "N=" << spec.size << " residual=" << s.residual << "\n";
    } else if (duality->parsed()) {
      const ResolvedModel r = resolve_model(dual_opts);
      const ModelSpec spec = make_model(r.params, r.size);
      const std::string json = to_json(check_duality(spec, spec.dual()));
      if (dual_out.empty()) std::cout << json << "\n";
      else write_text(dual_out, json + "\n");
    } else if (sweep->parsed()) {
      SweepPlan plan = read_plan_file(sweep_plan);
      if (!sweep_output.empty()) plan.output = sweep_output;
      if (sweep_concurrency) plan.concurrency = *sweep_concurrency;
      plan.output = resolve_output(plan.output).string();
      const SweepManifest m = run_sweep(plan, default_thresholds(), sweep_quiet ? nullptr : &std::cerr);
      int failed = 0;
      for (const GridResult& g : m.points) failed += g.ok ? 0 : 1;
      std::cerr << m.points.size() << " gridpoints, " << failed << " failed, manifest " << plan.output
                << "/manifest.json, hash " << m.content_hash << "\n";
      if (failed > 0) return 1;
    } else if (scaling->parsed()) {
      std::ifstream in(scaling_mfd);
      std::string line;
      std::getline(in, line);
      if (line != "index,N,p,q,a,b,d,window,mfd") throw InvalidArgument("--mfd: not an mfd.csv file");
      // Group by everything except the size columns.
      std::map<std::string, std::vector<MfdRecord>> groups;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 9) throw InvalidArgument("--mfd: malformed line '" + line + "'");
        groups["a=" + f[4] + " b=" + f[5] + " d=" + f[6]].push_back({std::stoi(f[1]), f[7], parse_double(f[8])});
      }
      std::ostringstream out;
      out << "[";
      bool first = true;
      for (const auto& [key, records] : groups) {
        out << (first ? "" : ",") << "\n{\"group\": \"" << key << "\", \"fits\": " << to_json(scaling_fits(records))
            << "}";
        first = false;
      }
      out << "\n]\n";
      if (scaling_out.empty()) std::cout << out.str();
      else write_text(scaling_out, out.str());
    } else if (le->parsed()) {
      const ResolvedModel r = resolve_model(le_opts);
      const ModelSpec spec = make_model(r.params, r.size);
      require(spec.is_nearest_neighbor(), "le: the model is not nearest-neighbour");
      LyapunovOptions lo;
      lo.rescale_interval = le_interval;
      const auto results = lyapunov_spectrum(spec, solve_values(spec), lo);
      std::ostringstream csv;
      write_lyapunov_csv(csv, model_tag(spec), results);
      write_text(le_out.empty() ? default_name("le", spec, ".csv") : le_out, csv.str());
      int warned = 0;
      for (const auto& x : results) warned += x.warning ? 1 : 0;
      if (warned) std::cerr << "warning: " << warned << " energies had more than 1% regularized bonds\n";
    } else if (rydberg->parsed()) {
      const int n = static_cast<int>(fibonacci(ry_u));
      const RydbergModelSpec spec = rydberg_model(ry_A, ry_d, n);
      if (!ry_compare.empty()) {
        std::vector<int> ranges;
        const auto dots = ry_compare.find("..");
        if (dots != std::string::npos) {
          const int lo = std::stoi(ry_compare.substr(0, dots));
          const int hi = std::stoi(ry_compare.substr(dots + 2));
          require(lo >= 1 && lo <= hi, "--compare: malformed range");
          for (int d = lo; d <= hi; ++d) ranges.push_back(d);
        } else {
          std::stringstream list(ry_compare);
          std::string item;
          while (std::getline(list, item, ',')) ranges.push_back(std::stoi(item));
        }
        const std::string json = to_json(spec, compare_to_ideal(spec, ranges, thresholds_for(ry_rule)));
        if (ry_out.empty()) std::cout << json << "\n";
        else write_text(ry_out, json + "\n");
      }
      if (ry_site > 0) {
        const QuenchResult q = quench(spec, site_excitation(n, ry_site), default_quench_times(ry_A, ry_times));
        std::ostringstream pop, sum;
        write_populations_csv(pop, q);
        write_quench_summary_csv(sum, q);
        write_text(ry_pop.empty() ? "quench_populations.csv" : ry_pop, pop.str());
        write_text(ry_summary.empty() ? "quench_summary.csv" : ry_summary, sum.str());
      }
      if (ry_compare.empty() && ry_site == 0) throw InvalidArgument("rydberg: give --compare and/or --quench-site");
    } else if (calibrate_cmd->parsed()) {
      const std::string json = to_json(calibrate(cal_size));
      if (cal_out.empty()) std::cout << json << "\n";
      else write_text(cal_out, json + "\n");
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    for (const CLI::App* sub : app.get_subcommands()) std::cerr << sub->help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
