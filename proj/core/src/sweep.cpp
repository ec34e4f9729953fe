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

#include "qpdual/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "qpdual/duality.hpp"
#include "qpdual/error.hpp"
#include "qpdual/io.hpp"
#include "qpdual/lyapunov.hpp"
#include "qpdual/rydberg.hpp"
#include "qpdual/spectra.hpp"

namespace qpdual {

namespace fs = std::filesystem;

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

bool wants(const SweepPlan& plan, Diagnostic d) {
  return std::find(plan.diagnostics.begin(), plan.diagnostics.end(), d) != plan.diagnostics.end();
}

bool needs_vectors(const SweepPlan& plan) {
  return wants(plan, Diagnostic::States) || wants(plan, Diagnostic::Edges) || wants(plan, Diagnostic::Mfd);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Writes through a temporary name so a failed gridpoint leaves no partial file.
void write_file(const fs::path& path, const std::string& bytes) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ComputationError("cannot write '" + tmp.string() + "'");
    out << bytes;
    if (!out) throw ComputationError("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

std::string stem(const GridPoint& g) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "gp%04d", g.index);
  return buf;
}

nlohmann::json params_json(const ModelParams& p) {
  const auto num = [](double v) -> nlohmann::json {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
  };
  // Only the parameters the family reads are recorded.
  nlohmann::json j = {{"family", p.family}, {"d", p.d}};
  const bool uses_a = p.family != "diag-aah" && p.family != "rydberg";
  const bool uses_b = uses_a && p.family != "dual-power";
  if (uses_a) j["a"] = num(p.a);
  if (uses_b) j["b"] = num(p.b);
  if (p.family == "diag-aah") {
    j["t"] = p.t;
    j["V"] = p.V;
  }
  if (p.family == "rydberg") j["A"] = p.A;
  if (p.p != 0) j["p"] = p.p;
  return j;
}

ModelParams params_from_json(const nlohmann::json& j) {
  const auto num = [](const nlohmann::json& v) { return v.is_string() ? parse_double(v.get<std::string>()) : v.get<double>(); };
  ModelParams p;
  p.family = j.at("family").get<std::string>();
  if (j.contains("a")) p.a = num(j.at("a"));
  if (j.contains("b")) p.b = num(j.at("b"));
  p.d = j.at("d").get<int>();
  if (j.contains("t")) p.t = j.at("t").get<double>();
  if (j.contains("V")) p.V = j.at("V").get<double>();
  if (j.contains("A")) p.A = j.at("A").get<double>();
  if (j.contains("p")) p.p = j.at("p").get<std::int64_t>();
  return p;
}

/// Budget admission shared by the workers.
class MemoryGate {
 public:
  explicit MemoryGate(std::size_t budget) : budget_(budget) {}
  void acquire(std::size_t bytes) {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return used_ == 0 || used_ + bytes <= budget_; });
    used_ += bytes;
  }
  void release(std::size_t bytes) {
    {
      std::lock_guard lock(mutex_);
      used_ -= bytes;
    }
    cv_.notify_all();
  }

 private:
  std::size_t budget_;
  std::size_t used_ = 0;
  std::mutex mutex_;
  std::condition_variable cv_;
};

}  // namespace

std::size_t estimated_bytes(const SweepPlan& plan, const GridPoint& point) {
  const auto n = static_cast<std::size_t>(point.size);
  const std::size_t square = n * n * sizeof(double);
  std::size_t bytes = 0;
  const bool banded = !is_rydberg(point.params) && make_model(point.params, point.size).range() * 8 < point.size;
  if (needs_vectors(plan)) bytes = std::max(bytes, (banded || is_rydberg(point.params) ? 1 : 3) * square);
  if (wants(plan, Diagnostic::Duality)) bytes = std::max(bytes, 5 * square);  // complex U H U^dagger + H(b, a)
  return bytes + (std::size_t{64} << 20);
}

GridResult run_gridpoint(const SweepPlan& plan, const GridPoint& point, const Thresholds& thresholds) {
  GridResult r;
  r.index = point.index;
  r.size = point.size;
  r.params = point.params;
  const auto start = std::chrono::steady_clock::now();
  const fs::path dir(plan.output);
  try {
    const bool rydberg = is_rydberg(point.params);
    const ModelSpec spec = make_model(point.params, point.size);
    const ModelTag tag = model_tag(spec);
    const std::string base = stem(point);
    auto emit = [&](const std::string& kind, const std::string& suffix, const std::string& bytes) {
      const std::string name = base + suffix;
      write_file(dir / name, bytes);
      r.files[kind] = name;
    };

    SpectrumResult spectrum;
    if (needs_vectors(plan)) {
      require(point.size <= plan.vector_cap, "N=" + std::to_string(point.size) + " exceeds vector_cap " +
                                                 std::to_string(plan.vector_cap));
      spectrum = rydberg ? solve_rydberg(make_rydberg(point.params, point.size)) : solve(spec, SolverPath::Auto, plan.vector_cap);
    } else {
      spectrum.eigenvalues = solve_values(spec);
      if (rydberg) spectrum.eigenvalues *= point.params.A;
    }

    if (needs_vectors(plan)) {
      std::vector<StateDiagnostics> states = compute_diagnostics(spectrum);
      classify_phases(states, point.size, thresholds);
      if (wants(plan, Diagnostic::States)) {
        std::ostringstream out;
        write_states_csv(out, tag, states);
        emit("states", "_states.csv", out.str());
      }
      if (wants(plan, Diagnostic::Edges)) emit("edges", "_edges.json", to_json(detect_mobility_edges(states, spec.tau)));
      if (wants(plan, Diagnostic::Mfd)) {
        const double p4 = 2.0 * spec.tau.value() - 1.0;
        r.mfd["inner"] = mean_fd(states, p4, 1.0 - p4);
        r.mfd["outer"] = mean_fd(states, p4, 1.0 - p4, true);
        r.mfd["all"] = mean_fd(states, 0.0, 1.0);
      }
    }
    if (wants(plan, Diagnostic::Spacings)) {
      std::ostringstream out;
      write_spacings_csv(out, point.size, even_odd_spacings(spectrum.eigenvalues));
      emit("spacings", "_spacings.csv", out.str());
    }
    if (wants(plan, Diagnostic::Lyapunov)) {
      const Eigen::VectorXd energies = rydberg ? Eigen::VectorXd(spectrum.eigenvalues / point.params.A) : spectrum.eigenvalues;
      std::ostringstream out;
      write_lyapunov_csv(out, tag, lyapunov_spectrum(spec, energies));
      emit("lyapunov", "_lyapunov.csv", out.str());
    }
    if (wants(plan, Diagnostic::Duality)) emit("duality", "_duality.json", to_json(check_duality(spec, spec.dual())));
    if (wants(plan, Diagnostic::Values)) {
      std::ostringstream out(std::ios::binary);
      write_eigenvalues_binary(out, spectrum.eigenvalues);
      emit("values", "_values.bin", out.str());
    }
    r.ok = true;
  } catch (const std::exception& e) {
    r.ok = false;
    r.error = e.what();
    // Drop whatever this gridpoint managed to write.
    for (const auto& [kind, name] : r.files) {
      std::error_code ec;
      fs::remove(dir / name, ec);
    }
    r.files.clear();
    r.mfd.clear();
  }
  r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

SweepManifest run_sweep(const SweepPlan& plan, const Thresholds& thresholds, std::ostream* log) {
  plan.validate();
  fs::create_directories(plan.output);
  const std::vector<GridPoint> grid = expand_grid(plan);
  std::vector<GridResult> results(grid.size());
  MemoryGate gate(plan.memory_budget);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= grid.size()) return;
      std::size_t bytes = 0;
      try {
        bytes = estimated_bytes(plan, grid[i]);
      } catch (const std::exception& e) {
        results[i] = GridResult{grid[i].index, grid[i].size, grid[i].params, false, e.what(), 0.0, {}, {}};
        continue;
      }
      if (bytes > plan.memory_budget) {
        results[i] = GridResult{grid[i].index, grid[i].size, grid[i].params, false,
                                "gridpoint needs ~" + std::to_string(bytes >> 20) + " MiB, above the memory budget",
                                0.0, {}, {}};
        continue;
      }
      gate.acquire(bytes);
      results[i] = run_gridpoint(plan, grid[i], thresholds);
      gate.release(bytes);
      if (log) {
        std::lock_guard lock(log_mutex);
        *log << "[" << i + 1 << "/" << grid.size() << "] N=" << grid[i].size << " "
             << (results[i].ok ? "ok" : "FAILED: " + results[i].error) << " (" << results[i].wall_seconds << " s)\n";
      }
    }
  };
  std::vector<std::thread> pool;
  const int workers = std::min<int>(plan.concurrency, static_cast<int>(grid.size()));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  SweepManifest manifest;
  manifest.plan = plan.name;
  manifest.output = plan.output;
  manifest.points = std::move(results);

  const fs::path dir(plan.output);
  std::vector<std::string> aggregates;
  if (wants(plan, Diagnostic::Mfd)) {
    std::ostringstream csv;
    csv << "index,N,p,q,a,b,d,window,mfd\n";
    std::map<std::string, std::vector<MfdRecord>> groups;
    std::map<std::string, ModelParams> group_params;
    for (const GridResult& g : manifest.points) {
      if (!g.ok) continue;
      const ModelTag tag = model_tag(make_model(g.params, g.size));
      ModelParams key_params = g.params;
      const std::string key = params_json(key_params).dump();
      group_params[key] = key_params;
      for (const auto& [window, value] : g.mfd) {
        csv << g.index << ',' << tag.size << ',' << tag.p << ',' << tag.q << ',' << format_double(tag.a) << ','
            << format_double(tag.b) << ',' << tag.range << ',' << window << ',' << format_double(value) << '\n';
        groups[key].push_back({g.size, window, value});
      }
    }
    write_file(dir / "mfd.csv", csv.str());
    aggregates.push_back("mfd.csv");
    nlohmann::json scaling = nlohmann::json::array();
    for (const auto& [key, records] : groups) {
      std::map<std::string, std::vector<MfdRecord>> by_window;
      for (const MfdRecord& rec : records) by_window[rec.window].push_back(rec);
      if (by_window.begin()->second.size() < 3) continue;
      scaling.push_back({{"params", params_json(group_params[key])},
                         {"fits", nlohmann::json::parse(to_json(scaling_fits(records)))}});
    }
    if (!scaling.empty()) {
      write_file(dir / "scaling.json", scaling.dump(2));
      aggregates.push_back("scaling.json");
    }
  }

  std::uint64_t h = fnv1a("");
  for (const GridResult& g : manifest.points) {
    for (const auto& [kind, name] : g.files) {
      h = fnv1a(name, h);
      h = fnv1a(read_file(dir / name), h);
    }
  }
  for (const std::string& name : aggregates) {
    h = fnv1a(name, h);
    h = fnv1a(read_file(dir / name), h);
  }
  manifest.content_hash = hex64(h);
  write_file(dir / "manifest.json", to_json(manifest));
  return manifest;
}

ScalingFit scaling_fit(const std::vector<MfdRecord>& records, const std::string& window) {
  ScalingFit fit;
  fit.window = window;
  for (const MfdRecord& r : records) {
    if (r.window != window) continue;
    require(r.size >= 2, "scaling_fit: sizes must exceed 1");
    fit.x.push_back(1.0 / std::log10(static_cast<double>(r.size)));
    fit.y.push_back(r.mfd);
  }
  const std::size_t n = fit.x.size();
  require(n >= 3, "scaling_fit: window '" + window + "' needs at least three sizes");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += fit.x[i];
    my += fit.y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (fit.x[i] - mx) * (fit.x[i] - mx);
    sxy += (fit.x[i] - mx) * (fit.y[i] - my);
  }
  require(sxx > 1e-14 * std::max(1.0, mx * mx), "scaling_fit: x values are degenerate (repeated sizes?)");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = fit.y[i] - (fit.intercept + fit.slope * fit.x[i]);
    rss += e * e;
  }
  fit.residual_norm = std::sqrt(rss);
  const double s2 = rss / static_cast<double>(n - 2);
  fit.slope_stderr = std::sqrt(s2 / sxx);
  fit.intercept_stderr = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  return fit;
}

std::vector<ScalingFit> scaling_fits(const std::vector<MfdRecord>& records) {
  std::vector<std::string> windows;
  for (const MfdRecord& r : records) {
    if (std::find(windows.begin(), windows.end(), r.window) == windows.end()) windows.push_back(r.window);
  }
  std::sort(windows.begin(), windows.end());
  std::vector<ScalingFit> fits;
  for (const std::string& w : windows) fits.push_back(scaling_fit(records, w));
  return fits;
}

std::string to_json(const std::vector<ScalingFit>& fits) {
  nlohmann::json j = nlohmann::json::array();
  for (const ScalingFit& f : fits) {
    j.push_back({{"window", f.window},
                 {"x", f.x},
                 {"y", f.y},
                 {"slope", f.slope},
                 {"intercept", f.intercept},
                 {"slope_stderr", f.slope_stderr},
                 {"intercept_stderr", f.intercept_stderr},
                 {"residual_norm", f.residual_norm}});
  }
  return j.dump(2);
}

std::string to_json(const SweepManifest& m) {
  nlohmann::json j;
  j["plan"] = m.plan;
  j["output"] = m.output;
  j["content_hash"] = m.content_hash;
  nlohmann::json points = nlohmann::json::array();
  for (const GridResult& g : m.points) {
    nlohmann::json p = {{"index", g.index},
                        {"N", g.size},
                        {"params", params_json(g.params)},
                        {"status", g.ok ? "ok" : "failed"},
                        {"wall_seconds", g.wall_seconds},
                        {"files", g.files}};
    if (!g.ok) p["error"] = g.error;
    if (!g.mfd.empty()) p["mfd"] = g.mfd;
    points.push_back(p);
  }
  j["gridpoints"] = points;
  return j.dump(2);
}

SweepManifest manifest_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    SweepManifest m;
    m.plan = j.at("plan").get<std::string>();
    m.output = j.at("output").get<std::string>();
    m.content_hash = j.at("content_hash").get<std::string>();
    for (const nlohmann::json& p : j.at("gridpoints")) {
      GridResult g;
      g.index = p.at("index").get<int>();
      g.size = p.at("N").get<int>();
      g.params = params_from_json(p.at("params"));
      g.ok = p.at("status").get<std::string>() == "ok";
      g.wall_seconds = p.at("wall_seconds").get<double>();
      g.files = p.at("files").get<std::map<std::string, std::string>>();
      if (p.contains("error")) g.error = p.at("error").get<std::string>();
      if (p.contains("mfd")) g.mfd = p.at("mfd").get<std::map<std::string, double>>();
      m.points.push_back(g);
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("manifest json: ") + e.what());
  }
}

}  // namespace qpdual
