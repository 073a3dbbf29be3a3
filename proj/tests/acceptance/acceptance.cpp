// Copyright 2026 The mildns Authors
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

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Usage: mildns_acceptance <output_root>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mildns/expansion.hpp"
#include "mildns/experiments/config.hpp"
#include "mildns/experiments/scenarios.hpp"
#include "mildns/fft.hpp"
#include "mildns/fields.hpp"
#include "mildns/norms.hpp"
#include "mildns/semigroup.hpp"

namespace fs = std::filesystem;
using namespace mildns;
using namespace mildns::experiments;
using nlohmann::json;

namespace {

fs::path g_out;

struct Verdict {
  bool ok = true;
  std::vector<std::string> notes;

  void check(bool cond, const std::string& what) {
    if (!cond) ok = false;
    notes.push_back((cond ? "" : "!") + what);
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Run {
  ScenarioConfig cfg;
  RunOutcome outcome;
  double seconds = 0.0;
};

Run run_config(const std::string& name) {
  Run r;
  r.cfg = load_config(fs::path(MILDNS_CONFIG_DIR) / (name + ".json"));
  r.cfg.output_dir = g_out / name;
  fs::remove_all(r.cfg.output_dir);
  const auto t0 = std::chrono::steady_clock::now();
  r.outcome = run_scenario(r.cfg);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

bool manifest_written(const Run& r) {
  return fs::exists(r.cfg.output_dir / "manifest.json");
}

double num(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_number()) return std::nan("");
  return j.at(key).get<double>();
}

bool flag(const json& j, const std::string& key) {
  return j.contains(key) && j.at(key).is_boolean() && j.at(key).get<bool>();
}

void time_limit(Verdict& v, double seconds, double limit) {
  v.check(seconds < limit, "runtime " + fmt(seconds) + "s < " + fmt(limit) + "s");
}

Verdict criterion1() {
  Verdict v;
  const Run r = run_config("scaling_invariance");
  const json& rep = r.outcome.report;
  v.check(r.outcome.exit_code == kExitOk, "exit 0");
  v.check(r.cfg.grid.n == 64, "64^3 grid");
  v.check(param(r.cfg, "fields", 0) >= 20, ">= 20 fields");
  v.check(param(r.cfg, "m", 0) == 1, "lambda = 2");
  const auto ps = param(r.cfg, "p_values", std::vector<double>{});
  v.check(ps == std::vector<double>{4.0, 6.0}, "p in {4, 6}");
  const double gap = num(rep, "max_rel_gap");
  v.check(gap <= 1e-10, "max rel gap " + fmt(gap) + " <= 1e-10");
  time_limit(v, r.seconds, 30.0);
  return v;
}

Verdict criterion2() {
  Verdict v;
  const Run r = run_config("small_data_global");
  const json& rep = r.outcome.report;
  v.check(r.outcome.exit_code == kExitOk, "exit 0");
  v.check(r.cfg.grid.n == 32 && std::abs(r.cfg.time.t_max - 0.5) < 1e-15, "32^3, T = 0.5");
  v.check(r.cfg.force.kind == ForceKind::zero, "L = 0");
  const double x1 = num(rep, "x1_norm"), gamma = num(rep, "gamma_est"), lam = num(rep, "lambda_est");
  const double want = 0.8 * (1.0 - lam) * (1.0 - lam) / (4.0 * gamma);
  v.check(std::abs(x1 / want - 1.0) < 1e-9, "||x1|| = 0.8(1-l)^2/(4g)");
  v.check(rep.contains("convergence") && rep["convergence"].value("status", "") == "converged",
          "converged");
  const json checks = rep.value("checks", json::object());
  v.check(flag(checks, "ratios_ok") && num(checks, "worst_ratio") <= 0.7,
          "ratios from it. 3 <= 0.7 (worst " + fmt(num(checks, "worst_ratio")) + ")");
  v.check(num(checks, "mild_residual") <= 1e-6,
          "residual " + fmt(num(checks, "mild_residual")) + " <= 1e-6");
  v.check(num(checks, "bound_lhs") <= num(checks, "bound_rhs"),
          "2g||x|| " + fmt(num(checks, "bound_lhs")) + " <= " + fmt(num(checks, "bound_rhs")));
  time_limit(v, r.seconds, 180.0);
  return v;
}

Verdict criterion3() {
  Verdict v;
  const Run r = run_config("forced_pipeline");
  const json& rep = r.outcome.report;
  v.check(r.outcome.exit_code == kExitOk, "exit 0");
  v.check(r.cfg.force.kind == ForceKind::time_independent_mode_sum && r.cfg.force.modes.size() == 1,
          "single-mode steady force");
  const json forced = rep.value("forced", json::object());
  v.check(forced.contains("convergence") &&
              forced["convergence"].value("status", "") == "converged",
          "U_f converged");
  v.check(flag(forced, "uf_bound_ok") && num(forced, "uf_over_y") <= 2.2,
          "sup weakL3(U_f)/y " + fmt(num(forced, "uf_over_y")) + " <= 2.2");
  v.check(flag(forced, "converged") && num(forced, "max_residual") <= 1e-6,
          "nsf residual " + fmt(num(forced, "max_residual")) + " <= 1e-6");
  time_limit(v, r.seconds, 300.0);
  return v;
}

// Heat-flow checks need no scenario: they run on the library directly.
Verdict criterion4() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const Grid g = make_grid(32, 2.0 * std::numbers::pi);
  const double p = 4.0;
  const BesovIndex idx = BesovIndex::critical(p, p);
  const double k_min = g.k_unit();
  const double t_end = 50.0 / (k_min * k_min);
  const auto times = geometric_times(1e-3, t_end, 24);
  double worst_mult = 0.0, worst_final = 0.0;
  bool monotone = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SpectralField u = random_banded_field(g, seed, 1.0, 8.0, -1.0);
    const double b0 = besov_norm(u, idx);
    double prev = b0;
    for (double t : times) {
      const SpectralField h = heat_flow(u, t);
      if (t > 0.0 && t < 0.2) {
        for_each_mode(g, [&](std::size_t, const ModeIndex& m, int, int, int) {
          const CVec3 a = u.mode(m);
          const CVec3 b = h.mode(m);
          const double want = std::exp(-t * m.norm_sq() * k_min * k_min);
          for (int c = 0; c < 3; ++c)
            worst_mult = std::max(worst_mult, std::abs(b[c] - want * a[c]));
        });
      }
      const double bt = besov_norm(h, idx);
      if (bt > prev * (1.0 + 1e-14)) monotone = false;
      prev = bt;
    }
    worst_final = std::max(worst_final, prev / b0);
  }
  v.check(worst_mult <= 1e-12, "per-mode multiplier error " + fmt(worst_mult) + " <= 1e-12");
  v.check(monotone, "Besov norm nonincreasing");
  v.check(worst_final <= 1e-3, "final/initial " + fmt(worst_final) + " <= 1e-3");
  time_limit(v, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(),
             60.0);
  return v;
}

Verdict criterion5() {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  const auto d3 = expand(3);
  v.check(d3.H.size() == 3 && d3.W.size() == 6 && d3.Z.size() == 7, "|H|,|W|,|Z| = 3,6,7");
  const std::map<std::string, std::int64_t> twos{
      {"(B (B v v) (B v w))", 2},     {"(B (B v w) (B v wbar))", 2}, {"(B vL (B v w))", 2},
      {"(B (B v v) (B v wbar))", 2}, {"(B vL (B v v))", 2},         {"(B vL (B v wbar))", 2}};
  std::map<std::string, std::int64_t> got_twos;
  for (const auto* s : {&d3.H, &d3.W, &d3.Z})
    for (const auto& e : s->entries())
      if (e.coeff == 2) got_twos[e.tree->key()] = 2;
  v.check(got_twos == twos, "coefficient-2 terms");
  bool conserved = true;
  auto prev = expand(2);
  for (int N = 3; N <= kMaxExpansionOrder; ++N) {
    const auto next = expand(N);
    FormalSum lhs;
    lhs.add(next.H);
    lhs.add(next.W);
    lhs.add(next.Z);
    FormalSum rhs;
    rhs.add(prev.H);
    rhs.add(prev.W);
    rhs.add(substitute_v(prev.Z));
    if (!(lhs == rhs)) conserved = false;
    prev = next;
  }
  v.check(conserved, "formal conservation up to N = 5");
  const Run r = run_config("decomposition_check");
  v.check(r.outcome.exit_code == kExitOk, "decomposition run exit 0");
  const json decs = r.outcome.report.value("decompositions", json::array());
  bool n2 = false, n3 = false;
  for (const auto& d : decs) {
    const int N = d.value("N", 0);
    const double res = num(d, "residual");
    if (res <= 1e-6 && N == 2) n2 = true;
    if (res <= 1e-6 && N == 3) n3 = true;
    v.notes.push_back("N=" + std::to_string(N) + " residual " + fmt(res));
  }
  v.check(n2 && n3, "residual <= 1e-6 for N = 2, 3");
  time_limit(v, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(),
             300.0);
  return v;
}

Verdict criterion6() {
  Verdict v;
  const Run r = run_config("weak_strong_uniqueness");
  const json& rep = r.outcome.report;
  v.check(r.outcome.exit_code == kExitOk, "exit 0");
  v.check(r.cfg.p == 4.0, "p = 4");
  v.check(rep.value("same_substeps", 0) == 32, "both paths at 32 substeps");
  v.check(num(rep, "same_substeps_rel_gap") <= 1e-6,
          "same-substeps gap " + fmt(num(rep, "same_substeps_rel_gap")) + " <= 1e-6");
  const double slope = num(rep, "richardson_slope");
  v.check(slope >= 1.7 && slope <= 2.3, "Richardson slope 8->16 " + fmt(slope) + " in [1.7, 2.3]");
  time_limit(v, r.seconds, 600.0);
  return v;
}

Verdict criterion7() {
  Verdict v;
  const Run r = run_config("longtime_calderon");
  const json& rep = r.outcome.report;
  v.check(r.outcome.exit_code == kExitOk, "exit 0");
  v.check(r.cfg.grid.n == 32 && std::abs(r.cfg.time.t_max - 10.0) < 1e-12, "32^3, T = 10");
  v.check(flag(rep, "M_finite"), "empirical M = " + fmt(num(rep, "empirical_M")));
  v.check(flag(rep, "omega_monotone_after_peak"), "bump energy nonincreasing after peak");
  v.check(flag(rep, "gronwall_dominates"), "Gronwall curve dominates");
  time_limit(v, r.seconds, 900.0);
  return v;
}

Verdict criterion8() {
  Verdict v;
  const Run r = run_config("stability_perturbation");
  const json& rep = r.outcome.report;
  v.check(r.outcome.exit_code == kExitOk, "exit 0");
  const auto deltas = param(r.cfg, "deltas", std::vector<double>{1e-3, 1e-2, 1e-1});
  v.check(deltas == std::vector<double>{1e-3, 1e-2, 1e-1}, "deltas 1e-3, 1e-2, 1e-1");
  v.check(rep.value("regime_exits", 1) == 0, "all three ratios available");
  const double lo = num(rep, "ratio_min"), hi = num(rep, "ratio_max");
  v.check(lo > 0.0 && hi <= 2.0 * lo, "ratios in [" + fmt(lo) + ", " + fmt(hi) + "] within 2x");
  time_limit(v, r.seconds, 900.0);
  return v;
}

Verdict criterion9() {
  Verdict v;
  const Run r = run_config("blowup_sweep");
  const json& rep = r.outcome.report;
  v.check(num(rep, "data_scale") == 50.0, "data scaled 50x");
  v.check(r.outcome.exit_code == kExitNonConvergence, "exit 2");
  const json b = rep.value("blowup", json::object());
  v.check(flag(b, "flagged"), "flagged");
  const auto statuses = b.value("statuses", std::vector<std::string>{});
  const std::string last = statuses.empty() ? "" : statuses.back();
  v.check(last == "diverged" || last == "max_iters", "final status " + last);
  v.check(fs::exists(r.cfg.output_dir / "blowup.csv"), "growth curve emitted");
  v.check(manifest_written(r), "manifest written");
  time_limit(v, r.seconds, 300.0);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  g_out = argc > 1 ? fs::path(argv[1]) : fs::path("acceptance_out");
  fs::create_directories(g_out);
  configure_fft_threads();
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"scaling invariance", criterion1},   {"small-data Picard", criterion2},
      {"forced pipeline", criterion3},      {"heat-flow Besov decay", criterion4},
      {"decomposition", criterion5},        {"weak-strong coincidence", criterion6},
      {"long-time boundedness", criterion7}, {"stability ratios", criterion8},
      {"non-convergence honesty", criterion9}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    std::ostringstream line;
    line << (v.ok ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first
         << " [";
    for (std::size_t k = 0; k < v.notes.size(); ++k) line << (k ? "; " : "") << v.notes[k];
    line << "]";
    std::puts(line.str().c_str());
    std::fflush(stdout);
    if (!v.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
