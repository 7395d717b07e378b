// Acceptance gate: one line per criterion, exit status 0 iff every selected
// criterion passes. `--only <id>` restricts the run (ids 1..9, 5a..5d).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "memwalk/ensemble.hpp"
#include "memwalk/exact_oracle.hpp"
#include "memwalk/fit.hpp"
#include "memwalk/moments.hpp"
#include "memwalk/regime.hpp"
#include "oracles.hpp"

using namespace memwalk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// ---------------------------------------------------------------------------

Outcome exact_vs_closed_forms() {
  const auto start = std::chrono::steady_clock::now();
  const double grid[][3] = {
      {0.5, 0.3, 0.2},   {0.2, 0.5, 0.3},     {0.1, 0.6, 0.3},   {0.625, 0.125, 0.25},
      {0.8, 0.1, 0.1},   {0.7, 0.3, 0.0},     {0.75, 0.25, 0.0}, {0.2, 0.8, 0.0},
      {1.0, 0.0, 0.0},   {0.0, 1.0, 0.0},     {0.3, 0.3, 0.4},   {0.05, 0.05, 0.9},
      {0.6, 0.0, 0.4},   {0.25, 0.0, 0.75},   {0.3, 0.1, 0.6},   {0.45, 0.15, 0.4},
      {0.15, 0.05, 0.8}, {0.004, 0.001, 0.995}, {0.0005, 0.0005, 0.999}, {0.0, 0.5, 0.5},
      {0.9, 0.05, 0.05},
  };
  double worst = 0.0;
  int points = 0, recursion = 0;
  bool branch_ok = true;
  for (double s : {0.5, 1.0})
    for (const auto& g : grid) {
      const auto params = Parameters::make(g[0], g[1], g[2], s);
      const bool singular = std::abs(2 * params.gamma() + params.r - 1) <= kSingularLineTolerance;
      const auto branch = second_moment_branch(params);
      if (singular) {
        ++recursion;
        branch_ok = branch_ok && branch == MomentBranch::Recursion;
      }
      ++points;
      evolve_exact_to(params, 50, [&](const ExactDistribution& level) {
        const auto m = exact_moments(level);
        const double mean = mean_displacement(params, level.t);
        const double mean_sq = mean_square_displacement(params, level.t);
        const double scale = std::max(std::abs(mean), std::sqrt(mean_sq));
        worst = std::max({worst, std::abs(m.mean - mean) / scale,
                          std::abs(m.mean_sq - mean_sq) / std::max(mean_sq, 1.0)});
      });
    }
  const double secs = seconds_since(start);
  return {worst <= 1e-9 && branch_ok && points >= 20 && secs < 10.0,
          fmt("%d points x s in {0.5, 1} (%d runs on p=3q via recursion), t<=50, max rel dev %.2e "
              "(tol 1e-9), %.2f s",
              points / 2, recursion, worst, secs)};
}

Outcome two_step_second_moment() {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double a = u(gen), b = u(gen), c = u(gen), sum = a + b + c;
    const auto params = Parameters::renormalized(a / sum, b / sum, c / sum, u(gen));
    const double want = 4 * params.p + params.r;
    const auto brute = oracle::enumerate_positions(params.p, params.q, params.r, params.s, 2);
    double enumerated = 0.0;
    for (const auto& [x, w] : brute) enumerated += double(x) * x * w;
    const auto dp = exact_moments(evolve_exact_to(params, 2));
    for (double got : {mean_square_displacement(params, 2), second_moment_recursion(params, 2)[1],
                       dp.mean_sq, enumerated})
      worst = std::max(worst, std::abs(got - want));
  }
  return {worst <= 1e-12,
          fmt("5 random points, closed form / recursion / DP / enumeration vs 4p+r: max abs dev "
              "%.2e (tol 1e-12)",
              worst)};
}

Outcome monte_carlo_consistency() {
  const auto start = std::chrono::steady_clock::now();
  const double sets[][4] = {{0.5, 0.3, 0.2, 0.5}, {0.625, 0.125, 0.25, 0.5}, {0.3, 0.3, 0.4, 1.0}};
  double worst_z = 0.0;
  int checks = 0, failures = 0;
  for (const auto& c : sets) {
    const auto params = Parameters::make(c[0], c[1], c[2], c[3]);
    EnsembleConfig cfg;
    cfg.master_seed = 20240601;
    cfg.n_trajectories = 100000;
    cfg.t_max = 1000;
    const auto r = run_ensemble(params, cfg);
    for (std::size_t i = 0; i < r.series.size(); ++i) {
      const auto t = r.series.times[i];
      const double mean = mean_displacement(params, t);
      const double var = mean_square_displacement(params, t) - mean * mean;
      const double dm = std::abs(r.series.mean[i] - mean);
      const double dv = std::abs(r.series.variance[i] - var);
      for (auto [d, se] : {std::pair{dm, r.mean_se[i]}, std::pair{dv, r.var_se[i]}}) {
        ++checks;
        if (se > 0.0) {
          worst_z = std::max(worst_z, d / se);
          if (d > 4.0 * se) ++failures;
        } else if (d > 1e-12) {
          ++failures;
        }
      }
    }
  }
  const double secs = seconds_since(start);
  return {failures == 0 && secs < 60.0,
          fmt("3 sets x N=1e5, t<=1e3: %d checks, %d beyond 4 SE, max |z| %.2f, %.1f s", checks,
              failures, worst_z, secs)};
}

Outcome diffusion_coefficient_check() {
  const auto params = Parameters::make(0.6, 0.1, 0.3, 0.5);
  const double want = 1.0 / 0.6;
  const auto times = geometric_schedule(10000);
  const auto series = variance_series(params, times);
  const auto fit = fit_diffusion_coefficient(
      params, times, std::span<const double>(series.variance.data(), series.size()), 1000, 10000);
  const double naive = series.variance[series.size() - 1] / (2.0 * 10000);

  EnsembleConfig cfg;
  cfg.master_seed = 4;
  cfg.n_trajectories = 100000;
  cfg.t_max = 10000;
  const auto mc = run_ensemble(params, cfg);
  const auto mc_fit = fit_diffusion_coefficient(
      params, mc.series.times, std::span<const double>(mc.series.variance.data(), mc.series.size()),
      1000, 10000);
  const double dev = std::abs(fit.coefficient / want - 1.0);
  const double mc_dev = std::abs(mc_fit.coefficient / want - 1.0);
  return {dev <= 0.02 && mc_dev <= 0.05,
          fmt("D=1/0.6: analytic fit %.5f (%.2f%%, tol 2%%), MC fit %.5f (%.2f%%, tol 5%%); "
              "plain Var/2t at 1e4 = %.4f",
              fit.coefficient, 100 * dev, mc_fit.coefficient, 100 * mc_dev, naive)};
}

struct ExponentCase {
  const char* id;
  double gamma, r, s, want;
};

constexpr ExponentCase kExponentCases[] = {
    {"5a", 0.2, 0.6, 0.5, 0.40},
    {"5b", 0.35, 0.1, 0.5, 0.90},
    {"5c", 0.7, 0.1, 0.5, 1.40},
    {"5d", 0.0, 0.5, 1.0, 0.50},
};

Outcome exponent_recovery(const std::set<std::string>& only) {
  const auto times = geometric_schedule(1000000);
  bool pass = true;
  std::string detail;
  for (const auto& c : kExponentCases) {
    if (!only.empty() && !only.contains(c.id)) continue;
    const auto params = Parameters::from_gamma_rest(c.gamma, c.r, c.s);
    const auto fit = fit_exponent(variance_series(params, times), 1.0 / 6.0);
    const bool ok = std::abs(fit.exponent - c.want) <= 0.03;
    pass = pass && ok;
    detail += fmt("%s(g=%.2f,r=%.1f) %.4f vs %.2f %s; ", c.id, c.gamma, c.r, fit.exponent, c.want,
                  ok ? "ok" : "OUT");
  }
  detail += "trailing decade of t<=1e6, tol 0.03";
  return {pass, detail};
}

Outcome marginal_regime() {
  const auto params = Parameters::make(0.75, 0.25, 0.0, 0.5);
  const auto x2 = second_moment_recursion(params, 1000000);
  double lo = 1e300, hi = 0.0;
  for (std::int64_t t = 100000; t <= 1000000; ++t) {
    const double v = x2[t - 1] / (double(t) * std::log(double(t)));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double variation = hi / lo - 1.0;
  return {variation < 0.05,
          fmt("Var/(t ln t) over [1e5, 1e6] in [%.5f, %.5f]: variation %.2f%% (tol 5%%)", lo, hi,
              100 * variation)};
}

std::string join(const std::vector<Regime>& v) {
  std::string s;
  for (Regime r : v) s += (s.empty() ? "" : " > ") + std::string(to_string(r));
  return s;
}

bool is_subsequence(const std::vector<Regime>& want, const std::vector<Regime>& seq) {
  std::size_t k = 0;
  for (Regime r : seq)
    if (k < want.size() && r == want[k]) ++k;
  return k == want.size();
}

Outcome phase_diagram_sweeps() {
  std::vector<Regime> along_q;
  for (const auto& iv : sweep_line(FixedPersistence{0.625}, 50).intervals)
    along_q.push_back(iv.regime);
  // Increasing gamma along p = 0.625 is decreasing q.
  const std::vector<Regime> along_gamma(along_q.rbegin(), along_q.rend());
  const std::vector<Regime> stated = {Regime::SubdiffusiveRest, Regime::SubdiffusiveMemory,
                                      Regime::Diffusive, Regime::Superdiffusive};
  const bool ordered = is_subsequence(stated, along_gamma);

  bool low_ok = true;
  for (const auto& iv : sweep_line(FixedPersistence{0.3}, 50).intervals)
    low_ok = low_ok && is_subdiffusive(iv.regime);
  bool rest_ok = true;
  for (const auto& iv : sweep_line(FixedRest{0.6}, 50).intervals)
    rest_ok = rest_ok && iv.regime != Regime::Diffusive &&
              iv.regime != Regime::Superdiffusive && iv.regime != Regime::MarginalSuperdiffusive;
  return {ordered && low_ok && rest_ok,
          fmt("p=0.625 by increasing gamma: %s [%s]; p=0.3 subdiffusive only: %s; r=0.6 no "
              "diffusive/superdiffusive: %s",
              join(along_gamma).c_str(), ordered ? "ok" : "OUT", low_ok ? "ok" : "OUT",
              rest_ok ? "ok" : "OUT")};
}

Outcome rest_free_reduction() {
  const auto params = Parameters::make(0.4, 0.6, 0.0, 0.5);
  const double t = 100000;
  const double asymptote = t / (3.0 - 4.0 * 0.4);
  const double closed = mean_square_displacement(params, 100000);
  const double rec = second_moment_recursion(params, 100000)[99999];
  const double dev = std::max(std::abs(closed / asymptote - 1), std::abs(rec / asymptote - 1));
  return {dev <= 0.01, fmt("Var(1e5) = %.2f (closed form), %.2f (recursion) vs t/(3-4p) = %.2f: "
                           "%.3f%% (tol 1%%)",
                           closed, rec, asymptote, 100 * dev)};
}

Outcome property_suites() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double urn = 0.0, norm = 0.0, mirror = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a = u(gen), b = u(gen), c = u(gen), sum = a + b + c;
    const auto params = Parameters::renormalized(a / sum, b / sum, c / sum, u(gen));
    const std::int64_t t = 1 + static_cast<std::int64_t>(gen() % 300);
    std::int64_t np, nm;
    do {
      np = static_cast<std::int64_t>(gen() % (t + 1));
      nm = static_cast<std::int64_t>(gen() % (t - np + 1));
    } while (np + nm == 0 || (t == 1 && np + nm != 1));
    const auto state = WalkState::from_counts(np, nm, t - np - nm);
    const auto law = step_distribution(params, state);
    const auto ref = oracle::urn_procedure(params.p, params.q, params.r,
                                           oracle::history_with_counts(np, nm, t - np - nm));
    const auto flip = step_distribution(params, state.mirrored());
    urn = std::max({urn, std::abs(law.p_plus - ref.plus), std::abs(law.p_zero - ref.zero),
                    std::abs(law.p_minus - ref.minus)});
    norm = std::max(norm, std::abs(law.total() - 1.0));
    mirror = std::max({mirror, std::abs(law.p_plus - flip.p_minus),
                       std::abs(law.p_minus - flip.p_plus), std::abs(law.p_zero - flip.p_zero)});
  }

  const auto params = Parameters::make(0.6, 0.25, 0.15, 0.7);
  EnsembleConfig cfg;
  cfg.master_seed = 11;
  cfg.n_trajectories = 6 * kTrajectoryBlock + 100;
  cfg.t_max = 2000;
  bool deterministic = true;
  cfg.threads = 1;
  const auto base = run_ensemble(params, cfg);
  for (unsigned threads : {2u, 4u, 7u}) {
    cfg.threads = threads;
    const auto other = run_ensemble(params, cfg);
    deterministic = deterministic && other.series.mean == base.series.mean &&
                    other.series.variance == base.series.variance &&
                    other.var_se == base.var_se;
  }

  cfg = cfg.resolved();
  const std::int64_t n = cfg.n_trajectories;
  const auto a = simulate_block(params, cfg, 0, n / 3);
  const auto b = simulate_block(params, cfg, n / 3, 2 * n / 3);
  const auto c = simulate_block(params, cfg, 2 * n / 3, n);
  const auto left = merge_accumulators(merge_accumulators(a, b), c);
  const auto right = merge_accumulators(a, merge_accumulators(b, c));
  const auto whole = simulate_block(params, cfg, 0, n);
  double assoc = 0.0;
  auto rel = [](double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); };
  for (std::size_t i = 0; i < whole.size(); ++i)
    for (const auto* m : {&left, &right}) {
      const auto& x = m->stats()[i];
      const auto& y = whole.stats()[i];
      assoc = std::max({assoc, rel(x.mean, y.mean), rel(x.variance(), y.variance()),
                        rel(x.m3, y.m3), rel(x.m4, y.m4)});
    }
  const double secs = seconds_since(start);
  const bool pass = urn <= 1e-12 && norm <= 1e-12 && mirror == 0.0 && deterministic &&
                    assoc <= 1e-10 && secs < 30.0;
  return {pass, fmt("urn %.1e, normalization %.1e, mirror %.1e, threads 1/2/4/7 %s, merge "
                    "associativity %.1e (tol 1e-10), %.1f s",
                    urn, norm, mirror, deterministic ? "identical" : "DIFFER", assoc, secs)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only.insert(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--only <id>]...\n", argv[0]);
      return 2;
    }
  }
  std::set<std::string> exponent_only;
  for (const auto& id : only)
    if (id.size() == 2 && id[0] == '5') exponent_only.insert(id);
  if (only.contains("5")) exponent_only.clear();
  auto selected = [&](const std::string& id) {
    if (only.empty() || only.contains(id)) return true;
    return id == "5" && !exponent_only.empty();
  };

  struct Criterion {
    std::string id, title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1", "exact oracle vs closed forms", exact_vs_closed_forms},
      {"2", "two-step second moment 4p + r", two_step_second_moment},
      {"3", "Monte Carlo consistency", monte_carlo_consistency},
      {"4", "diffusion coefficient", diffusion_coefficient_check},
      {"5", "exponent recovery", [&] { return exponent_recovery(exponent_only); }},
      {"6", "marginal regime t ln t", marginal_regime},
      {"7", "phase-diagram sweeps", phase_diagram_sweeps},
      {"8", "rest-free reduction", rest_free_reduction},
      {"9", "property suites", property_suites},
  };

  int failed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!selected(c.id)) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::string label = c.id;
    if (c.id == "5" && !exponent_only.empty() && !only.contains("5")) {
      label.clear();
      for (const auto& id : exponent_only) label += (label.empty() ? "" : ",") + id;
    }
    std::printf("[%s] %-2s %-32s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", label.c_str(),
                c.title.c_str(), o.detail.c_str(), seconds_since(start));
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
