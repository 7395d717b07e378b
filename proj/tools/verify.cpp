#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "memwalk/ensemble.hpp"
#include "memwalk/exact_oracle.hpp"
#include "memwalk/moments.hpp"

namespace memwalk::cli {

namespace {

struct GridPoint {
  const char* label;
  double p, q, r;
};

// Interior points, both edges of the simplex that matter, and the singular line.
constexpr GridPoint kGrid[] = {
    {"interior", 0.5, 0.3, 0.2},      {"interior", 0.2, 0.5, 0.3},
    {"superdiffusive", 0.8, 0.1, 0.1}, {"diffusive", 0.625, 0.125, 0.25},
    {"r=0", 0.7, 0.3, 0.0},            {"r=0 marginal", 0.75, 0.25, 0.0},
    {"gamma=0", 0.3, 0.3, 0.4},        {"q=0", 0.6, 0.0, 0.4},
    {"p=3q", 0.3, 0.1, 0.6},           {"p=3q", 0.45, 0.15, 0.4},
    {"near r=1", 0.004, 0.001, 0.995}, {"r=1", 0.0, 0.0, 1.0},
};

std::string describe(const Parameters& p) {
  std::ostringstream s;
  s << "p=" << p.p << " q=" << p.q << " r=" << p.r << " s=" << p.s;
  return s.str();
}

VerifyRow oracle_row(const GridPoint& g, double s, const VerifyOptions& opt) {
  const auto params = Parameters::make(g.p, g.q, g.r, s);
  const double shift = std::min(opt.perturb, g.q);
  const auto shifted = Parameters::make(g.p + shift, g.q - shift, g.r, s);
  double worst = 0.0;
  evolve_exact_to(params, opt.t_max, [&](const ExactDistribution& level) {
    const auto m = exact_moments(level);
    const double mean = mean_displacement(shifted, level.t);
    const double mean_sq = mean_square_displacement(shifted, level.t);
    const double scale = std::max(std::abs(mean), std::sqrt(mean_sq));
    worst = std::max(worst, std::abs(m.mean - mean) / scale);
    worst = std::max(worst, std::abs(m.mean_sq - mean_sq) / mean_sq);
  });
  VerifyRow row;
  row.check = std::string("oracle vs analytic [") + g.label + ", " +
              std::string(to_string(second_moment_branch(params))) + "]";
  row.detail = describe(params);
  row.deviation = worst;
  row.tolerance = opt.tolerance;
  row.passed = worst <= opt.tolerance;
  return row;
}

Parameters random_parameters(std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = u(gen), b = u(gen), c = u(gen);
  const double sum = a + b + c;
  return Parameters::renormalized(a / sum, b / sum, c / sum, u(gen));
}

WalkState random_state(std::mt19937_64& gen) {
  const std::int64_t t = 1 + static_cast<std::int64_t>(gen() % 500);
  std::int64_t a, b;
  do {
    a = static_cast<std::int64_t>(gen() % (t + 1));
    b = static_cast<std::int64_t>(gen() % (t - a + 1));
  } while (a + b == 0 || (t == 1 && a + b != 1));
  return WalkState::from_counts(a, b, t - a - b);
}

VerifyRow property_row(std::string check, double worst, double tolerance) {
  VerifyRow row;
  row.check = std::move(check);
  row.deviation = worst;
  row.tolerance = tolerance;
  row.passed = worst <= tolerance;
  return row;
}

}  // namespace

std::vector<VerifyRow> run_verification(const VerifyOptions& opt) {
  std::vector<VerifyRow> rows;
  for (double s : {0.5, 1.0})
    for (const auto& g : kGrid) rows.push_back(oracle_row(g, s, opt));

  std::mt19937_64 gen(opt.seed);
  double urn = 0.0, norm = 0.0, mirror = 0.0;
  for (int i = 0; i < opt.random_states; ++i) {
    const auto params = random_parameters(gen);
    const auto state = random_state(gen);
    const auto fast = step_distribution(params, state);
    const auto ref = step_distribution_reference(params, state);
    const auto flip = step_distribution(params, state.mirrored());
    urn = std::max({urn, std::abs(fast.p_plus - ref.p_plus), std::abs(fast.p_zero - ref.p_zero),
                    std::abs(fast.p_minus - ref.p_minus)});
    norm = std::max(norm, std::abs(fast.total() - 1.0));
    mirror = std::max({mirror, std::abs(fast.p_plus - flip.p_minus),
                       std::abs(fast.p_minus - flip.p_plus), std::abs(fast.p_zero - flip.p_zero)});
  }
  const std::string n = " (" + std::to_string(opt.random_states) + " states)";
  rows.push_back(property_row("count form vs recall mixture" + n, urn, 1e-12));
  rows.push_back(property_row("transition law normalized" + n, norm, 1e-12));
  rows.push_back(property_row("mirror symmetry" + n, mirror, 0.0));

  const auto params = Parameters::make(0.6, 0.2, 0.2, 0.7);
  EnsembleConfig cfg;
  cfg.master_seed = opt.seed;
  cfg.n_trajectories = 4 * kTrajectoryBlock + 17;
  cfg.t_max = 300;
  cfg.threads = 1;
  const auto one = run_ensemble(params, cfg);
  cfg.threads = 4;
  const auto four = run_ensemble(params, cfg);
  const double det = (one.series.variance - four.series.variance).cwiseAbs().maxCoeff() +
                     (one.series.mean - four.series.mean).cwiseAbs().maxCoeff();
  rows.push_back(property_row("ensemble identical for 1 and 4 threads", det, 0.0));

  cfg = cfg.resolved();
  const auto whole = simulate_block(params, cfg, 0, cfg.n_trajectories);
  MomentAccumulator merged(cfg.record_times);
  for (std::int64_t b = 0; b < cfg.n_trajectories; b += 300)
    merged.merge(simulate_block(params, cfg, b, std::min(b + 300, cfg.n_trajectories)));
  double merge = 0.0;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    const auto& x = merged.stats()[i];
    const auto& y = whole.stats()[i];
    merge = std::max({merge, std::abs(x.mean - y.mean) / std::max(1.0, std::abs(y.mean)),
                      std::abs(x.variance() - y.variance()) / std::max(1.0, y.variance())});
  }
  rows.push_back(property_row("sharded merge matches single pass", merge, 1e-10));
  return rows;
}

}  // namespace memwalk::cli
