#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "memwalk/accumulator.hpp"
#include "memwalk/exact_oracle.hpp"
#include "memwalk/model.hpp"
#include "memwalk/moments.hpp"
#include "memwalk/rng.hpp"

namespace memwalk {

/// round(10^(k / points_per_decade)) for k = 0, 1, ..., deduplicated, capped
/// at t_max, with t_max itself always included.
std::vector<std::int64_t> geometric_schedule(std::int64_t t_max, int points_per_decade = 20);

struct EnsembleConfig {
  std::uint64_t master_seed = 0;
  std::int64_t n_trajectories = 1;
  std::int64_t t_max = 1;
  std::vector<std::int64_t> record_times;  // empty: geometric_schedule(t_max)
  unsigned threads = 0;                    // 0: hardware concurrency

  // Refuse runs whose n_trajectories * |record_times| exceeds this.
  std::uint64_t sample_budget = 100'000'000'000ULL;

  /// Fills the default schedule and checks the invariants; throws
  /// std::invalid_argument or ResourceLimitExceeded.
  EnsembleConfig resolved() const;
};

/// Trajectories per reduction block. Blocks are fixed by trajectory index,
/// never by worker, so the reduction order is the same for any thread count.
inline constexpr std::int64_t kTrajectoryBlock = 512;

struct SimulationResult {
  Parameters params;
  EnsembleConfig config;
  std::string version;

  MomentSeries series;  // empirical mean, mean square, sample variance
  Eigen::VectorXd mean_se;
  Eigen::VectorXd var_se;
  std::vector<std::uint64_t> count;
};

/// Runs one trajectory to t_max and hands (slot, x) to `record` whenever t
/// reaches record_times[slot]. One uniform per step; the step is +1 if
/// u t < n+ p + n- q, 0 if below that plus (n+ + n-) r + n0, else -1.
template <typename Record>
void walk(const Parameters& params, std::int64_t t_max, std::span<const std::int64_t> record_times,
          Xoshiro256StarStar& rng, Record&& record) {
  std::size_t slot = 0;
  const double p = params.p, q = params.q, r = params.r;
  double n_plus = 0.0, n_minus = 0.0, n_zero = 0.0;
  std::int64_t x;
  if (rng.uniform() < params.s) {
    n_plus = 1.0;
    x = 1;
  } else {
    n_minus = 1.0;
    x = -1;
  }
  std::int64_t next_record = slot < record_times.size() ? record_times[slot] : -1;
  if (next_record == 1) {
    record(slot, x);
    ++slot;
    next_record = slot < record_times.size() ? record_times[slot] : -1;
  }
  for (std::int64_t t = 1; t < t_max; ++t) {
    const double u = rng.uniform() * static_cast<double>(t);
    const double up = n_plus * p + n_minus * q;
    const double stay = up + (n_plus + n_minus) * r + n_zero;
    if (u < up) {
      n_plus += 1.0;
      ++x;
    } else if (u < stay) {
      n_zero += 1.0;
    } else {
      n_minus += 1.0;
      --x;
    }
    if (t + 1 == next_record) {
      record(slot, x);
      ++slot;
      next_record = slot < record_times.size() ? record_times[slot] : -1;
    }
  }
}

/// Positions of one trajectory at the record times.
std::vector<std::int64_t> simulate_trajectory(const Parameters& params, std::int64_t t_max,
                                              std::span<const std::int64_t> record_times,
                                              Xoshiro256StarStar& rng);

/// Accumulated statistics of trajectories [first, last) under the config.
MomentAccumulator simulate_block(const Parameters& params, const EnsembleConfig& config,
                                 std::int64_t first, std::int64_t last);

SimulationResult run_ensemble(const Parameters& params, const EnsembleConfig& config);

/// Position histogram at time t over the ensemble, normalized, indexed x + t.
/// Used to compare against the exact distribution.
PositionDistribution empirical_position_distribution(const Parameters& params,
                                                     const EnsembleConfig& config, std::int64_t t);

/// Raw positions (rows: trajectories, cols: record times) for at most 100
/// trajectories. Debug aid.
Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> dump_trajectories(
    const Parameters& params, const EnsembleConfig& config, std::int64_t count);

}  // namespace memwalk
