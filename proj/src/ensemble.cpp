#include "memwalk/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "memwalk/version.hpp"

namespace memwalk {

std::vector<std::int64_t> geometric_schedule(std::int64_t t_max, int points_per_decade) {
  if (t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  if (points_per_decade < 1) throw std::invalid_argument("points_per_decade must be positive");
  std::vector<std::int64_t> times;
  for (int k = 0;; ++k) {
    const auto t = static_cast<std::int64_t>(
        std::llround(std::pow(10.0, static_cast<double>(k) / points_per_decade)));
    if (t >= t_max) break;
    if (times.empty() || t > times.back()) times.push_back(t);
  }
  times.push_back(t_max);
  return times;
}

EnsembleConfig EnsembleConfig::resolved() const {
  EnsembleConfig out = *this;
  if (out.n_trajectories < 1) throw std::invalid_argument("n_trajectories must be at least 1");
  if (out.t_max < 1) throw std::invalid_argument("t_max must be at least 1");
  if (out.record_times.empty()) out.record_times = geometric_schedule(out.t_max);
  for (std::size_t i = 0; i < out.record_times.size(); ++i) {
    const auto t = out.record_times[i];
    if (t < 1 || t > out.t_max)
      throw std::invalid_argument("record times must lie in [1, t_max]");
    if (i > 0 && t <= out.record_times[i - 1])
      throw std::invalid_argument("record times must be strictly increasing");
  }
  const auto samples = static_cast<long double>(out.n_trajectories) *
                       static_cast<long double>(out.record_times.size());
  if (samples > static_cast<long double>(out.sample_budget))
    throw ResourceLimitExceeded("ensemble of " + std::to_string(out.n_trajectories) + " x " +
                                std::to_string(out.record_times.size()) +
                                " recorded samples exceeds the budget of " +
                                std::to_string(out.sample_budget));
  if (out.threads == 0) out.threads = std::max(1u, std::thread::hardware_concurrency());
  return out;
}

std::vector<std::int64_t> simulate_trajectory(const Parameters& params, std::int64_t t_max,
                                              std::span<const std::int64_t> record_times,
                                              Xoshiro256StarStar& rng) {
  std::vector<std::int64_t> out(record_times.size());
  walk(params, t_max, record_times, rng,
       [&out](std::size_t slot, std::int64_t x) { out[slot] = x; });
  return out;
}

MomentAccumulator simulate_block(const Parameters& params, const EnsembleConfig& config,
                                 std::int64_t first, std::int64_t last) {
  MomentAccumulator acc(config.record_times);
  for (std::int64_t i = first; i < last; ++i) {
    auto rng = trajectory_stream(config.master_seed, static_cast<std::uint64_t>(i));
    walk(params, config.t_max, config.record_times, rng,
         [&acc](std::size_t slot, std::int64_t x) { acc.push_at(slot, static_cast<double>(x)); });
  }
  return acc;
}

namespace {

// Runs fn(block) for every block index in [0, n_blocks) on up to `threads`
// workers. fn must only write state owned by its block.
template <typename Fn>
void for_each_block(std::int64_t n_blocks, unsigned threads, Fn&& fn) {
  const auto workers =
      static_cast<unsigned>(std::min<std::int64_t>(std::max(1u, threads), n_blocks));
  if (workers <= 1) {
    for (std::int64_t b = 0; b < n_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::int64_t b = next++; b < n_blocks; b = next++) fn(b);
    });
}

// Blocks reduced per wave; bounds the memory held by block accumulators.
constexpr std::int64_t kBlocksPerWave = 256;

}  // namespace

SimulationResult run_ensemble(const Parameters& params, const EnsembleConfig& config) {
  params.validate();
  const EnsembleConfig cfg = config.resolved();
  const std::int64_t n_blocks = (cfg.n_trajectories + kTrajectoryBlock - 1) / kTrajectoryBlock;

  MomentAccumulator total(cfg.record_times);
  std::vector<MomentAccumulator> wave;
  for (std::int64_t wave_start = 0; wave_start < n_blocks; wave_start += kBlocksPerWave) {
    const std::int64_t wave_blocks = std::min(kBlocksPerWave, n_blocks - wave_start);
    wave.assign(static_cast<std::size_t>(wave_blocks), MomentAccumulator{});
    for_each_block(wave_blocks, cfg.threads, [&](std::int64_t b) {
      const std::int64_t first = (wave_start + b) * kTrajectoryBlock;
      const std::int64_t last = std::min(first + kTrajectoryBlock, cfg.n_trajectories);
      wave[static_cast<std::size_t>(b)] = simulate_block(params, cfg, first, last);
    });
    for (const auto& block : wave) total.merge(block);
  }

  SimulationResult result;
  result.params = params;
  result.config = cfg;
  result.version = std::string(kVersion);
  const auto n = static_cast<Eigen::Index>(cfg.record_times.size());
  result.series.times = cfg.record_times;
  result.series.mean.resize(n);
  result.series.mean_sq.resize(n);
  result.series.variance.resize(n);
  result.mean_se.resize(n);
  result.var_se.resize(n);
  result.count.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const RunningMoments& m = total.stats()[static_cast<std::size_t>(i)];
    const double nn = static_cast<double>(m.n);
    result.series.mean[i] = m.mean;
    result.series.variance[i] = m.variance();
    result.series.mean_sq[i] = m.m2 / nn + m.mean * m.mean;
    result.mean_se[i] = m.mean_standard_error();
    result.var_se[i] = m.variance_standard_error();
    result.count[static_cast<std::size_t>(i)] = m.n;
  }
  return result;
}

PositionDistribution empirical_position_distribution(const Parameters& params,
                                                     const EnsembleConfig& config, std::int64_t t) {
  params.validate();
  EnsembleConfig cfg = config;
  cfg.t_max = t;
  cfg.record_times = {t};
  cfg = cfg.resolved();
  const std::int64_t n_blocks = (cfg.n_trajectories + kTrajectoryBlock - 1) / kTrajectoryBlock;
  const std::int64_t width = 2 * t + 1;
  // Integer counts make the reduction order irrelevant.
  std::vector<std::vector<std::uint64_t>> hist(static_cast<std::size_t>(n_blocks));
  for_each_block(n_blocks, cfg.threads, [&](std::int64_t b) {
    auto& h = hist[static_cast<std::size_t>(b)];
    h.assign(static_cast<std::size_t>(width), 0);
    const std::int64_t first = b * kTrajectoryBlock;
    const std::int64_t last = std::min(first + kTrajectoryBlock, cfg.n_trajectories);
    for (std::int64_t i = first; i < last; ++i) {
      auto rng = trajectory_stream(cfg.master_seed, static_cast<std::uint64_t>(i));
      walk(params, t, cfg.record_times, rng,
           [&](std::size_t, std::int64_t x) { ++h[static_cast<std::size_t>(x + t)]; });
    }
  });
  PositionDistribution out;
  out.t = t;
  out.prob = Eigen::VectorXd::Zero(width);
  for (const auto& h : hist)
    for (std::int64_t k = 0; k < width; ++k) out.prob[k] += static_cast<double>(h[k]);
  out.prob /= static_cast<double>(cfg.n_trajectories);
  return out;
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> dump_trajectories(
    const Parameters& params, const EnsembleConfig& config, std::int64_t count) {
  if (count < 1 || count > 100)
    throw ResourceLimitExceeded("raw trajectory dumps are limited to 100 trajectories");
  params.validate();
  const EnsembleConfig cfg = config.resolved();
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> out(
      count, static_cast<Eigen::Index>(cfg.record_times.size()));
  for (std::int64_t i = 0; i < count; ++i) {
    auto rng = trajectory_stream(cfg.master_seed, static_cast<std::uint64_t>(i));
    walk(params, cfg.t_max, cfg.record_times, rng,
         [&](std::size_t slot, std::int64_t x) { out(i, static_cast<Eigen::Index>(slot)) = x; });
  }
  return out;
}

}  // namespace memwalk
