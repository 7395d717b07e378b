#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace memwalk {

/// Single-pass central moments up to fourth order, pairwise mergeable
/// (Welford updates, Chan/Pebay merge). The fourth moment gives the standard
/// error of the sample variance without assuming Gaussian positions.
struct RunningMoments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;  // sum of squared deviations from the mean
  double m3 = 0.0;
  double m4 = 0.0;

  void push(double x);
  void merge(const RunningMoments& other);

  /// Unbiased sample variance; 0 for n < 2.
  double variance() const;
  double mean_standard_error() const;
  double variance_standard_error() const;
};

/// RunningMoments per recorded time of a fixed schedule.
class MomentAccumulator {
 public:
  MomentAccumulator() = default;
  explicit MomentAccumulator(std::vector<std::int64_t> record_times);

  const std::vector<std::int64_t>& times() const { return times_; }
  const std::vector<RunningMoments>& stats() const { return stats_; }
  std::size_t size() const { return times_.size(); }

  /// One trajectory: positions[i] recorded at times()[i].
  void push(std::span<const std::int64_t> positions);
  void push_at(std::size_t slot, double x) { stats_[slot].push(x); }

  /// Throws std::invalid_argument when the schedules differ.
  void merge(const MomentAccumulator& other);

  /// Number of merged trajectories.
  std::uint64_t count() const { return stats_.empty() ? 0 : stats_.front().n; }

 private:
  std::vector<std::int64_t> times_;
  std::vector<RunningMoments> stats_;
};

MomentAccumulator merge_accumulators(MomentAccumulator a, const MomentAccumulator& b);

}  // namespace memwalk
