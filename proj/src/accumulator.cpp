#include "memwalk/accumulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memwalk {

void RunningMoments::push(double x) {
  const double n1 = static_cast<double>(n);
  ++n;
  const double nn = static_cast<double>(n);
  const double delta = x - mean;
  const double delta_n = delta / nn;
  const double delta_n2 = delta_n * delta_n;
  const double term1 = delta * delta_n * n1;
  mean += delta_n;
  m4 += term1 * delta_n2 * (nn * nn - 3.0 * nn + 3.0) + 6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
  m3 += term1 * delta_n * (nn - 2.0) - 3.0 * delta_n * m2;
  m2 += term1;
}

void RunningMoments::merge(const RunningMoments& other) {
  if (other.n == 0) return;
  if (n == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n);
  const double nb = static_cast<double>(other.n);
  const double nt = na + nb;
  const double delta = other.mean - mean;
  const double d2 = delta * delta;

  const double m4_new = m4 + other.m4 +
                        d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (nt * nt * nt) +
                        6.0 * d2 * (na * na * other.m2 + nb * nb * m2) / (nt * nt) +
                        4.0 * delta * (na * other.m3 - nb * m3) / nt;
  const double m3_new = m3 + other.m3 + d2 * delta * na * nb * (na - nb) / (nt * nt) +
                        3.0 * delta * (na * other.m2 - nb * m2) / nt;
  const double m2_new = m2 + other.m2 + d2 * na * nb / nt;

  mean += delta * nb / nt;
  m2 = m2_new;
  m3 = m3_new;
  m4 = m4_new;
  n += other.n;
}

double RunningMoments::variance() const {
  if (n < 2) return 0.0;
  return std::max(0.0, m2 / static_cast<double>(n - 1));
}

double RunningMoments::mean_standard_error() const {
  if (n < 2) return 0.0;
  return std::sqrt(variance() / static_cast<double>(n));
}

double RunningMoments::variance_standard_error() const {
  if (n < 4) return 0.0;
  const double nn = static_cast<double>(n);
  const double mu4 = m4 / nn;
  const double var = variance();
  // Var(s^2) = (mu4 - (n-3)/(n-1) sigma^4) / n
  const double v = (mu4 - (nn - 3.0) / (nn - 1.0) * var * var) / nn;
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

MomentAccumulator::MomentAccumulator(std::vector<std::int64_t> record_times)
    : times_(std::move(record_times)), stats_(times_.size()) {}

void MomentAccumulator::push(std::span<const std::int64_t> positions) {
  if (positions.size() != stats_.size())
    throw std::invalid_argument("trajectory length does not match the record schedule");
  for (std::size_t i = 0; i < positions.size(); ++i)
    stats_[i].push(static_cast<double>(positions[i]));
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.times_ != times_)
    throw std::invalid_argument("cannot merge accumulators with different record schedules");
  for (std::size_t i = 0; i < stats_.size(); ++i) stats_[i].merge(other.stats_[i]);
}

MomentAccumulator merge_accumulators(MomentAccumulator a, const MomentAccumulator& b) {
  a.merge(b);
  return a;
}

}  // namespace memwalk
