#pragma once

// Exact forward evolution of the joint law of (n_plus, n_minus) at each time.
// The transition law depends on the history only through the step counts, so
// the distribution over count pairs is a complete description. Level t holds
// O(t^2) states and one step costs O(t^2), so reaching t is O(t^3).

#include <Eigen/Core>

#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "memwalk/model.hpp"

namespace memwalk {

/// Thrown when a request would exceed a configured resource ceiling.
class ResourceLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::int64_t kDefaultExactCeiling = 512;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
struct BasicExactDistribution {
  std::int64_t t = 0;
  // mass(n_plus, n_minus); entries with n_plus + n_minus > t are zero.
  DenseMatrix<Scalar> mass;

  Scalar at(std::int64_t n_plus, std::int64_t n_minus) const {
    if (n_plus < 0 || n_minus < 0 || n_plus + n_minus > t) return Scalar(0);
    return mass(n_plus, n_minus);
  }

  Scalar total() const { return mass.sum(); }

  /// Non-negative masses summing to 1 within tol, support inside
  /// 1 <= n_plus + n_minus <= t.
  bool valid(Scalar tol = Scalar(1e-12)) const {
    if (t < 1 || mass.rows() != t + 1 || mass.cols() != t + 1) return false;
    for (Eigen::Index a = 0; a <= t; ++a)
      for (Eigen::Index b = 0; b <= t; ++b) {
        const Scalar m = mass(a, b);
        if (m < Scalar(0)) return false;
        const bool in_support = a + b >= 1 && a + b <= t;
        if (!in_support && m != Scalar(0)) return false;
      }
    return std::abs(total() - Scalar(1)) <= tol;
  }
};

using ExactDistribution = BasicExactDistribution<double>;

template <typename Scalar>
BasicExactDistribution<Scalar> initial_exact_distribution(const BasicParameters<Scalar>& params) {
  BasicExactDistribution<Scalar> d;
  d.t = 1;
  d.mass = DenseMatrix<Scalar>::Zero(2, 2);
  const auto first = first_step_distribution(params);
  d.mass(1, 0) = first.p_plus;
  d.mass(0, 1) = first.p_minus;
  return d;
}

/// One level forward: every state pushes its mass through the one-step law.
template <typename Scalar>
BasicExactDistribution<Scalar> advance_exact(const BasicParameters<Scalar>& params,
                                             const BasicExactDistribution<Scalar>& cur) {
  const std::int64_t t = cur.t;
  BasicExactDistribution<Scalar> next;
  next.t = t + 1;
  next.mass = DenseMatrix<Scalar>::Zero(t + 2, t + 2);
  for (std::int64_t a = 0; a <= t; ++a) {
    for (std::int64_t b = 0; a + b <= t; ++b) {
      const Scalar m = cur.mass(a, b);
      if (m == Scalar(0)) continue;
      const auto law = step_distribution(params, WalkState::from_counts(a, b, t - a - b));
      next.mass(a + 1, b) += m * law.p_plus;
      next.mass(a, b + 1) += m * law.p_minus;
      next.mass(a, b) += m * law.p_zero;
    }
  }
  return next;
}

/// Distributions at t = 1 .. t_max. Memory grows as t_max^3; for large t_max
/// prefer evolve_exact_to.
template <typename Scalar>
std::vector<BasicExactDistribution<Scalar>> evolve_exact(
    const BasicParameters<Scalar>& params, std::int64_t t_max,
    std::int64_t ceiling = kDefaultExactCeiling) {
  if (t_max < 1) throw std::invalid_argument("evolve_exact requires t_max >= 1");
  if (t_max > ceiling)
    throw ResourceLimitExceeded("exact evolution to t = " + std::to_string(t_max) +
                                " exceeds the ceiling of " + std::to_string(ceiling));
  params.validate();
  std::vector<BasicExactDistribution<Scalar>> levels;
  levels.reserve(static_cast<std::size_t>(t_max));
  levels.push_back(initial_exact_distribution(params));
  while (levels.back().t < t_max) levels.push_back(advance_exact(params, levels.back()));
  return levels;
}

/// Only the final level, with O(t_max^2) memory. The visitor, when given, sees
/// every level in order.
template <typename Scalar, typename Visitor>
  requires std::invocable<Visitor&, const BasicExactDistribution<Scalar>&>
BasicExactDistribution<Scalar> evolve_exact_to(const BasicParameters<Scalar>& params,
                                               std::int64_t t_max, Visitor&& visit,
                                               std::int64_t ceiling = kDefaultExactCeiling) {
  if (t_max < 1) throw std::invalid_argument("evolve_exact requires t_max >= 1");
  if (t_max > ceiling)
    throw ResourceLimitExceeded("exact evolution to t = " + std::to_string(t_max) +
                                " exceeds the ceiling of " + std::to_string(ceiling));
  params.validate();
  auto level = initial_exact_distribution(params);
  visit(level);
  while (level.t < t_max) {
    level = advance_exact(params, level);
    visit(level);
  }
  return level;
}

template <typename Scalar>
BasicExactDistribution<Scalar> evolve_exact_to(const BasicParameters<Scalar>& params,
                                               std::int64_t t_max,
                                               std::int64_t ceiling = kDefaultExactCeiling) {
  return evolve_exact_to(params, t_max, [](const auto&) {}, ceiling);
}

/// Law of x = n_plus - n_minus; prob[x + t] for x in [-t, t].
template <typename Scalar>
struct BasicPositionDistribution {
  std::int64_t t = 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> prob;

  Scalar at(std::int64_t x) const {
    if (x < -t || x > t) return Scalar(0);
    return prob[x + t];
  }
};

using PositionDistribution = BasicPositionDistribution<double>;

template <typename Scalar>
BasicPositionDistribution<Scalar> position_distribution(const BasicExactDistribution<Scalar>& d) {
  BasicPositionDistribution<Scalar> out;
  out.t = d.t;
  out.prob = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(2 * d.t + 1);
  for (std::int64_t a = 0; a <= d.t; ++a)
    for (std::int64_t b = 0; a + b <= d.t; ++b) out.prob[a - b + d.t] += d.mass(a, b);
  return out;
}

template <typename Scalar>
struct BasicExactMoments {
  Scalar mean{};
  Scalar mean_sq{};
};

template <typename Scalar>
BasicExactMoments<Scalar> exact_moments(const BasicPositionDistribution<Scalar>& d) {
  BasicExactMoments<Scalar> m;
  for (std::int64_t x = -d.t; x <= d.t; ++x) {
    const Scalar w = d.prob[x + d.t];
    m.mean += Scalar(x) * w;
    m.mean_sq += Scalar(x) * Scalar(x) * w;
  }
  return m;
}

template <typename Scalar>
BasicExactMoments<Scalar> exact_moments(const BasicExactDistribution<Scalar>& d) {
  return exact_moments(position_distribution(d));
}

}  // namespace memwalk
