#pragma once

// Exact first and second moments of the position.
//
//   <x_t>     = (2s-1) Gamma(t+gamma) / (Gamma(1+gamma) Gamma(t))
//   <s_t^2>   = Gamma(t-r) / (Gamma(1-r) Gamma(t))
//   <S_t>     = Gamma(t+1-r) / (Gamma(2-r) Gamma(t))        S_t = sum_k s_k^2
//   <x_t^2>   = [A_t(2 gamma) - A_t(1-r)] / (2 gamma + r - 1)  gamma != 0
//   <x_t^2>   = <S_t>                                          gamma == 0
//
// with A_t(a) = Gamma(t+a) / (Gamma(a) Gamma(t)). On the line
// 2 gamma + r - 1 = 0 the closed form is 0/0 and the exact recursion
//
//   <x_{t+1}^2> = (1 + 2 gamma/t) <x_t^2> + (1-r)/t <S_t>,   <x_1^2> = 1
//
// is used instead.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "memwalk/gamma_ratio.hpp"
#include "memwalk/model.hpp"
#include "memwalk/regime.hpp"

namespace memwalk {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct BasicMomentSeries {
  std::vector<std::int64_t> times;
  Vector<Scalar> mean;
  Vector<Scalar> mean_sq;
  Vector<Scalar> variance;

  std::size_t size() const { return times.size(); }
};

using MomentSeries = BasicMomentSeries<double>;

/// Half-width of the band around 2 gamma + r = 1 where the recursion replaces
/// the closed form.
inline constexpr double kSingularLineTolerance = 1e-6;
/// Exact-endpoint tolerance for gamma = 0, gamma = -1 and r = 1.
inline constexpr double kEndpointTolerance = 1e-12;

enum class MomentBranch {
  ClosedForm,           // general gamma != 0 expression
  ClosedFormSymmetric,  // gamma = 0
  Recursion,            // singular line
};

inline std::string_view to_string(MomentBranch b) {
  switch (b) {
    case MomentBranch::ClosedForm: return "closed-form";
    case MomentBranch::ClosedFormSymmetric: return "closed-form-gamma0";
    case MomentBranch::Recursion: return "recursion";
  }
  return "?";
}

template <typename Scalar>
MomentBranch second_moment_branch(const BasicParameters<Scalar>& params) {
  const Scalar gamma = params.gamma();
  if (std::abs(gamma) <= Scalar(kEndpointTolerance)) return MomentBranch::ClosedFormSymmetric;
  if (std::abs(2 * gamma + params.r - 1) <= Scalar(kSingularLineTolerance))
    return MomentBranch::Recursion;
  return MomentBranch::ClosedForm;
}

namespace detail {
inline void require_time(std::int64_t t) {
  if (t < 1) throw std::domain_error("moments are defined for t >= 1");
}
}  // namespace detail

template <typename Scalar>
Scalar mean_displacement(const BasicParameters<Scalar>& params, std::int64_t t) {
  detail::require_time(t);
  const Scalar bias = 2 * params.s - 1;
  if (t == 1) return bias;
  const Scalar gamma = params.gamma();
  // gamma = -1: the walk reverses every recalled move, <x_2> = 0 and stays there.
  if (std::abs(gamma + 1) <= Scalar(kEndpointTolerance)) return Scalar(0);
  return bias * gamma_ratio(gamma, Scalar(t)) * reciprocal_gamma(Scalar(1) + gamma);
}

/// <x_1> .. <x_{t_max}> from <x_{t+1}> = (1 + gamma/t) <x_t>.
template <typename Scalar>
Vector<Scalar> mean_displacement_recursion(const BasicParameters<Scalar>& params,
                                           std::int64_t t_max) {
  detail::require_time(t_max);
  Vector<Scalar> out(t_max);
  const Scalar gamma = params.gamma();
  out[0] = 2 * params.s - 1;
  for (std::int64_t t = 1; t < t_max; ++t)
    out[t] = (Scalar(1) + gamma / Scalar(t)) * out[t - 1];
  return out;
}

template <typename Scalar>
Scalar expected_sigma_sq(const BasicParameters<Scalar>& params, std::int64_t t) {
  detail::require_time(t);
  if (t == 1) return Scalar(1);
  if (std::abs(params.r - 1) <= Scalar(kEndpointTolerance)) return Scalar(0);
  return gamma_ratio(-params.r, Scalar(t)) * reciprocal_gamma(Scalar(1) - params.r);
}

/// Expected number of moves (non-rest steps) among the first t steps.
template <typename Scalar>
Scalar cumulative_sigma_sq(const BasicParameters<Scalar>& params, std::int64_t t) {
  detail::require_time(t);
  if (t == 1) return Scalar(1);
  if (std::abs(params.r - 1) <= Scalar(kEndpointTolerance)) return Scalar(1);
  return gamma_ratio(Scalar(1) - params.r, Scalar(t)) * reciprocal_gamma(Scalar(2) - params.r);
}

/// <x_1^2> .. <x_{t_max}^2> by the exact recursion; the cumulative move count
/// is carried along with <S_{t+1}> = <S_t> (t + 1 - r) / t.
template <typename Scalar>
Vector<Scalar> second_moment_recursion(const BasicParameters<Scalar>& params,
                                       std::int64_t t_max) {
  detail::require_time(t_max);
  Vector<Scalar> out(t_max);
  const Scalar two_gamma = 2 * params.gamma();
  const Scalar move = Scalar(1) - params.r;
  Scalar msd = Scalar(1);
  Scalar moves = Scalar(1);
  out[0] = msd;
  for (std::int64_t i = 1; i < t_max; ++i) {
    const Scalar t = Scalar(i);
    msd = (Scalar(1) + two_gamma / t) * msd + move / t * moves;
    moves *= (t + move) / t;
    out[i] = msd;
  }
  return out;
}

template <typename Scalar>
Scalar mean_square_displacement(const BasicParameters<Scalar>& params, std::int64_t t) {
  detail::require_time(t);
  if (t == 1) return Scalar(1);
  switch (second_moment_branch(params)) {
    case MomentBranch::ClosedFormSymmetric:
      return cumulative_sigma_sq(params, t);
    case MomentBranch::Recursion:
      return second_moment_recursion(params, t)[t - 1];
    case MomentBranch::ClosedForm:
      break;
  }
  const Scalar two_gamma = 2 * params.gamma();
  const Scalar move = Scalar(1) - params.r;
  const Scalar tt = Scalar(t);
  return (rising_over_factorial(two_gamma, tt) - rising_over_factorial(move, tt)) /
         (two_gamma - move);
}

/// Mean, mean square and variance at the requested times (strictly
/// increasing, all >= 1).
template <typename Scalar>
BasicMomentSeries<Scalar> variance_series(const BasicParameters<Scalar>& params,
                                          std::vector<std::int64_t> times) {
  if (times.empty()) throw std::invalid_argument("variance_series needs at least one time");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 1) throw std::invalid_argument("record times must be >= 1");
    if (i > 0 && times[i] <= times[i - 1])
      throw std::invalid_argument("record times must be strictly increasing");
  }
  BasicMomentSeries<Scalar> out;
  const auto n = static_cast<Eigen::Index>(times.size());
  out.mean.resize(n);
  out.mean_sq.resize(n);
  out.variance.resize(n);

  Vector<Scalar> msd_path;
  if (second_moment_branch(params) == MomentBranch::Recursion)
    msd_path = second_moment_recursion(params, times.back());

  for (Eigen::Index i = 0; i < n; ++i) {
    const std::int64_t t = times[static_cast<std::size_t>(i)];
    out.mean[i] = mean_displacement(params, t);
    out.mean_sq[i] = msd_path.size() > 0 ? msd_path[t - 1] : mean_square_displacement(params, t);
    out.variance[i] = out.mean_sq[i] - out.mean[i] * out.mean[i];
  }
  out.times = std::move(times);
  return out;
}

/// Thrown when a quantity is requested outside the regime where it exists.
class OutOfRegime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// D in Var(t) ~ 2 D t on the diffusive locus.
///
/// On gamma = 1/2, r > 0 this is 1/(3 - 4p) - 2 (2s-1)^2 / pi. On r = 0,
/// gamma < 1/2 the mean grows as t^gamma and drops out, leaving
/// <x_t^2> ~ t / (3 - 4p), so D = 1 / (2 (3 - 4p)).
inline double diffusion_coefficient(const Parameters& params) {
  const RegimeReport report = classify(params);
  if (report.regime != Regime::Diffusive)
    throw OutOfRegime("diffusion coefficient requested for a " +
                      std::string(to_string(report.regime)) + " parameter point");
  const double mobility = 1.0 / (3.0 - 4.0 * params.p);
  if (params.r <= kRegimeTolerance) return 0.5 * mobility;
  const double bias = 2.0 * params.s - 1.0;
  return mobility - 2.0 * bias * bias / std::numbers::pi;
}

}  // namespace memwalk
