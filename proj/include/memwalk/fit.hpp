#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "memwalk/moments.hpp"

namespace memwalk {

struct ExponentFit {
  double exponent = 0.0;  // slope of log Var against log t
  double goodness = 0.0;  // coefficient of determination, clamped to [0, 1]
  std::int64_t t_first = 0;
  std::int64_t t_last = 0;
  std::size_t points = 0;
};

/// Ordinary least squares of log(values) on log(times) over the points with
/// t_lo <= t <= t_hi. Throws std::invalid_argument for fewer than three
/// points or non-positive values.
ExponentFit fit_power_law(std::span<const std::int64_t> times, std::span<const double> values,
                          std::int64_t t_lo, std::int64_t t_hi);

inline constexpr std::size_t kMinExponentFitPoints = 8;

/// Power-law fit of the variance over the trailing window_fraction of the
/// series' log-time span. With times from 1 to 10^6, window_fraction = 1/6
/// is the last decade. Throws std::invalid_argument when the window holds
/// fewer than kMinExponentFitPoints recorded times.
ExponentFit fit_exponent(const MomentSeries& series, double window_fraction);

struct DiffusionFit {
  double coefficient = 0.0;  // D in Var ~ 2 D t
  double correction_exponent = 0.0;
  std::size_t points = 0;
};

/// Exponent of the leading finite-time correction to Var(t) ~ 2 D t on the
/// diffusive locus: 1 - r on gamma = 1/2 and 2 gamma on r = 0.
double diffusive_correction_exponent(const Parameters& params);

/// Least-squares fit of Var(t) = 2 D t + B t^beta (+ C when the mean is
/// nonzero) over t_lo <= t <= t_hi, where beta is the correction exponent.
DiffusionFit fit_diffusion_coefficient(const Parameters& params,
                                       std::span<const std::int64_t> times,
                                       std::span<const double> variance, std::int64_t t_lo,
                                       std::int64_t t_hi);

}  // namespace memwalk
