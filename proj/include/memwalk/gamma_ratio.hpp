#pragma once

// Ratios of gamma functions that stay accurate for very large arguments.
//
// Direct differences of lgamma lose about log10(lgamma(t)) digits: at
// t = 1e9 that is ~1e-6 relative. Instead the argument is shifted above a
// threshold with the exact recurrence Gamma(x+1) = x Gamma(x) and the
// remaining ratio is taken from Stirling's series with the large
// (t - 1/2) log t pieces cancelled analytically.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace memwalk {

namespace detail {

// Stirling series correction log Gamma(x) - [(x - 1/2) log x - x + log(2 pi)/2],
// valid for x >= kStirlingThreshold to below long double epsilon.
template <typename Scalar>
Scalar stirling_correction(Scalar x) {
  static constexpr std::array<long double, 8> coeff = {
      1.0L / 12.0L,        -1.0L / 360.0L,     1.0L / 1260.0L,  -1.0L / 1680.0L,
      1.0L / 1188.0L,      -691.0L / 360360.0L, 1.0L / 156.0L,  -3617.0L / 122400.0L};
  const Scalar inv = Scalar(1) / x;
  const Scalar inv2 = inv * inv;
  Scalar sum = Scalar(0);
  for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) sum = sum * inv2 + Scalar(*it);
  return sum * inv;
}

inline constexpr double kStirlingThreshold = 16.0;

template <typename Scalar>
bool is_nonpositive_integer(Scalar x) {
  return x <= Scalar(0) && std::floor(x) == x;
}

}  // namespace detail

/// Gamma(t + offset) / Gamma(t) for t >= 1 and t + offset > 0.
///
/// Throws std::domain_error when t + offset is not positive; at a
/// non-positive integer the numerator has a pole and the ratio is not finite.
template <typename Scalar>
Scalar gamma_ratio(Scalar offset, Scalar t) {
  if (!(t >= Scalar(1))) throw std::domain_error("gamma_ratio requires t >= 1");
  if (offset == Scalar(0)) return Scalar(1);
  const Scalar x = t + offset;
  if (detail::is_nonpositive_integer(x))
    throw std::domain_error("gamma_ratio: t + offset is a pole of Gamma, ratio is not finite");
  if (!(x > Scalar(0))) throw std::domain_error("gamma_ratio requires t + offset > 0");

  // Shift both arguments above the Stirling threshold.
  Scalar factor = Scalar(1);
  Scalar lo = t;
  while (std::min(lo, lo + offset) < Scalar(detail::kStirlingThreshold)) {
    factor *= lo / (lo + offset);
    lo += Scalar(1);
  }

  // log Gamma(lo + a) - log Gamma(lo)
  //   = (lo - 1/2) log1p(a/lo) - a + a log(lo + a) + c(lo + a) - c(lo)
  const Scalar log_ratio = (lo - Scalar(0.5)) * std::log1p(offset / lo) - offset +
                           offset * std::log(lo + offset) +
                           (detail::stirling_correction(lo + offset) -
                            detail::stirling_correction(lo));
  return factor * std::exp(log_ratio);
}

/// 1 / Gamma(a), entire: exactly zero at the poles a = 0, -1, -2, ...
template <typename Scalar>
Scalar reciprocal_gamma(Scalar a) {
  Scalar scale = Scalar(1);
  while (a <= Scalar(0)) {
    if (detail::is_nonpositive_integer(a)) return Scalar(0);
    scale *= a;
    a += Scalar(1);
  }
  return scale / std::tgamma(a);
}

/// Gamma(t + a) / (Gamma(a) Gamma(t)), i.e. the rising factorial (a)_t / (t-1)!,
/// finite for every real a. Used for the terms Gamma(t + 2 gamma) / Gamma(2 gamma)
/// and Gamma(t + 1 - r) / Gamma(1 - r), whose denominators can sit on poles.
template <typename Scalar>
Scalar rising_over_factorial(Scalar a, Scalar t) {
  if (!(t >= Scalar(1))) throw std::domain_error("rising_over_factorial requires t >= 1");
  if (t + a > Scalar(0)) return gamma_ratio(a, t) * reciprocal_gamma(a);
  // Only small t can land here: a (1 + a/1)(1 + a/2)...(1 + a/(t-1)).
  Scalar out = a;
  for (Scalar k = Scalar(1); k < t; k += Scalar(1)) out *= Scalar(1) + a / k;
  return out;
}

}  // namespace memwalk
