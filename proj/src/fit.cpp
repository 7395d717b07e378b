#include "memwalk/fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace memwalk {

namespace {

std::vector<std::size_t> window_indices(std::span<const std::int64_t> times,
                                        std::int64_t t_lo, std::int64_t t_hi) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < times.size(); ++i)
    if (times[i] >= t_lo && times[i] <= t_hi) idx.push_back(i);
  return idx;
}

}  // namespace

ExponentFit fit_power_law(std::span<const std::int64_t> times, std::span<const double> values,
                          std::int64_t t_lo, std::int64_t t_hi) {
  if (times.size() != values.size())
    throw std::invalid_argument("fit_power_law: times and values differ in length");
  const auto idx = window_indices(times, t_lo, t_hi);
  if (idx.size() < 3) throw std::invalid_argument("fit window holds fewer than 3 points");

  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v = values[idx[static_cast<std::size_t>(i)]];
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("fit window holds a non-positive variance");
    design(i, 0) = 1.0;
    design(i, 1) = std::log(static_cast<double>(times[idx[static_cast<std::size_t>(i)]]));
    rhs[i] = std::log(v);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd residual = rhs - design * coef;
  const double ss_res = residual.squaredNorm();
  const double ss_tot = (rhs.array() - rhs.mean()).matrix().squaredNorm();

  ExponentFit fit;
  fit.exponent = coef[1];
  fit.goodness = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;
  fit.t_first = times[idx.front()];
  fit.t_last = times[idx.back()];
  fit.points = idx.size();
  return fit;
}

ExponentFit fit_exponent(const MomentSeries& series, double window_fraction) {
  if (!(window_fraction > 0.0 && window_fraction <= 1.0))
    throw std::invalid_argument("window_fraction must lie in (0, 1]");
  if (series.size() == 0) throw std::invalid_argument("fit_exponent: empty series");
  const double log_first = std::log(static_cast<double>(series.times.front()));
  const double log_last = std::log(static_cast<double>(series.times.back()));
  const double log_lo = log_last - window_fraction * (log_last - log_first);
  // Tolerate rounding in exp/log when the window edge is a recorded time.
  const auto t_lo = static_cast<std::int64_t>(std::ceil(std::exp(log_lo) * (1.0 - 1e-12)));
  if (window_indices(series.times, t_lo, series.times.back()).size() < kMinExponentFitPoints)
    throw std::invalid_argument("fit window holds fewer than 8 recorded times");
  return fit_power_law(series.times,
                       std::span<const double>(series.variance.data(), series.size()), t_lo,
                       series.times.back());
}

double diffusive_correction_exponent(const Parameters& params) {
  const RegimeReport report = classify(params);
  if (report.regime != Regime::Diffusive)
    throw OutOfRegime("diffusive correction requested off the diffusive locus");
  return params.r <= kRegimeTolerance ? 2.0 * params.gamma() : 1.0 - params.r;
}

DiffusionFit fit_diffusion_coefficient(const Parameters& params,
                                       std::span<const std::int64_t> times,
                                       std::span<const double> variance, std::int64_t t_lo,
                                       std::int64_t t_hi) {
  if (times.size() != variance.size())
    throw std::invalid_argument("fit_diffusion_coefficient: length mismatch");
  const double beta = diffusive_correction_exponent(params);
  const bool with_constant = std::abs(2.0 * params.s - 1.0) > 0.0;
  const auto idx = window_indices(times, t_lo, t_hi);
  const Eigen::Index cols = with_constant ? 3 : 2;
  if (static_cast<Eigen::Index>(idx.size()) <= cols)
    throw std::invalid_argument("diffusion fit window holds too few points");

  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd design(n, cols);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = idx[static_cast<std::size_t>(i)];
    const double t = static_cast<double>(times[k]);
    // Scale columns to comparable magnitude for conditioning.
    design(i, 0) = t / t_hi;
    design(i, 1) = std::pow(t / t_hi, beta);
    if (with_constant) design(i, 2) = 1.0;
    rhs[i] = variance[k] / static_cast<double>(t_hi);
  }
  const Eigen::VectorXd coef = design.colPivHouseholderQr().solve(rhs);
  return {coef[0] / 2.0, beta, idx.size()};
}

}  // namespace memwalk
