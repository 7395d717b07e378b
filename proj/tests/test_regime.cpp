#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "memwalk/ensemble.hpp"
#include "memwalk/fit.hpp"
#include "memwalk/moments.hpp"
#include "memwalk/regime.hpp"

using namespace memwalk;

namespace {

std::vector<Regime> labels(const SweepResult& sweep) {
  std::vector<Regime> out;
  for (const auto& iv : sweep.intervals) out.push_back(iv.regime);
  return out;
}

bool contains(const std::vector<Regime>& v, Regime r) {
  return std::find(v.begin(), v.end(), r) != v.end();
}

MomentSeries analytic(const Parameters& p, std::int64_t t_max) {
  return variance_series(p, geometric_schedule(t_max));
}

}  // namespace

TEST_CASE("classify examples") {
  const auto rest = classify(Parameters::make(0.3, 0.3, 0.4, 0.5));
  CHECK(rest.regime == Regime::SubdiffusiveRest);
  CHECK(rest.exponent == doctest::Approx(0.6));

  const auto sup = classify(Parameters::make(0.8, 0.1, 0.1, 0.5));
  CHECK(sup.regime == Regime::Superdiffusive);
  CHECK(sup.exponent == doctest::Approx(1.4));

  const auto mem = classify(Parameters::make(0.3, 0.05, 0.65, 0.5));
  CHECK(mem.regime == Regime::SubdiffusiveMemory);
  CHECK(mem.exponent == doctest::Approx(0.5));

  const auto diff = classify(Parameters::make(0.625, 0.125, 0.25, 0.5));
  CHECK(diff.regime == Regime::Diffusive);
  CHECK(diff.exponent == 1.0);
  CHECK(diff.log_correction == LogCorrection::Absent);

  const auto marginal = classify(Parameters::make(0.75, 0.25, 0.0, 0.5));
  CHECK(marginal.regime == Regime::MarginalSuperdiffusive);
  CHECK(marginal.log_correction == LogCorrection::Present);

  const auto edge = classify(Parameters::make(0.4, 0.6, 0.0, 0.5));
  CHECK(edge.regime == Regime::Diffusive);

  const auto boundary = classify(Parameters::make(0.6, 0.1, 0.3, 0.5));
  CHECK(boundary.regime == Regime::Diffusive);

  const auto singular = classify(Parameters::from_gamma_rest(0.2, 0.6, 0.5));
  CHECK(singular.regime == Regime::BoundarySubdiffusive);
  CHECK(singular.exponent == doctest::Approx(0.4));
  CHECK(singular.log_correction == LogCorrection::Unknown);

  CHECK(classify(Parameters::make(0, 0, 1, 0.5)).regime == Regime::Frozen);
  CHECK(classify(Parameters::make(0, 0, 1, 0.5)).exponent == 0.0);
  CHECK(classify(Parameters::make(0.1, 0.4, 0.5, 0.5)).regime == Regime::SubdiffusiveRest);
  CHECK(classify(Parameters::make(0.0, 1.0, 0.0, 0.5)).regime == Regime::Diffusive);
}

TEST_CASE("names round-trip") {
  for (Regime r : {Regime::SubdiffusiveRest, Regime::SubdiffusiveMemory,
                   Regime::BoundarySubdiffusive, Regime::Diffusive,
                   Regime::MarginalSuperdiffusive, Regime::Superdiffusive, Regime::Frozen})
    CHECK(regime_from_string(to_string(r)) == r);
  CHECK_THROWS(regime_from_string("Ballistic"));
  CHECK(to_string(LogCorrection::Unknown) == "unknown");
}

TEST_CASE("property: exponent invariants over a random simplex sample") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5000; ++trial) {
    double a = u(gen), b = u(gen), c = u(gen);
    const double sum = a + b + c;
    const auto p = Parameters::renormalized(a / sum, b / sum, c / sum, 0.5);
    const auto rep = classify(p);
    const double g = p.gamma();
    if (rep.regime == Regime::Frozen) continue;
    if (g > 0.0 && p.r > 0.0 && g < 0.5)
      CHECK(rep.exponent == doctest::Approx(std::max(2 * g, 1 - p.r)));
    if (g <= 0.0 && p.r > 0.0) CHECK(rep.exponent == doctest::Approx(1 - p.r));
    CHECK((rep.regime == Regime::Superdiffusive) == (rep.exponent > 1.0));
    CHECK(is_subdiffusive(rep.regime) == (rep.exponent < 1.0));
  }
}

TEST_CASE("property: classification only changes across the regime loci") {
  // Fine walk along several lines; wherever the label changes between
  // neighbours, some locus must lie between them.
  const double step = 1e-4;
  for (const LineConstraint& line :
       {LineConstraint{FixedPersistence{0.625}}, LineConstraint{FixedPersistence{0.3}},
        LineConstraint{FixedRest{0.2}}, LineConstraint{FixedGamma{0.3}},
        LineConstraint{FixedGamma{-0.2}}}) {
    const auto sweep = sweep_line(line, 1.0 / step, {.include_rest_free_edge = true});
    for (std::size_t i = 1; i < sweep.points.size(); ++i) {
      const auto& a = sweep.points[i - 1];
      const auto& b = sweep.points[i];
      if (a.report.regime == b.report.regime) continue;
      auto crosses = [&](auto f) {
        const double fa = f(a.params), fb = f(b.params);
        return std::abs(fa) <= 1e-12 || std::abs(fb) <= 1e-12 || (fa < 0) != (fb < 0);
      };
      const bool locus = crosses([](const Parameters& p) { return p.gamma() - 0.5; }) ||
                         crosses([](const Parameters& p) { return p.gamma(); }) ||
                         crosses([](const Parameters& p) { return p.r; }) ||
                         crosses([](const Parameters& p) { return p.r - 1.0; }) ||
                         crosses([](const Parameters& p) { return 2 * p.gamma() + p.r - 1; });
      CAPTURE(describe(line));
      CAPTURE(a.coordinate);
      CHECK(locus);
    }
  }
}

TEST_CASE("sweep along p = 0.625 crosses every regime") {
  const auto sweep = sweep_line(FixedPersistence{0.625}, 50);
  const auto seen = labels(sweep);
  CHECK(seen == std::vector<Regime>{Regime::Superdiffusive, Regime::Diffusive,
                                    Regime::SubdiffusiveMemory, Regime::BoundarySubdiffusive,
                                    Regime::SubdiffusiveRest});
  // The diffusive point sits exactly at q = 1/8.
  CHECK(sweep.intervals[1].lo == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(sweep.intervals[3].lo == doctest::Approx(0.625 / 3).epsilon(1e-14));
  for (const auto& iv : sweep.intervals) CHECK(iv.lo <= iv.hi);
}

TEST_CASE("sweep along p = 0.3 stays subdiffusive") {
  for (const auto& iv : sweep_line(FixedPersistence{0.3}, 50).intervals)
    CHECK(is_subdiffusive(iv.regime));
  // The r = 0 edge itself is diffusive and is only reported on request.
  const auto with_edge = sweep_line(FixedPersistence{0.3}, 50, {.include_rest_free_edge = true});
  CHECK(with_edge.intervals.back().regime == Regime::Diffusive);
  CHECK(with_edge.intervals.back().samples == 1);
}

TEST_CASE("p = 1/2 separates the two sweep behaviours") {
  for (double p : {0.51, 0.55, 0.7, 0.9, 0.99}) {
    CAPTURE(p);
    CHECK(contains(labels(sweep_line(FixedPersistence{p}, 40)), Regime::Superdiffusive));
  }
  for (double p : {0.01, 0.1, 0.3, 0.45, 0.49}) {
    CAPTURE(p);
    for (const auto& iv : sweep_line(FixedPersistence{p}, 40).intervals)
      CHECK(is_subdiffusive(iv.regime));
  }
}

TEST_CASE("sweeps at fixed r and fixed gamma") {
  const auto r6 = labels(sweep_line(FixedRest{0.6}, 60));
  CHECK_FALSE(contains(r6, Regime::Diffusive));
  CHECK_FALSE(contains(r6, Regime::Superdiffusive));
  CHECK_FALSE(contains(r6, Regime::MarginalSuperdiffusive));

  const auto r2 = labels(sweep_line(FixedRest{0.2}, 60));
  CHECK(contains(r2, Regime::Diffusive));
  CHECK(contains(r2, Regime::Superdiffusive));

  const auto g3 = sweep_line(FixedGamma{0.3}, 30);
  CHECK(g3.points.front().coordinate > 0.0);
  CHECK(labels(g3) == std::vector<Regime>{Regime::SubdiffusiveRest,
                                          Regime::BoundarySubdiffusive,
                                          Regime::SubdiffusiveMemory});
}

TEST_CASE("infeasible sweep lines are rejected") {
  CHECK_THROWS_AS(sweep_line(FixedPersistence{1.2}, 10), std::invalid_argument);
  CHECK_THROWS_AS(sweep_line(FixedRest{1.0}, 10), std::invalid_argument);
  CHECK_THROWS_AS(sweep_line(FixedGamma{1.0}, 10), std::invalid_argument);
  CHECK_THROWS_AS(sweep_line(FixedPersistence{0.5}, 1), std::invalid_argument);
}

TEST_CASE("fit_power_law on synthetic data") {
  std::vector<std::int64_t> times;
  std::vector<double> values;
  for (int i = 0; i < 20; ++i) {
    const auto t = static_cast<std::int64_t>(std::llround(std::pow(10.0, 1 + i * 0.25)));
    times.push_back(t);
    values.push_back(3.5 * std::pow(double(t), 0.7));
  }
  const auto fit = fit_power_law(times, values, 1, times.back());
  CHECK(std::abs(fit.exponent - 0.7) <= 1e-12);
  CHECK(fit.goodness == doctest::Approx(1.0));
  CHECK(fit.points == 20);

  values[3] = 0.0;
  CHECK_THROWS(fit_power_law(times, values, 1, times.back()));
  CHECK_THROWS(fit_power_law(times, values, 5000, 5001));
}

TEST_CASE("exponent fit needs eight recorded times in its window") {
  MomentSeries series;
  series.times = {1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024};
  const auto n = std::ssize(series.times);
  series.mean = Eigen::VectorXd::Zero(n);
  series.mean_sq = Eigen::VectorXd::Zero(n);
  series.variance.resize(n);
  for (Eigen::Index i = 0; i < n; ++i)
    series.variance[i] = std::pow(double(series.times[i]), 0.6);
  CHECK(fit_exponent(series, 1.0).points == 11);
  CHECK(std::abs(fit_exponent(series, 0.7).exponent - 0.6) <= 1e-12);
  CHECK_THROWS_AS(fit_exponent(series, 0.5), std::invalid_argument);
}

TEST_CASE("analytic exponent matches the classifier on an interior grid") {
  const double pts[][2] = {  // gamma, r
      {0.35, 0.1}, {0.7, 0.1},  {0.0, 0.5},  {0.25, 0.65}, {-0.3, 0.3},
      {0.1, 0.4},  {0.6, 0.3},  {0.45, 0.5}, {-0.1, 0.8},  {0.15, 0.2},
  };
  for (const auto& c : pts) {
    const auto p = Parameters::from_gamma_rest(c[0], c[1], 0.5);
    const auto rep = classify(p);
    REQUIRE(rep.log_correction == LogCorrection::Absent);
    const auto fit = fit_exponent(analytic(p, 1000000), 1.0 / 6.0);
    CAPTURE(c[0]);
    CAPTURE(c[1]);
    CHECK(std::abs(fit.exponent - rep.exponent) <= 0.03);
    CHECK(fit.points >= 8);
  }
}

TEST_CASE("marginal line: slope just above 1, Var / (t ln t) flat") {
  const auto p = Parameters::make(0.75, 0.25, 0.0, 0.5);
  const auto series = analytic(p, 1000000);
  const auto wide = fit_exponent(series, 0.5);
  const auto late = fit_exponent(series, 1.0 / 6.0);
  CHECK(wide.exponent > 1.0);
  CHECK(late.exponent > 1.0);
  CHECK(late.exponent < wide.exponent);

  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = double(series.times[i]);
    if (t < 1e5) continue;
    const double v = series.variance[i] / (t * std::log(t));
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo - 1.0 < 0.05);
}

TEST_CASE("diffusion coefficient fit recovers the closed form") {
  for (const auto& p : {Parameters::make(0.6, 0.1, 0.3, 0.5), Parameters::make(0.6, 0.1, 0.3, 1.0),
                        Parameters::make(0.625, 0.125, 0.25, 0.5),
                        Parameters::make(0.4, 0.6, 0.0, 0.5)}) {
    const auto series = analytic(p, 10000);
    const auto fit = fit_diffusion_coefficient(
        p, series.times, std::span<const double>(series.variance.data(), series.size()), 1000,
        10000);
    CAPTURE(p.p);
    CAPTURE(p.s);
    CHECK(std::abs(fit.coefficient / diffusion_coefficient(p) - 1.0) < 0.02);
  }
  CHECK_THROWS_AS(diffusive_correction_exponent(Parameters::make(0.8, 0.1, 0.1, 0.5)),
                  OutOfRegime);
}
