#include "memwalk/regime.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <stdexcept>

namespace memwalk {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::SubdiffusiveRest: return "SubdiffusiveRest";
    case Regime::SubdiffusiveMemory: return "SubdiffusiveMemory";
    case Regime::BoundarySubdiffusive: return "BoundarySubdiffusive";
    case Regime::Diffusive: return "Diffusive";
    case Regime::MarginalSuperdiffusive: return "MarginalSuperdiffusive";
    case Regime::Superdiffusive: return "Superdiffusive";
    case Regime::Frozen: return "Frozen";
  }
  return "?";
}

std::string_view to_string(LogCorrection flag) {
  switch (flag) {
    case LogCorrection::Absent: return "no";
    case LogCorrection::Present: return "yes";
    case LogCorrection::Unknown: return "unknown";
  }
  return "?";
}

Regime regime_from_string(std::string_view name) {
  for (Regime r : {Regime::SubdiffusiveRest, Regime::SubdiffusiveMemory,
                   Regime::BoundarySubdiffusive, Regime::Diffusive,
                   Regime::MarginalSuperdiffusive, Regime::Superdiffusive, Regime::Frozen})
    if (to_string(r) == name) return r;
  throw std::invalid_argument("unknown regime name: " + std::string(name));
}

bool is_subdiffusive(Regime regime) {
  return regime == Regime::SubdiffusiveRest || regime == Regime::SubdiffusiveMemory ||
         regime == Regime::BoundarySubdiffusive;
}

RegimeReport classify(const Parameters& params) {
  params.validate();
  const double gamma = params.gamma();
  const double r = params.r;
  const double tol = kRegimeTolerance;
  auto near = [tol](double a, double b) { return std::abs(a - b) <= tol; };

  if (near(r, 1.0)) return {Regime::Frozen, 0.0, LogCorrection::Absent};
  if (gamma > 0.5 + tol) return {Regime::Superdiffusive, 2.0 * gamma, LogCorrection::Absent};
  if (near(gamma, 0.5)) {
    if (near(r, 0.0)) return {Regime::MarginalSuperdiffusive, 1.0, LogCorrection::Present};
    return {Regime::Diffusive, 1.0, LogCorrection::Absent};
  }
  // gamma < 1/2 from here on.
  if (near(r, 0.0)) return {Regime::Diffusive, 1.0, LogCorrection::Absent};
  if (gamma <= tol) return {Regime::SubdiffusiveRest, 1.0 - r, LogCorrection::Absent};

  const double memory = 2.0 * gamma;
  const double rest = 1.0 - r;
  if (near(memory, rest)) return {Regime::BoundarySubdiffusive, rest, LogCorrection::Unknown};
  if (memory < rest) return {Regime::SubdiffusiveRest, rest, LogCorrection::Absent};
  return {Regime::SubdiffusiveMemory, memory, LogCorrection::Absent};
}

std::string describe(const LineConstraint& line) {
  auto shortest = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  return std::visit(
      [&](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, FixedPersistence>) return "p=" + shortest(c.p);
        if constexpr (std::is_same_v<T, FixedRest>) return "r=" + shortest(c.r);
        if constexpr (std::is_same_v<T, FixedGamma>) return "gamma=" + shortest(c.gamma);
      },
      line);
}

namespace {

// A line is parameterized by one coordinate c over [lo, hi] with
// gamma(c) = gamma0 + dgamma c and r(c) = r0 + dr c.
struct LineGeometry {
  double lo, hi;
  double gamma0, dgamma;
  double r0, dr;
  bool skip_hi_edge;  // hi endpoint lies on r = 0 and is excluded
  bool skip_lo_edge;  // lo endpoint lies on r = 0 and is excluded

  double gamma(double c) const { return gamma0 + dgamma * c; }
  double r(double c) const { return r0 + dr * c; }
};

LineGeometry geometry(const LineConstraint& line, const SweepOptions& options) {
  auto bad = [&line](const char* why) {
    return std::invalid_argument("infeasible sweep line " + describe(line) + ": " + why);
  };
  const bool keep_edge = options.include_rest_free_edge;
  return std::visit(
      [&](const auto& c) -> LineGeometry {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, FixedPersistence>) {
          // q in [0, 1 - p]; gamma = p - q, r = 1 - p - q.
          if (!(c.p >= 0.0 && c.p <= 1.0)) throw bad("p must lie in [0, 1]");
          if (c.p == 1.0) throw bad("p = 1 leaves a single point, not a line");
          return {0.0, 1.0 - c.p, c.p, -1.0, 1.0 - c.p, -1.0, !keep_edge, false};
        } else if constexpr (std::is_same_v<T, FixedRest>) {
          // gamma in [-(1 - r), 1 - r].
          if (!(c.r >= 0.0 && c.r < 1.0)) throw bad("r must lie in [0, 1)");
          return {-(1.0 - c.r), 1.0 - c.r, 0.0, 1.0, c.r, 0.0, false, false};
        } else {
          // r in [0, 1 - |gamma|].
          if (!(std::abs(c.gamma) < 1.0)) throw bad("|gamma| must be below 1");
          return {0.0, 1.0 - std::abs(c.gamma), c.gamma, 0.0, 0.0, 1.0, false, !keep_edge};
        }
      },
      line);
}

Parameters from_gamma_rest(double gamma, double r, double s) {
  const double p = std::clamp((1.0 - r + gamma) / 2.0, 0.0, 1.0);
  return Parameters::make(p, std::max(0.0, 1.0 - r - p), r, s);
}

Parameters point_params(const LineConstraint& line, double c, double s) {
  return std::visit(
      [c, s](const auto& fixed) {
        using T = std::decay_t<decltype(fixed)>;
        if constexpr (std::is_same_v<T, FixedPersistence>)
          return Parameters::make(fixed.p, c, std::max(0.0, 1.0 - fixed.p - c), s);
        else if constexpr (std::is_same_v<T, FixedRest>)
          return from_gamma_rest(c, fixed.r, s);
        else
          return from_gamma_rest(fixed.gamma, c, s);
      },
      line);
}

}  // namespace

SweepResult sweep_line(const LineConstraint& line, std::size_t n_points,
                       const SweepOptions& options) {
  if (n_points < 2) throw std::invalid_argument("sweep resolution must be at least 2");
  const LineGeometry g = geometry(line, options);

  std::vector<double> coords;
  coords.reserve(n_points + 8);
  for (std::size_t i = 0; i < n_points; ++i)
    coords.push_back(g.lo + (g.hi - g.lo) * static_cast<double>(i) /
                                static_cast<double>(n_points - 1));

  // Exact crossings of the regime loci.
  auto add_root = [&](double c0, double slope, double target) {
    if (slope == 0.0) return;
    const double c = (target - c0) / slope;
    if (c >= g.lo && c <= g.hi) coords.push_back(c);
  };
  add_root(g.gamma0, g.dgamma, 0.0);
  add_root(g.gamma0, g.dgamma, 0.5);
  add_root(g.r0, g.dr, 0.0);
  add_root(g.r0, g.dr, 1.0);
  // 2 gamma + r - 1 = 0
  add_root(2.0 * g.gamma0 + g.r0, 2.0 * g.dgamma + g.dr, 1.0);

  std::sort(coords.begin(), coords.end());
  const double span = g.hi - g.lo;
  std::vector<double> unique;
  for (double c : coords)
    if (unique.empty() || c - unique.back() > 1e-14 * span) unique.push_back(c);
  if (g.skip_hi_edge) std::erase_if(unique, [&](double c) { return c >= g.hi; });
  if (g.skip_lo_edge) std::erase_if(unique, [&](double c) { return c <= g.lo; });

  SweepResult out;
  out.line = line;
  for (double c : unique) {
    SweepPoint pt;
    pt.coordinate = c;
    pt.params = point_params(line, c, options.s);
    pt.report = classify(pt.params);
    out.points.push_back(pt);
  }
  for (const SweepPoint& pt : out.points) {
    const RegimeReport& rep = pt.report;
    if (!out.intervals.empty() && out.intervals.back().regime == rep.regime &&
        out.intervals.back().log_correction == rep.log_correction) {
      RegimeInterval& last = out.intervals.back();
      last.hi = pt.coordinate;
      last.exponent_last = rep.exponent;
      ++last.samples;
    } else {
      out.intervals.push_back({rep.regime, rep.log_correction, pt.coordinate, pt.coordinate,
                               rep.exponent, rep.exponent, 1});
    }
  }
  return out;
}

}  // namespace memwalk
