#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "memwalk/model.hpp"

namespace memwalk {

enum class Regime {
  SubdiffusiveRest,        // Var ~ t^(1-r)
  SubdiffusiveMemory,      // Var ~ t^(2 gamma), gamma < 1/2
  BoundarySubdiffusive,    // 2 gamma = 1 - r, both terms of the same order
  Diffusive,               // Var ~ t
  MarginalSuperdiffusive,  // Var ~ t ln t
  Superdiffusive,          // Var ~ t^(2 gamma), gamma > 1/2
  Frozen,                  // r = 1, bounded variance
};

/// Whether the leading power law carries a logarithmic factor.
enum class LogCorrection { Absent, Present, Unknown };

std::string_view to_string(Regime regime);
std::string_view to_string(LogCorrection flag);
Regime regime_from_string(std::string_view name);

bool is_subdiffusive(Regime regime);

struct RegimeReport {
  Regime regime = Regime::Frozen;
  double exponent = 0.0;  // predicted growth exponent of Var(t)
  LogCorrection log_correction = LogCorrection::Absent;

  friend bool operator==(const RegimeReport&, const RegimeReport&) = default;
};

/// Boundary comparisons on gamma and r use this absolute tolerance.
inline constexpr double kRegimeTolerance = 1e-12;

/// Asymptotic variance regime of the phase diagram. Total and pure.
RegimeReport classify(const Parameters& params);

// Constraint lines through the (gamma, r) triangle.
struct FixedPersistence {
  double p;
};
struct FixedRest {
  double r;
};
struct FixedGamma {
  double gamma;
};
using LineConstraint = std::variant<FixedPersistence, FixedRest, FixedGamma>;

std::string describe(const LineConstraint& line);

struct SweepOptions {
  // Fixed-p and fixed-gamma lines end on the r = 0 edge (the walk without
  // rests). That endpoint is skipped unless requested.
  bool include_rest_free_edge = false;
  double s = 0.5;
};

struct SweepPoint {
  double coordinate = 0.0;  // q for fixed p, gamma for fixed r, r for fixed gamma
  Parameters params;
  RegimeReport report;
};

/// Consecutive sweep points sharing a regime label and log flag. The
/// exponent may vary inside an interval.
struct RegimeInterval {
  Regime regime = Regime::Frozen;
  LogCorrection log_correction = LogCorrection::Absent;
  double lo = 0.0;  // coordinate range covered by the samples
  double hi = 0.0;
  double exponent_first = 0.0;
  double exponent_last = 0.0;
  std::size_t samples = 0;
};

struct SweepResult {
  LineConstraint line;
  std::vector<SweepPoint> points;
  std::vector<RegimeInterval> intervals;
};

/// Samples n_points evenly along the line, adds every crossing of a regime
/// boundary (gamma = 0, gamma = 1/2, 2 gamma = 1 - r, r = 0, r = 1) that lies
/// on it, and collapses adjacent equal reports into intervals. Points are
/// ordered by increasing coordinate.
SweepResult sweep_line(const LineConstraint& line, std::size_t n_points,
                       const SweepOptions& options = {});

}  // namespace memwalk
