#pragma once

// File formats. Column layouts are stable; see docs/interfaces.md.

#include <json.hpp>

#include <ostream>
#include <string>

#include "memwalk/ensemble.hpp"
#include "memwalk/exact_oracle.hpp"
#include "memwalk/moments.hpp"
#include "memwalk/regime.hpp"

namespace memwalk::io {

/// 17 significant digits, enough to round-trip a double.
std::string format_number(double v);

/// t,mean,mean_se,var,var_se,n
void write_simulation_csv(std::ostream& out, const SimulationResult& result);

/// Result rows plus provenance (parameters, ensemble config, version). Thread
/// count is left out: results do not depend on it.
nlohmann::json simulation_json(const SimulationResult& result);

nlohmann::json parameters_json(const Parameters& params);

/// t,mean,mean_sq,var,branch
void write_analytic_csv(std::ostream& out, const MomentSeries& series, MomentBranch branch);

/// x,probability
void write_position_csv(std::ostream& out, const PositionDistribution& dist);

/// Header of the regime map: p,q,r,gamma,regime,exponent,log_correction
std::string regime_header();
std::string regime_row(const Parameters& params, const RegimeReport& report);

}  // namespace memwalk::io
