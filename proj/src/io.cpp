#include "memwalk/io.hpp"

#include <cstdio>

namespace memwalk::io {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_simulation_csv(std::ostream& out, const SimulationResult& result) {
  out << "t,mean,mean_se,var,var_se,n\n";
  const auto& s = result.series;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << s.times[i] << ',' << format_number(s.mean[k]) << ','
        << format_number(result.mean_se[k]) << ',' << format_number(s.variance[k]) << ','
        << format_number(result.var_se[k]) << ',' << result.count[i] << '\n';
  }
}

nlohmann::json parameters_json(const Parameters& params) {
  return {{"p", params.p}, {"q", params.q}, {"r", params.r}, {"s", params.s},
          {"gamma", params.gamma()}};
}

nlohmann::json simulation_json(const SimulationResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  const auto& s = result.series;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    rows.push_back({{"t", s.times[i]},
                    {"mean", s.mean[k]},
                    {"mean_se", result.mean_se[k]},
                    {"var", s.variance[k]},
                    {"var_se", result.var_se[k]},
                    {"n", result.count[i]}});
  }
  const EnsembleConfig& c = result.config;
  return {
      {"schema", "memwalk.simulation_result/1"},
      {"provenance",
       {{"tool", "memwalk"},
        {"version", result.version},
        {"params", parameters_json(result.params)},
        {"config",
         {{"master_seed", c.master_seed},
          {"n_trajectories", c.n_trajectories},
          {"t_max", c.t_max},
          {"record_times", c.record_times},
          {"trajectory_block", kTrajectoryBlock},
          {"rng", "xoshiro256starstar-splitmix64"}}}}},
      {"rows", rows},
  };
}

void write_analytic_csv(std::ostream& out, const MomentSeries& series, MomentBranch branch) {
  out << "t,mean,mean_sq,var,branch\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << series.times[i] << ',' << format_number(series.mean[k]) << ','
        << format_number(series.mean_sq[k]) << ',' << format_number(series.variance[k]) << ','
        << to_string(branch) << '\n';
  }
}

void write_position_csv(std::ostream& out, const PositionDistribution& dist) {
  out << "x,probability\n";
  for (std::int64_t x = -dist.t; x <= dist.t; ++x)
    out << x << ',' << format_number(dist.at(x)) << '\n';
}

std::string regime_header() { return "p,q,r,gamma,regime,exponent,log_correction"; }

std::string regime_row(const Parameters& params, const RegimeReport& report) {
  std::string row;
  for (double v : {params.p, params.q, params.r, params.gamma()}) row += format_number(v) + ',';
  row += std::string(to_string(report.regime)) + ',' + format_number(report.exponent) + ',' +
         std::string(to_string(report.log_correction));
  return row;
}

}  // namespace memwalk::io
