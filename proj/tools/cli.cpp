#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <sstream>

#include "memwalk/ensemble.hpp"
#include "memwalk/exact_oracle.hpp"
#include "memwalk/fit.hpp"
#include "memwalk/io.hpp"
#include "memwalk/moments.hpp"
#include "memwalk/regime.hpp"
#include "memwalk/version.hpp"

namespace memwalk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
  return hex.str();
}

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputFile {
  fs::path path;
  std::string content;
};

void write_file(const OutputFile& file) {
  std::ofstream os(file.path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + file.path.string() + " for writing");
  os.write(file.content.data(), static_cast<std::streamsize>(file.content.size()));
  os.close();
  if (!os) throw IoError("failed writing " + file.path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

fs::path output_path(const std::string& flag, std::string_view default_name) {
  if (!flag.empty()) return flag;
  const char* dir = std::getenv("MEMWALK_OUTPUT_DIR");
  return fs::path(dir && *dir ? dir : ".") / default_name;
}

// out.csv -> out<suffix>
fs::path sibling(const fs::path& out, std::string_view suffix) {
  return out.parent_path() / (out.stem().string() + std::string(suffix));
}

fs::path manifest_path(const fs::path& out) { return out.string() + ".manifest.json"; }

struct ParamFlags {
  double p = std::numeric_limits<double>::quiet_NaN();
  double q = std::numeric_limits<double>::quiet_NaN();
  double r = std::numeric_limits<double>::quiet_NaN();
  double s = 0.5;

  void add(CLI::App* sub, bool required) {
    auto* op = sub->add_option("--p", p, "persistence: repeat the recalled step");
    auto* oq = sub->add_option("--q", q, "reversal: oppose the recalled step");
    auto* orr = sub->add_option("--r", r, "rest: stay after recalling a move");
    sub->add_option("--s", s, "probability that the first step is +1")->capture_default_str();
    if (required) {
      op->required();
      oq->required();
      orr->required();
    }
  }
  bool given() const { return !std::isnan(p) && !std::isnan(q) && !std::isnan(r); }
  Parameters get() const { return Parameters::make(p, q, r, s); }
};

// Everything needed to rebuild a run: the effective flags of the subcommand.
std::vector<std::string> effective_arguments(const CLI::App* sub) {
  std::vector<std::string> args{sub->get_name()};
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_name();
    if (name == "--help" || name == "--config" || opt->count() == 0) continue;
    if (opt->get_expected_max() == 0) {
      if (opt->as<bool>()) args.push_back(name);
      continue;
    }
    if (opt->get_positional()) {
      for (const auto& v : opt->results()) args.push_back(v);
      continue;
    }
    std::string joined;
    for (const auto& v : opt->results()) joined += (joined.empty() ? "" : ",") + v;
    args.push_back(name);
    args.push_back(joined);
  }
  return args;
}

struct RunRecord {
  std::string command;
  std::vector<std::string> arguments;
  std::string started = utc_now();
  json params;
  std::optional<std::uint64_t> seed;
  std::optional<std::vector<std::int64_t>> record_times;
  std::vector<OutputFile> outputs;
};

// Writes every output, then the manifest next to the primary output.
void publish(const RunRecord& rec, std::ostream& out) {
  for (const auto& f : rec.outputs) write_file(f);
  json files = json::array();
  for (const auto& f : rec.outputs)
    files.push_back(
        {{"path", f.path.string()}, {"sha256", sha256_hex(f.content)}, {"bytes", f.content.size()}});
  json m = {
      {"schema", "memwalk.run_manifest/1"},
      {"tool", "memwalk"},
      {"version", std::string(kVersion)},
      {"command", rec.command},
      {"arguments", rec.arguments},
      {"params", rec.params},
      {"started_utc", rec.started},
      {"finished_utc", utc_now()},
      {"outputs", files},
  };
  m["seed"] = rec.seed ? json(*rec.seed) : json(nullptr);
  m["record_times"] = rec.record_times ? json(*rec.record_times) : json(nullptr);
  const fs::path mpath = manifest_path(rec.outputs.front().path);
  write_file({mpath, m.dump(2) + "\n"});
  for (const auto& f : rec.outputs) out << "wrote " << f.path.string() << '\n';
  out << "manifest " << mpath.string() << '\n';
}

std::vector<std::int64_t> schedule(const std::vector<std::int64_t>& times, std::int64_t t_max) {
  if (times.empty()) return geometric_schedule(t_max);
  return times;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateFlags {
  ParamFlags params;
  std::int64_t t_max = 1000;
  std::int64_t trajectories = 10000;
  std::uint64_t seed = 0;
  std::string format = "csv";
  std::vector<std::int64_t> times;
  unsigned threads = 0;
  std::int64_t dump = 0;
  std::string out;
};

int cmd_simulate(const SimulateFlags& f, RunRecord rec, std::ostream& out) {
  const Parameters params = f.params.get();
  EnsembleConfig cfg;
  cfg.master_seed = f.seed;
  cfg.n_trajectories = f.trajectories;
  cfg.t_max = f.t_max;
  cfg.record_times = f.times;
  cfg.threads = f.threads;
  const SimulationResult result = run_ensemble(params, cfg);

  const fs::path path = output_path(f.out, f.format == "json" ? "simulate.json" : "simulate.csv");
  std::ostringstream body;
  if (f.format == "json")
    body << io::simulation_json(result).dump(2) << '\n';
  else
    io::write_simulation_csv(body, result);
  rec.outputs.push_back({path, body.str()});

  if (f.dump > 0) {
    const auto paths = dump_trajectories(params, cfg, f.dump);
    std::ostringstream d;
    d << "trajectory,t,x\n";
    const auto& times = result.config.record_times;
    for (Eigen::Index i = 0; i < paths.rows(); ++i)
      for (Eigen::Index k = 0; k < paths.cols(); ++k)
        d << i << ',' << times[static_cast<std::size_t>(k)] << ',' << paths(i, k) << '\n';
    rec.outputs.push_back({sibling(path, "_trajectories.csv"), d.str()});
  }
  rec.params = io::parameters_json(params);
  rec.seed = f.seed;
  rec.record_times = result.config.record_times;
  publish(rec, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// analytic

struct AnalyticFlags {
  ParamFlags params;
  std::int64_t t_max = 1000000;
  std::vector<std::int64_t> times;
  std::string out;
};

int cmd_analytic(const AnalyticFlags& f, RunRecord rec, std::ostream& out) {
  const Parameters params = f.params.get();
  const auto times = schedule(f.times, f.t_max);
  const auto series = variance_series(params, times);
  std::ostringstream body;
  io::write_analytic_csv(body, series, second_moment_branch(params));
  rec.outputs.push_back({output_path(f.out, "analytic.csv"), body.str()});
  rec.params = io::parameters_json(params);
  rec.record_times = times;
  publish(rec, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleFlags {
  ParamFlags params;
  std::int64_t t = 0;
  std::int64_t ceiling = kDefaultExactCeiling;
  bool verify = false;
  double tolerance = 1e-9;
  std::string out;
};

int cmd_oracle(const OracleFlags& f, RunRecord rec, std::ostream& out) {
  const Parameters params = f.params.get();
  std::ostringstream moments;
  moments << "t,mean,mean_sq,var\n";
  double worst = 0.0;
  std::int64_t worst_t = 1;
  const auto last = evolve_exact_to(
      params, f.t,
      [&](const ExactDistribution& level) {
        const auto m = exact_moments(level);
        moments << level.t << ',' << io::format_number(m.mean) << ','
                << io::format_number(m.mean_sq) << ','
                << io::format_number(m.mean_sq - m.mean * m.mean) << '\n';
        if (!f.verify) return;
        const double mean = mean_displacement(params, level.t);
        const double mean_sq = mean_square_displacement(params, level.t);
        const double scale = std::max(std::abs(mean), std::sqrt(mean_sq));
        const double dev = std::max(std::abs(m.mean - mean) / scale,
                                    std::abs(m.mean_sq - mean_sq) / mean_sq);
        if (dev > worst) {
          worst = dev;
          worst_t = level.t;
        }
      },
      f.ceiling);

  std::ostringstream positions;
  io::write_position_csv(positions, position_distribution(last));
  const fs::path path = output_path(f.out, "oracle.csv");
  rec.outputs.push_back({path, positions.str()});
  rec.outputs.push_back({sibling(path, "_moments.csv"), moments.str()});
  rec.params = io::parameters_json(params);
  publish(rec, out);
  if (!f.verify) return kSuccess;
  const bool ok = worst <= f.tolerance;
  out << "max relative deviation from the closed forms: " << io::format_number(worst)
      << " at t=" << worst_t << " (tolerance " << f.tolerance << ") "
      << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kSuccess : kCheckFailed;
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyFlags {
  ParamFlags params;
  int grid = 0;
  std::string out;
};

int cmd_classify(const ClassifyFlags& f, RunRecord rec, std::ostream& out) {
  std::ostringstream body;
  body << io::regime_header() << '\n';
  if (f.grid > 0) {
    std::map<Regime, int> tally;
    for (int i = 0; i <= f.grid; ++i)
      for (int j = 0; i + j <= f.grid; ++j) {
        const double p = static_cast<double>(i) / f.grid;
        const double q = static_cast<double>(j) / f.grid;
        const auto params = Parameters::make(p, q, std::max(0.0, 1.0 - p - q), f.params.s);
        const auto report = classify(params);
        ++tally[report.regime];
        body << io::regime_row(params, report) << '\n';
      }
    for (const auto& [regime, n] : tally) out << to_string(regime) << ' ' << n << '\n';
    rec.outputs.push_back({output_path(f.out, "regime_map.csv"), body.str()});
    publish(rec, out);
    return kSuccess;
  }
  if (!f.params.given()) throw std::invalid_argument("classify needs --p, --q and --r, or --grid");
  const Parameters params = f.params.get();
  const auto report = classify(params);
  out << "regime " << to_string(report.regime) << '\n'
      << "exponent " << io::format_number(report.exponent) << '\n'
      << "log_correction " << to_string(report.log_correction) << '\n';
  if (f.out.empty()) return kSuccess;
  body << io::regime_row(params, report) << '\n';
  rec.params = io::parameters_json(params);
  rec.outputs.push_back({f.out, body.str()});
  publish(rec, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepFlags {
  std::string fix;
  std::size_t points = 50;
  double s = 0.5;
  bool include_edge = false;
  std::int64_t fit_t_max = 1000000;
  std::int64_t mc_trajectories = 0;
  std::int64_t mc_t_max = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
};

LineConstraint parse_line(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("--fix expects p=<v>, r=<v> or gamma=<v>");
  const std::string key = text.substr(0, eq);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text.substr(eq + 1), &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() - eq - 1)
    throw std::invalid_argument("--fix value is not a number: " + text);
  if (key == "p") return FixedPersistence{v};
  if (key == "r") return FixedRest{v};
  if (key == "gamma") return FixedGamma{v};
  throw std::invalid_argument("--fix expects p=<v>, r=<v> or gamma=<v>, got " + text);
}

std::optional<ExponentFit> trailing_decade_fit(const MomentSeries& series) {
  const double decades = std::log10(static_cast<double>(series.times.back()));
  if (decades < 1.0) return std::nullopt;
  try {
    return fit_exponent(series, 1.0 / decades);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

int cmd_sweep(const SweepFlags& f, RunRecord rec, std::ostream& out) {
  const LineConstraint line = parse_line(f.fix);
  const auto sweep = sweep_line(line, f.points, {.include_rest_free_edge = f.include_edge, .s = f.s});
  const auto times = geometric_schedule(f.fit_t_max);

  std::ostringstream body;
  body << io::regime_header() << ",fitted_exponent,fit_goodness\n";
  for (const auto& pt : sweep.points) {
    body << io::regime_row(pt.params, pt.report) << ',';
    if (const auto fit = trailing_decade_fit(variance_series(pt.params, times)))
      body << io::format_number(fit->exponent) << ',' << io::format_number(fit->goodness);
    else
      body << ',';
    body << '\n';
  }

  std::ostringstream intervals;
  intervals << "regime,log_correction,lo,hi,exponent_first,exponent_last,samples\n";
  out << "sweep " << describe(line) << '\n';
  for (const auto& iv : sweep.intervals) {
    intervals << to_string(iv.regime) << ',' << to_string(iv.log_correction) << ','
              << io::format_number(iv.lo) << ',' << io::format_number(iv.hi) << ','
              << io::format_number(iv.exponent_first) << ','
              << io::format_number(iv.exponent_last) << ',' << iv.samples << '\n';
    out << "  " << std::left << std::setw(24) << to_string(iv.regime) << " [" << iv.lo << ", "
        << iv.hi << "]  " << iv.samples << " points\n";
  }

  const fs::path path = output_path(f.out, "sweep.csv");
  rec.outputs.push_back({path, body.str()});
  rec.outputs.push_back({sibling(path, "_intervals.csv"), intervals.str()});

  if (f.mc_trajectories > 0) {
    // One Monte Carlo spot check at the middle sample of every interval.
    std::ostringstream mc;
    mc << io::regime_header() << ",mc_exponent,mc_goodness\n";
    std::size_t first = 0;
    for (const auto& iv : sweep.intervals) {
      const auto& pt = sweep.points[first + iv.samples / 2];
      first += iv.samples;
      EnsembleConfig cfg;
      cfg.master_seed = f.seed;
      cfg.n_trajectories = f.mc_trajectories;
      cfg.t_max = f.mc_t_max;
      cfg.threads = f.threads;
      const auto result = run_ensemble(pt.params, cfg);
      mc << io::regime_row(pt.params, pt.report) << ',';
      if (const auto fit = trailing_decade_fit(result.series))
        mc << io::format_number(fit->exponent) << ',' << io::format_number(fit->goodness);
      else
        mc << ',';
      mc << '\n';
    }
    rec.outputs.push_back({sibling(path, "_mc.csv"), mc.str()});
    rec.seed = f.seed;
  }
  rec.params = {{"line", describe(line)}, {"s", f.s}};
  publish(rec, out);
  return kSuccess;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const VerifyOptions& opt, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const auto rows = run_verification(opt);
  std::size_t failed = 0, oracle_points = 0;
  out << std::left << std::setw(52) << "check" << std::setw(34) << "parameters" << std::setw(13)
      << "deviation" << std::setw(10) << "tolerance" << "status\n";
  for (const auto& row : rows) {
    if (row.check.rfind("oracle", 0) == 0) ++oracle_points;
    if (!row.passed) ++failed;
    std::ostringstream dev, tol;
    dev << std::setprecision(3) << row.deviation;
    tol << std::setprecision(3) << row.tolerance;
    out << std::left << std::setw(52) << row.check << std::setw(34) << row.detail
        << std::setw(13) << dev.str() << std::setw(10) << tol.str()
        << (row.passed ? "pass" : "FAIL") << '\n';
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out << oracle_points << " grid points, " << rows.size() << " checks, " << failed
      << " failed, " << std::fixed << std::setprecision(2) << secs << " s\n";
  return failed == 0 ? kSuccess : kCheckFailed;
}

// ---------------------------------------------------------------------------
// rerun

int cmd_rerun(const std::string& manifest_file, const std::string& out_override,
              std::ostream& out, std::ostream& err) {
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_file));
  } catch (const json::exception& e) {
    throw std::invalid_argument("manifest is not valid JSON: " + std::string(e.what()));
  }
  if (manifest.value("schema", "") != "memwalk.run_manifest/1")
    throw std::invalid_argument("not a memwalk run manifest: " + manifest_file);
  const auto& outputs = manifest.at("outputs");
  if (outputs.empty()) throw std::invalid_argument("manifest lists no outputs");

  const fs::path original = outputs.front().at("path").get<std::string>();
  const fs::path fresh = out_override.empty()
                             ? original.parent_path() / (original.stem().string() + ".rerun" +
                                                         original.extension().string())
                             : fs::path(out_override);
  std::vector<std::string> rebuilt;
  const auto recorded = manifest.at("arguments").get<std::vector<std::string>>();
  for (std::size_t i = 0; i < recorded.size(); ++i) {
    if (recorded[i] == "--out") {
      ++i;
      continue;
    }
    rebuilt.push_back(recorded[i]);
  }
  rebuilt.push_back("--out");
  rebuilt.push_back(fresh.string());

  std::ostringstream inner_out;
  const int code = run(rebuilt, inner_out, err);
  if (code != kSuccess) {
    err << "rerun failed with exit code " << code << '\n';
    return code;
  }
  const json again = json::parse(read_file(manifest_path(fresh)));
  const auto& new_outputs = again.at("outputs");
  bool same = new_outputs.size() == outputs.size();
  for (std::size_t i = 0; same && i < outputs.size(); ++i) {
    const bool match = outputs[i].at("sha256") == new_outputs[i].at("sha256");
    out << (match ? "identical " : "DIFFERS   ") << new_outputs[i].at("path").get<std::string>()
        << '\n';
    same = same && match;
  }
  out << (same ? "reproduced" : "not reproduced") << '\n';
  return same ? kSuccess : kCheckFailed;
}

// Flat key=value config: keys mirror long flag names. Flags given on the
// command line win.
void inject_config(std::vector<std::string>& args) {
  std::string config;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config = args[i].substr(9);
    } else {
      kept.push_back(args[i]);
    }
  }
  args = std::move(kept);
  if (config.empty()) return;
  if (!fs::exists(config)) throw IoError("config file not found: " + config);
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_file(config);
  } catch (const CLI::Error& e) {
    throw std::invalid_argument("cannot parse config " + config + ": " + e.what());
  }
  auto given = [&args](const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
  };
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--" || item.inputs.empty()) continue;
    const std::string flag = "--" + item.name;
    if (given(flag)) continue;
    if (item.inputs.size() == 1 && (item.inputs[0] == "true" || item.inputs[0] == "false")) {
      if (item.inputs[0] == "true") args.push_back(flag);
      continue;
    }
    std::string joined;
    for (const auto& v : item.inputs) joined += (joined.empty() ? "" : ",") + v;
    args.push_back(flag);
    args.push_back(joined);
  }
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random walks with uniform memory and rests: simulation, closed forms, "
               "exact distributions and regime maps."};
  app.name("memwalk");
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  const std::string config_help = "flat key=value file of long flag names; flags override it";

  SimulateFlags sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo ensemble statistics");
  sim.params.add(simulate, true);
  simulate->add_option("--t-max", sim.t_max, "last time step")->capture_default_str();
  simulate->add_option("--trajectories", sim.trajectories, "ensemble size")->capture_default_str();
  simulate->add_option("--seed", sim.seed, "master seed")->capture_default_str();
  simulate->add_option("--format", sim.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  simulate->add_option("--times", sim.times, "comma-separated record times")->delimiter(',');
  simulate->add_option("--threads", sim.threads, "worker threads (0: all cores)");
  simulate->add_option("--dump", sim.dump, "also write the first N raw trajectories (N <= 100)");
  simulate->add_option("--out", sim.out, "output file");
  simulate->add_option("--config", config_help);

  AnalyticFlags ana;
  auto* analytic = app.add_subcommand("analytic", "closed-form mean, second moment and variance");
  ana.params.add(analytic, true);
  analytic->add_option("--t-max", ana.t_max, "last time of the default schedule")
      ->capture_default_str();
  analytic->add_option("--times", ana.times, "comma-separated times")->delimiter(',');
  analytic->add_option("--out", ana.out, "output file");
  analytic->add_option("--config", config_help);

  OracleFlags ora;
  auto* oracle = app.add_subcommand("oracle", "exact position distribution by forward evolution");
  ora.params.add(oracle, true);
  oracle->add_option("--t", ora.t, "time of the reported distribution")->required();
  oracle->add_option("--ceiling", ora.ceiling, "largest t accepted")->capture_default_str();
  oracle->add_flag("--verify", ora.verify, "compare every level with the closed forms");
  oracle->add_option("--tolerance", ora.tolerance, "relative tolerance for --verify")
      ->capture_default_str();
  oracle->add_option("--out", ora.out, "position CSV; moments go to <stem>_moments.csv");
  oracle->add_option("--config", config_help);

  ClassifyFlags cla;
  auto* classify_cmd = app.add_subcommand("classify", "asymptotic variance regime");
  cla.params.add(classify_cmd, false);
  classify_cmd->add_option("--grid", cla.grid, "regime map over the simplex with step 1/N");
  classify_cmd->add_option("--out", cla.out, "CSV output");
  classify_cmd->add_option("--config", config_help);

  SweepFlags swp;
  auto* sweep = app.add_subcommand("sweep", "regimes along a line of the phase diagram");
  sweep->add_option("--fix", swp.fix, "p=<v>, r=<v> or gamma=<v>")->required();
  sweep->add_option("--points", swp.points, "grid resolution (>= 2)")->capture_default_str();
  sweep->add_option("--s", swp.s, "first-step bias")->capture_default_str();
  sweep->add_flag("--include-edge", swp.include_edge, "keep the r = 0 endpoint of the line");
  sweep->add_option("--fit-t-max", swp.fit_t_max, "horizon of the analytic exponent fits")
      ->capture_default_str();
  sweep->add_option("--mc-trajectories", swp.mc_trajectories,
                    "Monte Carlo spot check per interval (0: off)");
  sweep->add_option("--mc-t-max", swp.mc_t_max, "horizon of the spot checks")->capture_default_str();
  sweep->add_option("--seed", swp.seed, "master seed of the spot checks");
  sweep->add_option("--threads", swp.threads, "worker threads (0: all cores)");
  sweep->add_option("--out", swp.out, "points CSV; intervals go to <stem>_intervals.csv");
  sweep->add_option("--config", config_help);

  VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "exact oracle against closed forms, plus properties");
  verify->add_option("--t-max", ver.t_max, "oracle horizon")->capture_default_str();
  verify->add_option("--tolerance", ver.tolerance, "relative tolerance")->capture_default_str();
  verify->add_option("--perturb", ver.perturb, "shift p by this much on the analytic side");
  verify->add_option("--states", ver.random_states, "random states for the property checks")
      ->capture_default_str();
  verify->add_option("--seed", ver.seed, "seed of the property checks")->capture_default_str();
  verify->add_option("--config", config_help);

  std::string rerun_manifest, rerun_out;
  auto* rerun = app.add_subcommand("rerun", "repeat a run from its manifest and compare digests");
  rerun->add_option("manifest", rerun_manifest, "run manifest JSON")->required();
  rerun->add_option("--out", rerun_out, "primary output of the repeat run");

  try {
    inject_config(args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kSuccess;
    } catch (const CLI::CallForVersion&) {
      out << kVersion << '\n';
      return kSuccess;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << '\n';
      return kInvalidInput;
    }

    const CLI::App* chosen = app.get_subcommands().front();
    RunRecord rec;
    rec.command = chosen->get_name();
    rec.arguments = effective_arguments(chosen);
    if (chosen == simulate) return cmd_simulate(sim, rec, out);
    if (chosen == analytic) return cmd_analytic(ana, rec, out);
    if (chosen == oracle) return cmd_oracle(ora, rec, out);
    if (chosen == classify_cmd) return cmd_classify(cla, rec, out);
    if (chosen == sweep) return cmd_sweep(swp, rec, out);
    if (chosen == verify) return cmd_verify(ver, out);
    return cmd_rerun(rerun_manifest, rerun_out, out, err);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace memwalk::cli
