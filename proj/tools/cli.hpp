#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace memwalk::cli {

enum ExitCode : int {
  kSuccess = 0,
  kCheckFailed = 1,
  kInvalidInput = 2,
  kIoFailure = 3,
};

/// Runs one command line (without the program name). Normal output goes to
/// `out`, diagnostics to `err`.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

std::string sha256_hex(std::string_view data);

struct VerifyOptions {
  std::int64_t t_max = 50;
  double tolerance = 1e-9;
  double perturb = 0.0;  // shifts p (and q back) in the analytic side only
  int random_states = 1000;
  std::uint64_t seed = 1;
};

struct VerifyRow {
  std::string check;
  std::string detail;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

std::vector<VerifyRow> run_verification(const VerifyOptions& options);

}  // namespace memwalk::cli
