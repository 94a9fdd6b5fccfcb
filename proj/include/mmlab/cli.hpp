#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace mmlab::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kNonSeparable = 3,
  kNumericalFailure = 4,
};

/// Resolved settings of one `run`. The dataset comes either from `data` or
/// from the generator fields (gen_n > 0), never both.
struct RunConfig {
  std::string data;
  std::size_t gen_n = 0;
  std::size_t gen_m = 0;
  double gen_margin = 0.0;
  std::uint64_t gen_seed = 0;

  std::string schedule = "flow";
  double beta = 1.0;
  double t_end = 100.0;
  double dt = 0.0;      // 0: 0.05 / beta
  std::size_t steps = 1000;
  double eta = 0.0;     // 0: schedule default (1 for constant steps, 0.1 for deep)
  double c = 1.0;
  std::size_t depth = 2;
  std::vector<std::size_t> widths;  // hidden widths; empty: all equal to m
  std::string kernel = "linear";
  double sigma = 1.0;
  std::string kernel_schedule = "gd-adaptive";
  std::size_t per_decade = 10;
  double tol = 1e-10;
  double support_eps = 1e-7;
  std::uint64_t seed = 1;
  std::string out;
};

nlohmann::ordered_json to_json(const RunConfig& c);

/// Turns a flat JSON object of flag values into command-line tokens
/// ("--key", value...). Keys present in `explicit_args` are skipped so that
/// flags given on the command line win. Throws InvalidArgument for nested
/// objects.
std::vector<std::string> config_to_args(const nlohmann::ordered_json& config,
                                        const std::vector<std::string>& explicit_args);

/// Entry point of the `mmlab` tool; args excludes the program name.
/// Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mmlab::cli
