// cli.hpp — JSON-config driven command layer. Kept separate from main() so
// tests can parse configs and execute commands in-process.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dph/mixed_state.hpp"
#include "dph/model.hpp"

namespace dph::cli {

// Anything wrong with the config file or command line; exits with code 2.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Range {
  double from{0.0};
  double to{0.0};
  int points{2};
};

struct OutputSpec {
  std::string path;    // empty: CSV goes to stdout
  int precision{15};   // significant digits in CSV numbers
};

// The effective run configuration: config file with CLI overrides applied and
// every default materialized. dump_config() emits it back as JSON.
struct RunConfig {
  SystemParams system{};

  bool has_discrete{false};
  std::vector<BathMode> modes;
  bool has_ohmic{false};
  OhmicSpectrum spectrum{};
  int ohmic_modes{0};  // midpoint discretization count where modes are needed

  std::string command;
  Branch branch{Branch::plus};
  bool has_T{false};
  double T{0.0};
  bool has_T_range{false};
  Range T_range;
  bool has_init{false};
  InitialSuperposition init;
  int steps{1024};
  double tol{1.0};  // validate: multiplies every check tolerance
  bool has_t_grid{false};
  Range t_grid;
  double lambda_scale{1.0};  // multiplies every bath coupling before use
  std::string quantity;      // sweep: what to compute per row
  std::string parameter;     // sweep: what to vary
  bool has_sweep_range{false};
  Range sweep_range;

  OutputSpec output;
};

RunConfig parse_config(const std::string& json_text);
std::string dump_config(const RunConfig& cfg);

struct CommandOutput {
  std::string csv;   // file payload; empty for validate
  std::string note;  // human lines for stdout (validate report, unwrap count)
  int exit_code{0};
};

// Runs cfg.command. Throws the library's exceptions on domain/convergence
// problems; the caller maps them to exit codes.
CommandOutput execute(const RunConfig& cfg);

// Full command-line entry: argument parsing, config load, overrides,
// execution, output writing, exception-to-exit-code mapping.
int run_cli(int argc, char** argv);

}  // namespace dph::cli
