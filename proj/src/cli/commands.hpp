// Subcommands of the `cartan` tool. run() parses argv and dispatches; the
// cmd_* functions are callable directly with a filled-in configuration.

#ifndef CARTAN_CLI_COMMANDS_HPP
#define CARTAN_CLI_COMMANDS_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cartan::cli {

struct OutputConfig {
  std::string format = "csv";
  std::string out;  // empty: CARTAN_OUTPUT_DIR or stdout
};

struct TrajectoryConfig {
  std::string mode = "bang";  // bang | feedback | piecewise | abnormal
  std::vector<double> h0;
  std::vector<double> q0;
  std::vector<double> u;           // abnormal mode
  std::string controls;            // piecewise mode: "u1:u2:duration,..."
  double T = 1.0;
  double dt = 1e-3;
  int stride = 1;
  OutputConfig output;
};

struct PhaseConfig {
  std::string kind = "bang";  // bang | singular
  double h4 = 1.0;
  double h5 = 0.0;
  double hf4 = 1.0;
  double hf5 = 0.0;
  std::vector<double> levels;  // empty: defaults around the critical values
  int samples = 720;
  OutputConfig output;
};

struct AttainableConfig {
  std::vector<double> point;
  double T = 1.0;
  double tol = 1e-9;
  std::string section;  // xz | xw | zw | full
  double x_slice = 0.0;
  int grid = 200;
  long max_rows = 200000;
  int jobs = 1;
  OutputConfig output;
};

struct VerifyConfig {
  std::vector<std::string> suites;  // empty: all
  unsigned seed = 0;
  int jobs = 1;
  int grid = 200;
  OutputConfig output;
};

int cmd_trajectory(const TrajectoryConfig& cfg, std::ostream& log);
int cmd_phase(const PhaseConfig& cfg, std::ostream& log);
int cmd_attainable(const AttainableConfig& cfg, std::ostream& log);
int cmd_verify(const VerifyConfig& cfg, std::ostream& log);

/// Full command line; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace cartan::cli

#endif  // CARTAN_CLI_COMMANDS_HPP
