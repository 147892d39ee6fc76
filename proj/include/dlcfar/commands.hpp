#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlcfar/curve.hpp"
#include "dlcfar/harness.hpp"
#include "dlcfar/scenario.hpp"

namespace dlcfar {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

// "LO:LOG:HI:N" or "LO:LIN:HI:N"
std::vector<double> parse_lambda_grid(const std::string& spec);
// "LO:STEP:HI" in dB
std::vector<double> parse_scnr_grid(const std::string& spec);

struct Budget {
  std::size_t threshold_trials = 100000;
  std::size_t pd_trials = 10000;
};
// The quick budget keeps at least 50 expected exceedances at pfa.
Budget fast_budget(double pfa);

// Named scenarios used by the reproduction items.
Scenario toeplitz_scenario(int N, int K, double one_lag, double theta_deg, double clutter_power = 10.0);
Scenario lowrank_scenario(int N, int K, double theta_deg);

const std::vector<std::string>& reproduce_items();

struct ReproduceOptions {
  std::string out_dir = "out";
  bool fast = false;
  std::uint64_t seed = 1;
  int workers = 0;
  double pfa = 1e-3;
  std::string command_line;
};

// Writes every series of one item under out_dir/item and returns the paths written.
std::vector<std::string> reproduce(const std::string& item, const ReproduceOptions& opt);

// Full command-line entry point; never throws.
int run_cli(int argc, char** argv);

}  // namespace dlcfar
