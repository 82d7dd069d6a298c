#pragma once

#include <filesystem>
#include <string>

#include "pkirch/flow.hpp"
#include "pkirch/params.hpp"

namespace pkirch::cli {

/// Everything one subcommand run depends on. Identical configs give
/// byte-identical report files.
struct RunConfig {
  double a = 1.0, b = 1.0, p = 2.0, q = 3.0, c = 1.0;
  double tol = 1e-10;  // ground-state bracket width relative to s0
  double R = 0.0;      // 0: the adaptive default grid for Q
  std::size_t n = 0;   // 0: R / 0.01 intervals
  FlowConfig flow;
  std::filesystem::path output_dir = "pkirch-out";
  std::filesystem::path cache_dir;  // empty: no cache
  std::uint64_t seed = 1;
  int jobs = 0;  // 0: all processors
};

/// Exit status: 0 success, 1 validation or usage error, 2 solver failure.
int run_command(int argc, char** argv);

}  // namespace pkirch::cli
