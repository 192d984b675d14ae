#ifndef NNEULER_COMMANDS_HPP
#define NNEULER_COMMANDS_HPP

#include "nneuler/config.hpp"

#include <string>
#include <vector>

namespace nneuler {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitNumerical = 4,
};

struct GencheckRow {
  int n;
  double gap;
};

struct GencheckResult {
  std::vector<GencheckRow> rows;
  int jump_vanishing_n = 0;  // 0 when the law is not finite-support
};

/// Generator diagnostic described by the [model], [scheme] and optional
/// [gencheck] sections. The test function and grid are centred on the
/// origin in constrained coordinates and on x0 in the others; every n must
/// be feasible (InfeasibleError otherwise).
GencheckResult run_gencheck(const ExperimentSpec& spec);

/// Entry point of the `nneuler` tool; returns the process exit code.
int run_cli(int argc, char** argv);

}  // namespace nneuler

#endif  // NNEULER_COMMANDS_HPP
