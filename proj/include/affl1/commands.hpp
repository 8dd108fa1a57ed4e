#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "affl1/ball.hpp"
#include "affl1/bicombing.hpp"

namespace affl1 {

enum ExitCode : int { kExitPass = 0, kExitViolation = 1, kExitInput = 2, kExitResource = 3 };

struct RunConfig {
  std::string command;
  std::filesystem::path presentation;
  int radius = 3;
  BicombingKind bicombing = BicombingKind::shortlex_antisymmetrized;
  bool bicombing_given = false;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  std::filesystem::path out = ".";
  std::size_t cap = kDefaultBallCap;
  std::filesystem::path action;      ///< action command
  std::filesystem::path kernel;      ///< verify: kernel CSV to check instead of building one
  std::filesystem::path quasitree;   ///< quasitree command
  std::string restrict_letters;      ///< action: only elements spelled with these generators
  std::size_t samples = 200;         ///< verify: (s, v) pairs for the per-vector bound
};

/// Each command writes its CSV into config.out, prints a summary to `log`,
/// and returns an ExitCode. Exceptions are not caught here.
int cmd_ball(const RunConfig& config, std::ostream& log);
int cmd_bicombing_stats(const RunConfig& config, std::ostream& log);
int cmd_verify(const RunConfig& config, std::ostream& log);
int cmd_opnorm(const RunConfig& config, std::ostream& log);
int cmd_norms(const RunConfig& config, std::ostream& log);
int cmd_action(const RunConfig& config, std::ostream& log);
int cmd_kernel(const RunConfig& config, std::ostream& log);
int cmd_quasitree(const RunConfig& config, std::ostream& log);

/// Dispatches on config.command and maps exceptions to exit codes:
/// InputError/OutOfBallError -> 2, ResourceError -> 3, InvariantError -> 1.
int run_command(const RunConfig& config, std::ostream& log, std::ostream& err);

}  // namespace affl1
