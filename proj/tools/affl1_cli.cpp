#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "affl1/commands.hpp"

int main(int argc, char** argv) {
  affl1::RunConfig config;
  CLI::App app{"Affine actions on L1-type spaces from bicombings and tree actions"};
  app.set_version_flag("--version", "affl1 1.0.0");

  const std::vector<std::string> commands{"ball", "bicombing-stats", "verify", "opnorm",
                                          "norms", "action", "kernel", "quasitree"};
  app.add_option("command", config.command, "Command to run")->required()->check(CLI::IsMember(commands));
  app.add_option("--presentation,-p", config.presentation, "Presentation file");
  app.add_option("--radius,-r", config.radius, "Ball radius");
  std::string bicombing;
  app.add_option("--bicombing", bicombing, "Bicombing kind")
      ->check(CLI::IsMember({"tree", "shortlex", "shortlex-anti"}));
  app.add_option("--seed", config.seed, "Sampling seed");
  app.add_option("--out,-o", config.out, "Output directory");
  app.add_option("--cap", config.cap, "Maximum ball size");
  app.add_option("--tol", config.tol, "Tolerance for floating-point checks");
  app.add_option("--action", config.action, "Tree action file (action)");
  app.add_option("--kernel", config.kernel, "Kernel CSV to verify instead of building one (verify)");
  app.add_option("--quasitree", config.quasitree, "Quasi-tree kernel file (quasitree)");
  app.add_option("--restrict", config.restrict_letters, "Only scan elements spelled with these generators (action)");
  app.add_option("--samples", config.samples, "Seeded (s, v) pairs for the per-vector bound (verify)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : affl1::kExitInput;
  }
  if (!bicombing.empty()) {
    config.bicombing = affl1::parse_bicombing_kind(bicombing);
    config.bicombing_given = true;
  }
  if (config.command != "quasitree" && config.presentation.empty()) {
    std::cerr << "input error: --presentation is required\n";
    return affl1::kExitInput;
  }
  return affl1::run_command(config, std::cout, std::cerr);
}
