#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pscal/cli/commands.hpp"
#include "pscal/simd/kernels.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Prescribed scalar curvature on fiber bundles"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::string> out, solution;
  std::optional<double> epsilon, epsilon0, tol;
  std::optional<int> max_iter;

  const std::pair<const char*, const char*> commands[] = {
      {"feasibility", "Evaluate the sufficient-condition certificates"},
      {"solve", "Minimize the functional and verify the warped metric"},
      {"verify", "Re-verify a persisted solution"},
      {"scan-canonical", "Scan the canonical variation of the fiber metric"},
      {"spectrum", "Print volume, first eigenvalue and scalar curvature range of the base"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Run configuration (TOML or JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output directory");
    sub->add_option("--epsilon", epsilon, "Coercivity parameter of the certificates");
    sub->add_option("--epsilon0", epsilon0, "Floor of the constraint set");
    sub->add_option("--tol", tol, "Projected-gradient tolerance");
    sub->add_option("--max-iter", max_iter, "Iteration cap");
    if (std::string(name) == "verify") sub->add_option("--solution", solution, "Solution CSV with a u column")->required();
  }
  app.add_flag_callback("--isa", [] {
    std::cout << pscal::simd::name(pscal::simd::active().isa) << '\n';
    std::exit(0);
  }, "Print the selected kernel instruction set and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pscal::cli::exit_error;
  }

  pscal::cli::Overrides o;
  if (out) o.out = *out;
  o.epsilon = epsilon;
  o.epsilon0 = epsilon0;
  o.tol = tol;
  o.max_iter = max_iter;
  std::optional<std::filesystem::path> sol;
  if (solution) sol = *solution;
  const std::string command = app.get_subcommands().front()->get_name();
  return pscal::cli::run_command(command, config, o, sol, std::cout, std::cerr);
}
