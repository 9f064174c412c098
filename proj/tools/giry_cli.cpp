#include <iostream>

#include <CLI11.hpp>

#include "giry/report.hpp"

int main(int argc, char** argv) {
  giry::RunConfig cfg;
  std::string format = "text";
  CLI::App app{"Checks expectation algebras of the finite-support probability monad on convex metric spaces."};
  app.add_option("command", cfg.command, "Command to run")->required()->check(CLI::IsMember(giry::known_commands()));
  app.add_option("measures", cfg.measures, "Measure files (wasserstein, expect)");
  app.add_option("--space", cfg.space, "Space id");
  app.add_option("--input", cfg.input_path, "Space-definition file")->check(CLI::ExistingFile);
  app.add_option("--seed", cfg.seed, "RNG seed")->check(CLI::PositiveNumber);
  app.add_option("--budget", cfg.budget, "Samples per check")->check(CLI::PositiveNumber);
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--output", cfg.output, "Write the report here instead of stdout");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  cfg.format = format == "json" ? giry::OutputFormat::Json : giry::OutputFormat::Text;
  return giry::run(cfg, std::cout, std::cerr);
}
