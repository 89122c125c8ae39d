#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <utility>

#include "sqz/commands.hpp"
#include "sqz/numeric.hpp"

int main(int argc, char** argv) {
  CLI::App app{"squeeze: certified bounds for a pseudoconvex domain with non-plurisubharmonic squeezing function"};
  app.require_subcommand(1);

  std::string config_path, out, margin;
  std::optional<std::uint64_t> seed;
  std::optional<int> levels, grid;
  app.add_option("--config", config_path, "JSON run config")->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory (overrides config)");
  app.add_option("--seed", seed, "estimator seed");
  app.add_option("--levels", levels, "number of levels K");
  app.add_option("--margin", margin, "use the margin schedule with target u at level K");
  app.add_option("--grid", grid, "Levi grid size");

  const std::pair<const char*, const char*> commands[] = {
      {"build", "construct the domain and certify each level"},
      {"certify-smoothed", "smooth, verify the Levi form and recertify"},
      {"estimate", "uncertified metric estimates with sandwich checks"},
      {"plot-data", "CSV series for plotting"},
      {"all", "run every command in order"}};
  for (auto [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : sqz::kExitValidation;
  }

  sqz::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = sqz::load_config(config_path);
  } catch (const sqz::ValidationError& e) {
    std::cerr << "squeeze: validation error: " << e.what() << "\n";
    return sqz::kExitValidation;
  }
  if (!out.empty()) cfg.output = out;
  if (seed) cfg.estimator.seed = *seed;
  if (levels) cfg.construction.levels = *levels;
  if (!margin.empty()) {
    cfg.construction.schedule = "margin";
    cfg.construction.margin = margin;
  }
  if (grid) cfg.grids.levi = *grid;

  return sqz::run_command(app.get_subcommands().front()->get_name(), cfg);
}
