#include <spmnl/pipeline.hpp>

#include <CLI11.hpp>

#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonArgs
{
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> scale;
  std::optional<std::string> input;
};

void
add_common(CLI::App* cmd, CommonArgs& args)
{
  cmd->add_option("config", args.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "random seed (overrides the config)");
  cmd->add_option("--out", args.out, "output directory (overrides the config)");
  cmd->add_option("--scale", args.scale, "kernel bandwidth scale in units of covariate sd");
  cmd->add_option("--input", args.input, "input CSV (overrides the config)");
}

spmnl::RunConfig
load(const CommonArgs& args)
{
  spmnl::Overrides o;
  o.seed = args.seed;
  o.scale = args.scale;
  if (args.out)
    o.out = *args.out;
  if (args.input)
    o.input = *args.input;
  return spmnl::load_run_config(args.config, o);
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Semiparametric multinomial logit estimation" };
  app.require_subcommand(1);
  app.set_version_flag("--version", spmnl::tool_version);

  CommonArgs fit_args, sim_args, surface_args, iia_args, grid_args;
  std::string fit_dir;
  auto* fit = app.add_subcommand("fit", "fit the configured model and write coefficient tables");
  add_common(fit, fit_args);
  auto* sim = app.add_subcommand("simulate", "draw a dataset from the configured data-generating process");
  add_common(sim, sim_args);
  auto* surface = app.add_subcommand("surface", "export probabilities over a grid of smooth covariates");
  add_common(surface, surface_args);
  surface->add_option("--fit", fit_dir, "directory holding fit_state.json (default: the output directory)");
  auto* iia = app.add_subcommand("iia-test", "Hausman-McFadden and Small-Hsiao tests of IIA");
  add_common(iia, iia_args);
  auto* grid = app.add_subcommand("bandwidth-grid", "bandwidths (and fits) over a grid of scales");
  add_common(grid, grid_args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : spmnl::exit_config;
  }

  try {
    if (fit->parsed())
      return spmnl::run_fit(load(fit_args));
    if (sim->parsed())
      return spmnl::run_simulate(load(sim_args));
    if (surface->parsed()) {
      const spmnl::RunConfig rc = load(surface_args);
      return spmnl::run_surface(rc, fit_dir.empty() ? rc.out : std::filesystem::path(fit_dir));
    }
    if (iia->parsed())
      return spmnl::run_iia(load(iia_args));
    if (grid->parsed())
      return spmnl::run_bandwidth_grid(load(grid_args));
  } catch (const std::exception& e) {
    std::cerr << "spmnl: error: " << e.what() << "\n";
    return spmnl::exit_code_for(e);
  }
  return spmnl::exit_other;
}
