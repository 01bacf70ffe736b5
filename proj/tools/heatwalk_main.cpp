// heatwalk command-line front end.
//
// Exit codes: 0 success, 1 validation/runtime failure, 2 config error.

#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "heatwalk/cli.hpp"

namespace {

struct CommandFlags {
  heatwalk::cli::RawOptions raw;
  std::string config_path;
  bool corrupt_psi = false;
};

void add_common_flags(CLI::App* cmd, CommandFlags& flags) {
  const auto bind = [cmd](const char* name, std::optional<std::string>& slot, const char* help) {
    cmd->add_option_function<std::string>(
        name, [&slot](const std::string& v) { slot = v; }, help);
  };
  bind("--domain", flags.raw.domain, "domain: hypercube(d) | ball(d, r) | halfball(d, r)");
  bind("--dim", flags.raw.dim, "dimension (completes a bare domain family)");
  bind("--f", flags.raw.f, "boundary data f(t, x) expression");
  bind("--f0", flags.raw.f0, "initial data f0(x) expression");
  bind("--preset", flags.raw.preset, "named data preset: hyp1 | hyp2 | eigen");
  bind("--t", flags.raw.t, "start time");
  bind("--x", flags.raw.x, "start point: 'center' or comma-separated coordinates");
  bind("--eps", flags.raw.eps, "stopping threshold on the heat-ball scale");
  bind("--walks", flags.raw.walks, "number of Monte Carlo walks");
  bind("--seed", flags.raw.seed, "master seed (integer, or 'random')");
  bind("--workers", flags.raw.workers, "worker threads (default: HEATWALK_WORKERS or all cores)");
  bind("--out", flags.raw.out, "output CSV path (default: stdout)");
  bind("--bins", flags.raw.bins, "histogram bin count");
  bind("--axis", flags.raw.axis, "sweep axis: eps | time | position | dimension");
  bind("--values", flags.raw.values, "comma-separated sweep grid (default: per-axis grid)");
  cmd->add_option("--config", flags.config_path, "flat key = value config file");
}

int dispatch(const std::string& command, const CommandFlags& flags) {
  using namespace heatwalk::cli;
  RawOptions raw = flags.raw;
  if (!flags.config_path.empty()) merge_defaults_from(raw, load_config_file(flags.config_path));
  const Options options = resolve_options(raw);

  std::ofstream file;
  if (!options.out_path.empty()) {
    file.open(options.out_path, std::ios::binary);
    if (!file) throw ConfigError("config: cannot open output file '" + options.out_path + "'");
  }
  std::ostream& out = options.out_path.empty() ? std::cout : file;

  if (command == "solve") return run_solve(options, out);
  if (command == "sweep") return run_sweep(options, out);
  if (command == "histogram") return run_histogram(options, out);
  return run_validate(options, out, flags.corrupt_psi);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo solver for the heat equation IBVP on bounded domains"};
  app.require_subcommand(1);

  CommandFlags flags;
  CLI::App* solve = app.add_subcommand("solve", "estimate u(t, x) at one point");
  CLI::App* sweep = app.add_subcommand("sweep", "estimate along a parameter grid");
  CLI::App* histogram = app.add_subcommand("histogram", "payoff and step-count histograms");
  CLI::App* validate = app.add_subcommand("validate", "run the built-in verification suite");
  for (CLI::App* cmd : {solve, sweep, histogram, validate}) add_common_flags(cmd, flags);
  validate->add_flag("--corrupt-psi", flags.corrupt_psi)->group("");  // test hook

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    return app.exit(err) == 0 ? 0 : 2;
  }

  try {
    return dispatch(app.get_subcommands().front()->get_name(), flags);
  } catch (const heatwalk::cli::ConfigError& err) {
    std::cerr << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
