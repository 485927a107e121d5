// geowave: geodesic recovery on point clouds via spectral wave propagation.
//
// Subcommands: sample, trace, sweep, consistency, bounds. Configuration comes
// from a flat key=value file (--config) plus trailing key=value overrides;
// every output CSV embeds the fully resolved configuration in its '#' header.
//
// Exit codes: 0 success, 1 usage error, 2 numerical/degenerate error,
// 3 I/O error.

#include <CLI11.hpp>
#include <iostream>

#include "geowave/config.hpp"
#include "geowave/errors.hpp"
#include "geowave/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out;
  std::int64_t seed = -1;
  int workers = 0;
  bool verbose = false;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args, const std::string& default_out) {
  cmd->add_option("--config", args.config_path, "flat key=value config file");
  cmd->add_option("--out", args.out, "output CSV path")->default_val(default_out);
  cmd->add_option("--seed", args.seed, "override manifold.seed");
  cmd->add_option("--workers", args.workers, "worker threads for grid commands");
  cmd->add_flag("--verbose", args.verbose, "chatty stage logging");
  cmd->add_option("overrides", args.overrides, "key=value config overrides");
}

geowave::ConfigMap build_config(const CommonArgs& args) {
  geowave::ConfigMap config;
  if (!args.config_path.empty()) {
    config = geowave::ConfigMap::from_file(args.config_path);
  }
  for (const std::string& assignment : args.overrides) {
    config.set_from_assignment(assignment);
  }
  if (args.seed >= 0) {
    config.set("manifold.seed", std::to_string(args.seed));
  }
  if (args.workers > 0) {
    config.set("workers", std::to_string(args.workers));
  }
  if (args.verbose) {
    config.set("verbose", "true");
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesic recovery from point clouds via graph-Laplacian wave propagation"};
  app.require_subcommand(1);

  CommonArgs sample_args, trace_args, sweep_args, consistency_args, bounds_args;
  CLI::App* sample = app.add_subcommand("sample", "generate a model point cloud CSV");
  add_common(sample, sample_args, "cloud.csv");
  CLI::App* trace = app.add_subcommand("trace", "run the full recovery pipeline once");
  add_common(trace, trace_args, "trace.csv");
  CLI::App* sweep = app.add_subcommand("sweep", "N/h grid with error-rate aggregates");
  add_common(sweep, sweep_args, "sweep.csv");
  CLI::App* consistency =
      app.add_subcommand("consistency", "half-wave propagation vs a large-sample proxy");
  add_common(consistency, consistency_args, "consistency.csv");
  CLI::App* bounds = app.add_subcommand("bounds", "evaluate the Bernstein bound table");
  add_common(bounds, bounds_args, "bounds.csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sample->parsed()) {
      return geowave::cmd_sample(build_config(sample_args), sample_args.out, std::cerr);
    }
    if (trace->parsed()) {
      return geowave::cmd_trace(build_config(trace_args), trace_args.out, std::cerr);
    }
    if (sweep->parsed()) {
      return geowave::cmd_sweep(build_config(sweep_args), sweep_args.out, std::cerr);
    }
    if (consistency->parsed()) {
      return geowave::cmd_consistency(build_config(consistency_args), consistency_args.out,
                                      std::cerr);
    }
    if (bounds->parsed()) {
      return geowave::cmd_bounds(build_config(bounds_args), bounds_args.out, std::cerr);
    }
  } catch (const geowave::InvalidArgument& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  } catch (const geowave::IoError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 3;
  } catch (const geowave::Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  }
  return 1;
}
