// Command-line front end: run, sweep, envelope and topo-info.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "malinucb/config.hpp"
#include "malinucb/consensus.hpp"
#include "malinucb/errors.hpp"
#include "malinucb/experiment.hpp"
#include "malinucb/export.hpp"

namespace
{

using namespace malinucb;

constexpr int kConfigExit = 1;
constexpr int kIoExit = 2;

struct CommonFlags
{
  std::string config_path;
  std::vector<std::string> overrides;
  std::string csv_path;
  std::string plot_path;
  int jobs = 1;
  std::int64_t seed = -1;
  std::string x_axis;
  std::string log_path;
  bool trace = false;
};

void add_common(CLI::App *cmd, CommonFlags &flags, bool outputs)
{
  cmd->add_option("-c,--config", flags.config_path, "Config file (key = value lines)")->required();
  cmd->add_option("--set", flags.overrides, "Override a config key: --set key=value");
  cmd->add_option("--jobs", flags.jobs, "Worker threads for repetitions")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags.seed, "Base seed (overrides the config)");
  if (outputs)
  {
    cmd->add_option("-o,--output", flags.csv_path, "CSV output path");
    cmd->add_option("--plot", flags.plot_path, "SVG plot output path");
    cmd->add_option("--x-axis", flags.x_axis, "rounds or episodes");
    cmd->add_option("--log-episodes", flags.log_path, "Write per-episode JSON lines here");
    cmd->add_flag("--trace-consensus", flags.trace, "Include per-round gossip outputs in the episode log");
  }
}

ExperimentConfig resolve_config(const CommonFlags &flags)
{
  ExperimentConfig config = load_config(flags.config_path);
  for (const std::string &kv : flags.overrides)
  {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError("--set expects key=value, got '" + kv + "'");
    }
    apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (flags.seed >= 0)
  {
    config.seed = static_cast<std::uint64_t>(flags.seed);
  }
  if (!flags.x_axis.empty())
  {
    apply_setting(config, "x_axis", flags.x_axis);
  }
  config.validate();
  return config;
}

RunOptions run_options(const CommonFlags &flags)
{
  RunOptions options;
  options.jobs = flags.jobs;
  options.episode_log = flags.log_path;
  options.trace_consensus = flags.trace;
  return options;
}

void print_summary(const AggregateResult &agg)
{
  std::printf("%-20s N=%-4d lambda2=%.6f gap=%.6f reps=%d mean_final_regret=%.4f stderr=%.4f coverage=%.3f\n",
              agg.config_id.c_str(), agg.n_agents, agg.lambda2, agg.spectral_gap, agg.repetitions,
              agg.mean_final_regret(), agg.std_error.empty() ? 0.0 : agg.std_error.back(),
              agg.coverage_fraction());
}

void write_outputs(const std::vector<AggregateResult> &results, const CommonFlags &flags)
{
  if (!flags.csv_path.empty())
  {
    export_csv(results, flags.csv_path);
  }
  if (!flags.plot_path.empty())
  {
    export_plot(results, flags.plot_path);
  }
}

std::vector<std::string> split_list(const std::string &text)
{
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ','))
  {
    if (!item.empty())
    {
      out.push_back(item);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Multi-agent linear UCB with accelerated gossip consensus"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App *run_cmd = app.add_subcommand("run", "Run a Monte-Carlo experiment");
  add_common(run_cmd, run_flags, true);

  CommonFlags sweep_flags;
  std::string axis;
  std::string values;
  CLI::App *sweep_cmd = app.add_subcommand("sweep", "Run one experiment per network size or topology");
  add_common(sweep_cmd, sweep_flags, true);
  sweep_cmd->add_option("--axis", axis, "topology or network-size")->required();
  sweep_cmd->add_option("--values", values, "Comma-separated values")->required();

  CommonFlags envelope_flags;
  CLI::App *envelope_cmd = app.add_subcommand("envelope", "Compare final regret against the regret bound");
  add_common(envelope_cmd, envelope_flags, false);

  std::string kind;
  int n = 0;
  int degree = 4;
  bool no_loops = false;
  std::string edge_file;
  CLI::App *topo_cmd = app.add_subcommand("topo-info", "Print structure-matrix statistics");
  topo_cmd->add_option("--kind", kind, "complete, cycle, path, k-regular, 8-regular, custom")->required();
  topo_cmd->add_option("--n", n, "Number of nodes");
  topo_cmd->add_option("--degree", degree, "Degree for k-regular");
  topo_cmd->add_option("--edge-file", edge_file, "Edge list for custom graphs");
  topo_cmd->add_flag("--no-self-loops", no_loops, "Build the graph without self-loops");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigExit;
  }

  try
  {
    if (*run_cmd)
    {
      const ExperimentConfig config = resolve_config(run_flags);
      const AggregateResult agg = run_experiment(config, run_options(run_flags));
      print_summary(agg);
      write_outputs({agg}, run_flags);
    }
    else if (*sweep_cmd)
    {
      const ExperimentConfig config = resolve_config(sweep_flags);
      const SweepResult result = sweep(config, parse_sweep_axis(axis), split_list(values), run_options(sweep_flags));
      for (const auto &agg : result.results)
      {
        print_summary(agg);
      }
      for (const auto &err : result.errors)
      {
        std::fprintf(stderr, "variant failed: %s\n", err.c_str());
      }
      std::printf("%zu variants succeeded, %zu failed\n", result.results.size(), result.errors.size());
      write_outputs(result.results, sweep_flags);
      if (!result.errors.empty())
      {
        return kConfigExit;
      }
    }
    else if (*envelope_cmd)
    {
      const ExperimentConfig config = resolve_config(envelope_flags);
      const AggregateResult agg = run_experiment(config, run_options(envelope_flags));
      const EnvelopeReport report = theorem2_envelope(config, agg);
      print_summary(agg);
      std::printf("bound(T=%ld)=%.4f mean_final_regret=%.4f max_final_regret=%.4f violations=%d/%d "
                  "fraction=%.4f delta=%.6g\n",
                  config.horizon, report.final_bound, report.mean_final_regret, report.max_final_regret,
                  report.violations, agg.repetitions, report.violation_fraction, report.delta);
    }
    else if (*topo_cmd)
    {
      GraphSpec spec = parse_graph_kind(kind, degree);
      if (spec.kind == GraphKind::custom)
      {
        if (edge_file.empty())
        {
          throw ConfigError("custom topology needs --edge-file");
        }
        const int file_n = load_edge_list(edge_file, spec);
        n = n == 0 ? file_n : n;
      }
      if (n < 1)
      {
        throw ConfigError("--n is required");
      }
      const Topology topo = make_topology(spec, n, !no_loops);
      const auto &w = topo.weights();
      std::printf("topology=%s n=%d self_loops=%s max_degree=%d\n", topo.label().c_str(), n,
                  no_loops ? "false" : "true", topo.adjacency().max_degree());
      std::printf("W: min=%.6g max=%.6g nnz=%ld max_row_sum_err=%.3g\n", w.minCoeff(), w.maxCoeff(),
                  static_cast<long>((w.array() != 0.0).count()),
                  (w.rowwise().sum().array() - 1.0).abs().maxCoeff());
      std::printf("lambda2=%.12f spectral_gap=%.12f q(1)=%d\n", topo.lambda2(), topo.spectral_gap(),
                  comm_length(1, n, topo.lambda2()));
    }
  }
  catch (const IoError &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIoExit;
  }
  catch (const Error &e)
  {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfigExit;
  }
  return 0;
}
