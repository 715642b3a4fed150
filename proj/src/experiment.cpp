#include "malinucb/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "malinucb/consensus.hpp"
#include "malinucb/errors.hpp"
#include "malinucb/export.hpp"
#include "malinucb/statistics.hpp"

namespace malinucb
{

namespace
{

// Calls task(i) for i in [0, count) on up to `jobs` threads. The first
// exception thrown by any task is rethrown on the caller's thread.
template <typename Task>
void parallel_for(int count, int jobs, Task task)
{
  jobs = std::clamp(jobs, 1, std::max(1, count));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++)
    {
      try
      {
        task(i);
      }
      catch (...)
      {
        std::lock_guard lock(failure_mutex);
        if (!failure)
        {
          failure = std::current_exception();
        }
      }
    }
  };
  if (jobs == 1)
  {
    worker();
  }
  else
  {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j)
    {
      pool.emplace_back(worker);
    }
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
}

std::string config_id_for(const ExperimentConfig &config)
{
  return config.topology_label() + "-N" + std::to_string(config.n_agents);
}

}  // namespace

double AggregateResult::coverage_fraction() const
{
  if (coverage_held.empty())
  {
    return 0.0;
  }
  const auto held = std::count(coverage_held.begin(), coverage_held.end(), true);
  return static_cast<double>(held) / static_cast<double>(coverage_held.size());
}

AggregateResult aggregate(std::vector<RepetitionOutcome> outcomes, std::size_t length,
                          bool keep_trajectories)
{
  std::sort(outcomes.begin(), outcomes.end(),
            [](const RepetitionOutcome &a, const RepetitionOutcome &b) { return a.rep < b.rep; });

  AggregateResult agg;
  agg.repetitions = static_cast<int>(outcomes.size());
  agg.mean.assign(length, 0.0);
  agg.std_error.assign(length, 0.0);

  for (auto &o : outcomes)
  {
    if (o.trajectory.size() < length)
    {
      const double last = o.trajectory.empty() ? 0.0 : o.trajectory.back();
      o.trajectory.resize(length, last);
    }
    agg.final_regrets.push_back(length == 0 ? 0.0 : o.trajectory[length - 1]);
    agg.episode_counts.push_back(o.episodes);
    agg.rounds_used.push_back(o.rounds_used);
    agg.coverage_held.push_back(o.coverage_held);
    agg.optimism_held.push_back(o.optimism_held);
  }
  const double reps = static_cast<double>(outcomes.size());
  std::vector<double> column(outcomes.size());
  for (std::size_t t = 0; t < length; ++t)
  {
    for (std::size_t r = 0; r < outcomes.size(); ++r)
    {
      column[r] = outcomes[r].trajectory[t];
    }
    agg.mean[t] = mean(column);
    agg.std_error[t] = reps > 0 ? sample_stddev(column) / std::sqrt(reps) : 0.0;
  }

  if (keep_trajectories)
  {
    for (auto &o : outcomes)
    {
      o.trajectory.resize(length);
      agg.trajectories.push_back(std::move(o.trajectory));
    }
  }
  return agg;
}

AggregateResult run_experiment(const ExperimentConfig &config, const RunOptions &options)
{
  config.validate();
  const Topology topology = config.build_topology();
  const ActionSet actions = config.action_set();
  SimulationSettings settings = config.simulation_settings();
  settings.trace_consensus = options.trace_consensus;
  settings.record_episodes = !options.episode_log.empty();

  std::ofstream log;
  if (!options.episode_log.empty())
  {
    log.open(options.episode_log, std::ios::binary | std::ios::trunc);
    if (!log)
    {
      throw IoError(options.episode_log, "cannot open episode log");
    }
  }

  const int reps = config.repetitions;
  std::vector<RepetitionOutcome> outcomes(static_cast<std::size_t>(reps));
  std::vector<std::string> logs(settings.record_episodes ? static_cast<std::size_t>(reps) : 0);

  parallel_for(reps, options.jobs, [&](int rep) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(rep);
    RunResult result = run(settings, topology, actions, seed);
    RepetitionOutcome &o = outcomes[static_cast<std::size_t>(rep)];
    o.rep = rep;
    o.seed = seed;
    o.rounds_used = result.total_rounds_used;
    o.episodes = result.episode_count;
    o.coverage_held = result.coverage_held;
    o.optimism_held = result.optimism_held;
    o.trajectory = config.x_axis == XAxis::rounds ? std::move(result.cumulative_regret)
                                                  : std::move(result.episode_regret);
    if (settings.record_episodes)
    {
      std::string &buf = logs[static_cast<std::size_t>(rep)];
      for (const EpisodeRecord &rec : result.episodes)
      {
        buf += episode_json(rec, rep, seed);
        buf += '\n';
      }
    }
  });

  if (log.is_open())
  {
    for (const std::string &buf : logs)
    {
      log << buf;
    }
    if (!log)
    {
      throw IoError(options.episode_log, "failed writing episode log");
    }
  }

  std::size_t length = static_cast<std::size_t>(config.horizon);
  if (config.x_axis == XAxis::episodes)
  {
    length = 0;
    for (const auto &o : outcomes)
    {
      length = std::max(length, o.trajectory.size());
    }
  }

  AggregateResult agg = aggregate(std::move(outcomes), length, options.keep_trajectories);
  agg.config_id = config_id_for(config);
  agg.topology = config.topology_label();
  agg.n_agents = config.n_agents;
  agg.lambda2 = topology.lambda2();
  agg.spectral_gap = topology.spectral_gap();
  agg.horizon = config.horizon;
  agg.x_axis = config.x_axis;
  return agg;
}

SweepAxis parse_sweep_axis(const std::string &text)
{
  if (text == "network-size" || text == "network_size" || text == "n")
  {
    return SweepAxis::network_size;
  }
  if (text == "topology")
  {
    return SweepAxis::topology;
  }
  throw ConfigError("sweep axis must be topology or network-size, got '" + text + "'");
}

SweepResult sweep(const ExperimentConfig &base, SweepAxis axis, const std::vector<std::string> &values,
                  const RunOptions &options)
{
  if (values.empty())
  {
    throw ConfigError("sweep needs at least one value");
  }
  SweepResult out;
  for (const std::string &value : values)
  {
    try
    {
      ExperimentConfig variant = base;
      apply_setting(variant, axis == SweepAxis::network_size ? "n_agents" : "topology", value);
      out.results.push_back(run_experiment(variant, options));
    }
    catch (const Error &e)
    {
      out.errors.push_back(value + ": " + e.what());
    }
  }
  return out;
}

double theorem2_bound(const ExperimentConfig &config, double lambda2, long horizon)
{
  if (horizon < 1)
  {
    throw ConfigError("theorem2_bound needs T >= 1");
  }
  const ProblemConstants c = config.constants();
  const double t = static_cast<double>(horizon);

  double q1 = 1.0;
  double comm_factor = 0.0;
  if (lambda2 >= kExactAveragingThreshold)
  {
    const double rate = std::sqrt(2.0 * std::log(1.0 / lambda2));
    q1 = std::log(2.0 * c.N) / rate;
    comm_factor = std::log(2.0 * c.N * t) / rate;
  }
  const double t_prime = t / (1.0 + q1);
  const double radius = beta(c, horizon);
  const double d = static_cast<double>(c.d);
  const double info = std::sqrt(2.0 * t_prime * d * std::log(1.0 + t_prime * c.L * c.L / (d * c.lambda)));
  return 4.0 * radius * info * (1.0 + comm_factor) + comm_factor;
}

EnvelopeReport theorem2_envelope(const ExperimentConfig &config, const AggregateResult &agg)
{
  EnvelopeReport report;
  report.delta = config.resolved_delta();
  report.bound.reserve(static_cast<std::size_t>(config.horizon));
  for (long t = 1; t <= config.horizon; ++t)
  {
    report.bound.push_back(theorem2_bound(config, agg.lambda2, t));
  }
  report.final_bound = report.bound.back();
  for (double r : agg.final_regrets)
  {
    if (r > report.final_bound)
    {
      ++report.violations;
    }
    report.max_final_regret = std::max(report.max_final_regret, r);
  }
  report.violation_fraction =
      agg.final_regrets.empty() ? 0.0
                                : static_cast<double>(report.violations) / static_cast<double>(agg.final_regrets.size());
  report.mean_final_regret = mean(agg.final_regrets);
  return report;
}

}  // namespace malinucb
