#ifndef MALINUCB_EXPERIMENT_HPP
#define MALINUCB_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "malinucb/config.hpp"

namespace malinucb
{

struct RunOptions
{
  int jobs = 1;
  bool keep_trajectories = false;
  std::string episode_log;  // JSON-lines path, empty to disable
  bool trace_consensus = false;
};

// Outcome of one seeded repetition, as fed to aggregate().
struct RepetitionOutcome
{
  int rep = 0;
  std::uint64_t seed = 0;
  std::vector<double> trajectory;  // cumulative regret per round or per episode
  long rounds_used = 0;
  long episodes = 0;
  bool coverage_held = true;
  bool optimism_held = true;
};

struct AggregateResult
{
  std::string config_id;
  std::string topology;
  int n_agents = 0;
  double lambda2 = 0.0;
  double spectral_gap = 1.0;
  long horizon = 0;
  XAxis x_axis = XAxis::rounds;
  int repetitions = 0;

  std::vector<double> mean;       // mean cumulative regret, index k is round (or episode) k+1
  std::vector<double> std_error;  // sample stddev / sqrt(repetitions)

  // Per repetition, ordered by repetition index.
  std::vector<double> final_regrets;
  std::vector<long> episode_counts;
  std::vector<long> rounds_used;
  std::vector<bool> coverage_held;
  std::vector<bool> optimism_held;
  std::vector<std::vector<double>> trajectories;  // only with keep_trajectories

  double mean_final_regret() const { return mean.empty() ? 0.0 : mean.back(); }
  double coverage_fraction() const;
};

//
// Order-independent reduction of repetitions: outcomes are sorted by
// repetition index, each trajectory is forward-filled to `length` with its
// last value, then averaged per index.
//
AggregateResult aggregate(std::vector<RepetitionOutcome> outcomes, std::size_t length,
                          bool keep_trajectories);

// Runs config.repetitions seeded repetitions (seed = config.seed + rep) on a
// pool of options.jobs workers. Invalid configs fail before any run starts.
AggregateResult run_experiment(const ExperimentConfig &config, const RunOptions &options = {});

enum class SweepAxis
{
  network_size,
  topology,
};

SweepAxis parse_sweep_axis(const std::string &text);

struct SweepResult
{
  std::vector<AggregateResult> results;  // successful variants, in input order
  std::vector<std::string> errors;       // "value: message" for failed variants
};

// One experiment per value; all variants share the base seed. Failing
// variants are reported in `errors` and the remaining ones still run.
SweepResult sweep(const ExperimentConfig &base, SweepAxis axis, const std::vector<std::string> &values,
                  const RunOptions &options = {});

// Regret upper bound at horizon T for the config's constants:
//   4 beta_T sqrt(2 T' d log(1 + T' L^2/(d lambda))) (1 + g) + g,
//   g = log(2 N T) / sqrt(2 log(1/lambda2)),  T' = T / (1 + q1),
//   q1 = log(2N) / sqrt(2 log(1/lambda2)).
// For lambda2 ~ 0, q1 = 1 and g = 0.
double theorem2_bound(const ExperimentConfig &config, double lambda2, long horizon);

struct EnvelopeReport
{
  std::vector<double> bound;  // bound at every round t = 1..T
  double final_bound = 0.0;
  int violations = 0;         // repetitions whose final regret exceeds final_bound
  double violation_fraction = 0.0;
  double delta = 0.0;
  double mean_final_regret = 0.0;
  double max_final_regret = 0.0;
};

EnvelopeReport theorem2_envelope(const ExperimentConfig &config, const AggregateResult &agg);

}  // namespace malinucb

#endif  // MALINUCB_EXPERIMENT_HPP
