#ifndef MALINUCB_SIMULATION_HPP
#define MALINUCB_SIMULATION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "malinucb/bandit_core.hpp"
#include "malinucb/consensus.hpp"
#include "malinucb/graph_topology.hpp"
#include "malinucb/rng.hpp"

namespace malinucb
{

// How a communication round is charged.
enum class RegretConvention
{
  no_reward,         // nothing is played: each round costs opt_value
  hold_last_action,  // each round costs opt_value - <x_{t_s}, mu_star>
};

enum class NoiseKind
{
  gaussian,  // N(0, R^2)
  uniform,   // U[-R, R]
};

struct GroundTruth
{
  Eigen::MatrixXd theta;    // N x d, row i is agent i's parameter
  Eigen::VectorXd mu_star;  // row average of theta
  Eigen::VectorXd x_star;
  double opt_value = 0.0;   // <x_star, mu_star>
};

// Fills mu_star, x_star and opt_value from theta.
GroundTruth make_ground_truth(Eigen::MatrixXd theta, const ActionSet &actions);

// theta_i ~ N(0, I_d). With `normalize`, all rows are scaled by
// 1 / max(1, max_x |<x, mu_star>|) so that every expected network reward lies
// in [-1, 1].
GroundTruth sample_ground_truth(Rng &rng, int n_agents, const ActionSet &actions, bool normalize);

// r_i = <x, theta_i> + xi_i, independent across agents.
Eigen::VectorXd sample_rewards(Rng &rng, const Eigen::MatrixXd &theta, const Eigen::VectorXd &x,
                               double noise_scale, NoiseKind kind = NoiseKind::gaussian);

struct EpisodeRecord
{
  long s = 0;
  long t_start = 0;
  int agent = 0;
  Eigen::VectorXd action;
  Eigen::VectorXd raw_rewards;
  Eigen::VectorXd consensus_rewards;  // empty when the episode was cut short
  int q = 0;                          // communication rounds actually run
  int q_scheduled = 0;
  double inst_regret_action = 0.0;
  double inst_regret_comm = 0.0;      // summed over the q rounds
  double ucb_value = 0.0;
  bool truncated = false;
  std::vector<Eigen::VectorXd> consensus_trace;  // only with trace_consensus
};

struct RunResult
{
  std::vector<double> cumulative_regret;  // one entry per consumed round
  std::vector<double> episode_regret;     // cumulative regret after each episode
  std::vector<EpisodeRecord> episodes;    // only with record_episodes
  long total_rounds_used = 0;
  long episode_count = 0;
  std::uint64_t seed = 0;
  // mu_star was inside every agent's region at every episode boundary.
  bool coverage_held = true;
  // Whenever mu_star was inside the proposer's region, ucb_value >= opt_value.
  bool optimism_held = true;
  GroundTruth truth;
};

struct SimulationSettings
{
  ProblemConstants constants;  // d, N, R, S, L, lambda, delta
  long horizon = 1000;         // T, in rounds
  RegretConvention convention = RegretConvention::no_reward;
  NoiseKind noise = NoiseKind::gaussian;
  bool normalize_ground_truth = true;
  bool record_episodes = false;
  bool trace_consensus = false;
};

//
// One run of the episodic multi-agent UCB protocol. Each episode: a uniformly
// drawn agent proposes its optimistic action, every agent observes its own
// noisy reward, q(s) gossip rounds approximate the network-average reward, and
// each agent folds its approximation into its ridge estimate. An episode costs
// 1 + q(s) rounds; if the communication phase would overrun the horizon the run
// ends right after the action round.
//
class Simulation
{
public:
  Simulation(SimulationSettings settings, Topology topology, ActionSet actions, std::uint64_t seed);
  // Uses the given ground truth instead of sampling one.
  Simulation(SimulationSettings settings, Topology topology, ActionSet actions, GroundTruth truth,
             std::uint64_t seed);

  bool finished() const { return finished_; }

  // Plays the next episode; std::nullopt once the horizon is exhausted.
  std::optional<EpisodeRecord> run_episode();

  // Runs the remaining episodes and hands over the result.
  RunResult run_to_end();

  const GroundTruth &truth() const { return result_.truth; }
  const RlsState &agent_state(int i) const { return agents_[static_cast<std::size_t>(i)]; }
  ConfidenceRegion region(int i) const;
  double current_radius() const { return radius_; }
  long next_round() const { return next_round_; }
  const RunResult &partial_result() const { return result_; }

private:
  void check_coverage();

  SimulationSettings settings_;
  Topology topology_;
  ActionSet actions_;
  CommSchedule schedule_;
  Rng noise_rng_;
  Rng coordinator_rng_;
  std::vector<RlsState> agents_;
  double radius_ = 0.0;
  long next_round_ = 1;
  long episode_ = 0;
  double cumulative_ = 0.0;
  bool finished_ = false;
  RunResult result_;
};

RunResult run(const SimulationSettings &settings, const Topology &topology, const ActionSet &actions,
              std::uint64_t seed);

}  // namespace malinucb

#endif  // MALINUCB_SIMULATION_HPP
