#include "malinucb/simulation.hpp"

#include <cmath>

#include "malinucb/errors.hpp"

namespace malinucb
{

GroundTruth make_ground_truth(Eigen::MatrixXd theta, const ActionSet &actions)
{
  if (theta.rows() < 1 || theta.cols() != actions.dim())
  {
    throw ConfigError("ground truth must be N x d with d matching the action set");
  }
  GroundTruth truth;
  truth.theta = std::move(theta);
  truth.mu_star = truth.theta.colwise().mean().transpose();
  truth.x_star = actions.best_action(truth.mu_star);
  truth.opt_value = truth.x_star.dot(truth.mu_star);
  return truth;
}

GroundTruth sample_ground_truth(Rng &rng, int n_agents, const ActionSet &actions, bool normalize)
{
  if (n_agents < 1)
  {
    throw ConfigError("need at least one agent");
  }
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd theta(n_agents, actions.dim());
  for (Eigen::Index i = 0; i < theta.rows(); ++i)
  {
    for (Eigen::Index j = 0; j < theta.cols(); ++j)
    {
      theta(i, j) = normal(rng);
    }
  }
  if (normalize)
  {
    const Eigen::VectorXd mu = theta.colwise().mean().transpose();
    theta /= std::max(1.0, actions.max_abs_value(mu));
  }
  return make_ground_truth(std::move(theta), actions);
}

Eigen::VectorXd sample_rewards(Rng &rng, const Eigen::MatrixXd &theta, const Eigen::VectorXd &x,
                               double noise_scale, NoiseKind kind)
{
  if (!(noise_scale >= 0.0))
  {
    throw ConfigError("noise scale must be >= 0");
  }
  Eigen::VectorXd r = theta * x;
  if (noise_scale == 0.0)
  {
    return r;
  }
  if (kind == NoiseKind::gaussian)
  {
    std::normal_distribution<double> noise(0.0, noise_scale);
    for (Eigen::Index i = 0; i < r.size(); ++i)
    {
      r(i) += noise(rng);
    }
  }
  else
  {
    std::uniform_real_distribution<double> noise(-noise_scale, noise_scale);
    for (Eigen::Index i = 0; i < r.size(); ++i)
    {
      r(i) += noise(rng);
    }
  }
  return r;
}

Simulation::Simulation(SimulationSettings settings, Topology topology, ActionSet actions,
                       std::uint64_t seed)
  : Simulation(settings, topology, actions,
               [&] {
                 Rng truth_rng = make_rng(seed, RngStream::ground_truth);
                 return sample_ground_truth(truth_rng, settings.constants.N, actions,
                                            settings.normalize_ground_truth);
               }(),
               seed)
{
}

Simulation::Simulation(SimulationSettings settings, Topology topology, ActionSet actions,
                       GroundTruth truth, std::uint64_t seed)
  : settings_(std::move(settings)),
    topology_(std::move(topology)),
    actions_(std::move(actions)),
    schedule_(topology_.size(), topology_.lambda2()),
    noise_rng_(make_rng(seed, RngStream::noise)),
    coordinator_rng_(make_rng(seed, RngStream::coordinator))
{
  const ProblemConstants &c = settings_.constants;
  c.validate();
  if (c.N != topology_.size())
  {
    throw ConfigError("agent count differs from the network size");
  }
  if (c.d != actions_.dim())
  {
    throw ConfigError("dimension differs from the action set");
  }
  if (settings_.horizon < 1)
  {
    throw ConfigError("horizon T must be >= 1");
  }
  if (truth.theta.rows() != c.N || truth.theta.cols() != c.d)
  {
    throw ConfigError("ground truth shape does not match N x d");
  }

  agents_.assign(static_cast<std::size_t>(c.N), RlsState(c.d, c.lambda));
  radius_ = beta(c, 0);
  result_.seed = seed;
  result_.truth = std::move(truth);
  result_.cumulative_regret.reserve(static_cast<std::size_t>(settings_.horizon));
  check_coverage();
}

ConfidenceRegion Simulation::region(int i) const
{
  return make_region(agent_state(i), radius_, settings_.constants.delta);
}

void Simulation::check_coverage()
{
  if (!result_.coverage_held)
  {
    return;
  }
  for (int i = 0; i < settings_.constants.N; ++i)
  {
    if (!contains(region(i), result_.truth.mu_star))
    {
      result_.coverage_held = false;
      return;
    }
  }
}

std::optional<EpisodeRecord> Simulation::run_episode()
{
  if (finished_ || next_round_ > settings_.horizon)
  {
    finished_ = true;
    return std::nullopt;
  }

  const ProblemConstants &c = settings_.constants;
  const GroundTruth &truth = result_.truth;

  EpisodeRecord rec;
  rec.s = ++episode_;
  rec.t_start = next_round_;
  rec.q_scheduled = schedule_(rec.s);

  std::uniform_int_distribution<int> pick(0, c.N - 1);
  rec.agent = pick(coordinator_rng_);

  const ConfidenceRegion proposer = region(rec.agent);
  const OptimisticChoice choice = select_optimistic(proposer, actions_);
  rec.action = choice.action;
  rec.ucb_value = choice.ucb_value;
  if (contains(proposer, truth.mu_star) && choice.ucb_value < truth.opt_value - 1e-9)
  {
    result_.optimism_held = false;
  }

  rec.raw_rewards = sample_rewards(noise_rng_, truth.theta, rec.action, c.R, settings_.noise);

  const double played_value = rec.action.dot(truth.mu_star);
  rec.inst_regret_action = truth.opt_value - played_value;
  cumulative_ += rec.inst_regret_action;
  result_.cumulative_regret.push_back(cumulative_);
  result_.total_rounds_used = rec.t_start;

  if (rec.t_start + rec.q_scheduled > settings_.horizon)
  {
    rec.truncated = true;
    finished_ = true;
  }
  else
  {
    rec.q = rec.q_scheduled;
    rec.consensus_rewards =
        consensus_average(rec.raw_rewards, topology_, rec.q,
                          settings_.trace_consensus ? &rec.consensus_trace : nullptr);

    const double per_round = settings_.convention == RegretConvention::no_reward
                                 ? truth.opt_value
                                 : truth.opt_value - played_value;
    for (int h = 0; h < rec.q; ++h)
    {
      cumulative_ += per_round;
      result_.cumulative_regret.push_back(cumulative_);
    }
    rec.inst_regret_comm = per_round * rec.q;

    for (int i = 0; i < c.N; ++i)
    {
      agents_[static_cast<std::size_t>(i)].update(rec.action, rec.consensus_rewards(i));
    }
    radius_ = beta(c, rec.s);
    check_coverage();

    next_round_ = rec.t_start + rec.q + 1;
    result_.total_rounds_used = next_round_ - 1;
    if (next_round_ > settings_.horizon)
    {
      finished_ = true;
    }
  }

  result_.episode_regret.push_back(cumulative_);
  result_.episode_count = episode_;
  if (settings_.record_episodes)
  {
    result_.episodes.push_back(rec);
  }
  return rec;
}

RunResult Simulation::run_to_end()
{
  while (run_episode())
  {
  }
  return std::move(result_);
}

RunResult run(const SimulationSettings &settings, const Topology &topology, const ActionSet &actions,
              std::uint64_t seed)
{
  return Simulation(settings, topology, actions, seed).run_to_end();
}

}  // namespace malinucb
