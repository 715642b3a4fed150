#include <doctest.h>

#include <cmath>
#include <string>

#include "malinucb/errors.hpp"
#include "malinucb/export.hpp"
#include "malinucb/simulation.hpp"

using namespace malinucb;

namespace
{

SimulationSettings settings_for(int n, int d, long horizon, double noise = 0.1)
{
  SimulationSettings s;
  s.constants.N = n;
  s.constants.d = d;
  s.constants.R = noise;
  s.constants.S = 1.0;
  s.constants.L = std::sqrt(static_cast<double>(d));
  s.constants.lambda = std::max(1.0, s.constants.L * s.constants.L);
  s.constants.delta = 1.0 / (4.0 * static_cast<double>(horizon));
  s.horizon = horizon;
  s.record_episodes = true;
  return s;
}

GraphSpec spec_of(GraphKind kind, int degree = 0)
{
  GraphSpec g;
  g.kind = kind;
  g.degree = degree;
  return g;
}

std::string run_fingerprint(const RunResult &r)
{
  std::string out;
  for (const EpisodeRecord &rec : r.episodes)
  {
    out += episode_json(rec, 0, r.seed);
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("ground truth: single agent and sign-vector optimum")
{
  const ActionSet cube = ActionSet::hypercube(4);
  Eigen::MatrixXd theta(1, 4);
  theta << 0.5, -0.1, 0.0, 0.2;
  const GroundTruth truth = make_ground_truth(theta, cube);
  CHECK(truth.mu_star == Eigen::VectorXd(theta.row(0).transpose()));
  CHECK(truth.x_star == Eigen::VectorXd(Eigen::Vector4d(1, -1, 1, 1)));
  CHECK(truth.opt_value == doctest::Approx(0.8));

  Eigen::MatrixXd two(2, 2);
  two << 1.0, -3.0, 0.0, 1.0;
  const GroundTruth avg = make_ground_truth(two, ActionSet::hypercube(2));
  CHECK(avg.mu_star(0) == 0.5);
  CHECK(avg.mu_star(1) == -1.0);

  CHECK_THROWS_AS(make_ground_truth(Eigen::MatrixXd(1, 3), cube), ConfigError);
}

TEST_CASE("ground truth: normalization bounds every expected reward")
{
  const ActionSet cube = ActionSet::hypercube(4);
  for (std::uint64_t seed = 1; seed <= 50; ++seed)
  {
    Rng rng = make_rng(seed, RngStream::ground_truth);
    const GroundTruth truth = sample_ground_truth(rng, 3, cube, true);
    CHECK(truth.mu_star.cwiseAbs().sum() <= 1.0 + 1e-12);
    CHECK(truth.opt_value >= 0.0);
    // x_star attains the maximum over all 16 vertices.
    for (int mask = 0; mask < 16; ++mask)
    {
      Eigen::Vector4d x;
      for (int i = 0; i < 4; ++i)
      {
        x(i) = (mask >> i) & 1 ? 1.0 : -1.0;
      }
      CHECK(x.dot(truth.mu_star) <= truth.opt_value + 1e-12);
    }
  }
}

TEST_CASE("rewards: noiseless and noisy moments")
{
  Rng rng = make_rng(5, RngStream::noise);
  Eigen::MatrixXd theta(2, 2);
  theta << 0.3, 0.1, -0.2, 0.4;
  const Eigen::Vector2d x(1, -1);
  const Eigen::VectorXd exact = sample_rewards(rng, theta, x, 0.0);
  CHECK(exact(0) == doctest::Approx(0.2));
  CHECK(exact(1) == doctest::Approx(-0.6));

  const double r = 0.1;
  const int draws = 100000;
  for (NoiseKind kind : {NoiseKind::gaussian, NoiseKind::uniform})
  {
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < draws; ++k)
    {
      const double e = sample_rewards(rng, theta, x, r, kind)(0) - 0.2;
      sum += e;
      sum_sq += e * e;
      if (kind == NoiseKind::uniform)
      {
        REQUIRE(std::abs(e) <= r);
      }
    }
    const double m = sum / draws;
    const double var = sum_sq / draws - m * m;
    const double expected_var = kind == NoiseKind::gaussian ? r * r : r * r / 3.0;
    CHECK(std::abs(m) <= 3.0 * r / std::sqrt(static_cast<double>(draws)));
    CHECK(var == doctest::Approx(expected_var).epsilon(0.05));
  }
  CHECK_THROWS_AS(sample_rewards(rng, theta, x, -1.0), ConfigError);
}

TEST_CASE("single agent: one gossip round returns its own reward")
{
  SimulationSettings s = settings_for(1, 4, 50);
  const RunResult r = run(s, make_topology(spec_of(GraphKind::complete), 1), ActionSet::hypercube(4), 3);
  REQUIRE_FALSE(r.episodes.empty());
  for (const EpisodeRecord &rec : r.episodes)
  {
    CHECK(rec.q_scheduled == 1);
    if (!rec.truncated)
    {
      CHECK(rec.consensus_rewards(0) == rec.raw_rewards(0));
    }
  }
  CHECK(r.episode_count == 25);
}

TEST_CASE("noiseless complete graph: exact averaging and identical agents")
{
  SimulationSettings s = settings_for(5, 3, 400, 0.0);
  Simulation sim(s, make_topology(spec_of(GraphKind::complete), 5), ActionSet::hypercube(3), 11);
  while (auto rec = sim.run_episode())
  {
    if (rec->truncated)
    {
      continue;
    }
    const double target = rec->action.dot(sim.truth().mu_star);
    CHECK((rec->consensus_rewards.array() - target).abs().maxCoeff() <= 1e-12);
    for (int i = 1; i < 5; ++i)
    {
      CHECK((sim.agent_state(i).estimate() - sim.agent_state(0).estimate()).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK((sim.agent_state(i).design() - sim.agent_state(0).design()).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("determinism: identical seed gives identical runs")
{
  const SimulationSettings s = settings_for(4, 4, 200);
  const Topology topo = make_topology(spec_of(GraphKind::cycle), 4);
  const RunResult a = run(s, topo, ActionSet::hypercube(4), 77);
  const RunResult b = run(s, topo, ActionSet::hypercube(4), 77);
  CHECK(run_fingerprint(a) == run_fingerprint(b));
  CHECK(a.cumulative_regret == b.cumulative_regret);
  CHECK(a.truth.theta == b.truth.theta);

  const RunResult c = run(s, topo, ActionSet::hypercube(4), 78);
  CHECK(run_fingerprint(a) != run_fingerprint(c));
}

TEST_CASE("short horizon: a single action round")
{
  // N = 16 on a cycle has q(1) > 2.
  const Topology topo = make_topology(spec_of(GraphKind::cycle), 16);
  const int q1 = comm_length(1, 16, topo.lambda2());
  REQUIRE(q1 > 2);
  SimulationSettings s = settings_for(16, 4, q1);
  const RunResult r = run(s, topo, ActionSet::hypercube(4), 9);
  REQUIRE(r.episodes.size() == 1);
  CHECK(r.episodes[0].truncated);
  CHECK(r.total_rounds_used == 1);
  REQUIRE(r.cumulative_regret.size() == 1);
  CHECK(r.cumulative_regret[0] == doctest::Approx(r.episodes[0].inst_regret_action));
}

TEST_CASE("round accounting and schedule monotonicity")
{
  const std::vector<std::pair<GraphSpec, int>> cases = {
      {spec_of(GraphKind::complete), 4},  {spec_of(GraphKind::cycle), 10}, {spec_of(GraphKind::path), 7},
      {spec_of(GraphKind::k_regular, 4), 12}, {spec_of(GraphKind::cycle), 3},
  };
  for (const auto &[graph, n] : cases)
  {
    const Topology topo = make_topology(graph, n);
    for (long horizon : {1L, 2L, 17L, 333L, 1500L})
    {
      CAPTURE(topo.label());
      CAPTURE(horizon);
      const RunResult r = run(settings_for(n, 2, horizon), topo, ActionSet::hypercube(2), 5);
      long rounds = 0;
      int prev_q = 0;
      double total = 0.0;
      for (std::size_t k = 0; k < r.episodes.size(); ++k)
      {
        const EpisodeRecord &rec = r.episodes[k];
        CHECK(rec.t_start == rounds + 1);
        CHECK(rec.q_scheduled >= prev_q);
        CHECK(rec.q_scheduled == comm_length(rec.s, n, topo.lambda2()));
        prev_q = rec.q_scheduled;
        rounds += 1 + rec.q;
        total += rec.inst_regret_action + rec.inst_regret_comm;
        CHECK(rec.truncated == (k + 1 == r.episodes.size() && rec.t_start + rec.q_scheduled > horizon));
        CHECK(rec.inst_regret_action >= -1e-12);
        CHECK(rec.inst_regret_comm == doctest::Approx(rec.q * r.truth.opt_value));
      }
      CHECK(rounds == r.total_rounds_used);
      CHECK(rounds <= horizon);
      CHECK(static_cast<long>(r.cumulative_regret.size()) == r.total_rounds_used);
      CHECK(r.cumulative_regret.back() == doctest::Approx(total));
      CHECK(r.episode_regret.back() == r.cumulative_regret.back());
      CHECK(r.episode_count == static_cast<long>(r.episodes.size()));
      for (std::size_t t = 1; t < r.cumulative_regret.size(); ++t)
      {
        CHECK(r.cumulative_regret[t] >= r.cumulative_regret[t - 1] - 1e-12);
      }
      // The run only stops when the next episode could not start or was truncated.
      CHECK((r.total_rounds_used == horizon || r.episodes.back().truncated));
    }
  }
}

TEST_CASE("episode count stays within the communication-cost bound")
{
  for (const auto &[graph, n] : std::vector<std::pair<GraphSpec, int>>{
           {spec_of(GraphKind::cycle), 5},
           {spec_of(GraphKind::cycle), 12},
           {spec_of(GraphKind::path), 6},
           {spec_of(GraphKind::k_regular, 4), 20},
           {spec_of(GraphKind::k_regular, 8), 50},
       })
  {
    const Topology topo = make_topology(graph, n);
    REQUIRE(topo.lambda2() >= 0.1);
    for (long horizon : {100L, 1000L, 5000L})
    {
      const RunResult r = run(settings_for(n, 2, horizon), topo, ActionSet::hypercube(2), 2);
      const double bound =
          horizon * std::sqrt(2.0 * std::log(1.0 / topo.lambda2())) / std::log(2.0 * n) + 10.0;
      CHECK(r.episode_count <= horizon);
      CHECK(static_cast<double>(r.episode_count) <= bound);
    }
  }
}

TEST_CASE("two-action noiseless instance stops losing at action rounds")
{
  const ActionSet actions = ActionSet::finite({Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)});
  Eigen::MatrixXd theta(2, 2);
  theta << 0.9, 0.1, 0.7, 0.3;  // mu_star = (0.8, 0.2)
  SimulationSettings s = settings_for(2, 2, 3000, 0.0);
  s.constants.L = 1.0;
  s.constants.lambda = 1.0;
  const Topology topo = make_topology(spec_of(GraphKind::complete), 2);
  Simulation sim(s, topo, actions, make_ground_truth(theta, actions), 4);
  const RunResult r = sim.run_to_end();
  REQUIRE(r.episodes.size() > 40);

  // The inferior arm is optimistic only while beta / sqrt(1 + n_2) > 0.6, so it
  // can be pulled at most (beta_T / 0.6)^2 times in total.
  const double cap = std::pow(beta(s.constants, r.episode_count) / 0.6, 2.0);
  int bad_pulls = 0;
  for (const EpisodeRecord &rec : r.episodes)
  {
    if (rec.inst_regret_action > 0.0)
    {
      CHECK(rec.inst_regret_action == doctest::Approx(0.6));
      ++bad_pulls;
    }
  }
  CHECK(bad_pulls >= 1);
  CHECK(static_cast<double>(bad_pulls) <= cap);

  double action_regret = 0.0;
  for (const EpisodeRecord &rec : r.episodes)
  {
    action_regret += rec.inst_regret_action;
  }
  CHECK(action_regret <= 0.6 * cap + 1e-9);
}

TEST_CASE("hold-last-action convention charges the action gap")
{
  SimulationSettings s = settings_for(4, 3, 800);
  s.convention = RegretConvention::hold_last_action;
  const Topology topo = make_topology(spec_of(GraphKind::cycle), 4);
  const RunResult r = run(s, topo, ActionSet::hypercube(3), 21);
  for (const EpisodeRecord &rec : r.episodes)
  {
    CHECK(rec.inst_regret_comm == doctest::Approx(rec.q * rec.inst_regret_action));
  }

  // Same seed under the default convention plays the same actions; only the
  // accounting differs.
  s.convention = RegretConvention::no_reward;
  const RunResult base = run(s, topo, ActionSet::hypercube(3), 21);
  REQUIRE(base.episodes.size() == r.episodes.size());
  for (std::size_t k = 0; k < r.episodes.size(); ++k)
  {
    CHECK(base.episodes[k].action == r.episodes[k].action);
  }
  CHECK(base.cumulative_regret.back() >= r.cumulative_regret.back());
}

TEST_CASE("uniform noise runs and consensus traces have q entries")
{
  SimulationSettings s = settings_for(6, 2, 300);
  s.noise = NoiseKind::uniform;
  s.trace_consensus = true;
  const RunResult r = run(s, make_topology(spec_of(GraphKind::cycle), 6), ActionSet::hypercube(2), 8);
  for (const EpisodeRecord &rec : r.episodes)
  {
    CHECK(static_cast<int>(rec.consensus_trace.size()) == rec.q);
    if (!rec.truncated)
    {
      CHECK((rec.consensus_trace.back() - rec.consensus_rewards).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("coverage and optimism hold on a small instance")
{
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed)
  {
    const RunResult r =
        run(settings_for(4, 4, 500), make_topology(spec_of(GraphKind::complete), 4), ActionSet::hypercube(4), seed);
    covered += r.coverage_held ? 1 : 0;
    CHECK(r.optimism_held);
  }
  CHECK(covered >= 19);
}

TEST_CASE("simulation: mismatched inputs are rejected")
{
  const Topology four = make_topology(spec_of(GraphKind::complete), 4);
  CHECK_THROWS_AS(Simulation(settings_for(5, 2, 10), four, ActionSet::hypercube(2), 1), ConfigError);
  CHECK_THROWS_AS(Simulation(settings_for(4, 3, 10), four, ActionSet::hypercube(2), 1), ConfigError);
  CHECK_THROWS_AS(Simulation(settings_for(4, 2, 0), four, ActionSet::hypercube(2), 1), ConfigError);
  SimulationSettings bad = settings_for(4, 2, 10);
  bad.constants.delta = 1.5;
  CHECK_THROWS_AS(Simulation(bad, four, ActionSet::hypercube(2), 1), ConfigError);
  const ActionSet cube = ActionSet::hypercube(2);
  CHECK_THROWS_AS(Simulation(settings_for(4, 2, 10), four, cube, make_ground_truth(Eigen::MatrixXd::Zero(3, 2), cube), 1),
                  ConfigError);
}

TEST_CASE("simulation: finished runs yield no further episodes")
{
  Simulation sim(settings_for(2, 2, 5), make_topology(spec_of(GraphKind::complete), 2), ActionSet::hypercube(2), 1);
  while (sim.run_episode())
  {
  }
  CHECK(sim.finished());
  CHECK_FALSE(sim.run_episode().has_value());
  CHECK(sim.partial_result().total_rounds_used <= 5);
}
