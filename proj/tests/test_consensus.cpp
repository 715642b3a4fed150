#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "malinucb/consensus.hpp"
#include "malinucb/errors.hpp"

using namespace malinucb;

namespace
{

GraphSpec kind(GraphKind k, int degree = 0)
{
  GraphSpec spec;
  spec.kind = k;
  spec.degree = degree;
  return spec;
}

// Closed-form Chebyshev polynomial of the first kind.
double chebyshev(int q, double x)
{
  if (std::abs(x) <= 1.0)
  {
    return std::cos(q * std::acos(x));
  }
  const double mag = std::cosh(q * std::acosh(std::abs(x)));
  return (x < 0.0 && q % 2 == 1) ? -mag : mag;
}

// pi_q(W) = U diag(T_q(lambda/lambda2) / T_q(1/lambda2)) U^T from Eigen's solver.
Eigen::MatrixXd oracle_polynomial(const Topology &topo, int q)
{
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(topo.weights());
  const double l2 = topo.lambda2();
  Eigen::VectorXd scaled(solver.eigenvalues().size());
  for (Eigen::Index k = 0; k < scaled.size(); ++k)
  {
    scaled(k) = chebyshev(q, solver.eigenvalues()(k) / l2) / chebyshev(q, 1.0 / l2);
  }
  return solver.eigenvectors() * scaled.asDiagonal() * solver.eigenvectors().transpose();
}

double distance_to_projector(const Eigen::MatrixXd &p)
{
  const auto n = p.rows();
  Eigen::MatrixXd diff = p - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  diff = (0.5 * (diff + diff.transpose())).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(diff);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

std::vector<Topology> small_topologies()
{
  Eigen::Matrix2d w2;
  w2 << 0.9, 0.1, 0.1, 0.9;
  std::vector<Topology> out;
  out.push_back(make_topology(kind(GraphKind::cycle), 6));
  out.push_back(make_topology(kind(GraphKind::cycle), 10));
  out.push_back(make_topology(kind(GraphKind::k_regular, 4), 12));
  out.push_back(make_topology(kind(GraphKind::path), 7));
  out.push_back(make_topology(kind(GraphKind::cycle), 9, false));
  out.push_back(Topology::from_weights(w2));
  return out;
}

}  // namespace

TEST_CASE("comm_length: reference values")
{
  CHECK(comm_length(1, 2, 0.5) == 2);
  CHECK(comm_length(1, 50, 0.9) == 11);
  CHECK(comm_length(1, 7, 0.0) == 1);
  CHECK(comm_length(1000, 64, 1e-14) == 1);
  CHECK_THROWS_WITH_AS(comm_length(1, 4, 1.0), doctest::Contains("disconnected or periodic"), ConfigError);
  CHECK_THROWS_AS(comm_length(0, 4, 0.5), ConfigError);
}

TEST_CASE("comm_length: schedule is >= 1, non-decreasing, capped")
{
  for (double l2 : {0.0, 0.1, 0.5, 0.9, 0.99, 0.9999})
  {
    const CommSchedule schedule(20, l2);
    int prev = 0;
    for (long s = 1; s <= 5000; s += 7)
    {
      const int q = schedule(s);
      CHECK(q >= 1);
      CHECK(q >= prev);
      CHECK(q <= kMaxCommRounds);
      prev = q;
    }
  }
  CHECK(comm_length(1, 2, 1.0 - 1e-9) == kMaxCommRounds);
}

TEST_CASE("comm_length(s) equals the accuracy schedule at epsilon = 1/s")
{
  for (double l2 : {0.3, 0.87, 0.99})
  {
    for (long s : {1L, 2L, 10L, 123L, 5000L})
    {
      CHECK(comm_length(s, 10, l2) == comm_length_for_accuracy(1.0 / static_cast<double>(s), 10, l2));
    }
  }
}

TEST_CASE("mix_round: exact averaging on the complete 2-node graph")
{
  const Topology topo = make_topology(kind(GraphKind::complete), 2);
  Eigen::Vector2d z0(1.0, 3.0);
  const MixState s1 = mix_round(start_mix(z0, topo), topo);
  CHECK(s1.output()(0) == doctest::Approx(2.0));
  CHECK(s1.output()(1) == doctest::Approx(2.0));
}

TEST_CASE("mix_round: first step on the 4-cycle is one multiplication by W")
{
  const Topology topo = make_topology(kind(GraphKind::cycle), 4);
  const MixState s1 = mix_round(start_mix(Eigen::Vector4d(1, 0, 0, 0), topo), topo);
  const Eigen::VectorXd y = s1.output();
  CHECK(y(0) == doctest::Approx(1.0 / 3));
  CHECK(y(1) == doctest::Approx(1.0 / 3));
  CHECK(y(2) == doctest::Approx(0.0));
  CHECK(y(3) == doctest::Approx(1.0 / 3));
  CHECK(s1.a_curr == doctest::Approx(1.0 / topo.lambda2()));
  CHECK(s1.step == 1);
}

TEST_CASE("mix_round: constant vectors are fixed points")
{
  for (const Topology &topo : small_topologies())
  {
    MixState state = start_mix(Eigen::VectorXd::Constant(topo.size(), 2.5), topo);
    for (int h = 0; h < 30; ++h)
    {
      state = mix_round(state, topo);
      CHECK((state.output().array() - 2.5).abs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("consensus_average: reference cases")
{
  const Topology complete4 = make_topology(kind(GraphKind::complete), 4);
  const Eigen::VectorXd y = consensus_average(Eigen::Vector4d(4, 0, 0, 0), complete4, 1);
  CHECK((y.array() - 1.0).abs().maxCoeff() <= 1e-15);

  CHECK_THROWS_AS(consensus_average(Eigen::Vector4d(4, 0, 0, 0), complete4, 0), ConfigError);
  CHECK_THROWS_AS(consensus_average(Eigen::Vector3d(4, 0, 0), complete4, 1), ConfigError);

  std::vector<Eigen::VectorXd> trace;
  const Topology cycle10 = make_topology(kind(GraphKind::cycle), 10);
  consensus_average(Eigen::VectorXd::Unit(10, 0), cycle10, 7, &trace);
  CHECK(trace.size() == 7);
}

TEST_CASE("consensus_average: 10-cycle at epsilon = 0.1 meets the accuracy bound")
{
  const Topology topo = make_topology(kind(GraphKind::cycle), 10);
  const int q = comm_length_for_accuracy(0.1, 10, topo.lambda2());
  CHECK(q == 11);
  CHECK(distance_to_projector(oracle_polynomial(topo, q)) <= 0.01);
  CHECK(distance_to_projector(mixing_polynomial(topo, q)) <= 0.01);
}

TEST_CASE("lemma1_matrix_bound: reference cases")
{
  const AccuracyCheck complete = lemma1_matrix_bound(make_topology(kind(GraphKind::complete), 8), 0.5);
  CHECK(complete.q == 1);
  CHECK(complete.achieved_norm == 0.0);

  const AccuracyCheck cycle6 = lemma1_matrix_bound(make_topology(kind(GraphKind::cycle), 6), 0.2);
  CHECK(cycle6.achieved_norm <= 0.2 / 6);

  Eigen::Matrix2d w;
  w << 0.9, 0.1, 0.1, 0.9;
  const AccuracyCheck two = lemma1_matrix_bound(Topology::from_weights(w), 0.1);
  CHECK(two.achieved_norm <= 0.05);
  // On two nodes the distance is exactly 1 / T_q(1/lambda2).
  CHECK(two.achieved_norm == doctest::Approx(1.0 / chebyshev(two.q, 1.0 / 0.8)).epsilon(1e-10));

  CHECK_THROWS_AS(lemma1_matrix_bound(make_topology(kind(GraphKind::cycle), 6), 0.0), ConfigError);
}

TEST_CASE("property: pi_q(W) 1 = 1")
{
  for (const Topology &topo : small_topologies())
  {
    for (int q = 1; q <= 40; ++q)
    {
      const Eigen::VectorXd y = consensus_average(Eigen::VectorXd::Ones(topo.size()), topo, q);
      CHECK((y.array() - 1.0).abs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("property: accuracy is non-increasing in q")
{
  for (const Topology &topo : small_topologies())
  {
    double prev = 2.0;
    for (int q = 1; q <= 30; ++q)
    {
      const double dist = distance_to_projector(mixing_polynomial(topo, q));
      CHECK(dist <= prev + 1e-12);
      prev = dist;
    }
  }
}

TEST_CASE("property: accuracy bound holds for all test topologies")
{
  for (const Topology &topo : small_topologies())
  {
    for (double eps : {0.5, 0.1, 0.01})
    {
      const AccuracyCheck check = lemma1_matrix_bound(topo, eps);
      CHECK(check.achieved_norm <= eps / topo.size());
    }
  }
}

TEST_CASE("property: gossip recurrence matches the eigendecomposition oracle")
{
  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  for (const Topology &topo : small_topologies())
  {
    for (int q = 1; q <= 20; ++q)
    {
      const Eigen::MatrixXd oracle = oracle_polynomial(topo, q);
      for (int trial = 0; trial < 3; ++trial)
      {
        Eigen::VectorXd r(topo.size());
        for (Eigen::Index i = 0; i < r.size(); ++i)
        {
          r(i) = g(rng);
        }
        const Eigen::VectorXd diff = consensus_average(r, topo, q) - oracle * r;
        CHECK(diff.cwiseAbs().maxCoeff() <= 1e-8);
      }
    }
  }
}

TEST_CASE("property: locality of q rounds")
{
  const Topology topo = make_topology(kind(GraphKind::cycle), 12);
  std::mt19937 rng(9);
  std::normal_distribution<double> g;
  Eigen::VectorXd r(12);
  for (Eigen::Index i = 0; i < 12; ++i)
  {
    r(i) = g(rng);
  }
  for (int q = 1; q <= 5; ++q)
  {
    const auto dist = topo.adjacency().distances_from(0);
    const Eigen::VectorXd base = consensus_average(r, topo, q);
    for (int far = 0; far < 12; ++far)
    {
      if (dist[static_cast<std::size_t>(far)] <= q)
      {
        continue;
      }
      Eigen::VectorXd perturbed = r;
      perturbed(far) += 10.0;
      CHECK(consensus_average(perturbed, topo, q)(0) == base(0));
    }
  }

  // Non-edges carry no weight, so the sparse rows only reference neighbours.
  for (int i = 0; i < topo.size(); ++i)
  {
    for (const auto &entry : topo.rows()[static_cast<std::size_t>(i)])
    {
      CHECK((entry.col == i || topo.adjacency().adjacent(i, entry.col)));
    }
  }
}

TEST_CASE("long phases stay finite")
{
  Eigen::Matrix2d w;
  w << 0.75, 0.25, 0.25, 0.75;  // lambda2 = 0.5, a_h ~ 3.7^h
  const Topology topo = Topology::from_weights(w);
  const Eigen::VectorXd y = consensus_average(Eigen::Vector2d(1.0, 5.0), topo, kMaxCommRounds);
  CHECK(std::isfinite(y(0)));
  CHECK(y(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(y(1) == doctest::Approx(3.0).epsilon(1e-12));
}
