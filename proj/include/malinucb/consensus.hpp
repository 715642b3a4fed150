#ifndef MALINUCB_CONSENSUS_HPP
#define MALINUCB_CONSENSUS_HPP

#include <vector>

#include <Eigen/Dense>

#include "malinucb/graph_topology.hpp"

namespace malinucb
{

// Below this |lambda2| one multiplication by W already averages exactly.
inline constexpr double kExactAveragingThreshold = 1e-12;

// Upper limit on gossip rounds in one communication phase.
inline constexpr int kMaxCommRounds = 500;

// Communication-phase length for episode s (s >= 1):
//   q(s) = max(1, ceil(log(2 n s) / sqrt(2 log(1/lambda2)))), capped at kMaxCommRounds.
// Throws ConfigError when lambda2 >= 1.
int comm_length(long s, int n, double lambda2);

// Rounds needed for accuracy epsilon: ceil(log(2 n / epsilon) / sqrt(2 log(1/lambda2))).
// comm_length(s, ...) is this schedule evaluated at epsilon = 1/s.
int comm_length_for_accuracy(double epsilon, int n, double lambda2);

// Communication schedule s -> q(s) for a fixed network.
class CommSchedule
{
public:
  CommSchedule(int n_agents, double lambda2);

  int operator()(long s) const { return comm_length(s, n_agents_, lambda2_); }
  int n_agents() const { return n_agents_; }
  double lambda2() const { return lambda2_; }

private:
  int n_agents_;
  double lambda2_;
};

//
// State of a rescaled-Chebyshev gossip phase. Each agent i holds z_curr(i) and
// z_prev(i); the normalizers a_h = T_h(1/lambda2) are known to every agent, so
// agent i's current estimate of the average is z_curr(i) / a_curr. On the exact
// averaging path (lambda2 ~ 0) the state is plain gossip with a_h = 1.
//
struct MixState
{
  Eigen::VectorXd z_curr;
  Eigen::VectorXd z_prev;
  double a_curr = 1.0;
  double a_prev = 0.0;
  int step = 0;
  double lambda2 = 0.0;

  Eigen::VectorXd output() const { return z_curr / a_curr; }
};

MixState start_mix(const Eigen::VectorXd &values, const Topology &topology);

// One synchronous gossip round. Agent i only reads entries j with W_ij != 0.
MixState mix_round(const MixState &state, const Topology &topology);

// pi_q(W) * values, pi_q(x) = T_q(x/lambda2) / T_q(1/lambda2). When `trace` is
// non-null the agent outputs after every round are appended to it.
Eigen::VectorXd consensus_average(const Eigen::VectorXd &values, const Topology &topology, int q,
                                  std::vector<Eigen::VectorXd> *trace = nullptr);

// pi_q(W) as a dense matrix, built by running the gossip recurrence on the
// columns of the identity.
Eigen::MatrixXd mixing_polynomial(const Topology &topology, int q);

struct AccuracyCheck
{
  int q = 1;
  double achieved_norm = 0.0;  // || pi_q(W) - (1/N) 1 1^T ||_2
};

// Evaluates q(epsilon) and the spectral-norm distance of pi_q(W) to the
// averaging projector. Intended for small networks.
AccuracyCheck lemma1_matrix_bound(const Topology &topology, double epsilon);

}  // namespace malinucb

#endif  // MALINUCB_CONSENSUS_HPP
