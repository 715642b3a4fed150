#include "malinucb/consensus.hpp"

#include <algorithm>
#include <cmath>

#include "malinucb/errors.hpp"
#include "malinucb/symmetric_eigen.hpp"

namespace malinucb
{

namespace
{

bool exact_path(double lambda2) { return lambda2 < kExactAveragingThreshold; }

// Rescale the Chebyshev state once a_h grows past this to stay clear of overflow.
constexpr double kRescaleThreshold = 1e150;

int rounds_for(double log_numerator, double lambda2)
{
  if (!(lambda2 < 1.0) || lambda2 < 0.0)
  {
    throw ConfigError("disconnected or periodic structure matrix");
  }
  if (exact_path(lambda2))
  {
    return 1;
  }
  const double rate = std::sqrt(2.0 * std::log(1.0 / lambda2));
  const double q = std::ceil(log_numerator / rate);
  return static_cast<int>(std::clamp(q, 1.0, static_cast<double>(kMaxCommRounds)));
}

}  // namespace

int comm_length(long s, int n, double lambda2)
{
  if (s < 1 || n < 1)
  {
    throw ConfigError("comm_length needs s >= 1 and n >= 1");
  }
  return rounds_for(std::log(2.0 * n * static_cast<double>(s)), lambda2);
}

int comm_length_for_accuracy(double epsilon, int n, double lambda2)
{
  if (!(epsilon > 0.0) || n < 1)
  {
    throw ConfigError("comm_length_for_accuracy needs epsilon > 0 and n >= 1");
  }
  return rounds_for(std::log(2.0 * n / epsilon), lambda2);
}

CommSchedule::CommSchedule(int n_agents, double lambda2) : n_agents_(n_agents), lambda2_(lambda2)
{
  // Validates the arguments once.
  comm_length(1, n_agents_, lambda2_);
}

MixState start_mix(const Eigen::VectorXd &values, const Topology &topology)
{
  if (values.size() != topology.size())
  {
    throw ConfigError("consensus: value vector does not match the network size");
  }
  MixState state;
  state.z_curr = values;
  state.z_prev = Eigen::VectorXd::Zero(values.size());
  state.a_curr = 1.0;
  state.a_prev = 0.0;
  state.step = 0;
  state.lambda2 = topology.lambda2();
  return state;
}

MixState mix_round(const MixState &state, const Topology &topology)
{
  MixState next;
  next.lambda2 = state.lambda2;
  next.step = state.step + 1;
  next.z_prev = state.z_curr;
  next.a_prev = state.a_curr;

  const Eigen::VectorXd wz = topology.apply(state.z_curr);
  if (exact_path(state.lambda2))
  {
    next.z_curr = wz;
    next.a_curr = 1.0;
    return next;
  }

  const double inv = 1.0 / state.lambda2;
  if (state.step == 0)
  {
    next.z_curr = inv * wz;
    next.a_curr = inv;
  }
  else
  {
    next.z_curr = 2.0 * inv * wz - state.z_prev;
    next.a_curr = 2.0 * inv * state.a_curr - state.a_prev;
  }

  // The recurrence is linear and homogeneous, so a common rescale of both
  // levels leaves every output unchanged.
  if (std::abs(next.a_curr) > kRescaleThreshold)
  {
    const double scale = 1.0 / next.a_curr;
    next.z_curr *= scale;
    next.z_prev *= scale;
    next.a_prev *= scale;
    next.a_curr = 1.0;
  }
  return next;
}

Eigen::VectorXd consensus_average(const Eigen::VectorXd &values, const Topology &topology, int q,
                                  std::vector<Eigen::VectorXd> *trace)
{
  if (q < 1)
  {
    throw ConfigError("consensus_average needs q >= 1");
  }
  MixState state = start_mix(values, topology);
  for (int h = 0; h < q; ++h)
  {
    state = mix_round(state, topology);
    if (trace != nullptr)
    {
      trace->push_back(state.output());
    }
  }
  return state.output();
}

Eigen::MatrixXd mixing_polynomial(const Topology &topology, int q)
{
  const int n = topology.size();
  Eigen::MatrixXd p(n, n);
  for (int j = 0; j < n; ++j)
  {
    p.col(j) = consensus_average(Eigen::VectorXd::Unit(n, j), topology, q);
  }
  return p;
}

AccuracyCheck lemma1_matrix_bound(const Topology &topology, double epsilon)
{
  if (!(epsilon > 0.0))
  {
    throw ConfigError("lemma1_matrix_bound needs epsilon > 0");
  }
  if (exact_path(topology.lambda2()))
  {
    return {1, 0.0};
  }
  const int n = topology.size();
  AccuracyCheck out;
  out.q = comm_length_for_accuracy(epsilon, n, topology.lambda2());
  Eigen::MatrixXd diff = mixing_polynomial(topology, out.q);
  diff.array() -= 1.0 / n;
  // Symmetrize away rounding before the symmetric eigensolver.
  diff = 0.5 * (diff + diff.transpose()).eval();
  out.achieved_norm = symmetric_spectral_norm(diff);
  return out;
}

}  // namespace malinucb
