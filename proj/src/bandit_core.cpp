#include "malinucb/bandit_core.hpp"

#include <cmath>

#include "malinucb/errors.hpp"
#include "malinucb/symmetric_eigen.hpp"

namespace malinucb
{

namespace
{

Eigen::VectorXd sign_vector(const Eigen::VectorXd &v)
{
  Eigen::VectorXd s(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
  {
    s(i) = v(i) >= 0.0 ? 1.0 : -1.0;
  }
  return s;
}

bool lexicographically_less(const Eigen::VectorXd &a, const Eigen::VectorXd &b)
{
  for (Eigen::Index i = 0; i < a.size(); ++i)
  {
    if (a(i) != b(i))
    {
      return a(i) < b(i);
    }
  }
  return false;
}

}  // namespace

ActionSet ActionSet::finite(std::vector<Eigen::VectorXd> actions)
{
  if (actions.empty())
  {
    throw ConfigError("finite action set is empty");
  }
  ActionSet set;
  set.finite_ = true;
  set.dim_ = static_cast<int>(actions.front().size());
  for (const auto &x : actions)
  {
    if (x.size() != set.dim_)
    {
      throw ConfigError("finite action set mixes dimensions");
    }
    set.norm_bound_ = std::max(set.norm_bound_, x.norm());
  }
  set.actions_ = std::move(actions);
  return set;
}

ActionSet ActionSet::hypercube(int dim, double half_width)
{
  if (dim < 1 || !(half_width > 0.0))
  {
    throw ConfigError("hypercube needs dim >= 1 and half_width > 0");
  }
  ActionSet set;
  set.finite_ = false;
  set.dim_ = dim;
  set.half_width_ = half_width;
  set.norm_bound_ = std::sqrt(static_cast<double>(dim)) * half_width;
  return set;
}

Eigen::VectorXd ActionSet::best_action(const Eigen::VectorXd &mu) const
{
  if (!finite_)
  {
    return half_width_ * sign_vector(mu);
  }
  std::size_t best = 0;
  double best_value = actions_[0].dot(mu);
  for (std::size_t k = 1; k < actions_.size(); ++k)
  {
    const double value = actions_[k].dot(mu);
    if (value > best_value)
    {
      best = k;
      best_value = value;
    }
  }
  return actions_[best];
}

double ActionSet::max_abs_value(const Eigen::VectorXd &mu) const
{
  if (!finite_)
  {
    return half_width_ * mu.lpNorm<1>();
  }
  double m = 0.0;
  for (const auto &x : actions_)
  {
    m = std::max(m, std::abs(x.dot(mu)));
  }
  return m;
}

void ProblemConstants::validate() const
{
  if (!(R >= 0.0))
  {
    throw ConfigError("noise scale R must be >= 0");
  }
  if (!(S > 0.0) || !(L > 0.0) || !(lambda > 0.0))
  {
    throw ConfigError("S, L and lambda must be positive");
  }
  if (d < 1 || N < 1)
  {
    throw ConfigError("d and N must be >= 1");
  }
  if (!(delta > 0.0 && delta < 1.0))
  {
    throw ConfigError("delta must lie in (0, 1)");
  }
}

RlsState::RlsState(int dim, double lambda)
  : lambda_(lambda),
    v_(lambda * Eigen::MatrixXd::Identity(dim, dim)),
    v_inv_(Eigen::MatrixXd::Identity(dim, dim) / lambda),
    b_(Eigen::VectorXd::Zero(dim)),
    mu_hat_(Eigen::VectorXd::Zero(dim))
{
  if (dim < 1 || !(lambda > 0.0))
  {
    throw ConfigError("RLS needs dim >= 1 and lambda > 0");
  }
}

void RlsState::update(const Eigen::VectorXd &x, double y)
{
  v_.noalias() += x * x.transpose();
  b_.noalias() += y * x;
  ++episodes_;

  if (episodes_ % kRefreshInterval == 0)
  {
    v_inv_ = v_.llt().solve(Eigen::MatrixXd::Identity(v_.rows(), v_.cols()));
  }
  else
  {
    // Sherman-Morrison: (V + x x^T)^{-1} = V^{-1} - (V^{-1}x)(V^{-1}x)^T / (1 + x^T V^{-1} x)
    const Eigen::VectorXd vx = v_inv_ * x;
    v_inv_.noalias() -= (vx * vx.transpose()) / (1.0 + x.dot(vx));
  }
  mu_hat_.noalias() = v_inv_ * b_;
}

double beta(const ProblemConstants &consts, long s)
{
  consts.validate();
  if (s < 0)
  {
    throw ConfigError("beta needs s >= 0");
  }
  const double growth = 1.0 + static_cast<double>(s) * consts.L * consts.L / consts.lambda;
  const double noise_term = consts.R / std::sqrt(static_cast<double>(consts.N)) *
                            std::sqrt(consts.d * std::log(growth / consts.delta));
  const double root_lambda = std::sqrt(consts.lambda);
  return noise_term + root_lambda * consts.S + consts.L / root_lambda;
}

ConfidenceRegion make_region(const RlsState &rls, double radius, double delta)
{
  return {rls.estimate(), rls.design(), rls.design_inverse(), radius, delta};
}

bool contains(const ConfidenceRegion &region, const Eigen::VectorXd &v)
{
  const Eigen::VectorXd diff = v - region.center;
  return std::sqrt(std::max(0.0, diff.dot(region.V * diff))) <= region.radius + 1e-12;
}

OptimisticChoice select_optimistic(const ConfidenceRegion &region, const ActionSet &actions)
{
  if (region.center.size() != actions.dim())
  {
    throw ConfigError("region and action set dimensions differ");
  }
  OptimisticChoice best;

  if (actions.is_finite())
  {
    const auto &list = actions.actions();
    for (std::size_t k = 0; k < list.size(); ++k)
    {
      const Eigen::VectorXd &x = list[k];
      const Eigen::VectorXd vinv_x = region.V_inv * x;
      const double width = std::sqrt(std::max(0.0, x.dot(vinv_x)));
      const double value = x.dot(region.center) + region.radius * width;
      if (best.index < 0 || value > best.ucb_value)
      {
        best.index = static_cast<int>(k);
        best.ucb_value = value;
        best.action = x;
        best.theta = width > 0.0 ? Eigen::VectorXd(region.center + (region.radius / width) * vinv_x)
                                 : region.center;
      }
    }
    return best;
  }

  const int d = actions.dim();
  const double h = actions.half_width();
  const Eigen::MatrixXd root_inv = inverse_sqrt(region.V);
  const double reach = region.radius * std::sqrt(static_cast<double>(d));
  bool have = false;
  for (int j = 0; j < d; ++j)
  {
    for (const double side : {1.0, -1.0})
    {
      const Eigen::VectorXd theta = region.center + side * reach * root_inv.col(j);
      const Eigen::VectorXd signs = sign_vector(theta);
      const double value = h * theta.lpNorm<1>();
      const Eigen::VectorXd current_signs = have ? sign_vector(best.theta) : signs;
      if (!have || value > best.ucb_value ||
          (value == best.ucb_value && lexicographically_less(signs, current_signs)))
      {
        have = true;
        best.ucb_value = value;
        best.theta = theta;
        best.action = h * signs;
      }
    }
  }
  return best;
}

}  // namespace malinucb
