#ifndef MALINUCB_BANDIT_CORE_HPP
#define MALINUCB_BANDIT_CORE_HPP

#include <vector>

#include <Eigen/Dense>

namespace malinucb
{

//
// Decision set D: either an explicit list of d-vectors or the hypercube
// [-h, h]^d. norm_bound() is the L of ||x||_2 <= L.
//
class ActionSet
{
public:
  static ActionSet finite(std::vector<Eigen::VectorXd> actions);
  static ActionSet hypercube(int dim, double half_width = 1.0);

  bool is_finite() const { return finite_; }
  int dim() const { return dim_; }
  double norm_bound() const { return norm_bound_; }
  double half_width() const { return half_width_; }
  const std::vector<Eigen::VectorXd> &actions() const { return actions_; }

  // argmax_x <x, mu>; lowest index on ties (finite), sign(0) = +1 (hypercube).
  Eigen::VectorXd best_action(const Eigen::VectorXd &mu) const;
  // max_x |<x, mu>|.
  double max_abs_value(const Eigen::VectorXd &mu) const;

private:
  ActionSet() = default;

  bool finite_ = false;
  int dim_ = 0;
  double half_width_ = 1.0;
  double norm_bound_ = 0.0;
  std::vector<Eigen::VectorXd> actions_;
};

struct ProblemConstants
{
  double R = 0.1;       // sub-Gaussian noise scale
  double S = 1.0;       // parameter norm bound
  double L = 1.0;       // action norm bound
  int d = 1;
  int N = 1;
  double lambda = 1.0;  // ridge
  double delta = 0.05;

  // Throws ConfigError unless every constant is in range.
  void validate() const;
};

//
// Ridge regression state of one agent:
//   V = lambda I + sum_k x_k x_k^T,   b = sum_k y_k x_k,   mu_hat = V^{-1} b.
// V^{-1} is kept current by rank-one updates and refactorized every
// kRefreshInterval updates.
//
class RlsState
{
public:
  static constexpr long kRefreshInterval = 256;

  RlsState(int dim, double lambda);

  void update(const Eigen::VectorXd &x, double y);

  const Eigen::MatrixXd &design() const { return v_; }
  const Eigen::MatrixXd &design_inverse() const { return v_inv_; }
  const Eigen::VectorXd &responses() const { return b_; }
  const Eigen::VectorXd &estimate() const { return mu_hat_; }
  long episodes() const { return episodes_; }
  double lambda() const { return lambda_; }

private:
  double lambda_;
  long episodes_ = 0;
  Eigen::MatrixXd v_;
  Eigen::MatrixXd v_inv_;
  Eigen::VectorXd b_;
  Eigen::VectorXd mu_hat_;
};

// Confidence radius after s incorporated episodes:
//   R/sqrt(N) * sqrt(d log((1 + s L^2/lambda) / delta)) + sqrt(lambda) S + L/sqrt(lambda)
double beta(const ProblemConstants &consts, long s);

// {v : ||v - center||_V <= radius}
struct ConfidenceRegion
{
  Eigen::VectorXd center;
  Eigen::MatrixXd V;
  Eigen::MatrixXd V_inv;
  double radius = 0.0;
  double delta = 0.0;
};

ConfidenceRegion make_region(const RlsState &rls, double radius, double delta);

bool contains(const ConfidenceRegion &region, const Eigen::VectorXd &v);

struct OptimisticChoice
{
  Eigen::VectorXd action;
  Eigen::VectorXd theta;   // optimistic parameter paired with the action
  double ucb_value = 0.0;  // <action, theta>
  int index = -1;          // position in a finite set, -1 for the hypercube
};

//
// Optimistic action. Finite sets use the closed form
//   argmax_x <x, mu_hat> + radius * ||x||_{V^{-1}}.
// The hypercube uses the l1 relaxation of the ellipsoid,
// {theta : ||V^{1/2}(theta - mu_hat)||_1 <= radius sqrt(d)}, whose 2d vertices
// mu_hat +/- radius sqrt(d) V^{-1/2} e_j are scored by h ||theta||_1 at
// x = h sign(theta).
//
OptimisticChoice select_optimistic(const ConfidenceRegion &region, const ActionSet &actions);

}  // namespace malinucb

#endif  // MALINUCB_BANDIT_CORE_HPP
