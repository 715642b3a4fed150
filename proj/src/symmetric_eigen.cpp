#include "malinucb/symmetric_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "malinucb/errors.hpp"

namespace malinucb
{

namespace
{

double off_diagonal_norm(const Eigen::MatrixXd &a)
{
  double sum = 0.0;
  const auto n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
  {
    for (Eigen::Index i = 0; i < n; ++i)
    {
      if (i != j)
      {
        sum += a(i, j) * a(i, j);
      }
    }
  }
  return std::sqrt(sum);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd &a, double tol, int max_sweeps)
{
  if (a.rows() != a.cols())
  {
    throw ConfigError("jacobi_eigen: matrix is not square");
  }
  const auto n = a.rows();
  const double scale = std::max(1.0, a.norm());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
  {
    throw ConfigError("jacobi_eigen: matrix is not symmetric");
  }

  Eigen::MatrixXd m = 0.5 * (a + a.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double threshold = tol * scale;

  for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(m) >= threshold; ++sweep)
  {
    for (Eigen::Index p = 0; p < n - 1; ++p)
    {
      for (Eigen::Index q = p + 1; q < n; ++q)
      {
        const double apq = m(p, q);
        if (apq == 0.0)
        {
          continue;
        }
        // Rotation angle that annihilates m(p, q).
        const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k)
        {
          const double mkp = m(k, p);
          const double mkq = m(k, q);
          m(k, p) = c * mkp - s * mkq;
          m(k, q) = s * mkp + c * mkq;
        }
        for (Eigen::Index k = 0; k < n; ++k)
        {
          const double mpk = m(p, k);
          const double mqk = m(q, k);
          m(p, k) = c * mpk - s * mqk;
          m(q, k) = s * mpk + c * mqk;
        }
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k)
        {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return m(x, x) < m(y, y); });

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k)
  {
    out.values(k) = m(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd &spd)
{
  const SymmetricEigen eig = jacobi_eigen(spd);
  if (eig.values.minCoeff() <= 0.0)
  {
    throw ConfigError("inverse_sqrt: matrix is not positive definite");
  }
  const Eigen::VectorXd scale = eig.values.cwiseSqrt().cwiseInverse();
  return eig.vectors * scale.asDiagonal() * eig.vectors.transpose();
}

double symmetric_spectral_norm(const Eigen::MatrixXd &a)
{
  return jacobi_eigen(a).values.cwiseAbs().maxCoeff();
}

}  // namespace malinucb
