#ifndef MALINUCB_SYMMETRIC_EIGEN_HPP
#define MALINUCB_SYMMETRIC_EIGEN_HPP

#include <Eigen/Dense>

namespace malinucb
{

struct SymmetricEigen
{
  // Eigenvalues in ascending order; column k of `vectors` belongs to values(k).
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

//
// Cyclic Jacobi eigensolver for dense symmetric matrices. Sweeps over all
// off-diagonal pairs until the off-diagonal Frobenius norm drops below
// tol * max(1, ||A||_F). Throws ConfigError for non-square or non-symmetric
// input (symmetry checked to 1e-12 relative).
//
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd &a, double tol = 1e-12,
                            int max_sweeps = 100);

// A^{-1/2} for symmetric positive-definite A.
Eigen::MatrixXd inverse_sqrt(const Eigen::MatrixXd &spd);

// Spectral norm of a symmetric matrix: max |eigenvalue|.
double symmetric_spectral_norm(const Eigen::MatrixXd &a);

}  // namespace malinucb

#endif  // MALINUCB_SYMMETRIC_EIGEN_HPP
