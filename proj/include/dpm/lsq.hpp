#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace dpm {

/// Cholesky factorization of the column-scaled normal matrix
/// (M D)^T (M D), D = diag(1 / max_i |M_ik|).
struct NormalFactor {
  Eigen::VectorXd scale;          // D diagonal
  Eigen::LLT<Eigen::MatrixXd> llt;

  /// Solution of the least-squares problem min |M x - b| given M^T b.
  Eigen::VectorXd solve_with_mtb(const Eigen::VectorXd& mtb) const;
};

/// Per-column 1/max|entry| scaling; throws on an identically zero column.
Eigen::VectorXd column_scaling(const Eigen::MatrixXd& m);

/// Factor the scaled normal matrix of M.  Enforces rows >= columns and
/// throws a singular-system error naming the smallest pivot if the scaled
/// normal matrix is not positive definite.
NormalFactor factor_scaled_normal(const Eigen::MatrixXd& m);

/// Same, but from a precomputed unscaled normal matrix M^T M and column
/// scaling (used when M is assembled in blocks and never stacked).
NormalFactor factor_from_normal(const Eigen::MatrixXd& mtm,
                                const Eigen::VectorXd& scale);

/// One-call least squares via the preconditioned normal equations.
Eigen::VectorXd solve_normal_equations(const Eigen::MatrixXd& m,
                                       const Eigen::VectorXd& b);

/// 2-norm condition number of a symmetric positive (semi)definite matrix by
/// full symmetric eigendecomposition.
double condition_number_spd(const Eigen::MatrixXd& g);

/// Condition number of the scaled normal matrix of M.
double scaled_normal_condition(const Eigen::MatrixXd& m);

}  // namespace dpm
