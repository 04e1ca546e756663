#include "dpm/lsq.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dpm {

Eigen::VectorXd column_scaling(const Eigen::MatrixXd& m) {
  Eigen::VectorXd scale(m.cols());
  for (Eigen::Index k = 0; k < m.cols(); ++k) {
    const double mx = m.col(k).cwiseAbs().maxCoeff();
    if (mx <= 0.0) {
      std::ostringstream msg;
      msg << "column " << k << " of the least-squares matrix is zero";
      throw std::invalid_argument(msg.str());
    }
    scale[k] = 1.0 / mx;
  }
  return scale;
}

// Locates the first non-positive pivot of a plain Cholesky sweep; used only
// on the failure path for diagnostics.
static double smallest_pivot(Eigen::MatrixXd g) {
  const Eigen::Index n = g.rows();
  double worst = g(0, 0);
  for (Eigen::Index k = 0; k < n; ++k) {
    double piv = g(k, k);
    if (piv < worst) worst = piv;
    if (piv <= 0.0) return piv;
    piv = std::sqrt(piv);
    g(k, k) = piv;
    for (Eigen::Index i = k + 1; i < n; ++i) g(i, k) /= piv;
    for (Eigen::Index j = k + 1; j < n; ++j)
      for (Eigen::Index i = j; i < n; ++i) g(i, j) -= g(i, k) * g(j, k);
  }
  return worst;
}

NormalFactor factor_from_normal(const Eigen::MatrixXd& mtm,
                                const Eigen::VectorXd& scale) {
  NormalFactor f;
  f.scale = scale;
  Eigen::MatrixXd g =
      scale.asDiagonal() * mtm * scale.asDiagonal();
  f.llt.compute(g);
  if (f.llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "scaled normal matrix is not positive definite "
        << "(smallest pivot " << smallest_pivot(g) << ")";
    throw std::runtime_error(msg.str());
  }
  return f;
}

NormalFactor factor_scaled_normal(const Eigen::MatrixXd& m) {
  if (m.rows() < m.cols()) {
    std::ostringstream msg;
    msg << "least-squares system is underdetermined: " << m.rows()
        << " rows for " << m.cols() << " unknowns";
    throw std::invalid_argument(msg.str());
  }
  Eigen::MatrixXd mtm(m.cols(), m.cols());
  mtm.setZero();
  mtm.selfadjointView<Eigen::Lower>().rankUpdate(m.transpose());
  mtm.triangularView<Eigen::Upper>() = mtm.transpose();
  return factor_from_normal(mtm, column_scaling(m));
}

Eigen::VectorXd NormalFactor::solve_with_mtb(const Eigen::VectorXd& mtb) const {
  const Eigen::VectorXd y = llt.solve(scale.asDiagonal() * mtb);
  return scale.asDiagonal() * y;
}

Eigen::VectorXd solve_normal_equations(const Eigen::MatrixXd& m,
                                       const Eigen::VectorXd& b) {
  const NormalFactor f = factor_scaled_normal(m);
  return f.solve_with_mtb(m.transpose() * b);
}

double condition_number_spd(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g,
                                                    Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

double scaled_normal_condition(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd scale = column_scaling(m);
  Eigen::MatrixXd mtm(m.cols(), m.cols());
  mtm.setZero();
  mtm.selfadjointView<Eigen::Lower>().rankUpdate(m.transpose());
  mtm.triangularView<Eigen::Upper>() = mtm.transpose();
  return condition_number_spd(scale.asDiagonal() * mtm *
                              scale.asDiagonal());
}

}  // namespace dpm
