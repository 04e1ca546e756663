#include "dpm/coupling.hpp"

#include <stdexcept>

namespace dpm {

BasisTable BasisTable::build(const SpectralBasis& basis,
                             const std::vector<BoundaryNode>& nodes) {
  BasisTable table;
  const Eigen::Index rows = static_cast<Eigen::Index>(nodes.size());
  const Eigen::Index cols = basis.size();
  table.phi.resize(rows, cols);
  table.eigen.resize(cols);
  for (int k = 1; k <= basis.size(); ++k)
    table.eigen[k - 1] = basis.lb_eigenvalue(k);
  std::vector<double> row(basis.size());
#pragma omp parallel for schedule(static) firstprivate(row)
  for (Eigen::Index m = 0; m < rows; ++m) {
    basis.evaluate_all(nodes[m].theta, nodes[m].phi, row);
    for (Eigen::Index k = 0; k < cols; ++k) table.phi(m, k) = row[k];
  }
  return table;
}

static void check_rows(const BasisTable& table,
                       const std::vector<BoundaryNode>& nodes) {
  if (table.phi.rows() != static_cast<Eigen::Index>(nodes.size()))
    throw std::invalid_argument("basis table / node list size mismatch");
}

Eigen::MatrixXd assemble_case1_matrix(const BasisTable& table,
                                      const std::vector<BoundaryNode>& nodes,
                                      double sigma, double radius) {
  check_rows(table, nodes);
  const double curv = 2.0 / radius + 1.0;
  Eigen::MatrixXd a(table.phi.rows(), table.phi.cols());
  for (Eigen::Index m = 0; m < a.rows(); ++m) {
    const double d = nodes[m].d;
    const double d2h = 0.5 * d * d;
    const double cv = 1.0 - d * (1.0 + sigma) + d2h * (curv * (1.0 + sigma) - 1.0);
    const double cl = d - d2h * curv;
    for (Eigen::Index k = 0; k < a.cols(); ++k)
      a(m, k) = (cv + cl * table.eigen[k]) * table.phi(m, k);
  }
  return a;
}

Eigen::VectorXd case1_known_vector(const std::vector<BoundaryNode>& nodes,
                                   const Eigen::VectorXd& u_prev,
                                   const Eigen::VectorXd& ut_prev,
                                   const Eigen::VectorXd& g_next,
                                   const Eigen::VectorXd& f_next, double sigma,
                                   double radius) {
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
  const double curv = 2.0 / radius + 1.0;
  Eigen::VectorXd c(n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double d = nodes[m].d;
    const double d2h = 0.5 * d * d;
    const double s = sigma * u_prev[m] + g_next[m] + ut_prev[m];
    c[m] = d * s - d2h * curv * s + d2h * (g_next[m] - f_next[m]);
  }
  return c;
}

Case2aMatrices assemble_case2a_matrices(const BasisTable& table,
                                        const std::vector<BoundaryNode>& nodes,
                                        double sigma) {
  check_rows(table, nodes);
  Case2aMatrices out;
  out.a.resize(table.phi.rows(), table.phi.cols());
  out.b.resize(table.phi.rows(), table.phi.cols());
  for (Eigen::Index m = 0; m < out.a.rows(); ++m) {
    const double d = nodes[m].d;
    for (Eigen::Index k = 0; k < out.a.cols(); ++k) {
      const double lam = table.eigen[k];
      out.a(m, k) =
          ((1.0 + sigma) - lam + d * (lam - sigma)) * table.phi(m, k);
      out.b(m, k) = 0.5 * d * d * table.phi(m, k);
    }
  }
  return out;
}

Eigen::VectorXd case2a_known_vector(const std::vector<BoundaryNode>& nodes,
                                    const Eigen::VectorXd& v_prev,
                                    const Eigen::VectorXd& vt_prev,
                                    const Eigen::VectorXd& g_next,
                                    double sigma) {
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
  Eigen::VectorXd c(n);
  for (Eigen::Index m = 0; m < n; ++m)
    c[m] = (nodes[m].d - 1.0) *
           (sigma * v_prev[m] + g_next[m] + vt_prev[m]);
  return c;
}

Case2bMatrices assemble_case2b_matrices(const BasisTable& table,
                                        const std::vector<BoundaryNode>& nodes,
                                        double sigma) {
  check_rows(table, nodes);
  Case2bMatrices out;
  out.a.resize(table.phi.rows(), table.phi.cols());
  out.b.resize(table.phi.rows(), table.phi.cols());
  out.c = table.phi;
  for (Eigen::Index m = 0; m < out.a.rows(); ++m) {
    const double d = nodes[m].d;
    for (Eigen::Index k = 0; k < out.a.cols(); ++k) {
      out.a(m, k) = d * (table.eigen[k] - sigma) * table.phi(m, k);
      out.b(m, k) = 0.5 * d * d * table.phi(m, k);
    }
  }
  return out;
}

Eigen::VectorXd case2b_known_vector(const std::vector<BoundaryNode>& nodes,
                                    const Eigen::VectorXd& v_prev,
                                    const Eigen::VectorXd& vt_prev,
                                    const Eigen::VectorXd& g_next,
                                    const Eigen::VectorXd& w_next,
                                    double sigma) {
  const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
  Eigen::VectorXd c(n);
  for (Eigen::Index m = 0; m < n; ++m)
    c[m] =
        nodes[m].d * (sigma * v_prev[m] + g_next[m] + vt_prev[m] - w_next[m]);
  return c;
}

Case2bCouplingRows case2b_coupling_rows(const BasisTable& table,
                                        const std::vector<std::int32_t>& rows,
                                        const Eigen::VectorXd& v_lin,
                                        const Eigen::VectorXd& v_prev,
                                        const Eigen::VectorXd& vt_prev,
                                        const Eigen::VectorXd& g_next,
                                        double sigma) {
  Case2bCouplingRows out;
  const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index nc = table.phi.cols();
  out.a_prime.resize(nr, nc);
  out.c_prime.resize(nr, nc);
  out.rhs.resize(nr);
  for (Eigen::Index i = 0; i < nr; ++i) {
    const Eigen::Index m = rows[i];
    for (Eigen::Index k = 0; k < nc; ++k) {
      out.a_prime(i, k) = (sigma - table.eigen[k]) * table.phi(m, k);
      out.c_prime(i, k) = v_lin[m] * table.phi(m, k);
    }
    out.rhs[i] = -(sigma * v_prev[m] + g_next[m] + vt_prev[m]);
  }
  return out;
}

Eigen::VectorXd linearize_surface_value(const Eigen::VectorXd& v,
                                        const Eigen::VectorXd& vt,
                                        const Eigen::VectorXd* vtt, double dt,
                                        int order) {
  if (order == 2) return v + dt * vt;
  if (order == 3) {
    if (!vtt)
      throw std::invalid_argument(
          "third-order linearization needs a second-derivative estimate");
    return v + dt * vt + (0.5 * dt * dt) * (*vtt);
  }
  throw std::invalid_argument("linearization order must be 2 or 3");
}

Eigen::VectorXd update_time_derivative(const Eigen::VectorXd& f_next,
                                       const Eigen::VectorXd& f_prev,
                                       const Eigen::VectorXd& ft_prev,
                                       double sigma) {
  return sigma * (f_next - f_prev) - ft_prev;
}

Eigen::VectorXd vtt_estimate(const Eigen::VectorXd& vt,
                             const Eigen::VectorXd& vt_prev, double dt) {
  return (vt - vt_prev) / dt;
}

}  // namespace dpm
