#pragma once

#include <Eigen/Core>
#include <vector>

#include "dpm/grid.hpp"
#include "dpm/harmonics.hpp"

namespace dpm {

/// Basis values at the foot points of the gamma nodes: phi(m, kappa) and the
/// surface-Laplacian eigenvalue per column.
struct BasisTable {
  Eigen::MatrixXd phi;     // |gamma| x L
  Eigen::VectorXd eigen;   // L

  static BasisTable build(const SpectralBasis& basis,
                          const std::vector<BoundaryNode>& nodes);
};

/// Dynamic boundary condition.  The density at gamma node m is
/// (A a)_m + c_m for spectral coefficients a of the boundary trace:
///   A = (1 - d(1+s) + d^2/2 ((2/R+1)(1+s) - 1)) phi
///     + (d - d^2/2 (2/R+1)) lap_surf phi
///   c = d S - d^2/2 (2/R+1) S + d^2/2 (g - f),  S = s u + g + u_t
/// with s = sigma, d the signed distance, all data at the foot points.
Eigen::MatrixXd assemble_case1_matrix(const BasisTable& table,
                                      const std::vector<BoundaryNode>& nodes,
                                      double sigma, double radius);
Eigen::VectorXd case1_known_vector(const std::vector<BoundaryNode>& nodes,
                                   const Eigen::VectorXd& u_prev,
                                   const Eigen::VectorXd& ut_prev,
                                   const Eigen::VectorXd& g_next,
                                   const Eigen::VectorXd& f_next, double sigma,
                                   double radius);

/// Linear bulk-surface coupling, unknowns (a_v, a_urr), density A a_v +
/// B a_urr + c:
///   A = (1+s) phi - lap_surf phi + d(-s phi + lap_surf phi)
///   B = d^2/2 phi
///   c = (d - 1)(s v + g + v_t)
struct Case2aMatrices {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
};
Case2aMatrices assemble_case2a_matrices(const BasisTable& table,
                                        const std::vector<BoundaryNode>& nodes,
                                        double sigma);
Eigen::VectorXd case2a_known_vector(const std::vector<BoundaryNode>& nodes,
                                    const Eigen::VectorXd& v_prev,
                                    const Eigen::VectorXd& vt_prev,
                                    const Eigen::VectorXd& g_next,
                                    double sigma);

/// Nonlinear coupling, unknowns (a_u, a_v, a_urr), density C a_u + A a_v +
/// B a_urr + d_vec:
///   A = d(-s phi + lap_surf phi),  B = d^2/2 phi,  C = phi
///   d_vec = d(s v + g + v_t - w)
struct Case2bMatrices {
  Eigen::MatrixXd a;
  Eigen::MatrixXd b;
  Eigen::MatrixXd c;
};
Case2bMatrices assemble_case2b_matrices(const BasisTable& table,
                                        const std::vector<BoundaryNode>& nodes,
                                        double sigma);
Eigen::VectorXd case2b_known_vector(const std::vector<BoundaryNode>& nodes,
                                    const Eigen::VectorXd& v_prev,
                                    const Eigen::VectorXd& vt_prev,
                                    const Eigen::VectorXd& g_next,
                                    const Eigen::VectorXd& w_next,
                                    double sigma);

/// Spectral rows tying u to v through the linearized surface equation,
/// evaluated on a row subset (the gamma_in foot points):
///   (C' a_u) - (A' a_v) = rhs
///   A' = s phi - lap_surf phi,  C' = phi * v_lin,  rhs = -(s v + g + v_t).
/// The flux correction w cancels from this relation.
struct Case2bCouplingRows {
  Eigen::MatrixXd a_prime;
  Eigen::MatrixXd c_prime;
  Eigen::VectorXd rhs;
};
Case2bCouplingRows case2b_coupling_rows(const BasisTable& table,
                                        const std::vector<std::int32_t>& rows,
                                        const Eigen::VectorXd& v_lin,
                                        const Eigen::VectorXd& v_prev,
                                        const Eigen::VectorXd& vt_prev,
                                        const Eigen::VectorXd& g_next,
                                        double sigma);

/// Linearization point for the surface value at the new time level:
/// order 2: v + dt v_t;  order 3: v + dt v_t + dt^2/2 v_tt.
Eigen::VectorXd linearize_surface_value(const Eigen::VectorXd& v,
                                        const Eigen::VectorXd& vt,
                                        const Eigen::VectorXd* vtt, double dt,
                                        int order);

/// Trapezoidal-rule tracker: f_t(new) = sigma (f(new) - f(old)) - f_t(old).
Eigen::VectorXd update_time_derivative(const Eigen::VectorXd& f_next,
                                       const Eigen::VectorXd& f_prev,
                                       const Eigen::VectorXd& ft_prev,
                                       double sigma);

Eigen::VectorXd vtt_estimate(const Eigen::VectorXd& vt,
                             const Eigen::VectorXd& vt_prev, double dt);

}  // namespace dpm
