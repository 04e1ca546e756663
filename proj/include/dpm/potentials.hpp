#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "dpm/ap_solver.hpp"
#include "dpm/grid.hpp"

namespace dpm {

/// Particular solutions, difference potentials and the boundary-equation
/// projections built on one (grid, point-set, solver) triple.  Densities are
/// vectors over gamma in gamma order, extended by zero off gamma.
class PotentialOperator {
 public:
  PotentialOperator(const GridSpec& spec, const PointSets& sets,
                    const FastApSolver& solver);

  const GridSpec& spec() const { return spec_; }
  const PointSets& sets() const { return *sets_; }

  /// Auxiliary-problem solve with right-hand side F on M+ and zero on M-;
  /// the result satisfies the interior difference equation on every M+ node.
  /// `field` is a full-lattice array.
  void particular_solution(std::span<const double> f_on_m_plus,
                           std::span<double> field) const;

  /// Difference potential of a density: auxiliary-problem solve with zero
  /// right-hand side on M+ and the operator applied to the zero extension on
  /// M-.  Satisfies the homogeneous interior equation on M+.
  void apply_potential(std::span<const double> density,
                       std::span<double> field) const;

  std::vector<double> trace_gamma(std::span<const double> field) const;
  std::vector<double> trace_gamma_in(std::span<const double> field) const;

  /// (I - P_gamma) density restricted to gamma_in; one auxiliary solve.
  std::vector<double> project_density(std::span<const double> density) const;

  /// Column-wise (I - P_gamma) restricted to gamma_in; one auxiliary solve
  /// per column, parallel over columns.
  Eigen::MatrixXd project_columns(const Eigen::MatrixXd& cols) const;

  /// Boundary-equation residual u_gamma - Tr(P u_gamma) - gf on gamma (or
  /// gamma_in when `reduced`); gf is the particular-solution trace on gamma.
  std::vector<double> bep_residual(std::span<const double> u_gamma,
                                   std::span<const double> gf_gamma,
                                   bool reduced) const;

 private:
  struct Scatter {
    std::int32_t node;   // an M- node touched by some gamma stencil
    std::int32_t first;  // range into contrib_pos/contrib_coef
    std::int32_t count;
  };

  void scatter_density(std::span<const double> density,
                       std::span<double> q) const;

  GridSpec spec_;
  const PointSets* sets_;
  const FastApSolver* solver_;
  std::vector<Scatter> scatter_;
  std::vector<std::int32_t> contrib_pos_;  // gamma positions
  std::vector<double> contrib_coef_;
};

}  // namespace dpm
