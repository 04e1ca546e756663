#pragma once

#include <Eigen/Core>
#include <span>

#include "dpm/grid.hpp"

namespace dpm {

struct BulkNorms {
  double e_inf = 0.0;
  double e_l2 = 0.0;
  double e_h1 = 0.0;
  double e_grad_x = 0.0;
  double e_grad_y = 0.0;
  double e_grad_z = 0.0;

  void merge_max(const BulkNorms& other);
};

struct SurfaceNorms {
  double e_inf = 0.0;
  double e_l2 = 0.0;
  double e_h1 = 0.0;

  void merge_max(const SurfaceNorms& other);
};

/// Norms of a full-lattice error field at one time level.  The max and sum
/// run over M+ with cell weight h^3; the H1 seminorm and the per-component
/// gradient errors use central differences, which read the error on N+.
BulkNorms bulk_norms(const GridSpec& spec, const PointSets& sets,
                     std::span<const double> err);

/// Fixed midpoint sampling grid on the sphere for surface norms, decoupled
/// from the volume mesh:
///   theta_j = (j + 1/2) pi / n_theta,  phi_k = 2 pi k / n_phi.
struct SurfaceGrid {
  int n_theta = 64;
  int n_phi = 128;

  double theta(int j) const;
  double phi(int k) const;
  double d_theta() const;
  double d_phi() const;
};

/// Norms of an error sampled on the surface grid (row j, column k), with
/// quadrature weight sin(theta_j) dtheta dphi and forward differences
/// divided by R dtheta and R sin(theta_j) dphi.  The phi difference wraps
/// periodically; the theta difference skips the last row.
SurfaceNorms surface_norms(const SurfaceGrid& grid, double radius,
                           const Eigen::MatrixXd& err);

double convergence_rate(double e_coarse, double e_fine);

/// All norms of one run plus the rates against the previous (coarser) run.
struct ErrorReport {
  int cells = 0;
  BulkNorms bulk;
  SurfaceNorms surf;
  double cond_normal = 0.0;
  double seconds = 0.0;
};

}  // namespace dpm
