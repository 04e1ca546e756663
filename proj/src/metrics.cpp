#include "dpm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpm {

void BulkNorms::merge_max(const BulkNorms& o) {
  e_inf = std::max(e_inf, o.e_inf);
  e_l2 = std::max(e_l2, o.e_l2);
  e_h1 = std::max(e_h1, o.e_h1);
  e_grad_x = std::max(e_grad_x, o.e_grad_x);
  e_grad_y = std::max(e_grad_y, o.e_grad_y);
  e_grad_z = std::max(e_grad_z, o.e_grad_z);
}

void SurfaceNorms::merge_max(const SurfaceNorms& o) {
  e_inf = std::max(e_inf, o.e_inf);
  e_l2 = std::max(e_l2, o.e_l2);
  e_h1 = std::max(e_h1, o.e_h1);
}

BulkNorms bulk_norms(const GridSpec& spec, const PointSets& sets,
                     std::span<const double> err) {
  if (static_cast<std::int64_t>(err.size()) != spec.node_count())
    throw std::invalid_argument("error field must cover the full lattice");
  const double w = spec.h * spec.h * spec.h;
  const double inv_2h = 1.0 / (2.0 * spec.h);
  BulkNorms out;
  double sum2 = 0.0, sumh1 = 0.0;
  for (std::int32_t idx : sets.m_plus) {
    int j, k, l;
    spec.coords(idx, j, k, l);
    const double e = err[idx];
    const double dx = (err[spec.index(j + 1, k, l)] -
                       err[spec.index(j - 1, k, l)]) * inv_2h;
    const double dy = (err[spec.index(j, k + 1, l)] -
                       err[spec.index(j, k - 1, l)]) * inv_2h;
    const double dz = (err[spec.index(j, k, l + 1)] -
                       err[spec.index(j, k, l - 1)]) * inv_2h;
    out.e_inf = std::max(out.e_inf, std::abs(e));
    out.e_grad_x = std::max(out.e_grad_x, std::abs(dx));
    out.e_grad_y = std::max(out.e_grad_y, std::abs(dy));
    out.e_grad_z = std::max(out.e_grad_z, std::abs(dz));
    sum2 += e * e;
    sumh1 += e * e + dx * dx + dy * dy + dz * dz;
  }
  out.e_l2 = std::sqrt(sum2 * w);
  out.e_h1 = std::sqrt(sumh1 * w);
  return out;
}

double SurfaceGrid::theta(int j) const { return (j + 0.5) * M_PI / n_theta; }
double SurfaceGrid::phi(int k) const { return 2.0 * M_PI * k / n_phi; }
double SurfaceGrid::d_theta() const { return M_PI / n_theta; }
double SurfaceGrid::d_phi() const { return 2.0 * M_PI / n_phi; }

SurfaceNorms surface_norms(const SurfaceGrid& grid, double radius,
                           const Eigen::MatrixXd& err) {
  if (err.rows() != grid.n_theta || err.cols() != grid.n_phi)
    throw std::invalid_argument("error grid shape mismatch");
  const double dth = grid.d_theta();
  const double dph = grid.d_phi();
  SurfaceNorms out;
  double sum2 = 0.0, sumh1 = 0.0;
  for (int j = 0; j < grid.n_theta; ++j) {
    const double sj = std::sin(grid.theta(j));
    const double w = sj * dth * dph;
    for (int k = 0; k < grid.n_phi; ++k) {
      const double e = err(j, k);
      out.e_inf = std::max(out.e_inf, std::abs(e));
      sum2 += e * e * w;
      double grad2 = 0.0;
      if (j + 1 < grid.n_theta) {
        const double dt = (err(j + 1, k) - e) / (radius * dth);
        grad2 += dt * dt;
      }
      const double dp =
          (err(j, (k + 1) % grid.n_phi) - e) / (radius * sj * dph);
      grad2 += dp * dp;
      sumh1 += (e * e + grad2) * w;
    }
  }
  out.e_l2 = std::sqrt(sum2);
  out.e_h1 = std::sqrt(sumh1);
  return out;
}

double convergence_rate(double e_coarse, double e_fine) {
  return std::log2(e_coarse / e_fine);
}

}  // namespace dpm
