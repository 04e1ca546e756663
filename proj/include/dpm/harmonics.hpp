#pragma once

#include <span>
#include <vector>

namespace dpm {

/// Associated Legendre function P_l^m(x) without the Condon-Shortley phase
/// and without normalization, m >= 0, by upward recurrence in l.
double legendre_p(int l, int m, double x);

/// Real unnormalized spherical harmonics on the sphere of radius R with a
/// 1-based flat index
///     kappa = l^2 + 2m + 1   (m >= 0)
///     kappa = l^2 + 2|m|     (m < 0)
/// so a full basis through degree l_max has (l_max+1)^2 entries.  The basis
/// functions are eigenfunctions of the surface Laplacian with eigenvalue
/// -l(l+1)/R^2.
class SpectralBasis {
 public:
  SpectralBasis(int size, double radius);

  static int kappa(int l, int m);  // throws on |m| > l
  void degree_order(int kappa, int& l, int& m) const;

  int size() const { return size_; }
  int max_degree() const { return max_degree_; }
  double radius() const { return radius_; }

  /// Surface-Laplacian eigenvalue -l(l+1)/R^2 for the given flat index.
  double lb_eigenvalue(int kappa) const;

  double evaluate(int kappa, double theta, double phi) const;

  /// All basis values at one point, out[kappa - 1] = phi_kappa(theta, phi).
  /// Much cheaper than size() calls to evaluate().
  void evaluate_all(double theta, double phi, std::span<double> out) const;

 private:
  int size_;
  int max_degree_;
  double radius_;
  std::vector<int> degree_;  // l per flat index
  std::vector<int> order_;   // m per flat index
};

}  // namespace dpm
