#include "dpm/harmonics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpm {

double legendre_p(int l, int m, double x) {
  if (m < 0 || m > l) throw std::invalid_argument("need 0 <= m <= l");
  // Diagonal seed P_m^m = (2m-1)!! (1-x^2)^{m/2}.
  double pmm = 1.0;
  if (m > 0) {
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    double fact = 1.0;
    for (int i = 0; i < m; ++i) {
      pmm *= fact * s;
      fact += 2.0;
    }
  }
  if (l == m) return pmm;
  double pm1 = x * (2 * m + 1) * pmm;  // P_{m+1}^m
  if (l == m + 1) return pm1;
  double p = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    p = (x * (2 * ll - 1) * pm1 - (ll + m - 1) * pmm) / (ll - m);
    pmm = pm1;
    pm1 = p;
  }
  return p;
}

int SpectralBasis::kappa(int l, int m) {
  if (l < 0 || std::abs(m) > l)
    throw std::invalid_argument("harmonic order out of range: l=" +
                                std::to_string(l) +
                                " m=" + std::to_string(m));
  return (m >= 0) ? l * l + 2 * m + 1 : l * l + 2 * (-m);
}

SpectralBasis::SpectralBasis(int size, double radius)
    : size_(size), radius_(radius) {
  if (radius <= 0.0) throw std::invalid_argument("radius must be positive");
  const int lmax1 = static_cast<int>(std::lround(std::sqrt(double(size))));
  if (size <= 0 || lmax1 * lmax1 != size)
    throw std::invalid_argument(
        "basis size must be a perfect square (l_max+1)^2, got " +
        std::to_string(size));
  max_degree_ = lmax1 - 1;
  degree_.assign(size, 0);
  order_.assign(size, 0);
  for (int l = 0; l <= max_degree_; ++l)
    for (int m = -l; m <= l; ++m) {
      const int k = kappa(l, m) - 1;
      degree_[k] = l;
      order_[k] = m;
    }
}

void SpectralBasis::degree_order(int kappa, int& l, int& m) const {
  if (kappa < 1 || kappa > size_)
    throw std::out_of_range("kappa out of range");
  l = degree_[kappa - 1];
  m = order_[kappa - 1];
}

double SpectralBasis::lb_eigenvalue(int kappa) const {
  if (kappa < 1 || kappa > size_)
    throw std::out_of_range("kappa out of range");
  const double l = degree_[kappa - 1];
  return -l * (l + 1.0) / (radius_ * radius_);
}

double SpectralBasis::evaluate(int kappa, double theta, double phi) const {
  int l, m;
  degree_order(kappa, l, m);
  const double p = legendre_p(l, std::abs(m), std::cos(theta));
  if (m > 0) return p * std::cos(m * phi);
  if (m < 0) return p * std::sin(-m * phi);
  return p;
}

void SpectralBasis::evaluate_all(double theta, double phi,
                                 std::span<double> out) const {
  if (static_cast<int>(out.size()) != size_)
    throw std::invalid_argument("output span size mismatch");
  const double x = std::cos(theta);
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  const int lmax = max_degree_;

  // Legendre table for all (l, m >= 0) by the same recurrences as
  // legendre_p, one diagonal at a time.
  std::vector<double> table(static_cast<std::size_t>(lmax + 1) * (lmax + 1));
  auto at = [&](int l, int m) -> double& {
    return table[static_cast<std::size_t>(l) * (lmax + 1) + m];
  };
  double pmm = 1.0;
  double fact = 1.0;
  for (int m = 0; m <= lmax; ++m) {
    at(m, m) = pmm;
    if (m + 1 <= lmax) at(m + 1, m) = x * (2 * m + 1) * pmm;
    for (int l = m + 2; l <= lmax; ++l)
      at(l, m) =
          (x * (2 * l - 1) * at(l - 1, m) - (l + m - 1) * at(l - 2, m)) /
          (l - m);
    pmm *= fact * s;
    fact += 2.0;
  }

  std::vector<double> cosm(lmax + 1), sinm(lmax + 1);
  for (int m = 0; m <= lmax; ++m) {
    cosm[m] = std::cos(m * phi);
    sinm[m] = std::sin(m * phi);
  }

  for (int k = 0; k < size_; ++k) {
    const int l = degree_[k];
    const int m = order_[k];
    const double p = at(l, std::abs(m));
    out[k] = (m > 0) ? p * cosm[m] : (m < 0) ? p * sinm[-m] : p;
  }
}

}  // namespace dpm
