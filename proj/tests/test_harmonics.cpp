#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dpm/harmonics.hpp"

using namespace dpm;

namespace {

// Closed-form associated Legendre functions (no phase, unnormalized).
double legendre_ref(int l, int m, double x) {
  const double s = std::sqrt(1.0 - x * x);
  switch (l * 10 + m) {
    case 0: return 1.0;
    case 10: return x;
    case 11: return s;
    case 20: return 0.5 * (3 * x * x - 1);
    case 21: return 3 * x * s;
    case 22: return 3 * (1 - x * x);
    case 30: return 0.5 * (5 * x * x * x - 3 * x);
    case 31: return 1.5 * (5 * x * x - 1) * s;
    case 32: return 15 * x * (1 - x * x);
    case 33: return 15 * s * s * s;
    case 40: return 0.125 * (35 * x * x * x * x - 30 * x * x + 3);
    case 41: return 2.5 * (7 * x * x * x - 3 * x) * s;
    case 42: return 7.5 * (7 * x * x - 1) * (1 - x * x);
    case 43: return 105 * x * s * s * s;
    case 44: return 105 * s * s * s * s;
  }
  return 0.0;
}

}  // namespace

TEST_CASE("flat index from degree and order") {
  CHECK(SpectralBasis::kappa(0, 0) == 1);
  CHECK(SpectralBasis::kappa(1, 0) == 2);
  CHECK(SpectralBasis::kappa(1, -1) == 3);
  CHECK(SpectralBasis::kappa(1, 1) == 4);
  CHECK_THROWS(SpectralBasis::kappa(1, 2));
  CHECK_THROWS(SpectralBasis::kappa(2, -3));

  // Bijection onto 1..(l_max+1)^2 through degree 25.
  std::map<int, int> seen;
  for (int l = 0; l <= 25; ++l)
    for (int m = -l; m <= l; ++m) {
      const int kappa = SpectralBasis::kappa(l, m);
      CHECK(kappa >= 1);
      CHECK(kappa <= 26 * 26);
      CHECK(seen.insert({kappa, l}).second);
    }
  CHECK(seen.size() == 26u * 26u);

  // Round trip through the basis.
  const SpectralBasis basis(529, 1.0);
  for (int kappa = 1; kappa <= 529; ++kappa) {
    int l, m;
    basis.degree_order(kappa, l, m);
    CHECK(SpectralBasis::kappa(l, m) == kappa);
  }
}

TEST_CASE("basis size must be a full set of degrees") {
  CHECK_NOTHROW(SpectralBasis(9, 0.5));
  CHECK_NOTHROW(SpectralBasis(400, 1.0));
  CHECK_THROWS(SpectralBasis(10, 1.0));
  CHECK_THROWS(SpectralBasis(0, 1.0));
  CHECK(SpectralBasis(9, 0.5).max_degree() == 2);
  CHECK(SpectralBasis(400, 0.5).max_degree() == 19);
  CHECK(SpectralBasis(529, 1.0).max_degree() == 22);
}

TEST_CASE("recurrence matches closed-form Legendre functions") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double x = dist(rng);
    for (int l = 0; l <= 4; ++l)
      for (int m = 0; m <= l; ++m) {
        const double want = legendre_ref(l, m, x);
        CHECK(legendre_p(l, m, x) ==
              doctest::Approx(want).epsilon(1e-13).scale(std::abs(want) + 1));
      }
  }
}

TEST_CASE("pointwise basis values") {
  const SpectralBasis basis(49, 1.0);
  CHECK(basis.evaluate(1, 0.3, 1.1) == doctest::Approx(1.0));    // constant
  CHECK(basis.evaluate(2, 0.0, 0.0) == doctest::Approx(1.0));    // P1(1)
  const double th = M_PI / 3, ph = M_PI / 4;
  CHECK(basis.evaluate(SpectralBasis::kappa(2, 1), th, ph) ==
        doctest::Approx(3 * std::cos(th) * std::sin(th) * std::cos(ph))
            .epsilon(1e-14));
  CHECK(basis.evaluate(SpectralBasis::kappa(2, -1), th, ph) ==
        doctest::Approx(3 * std::cos(th) * std::sin(th) * std::sin(ph))
            .epsilon(1e-14));
}

TEST_CASE("batch evaluation agrees with single evaluation") {
  const SpectralBasis basis(529, 1.0);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> ath(0.0, M_PI), aph(0.0, 2 * M_PI);
  std::vector<double> out(529);
  for (int trial = 0; trial < 20; ++trial) {
    const double th = ath(rng), ph = aph(rng);
    basis.evaluate_all(th, ph, out);
    for (int kappa = 1; kappa <= 529; kappa += 13)
      CHECK(out[kappa - 1] ==
            doctest::Approx(basis.evaluate(kappa, th, ph)).epsilon(1e-13));
  }
}

TEST_CASE("surface-Laplacian eigenvalues") {
  const SpectralBasis unit(49, 1.0);
  CHECK(unit.lb_eigenvalue(1) == 0.0);
  CHECK(unit.lb_eigenvalue(2) == doctest::Approx(-2.0));
  CHECK(unit.lb_eigenvalue(SpectralBasis::kappa(1, 1)) ==
        doctest::Approx(-2.0));

  // Angular finite-difference oracle at R = 0.5, degree 3: the discrete
  // Laplace-Beltrami of the basis function must equal -l(l+1)/R^2 times it.
  const double R = 0.5;
  const SpectralBasis half(49, R);
  const int kappa = SpectralBasis::kappa(3, 2);
  REQUIRE(half.lb_eigenvalue(kappa) == doctest::Approx(-12.0 / (R * R)));
  auto f = [&](double th, double ph) { return half.evaluate(kappa, th, ph); };
  const double d = 1e-2;
  auto second = [&](auto g, double x) {
    return (-g(x + 2 * d) + 16 * g(x + d) - 30 * g(x) + 16 * g(x - d) -
            g(x - 2 * d)) /
           (12 * d * d);
  };
  auto first = [&](auto g, double x) {
    return (-g(x + 2 * d) + 8 * g(x + d) - 8 * g(x - d) + g(x - 2 * d)) /
           (12 * d);
  };
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> ath(0.5, M_PI - 0.5),
      aph(0.0, 2 * M_PI);
  for (int trial = 0; trial < 25; ++trial) {
    const double th = ath(rng), ph = aph(rng);
    auto in_th = [&](double t) { return f(t, ph); };
    auto in_ph = [&](double p) { return f(th, p); };
    const double st = std::sin(th);
    const double lap = (second(in_th, th) +
                        std::cos(th) / st * first(in_th, th) +
                        second(in_ph, ph) / (st * st)) /
                       (R * R);
    const double want = half.lb_eigenvalue(kappa) * f(th, ph);
    CHECK(lap == doctest::Approx(want).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("orthogonality under the sphere measure through degree five") {
  const SpectralBasis basis(36, 1.0);
  const int nth = 800, nph = 64;  // Simpson in theta, exact sampling in phi
  std::vector<double> vals(36);
  std::vector<std::vector<double>> gram(36, std::vector<double>(36, 0.0));
  for (int j = 0; j <= nth; ++j) {
    const double th = j * M_PI / nth;
    const double sw = (j == 0 || j == nth) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    for (int k = 0; k < nph; ++k) {
      const double ph = 2 * M_PI * k / nph;
      basis.evaluate_all(th, ph, vals);
      const double w = sw * std::sin(th);
      for (int a = 0; a < 36; ++a)
        for (int b = a; b < 36; ++b) gram[a][b] += w * vals[a] * vals[b];
    }
  }
  for (int a = 0; a < 36; ++a)
    for (int b = a + 1; b < 36; ++b) {
      const double denom = std::sqrt(gram[a][a] * gram[b][b]);
      CHECK(std::abs(gram[a][b]) / denom < 1e-8);
    }
}

TEST_CASE("periodicity and pole finiteness") {
  const SpectralBasis basis(64, 1.0);
  for (int kappa = 1; kappa <= 64; ++kappa) {
    CHECK(basis.evaluate(kappa, 1.0, 0.7) ==
          doctest::Approx(basis.evaluate(kappa, 1.0, 0.7 + 2 * M_PI))
              .epsilon(1e-12));
    CHECK(std::isfinite(basis.evaluate(kappa, 0.0, 0.0)));
    CHECK(std::isfinite(basis.evaluate(kappa, M_PI, 1.0)));
  }
}
