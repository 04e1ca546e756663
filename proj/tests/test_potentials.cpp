#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dpm/ap_solver.hpp"
#include "dpm/grid.hpp"
#include "dpm/potentials.hpp"

using namespace dpm;

namespace {

struct Fixture {
  GridSpec spec;
  PointSets sets;
  FastApSolver solver;
  PotentialOperator pot;

  explicit Fixture(int cells)
      : spec(GridSpec::with_half_width(1.0, 2.0, cells, 0.1)),
        sets(classify_nodes(spec)),
        solver(spec),
        pot(spec, sets, solver) {}
};

std::vector<double> random_density(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> w(n);
  for (double& v : w) v = dist(rng);
  return w;
}

// A lattice field satisfying the homogeneous interior equation on M+: solve
// the auxiliary problem with a right-hand side supported on M- only.
std::vector<double> discrete_solution(const Fixture& fx, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> q(fx.spec.node_count(), 0.0);
  const int n = fx.spec.nodes_per_axis();
  for (int j = 1; j < n - 1; ++j)
    for (int k = 1; k < n - 1; ++k)
      for (int l = 1; l < n - 1; ++l) {
        const std::int32_t idx = fx.spec.index(j, k, l);
        if (fx.sets.has(idx, flag::m_minus)) q[idx] = dist(rng);
      }
  std::vector<double> u(fx.spec.node_count());
  fx.solver.solve(q, u);
  return u;
}

double max_interior_residual(const Fixture& fx, const std::vector<double>& u,
                             const std::vector<double>& f_on_m_plus) {
  double worst = 0.0;
  for (std::size_t m = 0; m < fx.sets.m_plus.size(); ++m) {
    int j, k, l;
    fx.spec.coords(fx.sets.m_plus[m], j, k, l);
    const double lhs =
        apply_shifted_laplacian(fx.spec, u, j, k, l, fx.spec.sigma);
    worst = std::max(worst, std::abs(lhs - f_on_m_plus[m]));
  }
  return worst;
}

}  // namespace

TEST_CASE("particular solution satisfies the interior equation") {
  const Fixture fx(12);
  const std::vector<double> f = random_density(fx.sets.m_plus.size(), 41);
  std::vector<double> u(fx.spec.node_count());
  fx.pot.particular_solution(f, u);
  CHECK(max_interior_residual(fx, u, f) < 1e-10);

  // Zero data gives the zero field.
  std::vector<double> zero(fx.sets.m_plus.size(), 0.0);
  fx.pot.particular_solution(zero, u);
  for (double v : u) CHECK(v == 0.0);
}

TEST_CASE("difference potential is a homogeneous discrete solution") {
  for (int cells : {12, 16}) {
    const Fixture fx(cells);
    const std::vector<double> w = random_density(fx.sets.gamma.size(), 43);
    std::vector<double> pw(fx.spec.node_count());
    fx.pot.apply_potential(w, pw);
    const std::vector<double> zero(fx.sets.m_plus.size(), 0.0);
    CHECK(max_interior_residual(fx, pw, zero) < 1e-10);

    // Zero density, zero potential; scaling is linear.
    std::vector<double> none(fx.sets.gamma.size(), 0.0);
    std::vector<double> p0(fx.spec.node_count());
    fx.pot.apply_potential(none, p0);
    for (double v : p0) CHECK(v == 0.0);
    std::vector<double> w2 = w;
    for (double& v : w2) v *= -2.5;
    std::vector<double> pw2(fx.spec.node_count());
    fx.pot.apply_potential(w2, pw2);
    double diff = 0.0, mag = 0.0;
    for (std::int64_t i = 0; i < fx.spec.node_count(); ++i) {
      diff = std::max(diff, std::abs(pw2[i] + 2.5 * pw[i]));
      mag = std::max(mag, std::abs(pw[i]));
    }
    CHECK(diff < 1e-12 * mag);
  }
}

TEST_CASE("traces gather lattice values in set order") {
  const Fixture fx(12);
  std::vector<double> field(fx.spec.node_count());
  for (std::int64_t i = 0; i < fx.spec.node_count(); ++i)
    field[i] = std::sin(0.01 * static_cast<double>(i));
  const std::vector<double> tg = fx.pot.trace_gamma(field);
  REQUIRE(tg.size() == fx.sets.gamma.size());
  for (std::size_t m = 0; m < tg.size(); ++m)
    CHECK(tg[m] == field[fx.sets.gamma[m]]);
  const std::vector<double> ti = fx.pot.trace_gamma_in(field);
  REQUIRE(ti.size() == fx.sets.gamma_in_positions.size());
  for (std::size_t m = 0; m < ti.size(); ++m)
    CHECK(ti[m] == field[fx.sets.gamma[fx.sets.gamma_in_positions[m]]]);
}

TEST_CASE("density projection composes trace and potential") {
  const Fixture fx(12);
  const std::vector<double> w = random_density(fx.sets.gamma.size(), 47);

  // Oracle: (I - Tr P) w on gamma, then restrict to gamma_in.
  std::vector<double> pw(fx.spec.node_count());
  fx.pot.apply_potential(w, pw);
  const std::vector<double> tr = fx.pot.trace_gamma(pw);
  const std::vector<double> got = fx.pot.project_density(w);
  REQUIRE(got.size() == fx.sets.gamma_in_positions.size());
  for (std::size_t m = 0; m < got.size(); ++m) {
    const std::int32_t p = fx.sets.gamma_in_positions[m];
    CHECK(got[m] == doctest::Approx(w[p] - tr[p]).epsilon(1e-12).scale(1e-12));
  }

  // Linearity.
  const std::vector<double> w2 = random_density(fx.sets.gamma.size(), 48);
  std::vector<double> sum(w.size());
  for (std::size_t m = 0; m < w.size(); ++m) sum[m] = 2.0 * w[m] - w2[m];
  const std::vector<double> a = fx.pot.project_density(w);
  const std::vector<double> b = fx.pot.project_density(w2);
  const std::vector<double> c = fx.pot.project_density(sum);
  for (std::size_t m = 0; m < c.size(); ++m)
    CHECK(c[m] ==
          doctest::Approx(2.0 * a[m] - b[m]).epsilon(1e-11).scale(1e-11));

  // Zero density projects to zero.
  const std::vector<double> zero(fx.sets.gamma.size(), 0.0);
  for (double v : fx.pot.project_density(zero)) CHECK(v == 0.0);
}

TEST_CASE("boundary projection is idempotent") {
  const Fixture fx(12);
  const std::vector<double> w = random_density(fx.sets.gamma.size(), 51);
  // P w = trace of the potential; applying the projection to it must give
  // zero residual on gamma_in (P^2 = P).
  std::vector<double> pw(fx.spec.node_count());
  fx.pot.apply_potential(w, pw);
  const std::vector<double> tr = fx.pot.trace_gamma(pw);
  double scale = 0.0;
  for (double v : tr) scale = std::max(scale, std::abs(v));
  for (double v : fx.pot.project_density(tr))
    CHECK(std::abs(v) < 1e-10 * scale);
}

TEST_CASE("traces of discrete solutions satisfy the boundary equation") {
  for (int cells : {12, 16}) {
    const Fixture fx(cells);
    const std::vector<double> u = discrete_solution(fx, 60 + cells);
    const std::vector<double> ug = fx.pot.trace_gamma(u);
    const std::vector<double> gf(fx.sets.gamma.size(), 0.0);
    double scale = 0.0;
    for (double v : ug) scale = std::max(scale, std::abs(v));
    for (bool reduced : {false, true}) {
      const std::vector<double> res = fx.pot.bep_residual(ug, gf, reduced);
      CHECK(res.size() == (reduced ? fx.sets.gamma_in_positions.size()
                                   : fx.sets.gamma.size()));
      for (double v : res) CHECK(std::abs(v) < 1e-10 * scale);
    }
  }
}

TEST_CASE("boundary equation rejects a generic trace") {
  const Fixture fx(12);
  const std::vector<double> ug = random_density(fx.sets.gamma.size(), 71);
  const std::vector<double> gf(fx.sets.gamma.size(), 0.0);
  const std::vector<double> res = fx.pot.bep_residual(ug, gf, true);
  double worst = 0.0;
  for (double v : res) worst = std::max(worst, std::abs(v));
  CHECK(worst > 1e-3);
}

TEST_CASE("particular solution shifts the boundary equation consistently") {
  const Fixture fx(12);
  // u = particular solution of F plus a homogeneous discrete solution; its
  // trace satisfies u_gamma - Tr P u_gamma = gf.
  const std::vector<double> f = random_density(fx.sets.m_plus.size(), 81);
  std::vector<double> uf(fx.spec.node_count());
  fx.pot.particular_solution(f, uf);
  const std::vector<double> gf = fx.pot.trace_gamma(uf);
  const std::vector<double> uh = discrete_solution(fx, 82);
  std::vector<double> ug(fx.sets.gamma.size());
  double scale = 0.0;
  for (std::size_t m = 0; m < ug.size(); ++m) {
    ug[m] = uf[fx.sets.gamma[m]] + uh[fx.sets.gamma[m]];
    scale = std::max(scale, std::abs(ug[m]));
  }
  for (double v : fx.pot.bep_residual(ug, gf, true))
    CHECK(std::abs(v) < 1e-10 * scale);
}

TEST_CASE("column projection matches the vector projection") {
  const Fixture fx(12);
  const std::size_t ng = fx.sets.gamma.size();
  Eigen::MatrixXd cols(ng, 5);
  std::mt19937 rng(91);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (std::size_t m = 0; m < ng; ++m)
    for (int c = 0; c < 5; ++c) cols(m, c) = dist(rng);
  const Eigen::MatrixXd got = fx.pot.project_columns(cols);
  REQUIRE(got.rows() ==
          static_cast<Eigen::Index>(fx.sets.gamma_in_positions.size()));
  REQUIRE(got.cols() == 5);
  for (int c = 0; c < 5; ++c) {
    std::vector<double> w(ng);
    for (std::size_t m = 0; m < ng; ++m) w[m] = cols(m, c);
    const std::vector<double> ref = fx.pot.project_density(w);
    for (std::size_t m = 0; m < ref.size(); ++m)
      CHECK(got(m, c) ==
            doctest::Approx(ref[m]).epsilon(1e-13).scale(1e-13));
  }
  // Deterministic under repetition (parallel reduction order is fixed).
  const Eigen::MatrixXd again = fx.pot.project_columns(cols);
  CHECK((got - again).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("reduced projection has full row rank on the interior boundary") {
  const Fixture fx(12);
  const std::size_t ng = fx.sets.gamma.size();
  const std::size_t nin = fx.sets.gamma_in_positions.size();
  REQUIRE(nin < ng);
  CHECK(nin < fx.sets.count_m_plus);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(ng, ng);
  const Eigen::MatrixXd proj = fx.pot.project_columns(id);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(proj);
  const Eigen::VectorXd sv = svd.singularValues();
  CHECK(sv(0) > 0.0);
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-10 * sv(0)) ++rank;
  CHECK(rank == nin);
}
