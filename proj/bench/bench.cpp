// Throughput comparison between the serial reference paths and the
// OpenMP-parallel kernels, plus the fast transform solver against the dense
// factorization on a grid small enough for both.  Each comparison verifies
// that the two paths agree before reporting timings.
#include <omp.h>

#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "dpm/ap_solver.hpp"
#include "dpm/coupling.hpp"
#include "dpm/grid.hpp"
#include "dpm/harmonics.hpp"
#include "dpm/potentials.hpp"

using namespace dpm;

namespace {

template <typename F>
double best_of(int reps, F&& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool match) {
  std::printf("%-28s %10.4f s %10.4f s %7.2fx   %s\n", name, serial, parallel,
              serial / parallel, match ? "outputs match" : "MISMATCH");
}

}  // namespace

int main() {
  const int threads = omp_get_max_threads();
  std::printf("threads: %d\n", threads);
  std::printf("%-28s %12s %12s %9s\n", "kernel", "1 thread", "parallel",
              "speedup");

  // Node classification on the production mesh.
  {
    const GridSpec spec = GridSpec::standard(0.5, 63, 0.1);
    omp_set_num_threads(1);
    PointSets serial_sets;
    const double ts =
        best_of(3, [&] { serial_sets = classify_nodes(spec); });
    omp_set_num_threads(threads);
    PointSets par_sets;
    const double tp = best_of(3, [&] { par_sets = classify_nodes(spec); });
    const bool match = serial_sets.flags == par_sets.flags &&
                       serial_sets.gamma == par_sets.gamma;
    report("classify_nodes 63^3", ts, tp, match);
  }

  // Basis tabulation at the boundary nodes.
  {
    const GridSpec spec = GridSpec::standard(0.5, 63, 0.1);
    const PointSets sets = classify_nodes(spec);
    const std::vector<BoundaryNode> feet = foot_points(spec, sets);
    const SpectralBasis basis(400, 0.5);
    omp_set_num_threads(1);
    BasisTable serial_table;
    const double ts =
        best_of(3, [&] { serial_table = BasisTable::build(basis, feet); });
    omp_set_num_threads(threads);
    BasisTable par_table;
    const double tp =
        best_of(3, [&] { par_table = BasisTable::build(basis, feet); });
    const bool match =
        (serial_table.phi - par_table.phi).cwiseAbs().maxCoeff() == 0.0;
    report("basis table 63^3 L=400", ts, tp, match);
  }

  // Column projection, the dominant precompute cost.  The serial reference
  // is the one-column projection applied column by column.
  {
    const GridSpec spec = GridSpec::standard(0.5, 31, 0.1);
    const PointSets sets = classify_nodes(spec);
    const FastApSolver solver(spec);
    const PotentialOperator pot(spec, sets, solver);
    const int ncols = 32;
    Eigen::MatrixXd cols(sets.gamma.size(), ncols);
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (Eigen::Index m = 0; m < cols.rows(); ++m)
      for (int c = 0; c < ncols; ++c) cols(m, c) = dist(rng);

    Eigen::MatrixXd serial_out(sets.gamma_in_positions.size(), ncols);
    const double ts = best_of(2, [&] {
      std::vector<double> density(sets.gamma.size());
      for (int c = 0; c < ncols; ++c) {
        for (Eigen::Index m = 0; m < cols.rows(); ++m)
          density[m] = cols(m, c);
        const std::vector<double> proj = pot.project_density(density);
        for (std::size_t m = 0; m < proj.size(); ++m)
          serial_out(static_cast<Eigen::Index>(m), c) = proj[m];
      }
    });
    omp_set_num_threads(threads);
    Eigen::MatrixXd par_out;
    const double tp = best_of(2, [&] { par_out = pot.project_columns(cols); });
    const bool match =
        (serial_out - par_out).cwiseAbs().maxCoeff() < 1e-13;
    report("project 32 columns 31^3", ts, tp, match);
  }

  // Fast transform solver against the dense Cholesky reference.
  {
    const GridSpec spec = GridSpec::with_half_width(1.0, 2.0, 16, 0.1);
    const FastApSolver solver(spec);
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> q(spec.node_count(), 0.0);
    for (int j = 1; j < spec.cells; ++j)
      for (int k = 1; k < spec.cells; ++k)
        for (int l = 1; l < spec.cells; ++l)
          q[spec.index(j, k, l)] = dist(rng);
    std::vector<double> dense;
    const double ts = best_of(2, [&] { dense = solve_ap_dense(spec, q); });
    std::vector<double> fast(spec.node_count());
    const double tp = best_of(2, [&] { solver.solve(q, fast); });
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < fast.size(); ++i) {
      num = std::max(num, std::abs(fast[i] - dense[i]));
      den = std::max(den, std::abs(dense[i]));
    }
    report("AP solve 16^3 dense/fast", ts, tp, num / den < 1e-12);
  }

  return 0;
}
