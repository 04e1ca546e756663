#include "dpm/ap_solver.hpp"

#include <fftw3.h>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace dpm {

double apply_shifted_laplacian(const GridSpec& spec,
                               std::span<const double> field, int j, int k,
                               int l, double sigma) {
  if (!spec.interior(j, k, l))
    throw std::out_of_range("7-point stencil leaves the lattice");
  const double inv_h2 = 1.0 / (spec.h * spec.h);
  const double c = field[spec.index(j, k, l)];
  const double sum = field[spec.index(j - 1, k, l)] +
                     field[spec.index(j + 1, k, l)] +
                     field[spec.index(j, k - 1, l)] +
                     field[spec.index(j, k + 1, l)] +
                     field[spec.index(j, k, l - 1)] +
                     field[spec.index(j, k, l + 1)];
  return (sum - 6.0 * c) * inv_h2 - sigma * c;
}

std::vector<double> apply_shifted_laplacian(const GridSpec& spec,
                                            std::span<const double> field,
                                            std::span<const std::int32_t> nodes,
                                            double sigma) {
  std::vector<double> out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    int j, k, l;
    spec.coords(nodes[i], j, k, l);
    out[i] = apply_shifted_laplacian(spec, field, j, k, l, sigma);
  }
  return out;
}

namespace {
std::atomic<std::int64_t> g_solve_count{0};
std::mutex g_planner_mutex;  // the FFTW planner is not thread-safe
}  // namespace

struct FastApSolver::Impl {
  fftw_plan plan = nullptr;
  double* buffer = nullptr;          // n^3 interior values, in-place transform
  std::vector<double> axis_eigs;     // 1-D Dirichlet eigenvalues
  double norm = 0.0;                 // DST-I round trip scale
  std::atomic<std::int64_t> solves{0};

  ~Impl() {
    if (plan) fftw_destroy_plan(plan);
    if (buffer) fftw_free(buffer);
  }
};

FastApSolver::FastApSolver(const GridSpec& spec)
    : spec_(spec), impl_(std::make_unique<Impl>()) {
  if (spec.cells < 2) throw std::invalid_argument("grid too small");
  const int n = spec.cells - 1;  // interior nodes per axis
  impl_->buffer = fftw_alloc_real(static_cast<std::size_t>(n) * n * n);
  {
    // FFTW_ESTIMATE keeps planning deterministic, so identical inputs give
    // bit-identical solutions across runs.
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    impl_->plan = fftw_plan_r2r_3d(n, n, n, impl_->buffer, impl_->buffer,
                                   FFTW_RODFT00, FFTW_RODFT00, FFTW_RODFT00,
                                   FFTW_ESTIMATE);
  }
  if (!impl_->plan) throw std::runtime_error("FFTW plan creation failed");
  impl_->axis_eigs.resize(n);
  const double inv_h2 = 1.0 / (spec.h * spec.h);
  for (int p = 1; p <= n; ++p)
    impl_->axis_eigs[p - 1] =
        (2.0 * std::cos(p * M_PI / spec.cells) - 2.0) * inv_h2;
  const double m = 2.0 * spec.cells;  // unnormalized DST-I applied twice
  impl_->norm = 1.0 / (m * m * m);
}

FastApSolver::~FastApSolver() = default;
FastApSolver::FastApSolver(FastApSolver&&) noexcept = default;
FastApSolver& FastApSolver::operator=(FastApSolver&&) noexcept = default;

std::int64_t FastApSolver::interior_count() const {
  const std::int64_t n = spec_.cells - 1;
  return n * n * n;
}

std::shared_ptr<double[]> FastApSolver::make_scratch() const {
  double* p = fftw_alloc_real(static_cast<std::size_t>(interior_count()));
  return std::shared_ptr<double[]>(p, [](double* q) { fftw_free(q); });
}

void FastApSolver::solve(std::span<const double> q, std::span<double> w) const {
  solve_buffered(q, w, impl_->buffer);
}

void FastApSolver::solve_buffered(std::span<const double> q,
                                  std::span<double> w, double* scratch) const {
  const int nn = spec_.nodes_per_axis();
  const int n = spec_.cells - 1;
  if (static_cast<std::int64_t>(q.size()) != spec_.node_count() ||
      static_cast<std::int64_t>(w.size()) != spec_.node_count())
    throw std::invalid_argument("field size mismatch");

  // Gather the interior right-hand side.
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) {
      const double* src = &q[spec_.index(j, k, 1)];
      double* dst = &scratch[(static_cast<std::size_t>(j - 1) * n + (k - 1)) * n];
      for (int l = 0; l < n; ++l) {
        const double v = src[l];
        if (!std::isfinite(v))
          throw std::invalid_argument("non-finite right-hand side entry");
        dst[l] = v;
      }
    }

  fftw_execute_r2r(impl_->plan, scratch, scratch);

  const double* eig = impl_->axis_eigs.data();
  const double norm = impl_->norm;
  const double sigma = spec_.sigma;
  for (int a = 0; a < n; ++a) {
    const double ea = eig[a] - sigma;
    for (int b = 0; b < n; ++b) {
      const double eab = ea + eig[b];
      double* line = &scratch[(static_cast<std::size_t>(a) * n + b) * n];
      for (int c = 0; c < n; ++c) line[c] *= norm / (eab + eig[c]);
    }
  }

  fftw_execute_r2r(impl_->plan, scratch, scratch);

  std::fill(w.begin(), w.end(), 0.0);
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k) {
      const double* src =
          &scratch[(static_cast<std::size_t>(j - 1) * n + (k - 1)) * n];
      double* dst = &w[spec_.index(j, k, 1)];
      for (int l = 0; l < n; ++l) dst[l] = src[l];
    }

  impl_->solves.fetch_add(1, std::memory_order_relaxed);
  g_solve_count.fetch_add(1, std::memory_order_relaxed);
}

std::int64_t FastApSolver::solves() const {
  return impl_->solves.load(std::memory_order_relaxed);
}

std::int64_t FastApSolver::total_solves() {
  return g_solve_count.load(std::memory_order_relaxed);
}

std::vector<double> solve_ap_dense(const GridSpec& spec,
                                   std::span<const double> q) {
  if (spec.cells > 20)
    throw std::invalid_argument("dense reference solver limited to N <= 20");
  const int n = spec.cells - 1;
  const std::int64_t unknowns = static_cast<std::int64_t>(n) * n * n;
  const double inv_h2 = 1.0 / (spec.h * spec.h);

  auto row_of = [n](int j, int k, int l) {
    return ((j - 1) * n + (k - 1)) * n + (l - 1);
  };

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(7 * unknowns));
  Eigen::VectorXd rhs(unknowns);
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l) {
        const int r = row_of(j, k, l);
        rhs[r] = q[spec.index(j, k, l)];
        if (!std::isfinite(rhs[r]))
          throw std::invalid_argument("non-finite right-hand side entry");
        trips.emplace_back(r, r, -6.0 * inv_h2 - spec.sigma);
        if (j > 1) trips.emplace_back(r, row_of(j - 1, k, l), inv_h2);
        if (j < n) trips.emplace_back(r, row_of(j + 1, k, l), inv_h2);
        if (k > 1) trips.emplace_back(r, row_of(j, k - 1, l), inv_h2);
        if (k < n) trips.emplace_back(r, row_of(j, k + 1, l), inv_h2);
        if (l > 1) trips.emplace_back(r, row_of(j, k, l - 1), inv_h2);
        if (l < n) trips.emplace_back(r, row_of(j, k, l + 1), inv_h2);
      }
  Eigen::SparseMatrix<double> mat(unknowns, unknowns);
  mat.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(mat);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("dense reference factorization failed");
  Eigen::VectorXd sol = solver.solve(rhs);

  std::vector<double> w(static_cast<std::size_t>(spec.node_count()), 0.0);
  for (int j = 1; j <= n; ++j)
    for (int k = 1; k <= n; ++k)
      for (int l = 1; l <= n; ++l)
        w[spec.index(j, k, l)] = sol[row_of(j, k, l)];
  return w;
}

}  // namespace dpm
