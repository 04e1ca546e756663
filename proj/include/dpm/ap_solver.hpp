#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "dpm/grid.hpp"

namespace dpm {

/// Applies the shifted 7-point operator (Delta_h - sigma*I) to `field` at a
/// single interior node.  Throws std::out_of_range if the stencil would leave
/// the lattice.
double apply_shifted_laplacian(const GridSpec& spec,
                               std::span<const double> field, int j, int k,
                               int l, double sigma);

/// Same, vectorized over a node list.
std::vector<double> apply_shifted_laplacian(const GridSpec& spec,
                                            std::span<const double> field,
                                            std::span<const std::int32_t> nodes,
                                            double sigma);

/// Direct solver for the discrete auxiliary problem
///     (Delta_h - sigma*I) w = q   on the cube interior,
///     w = 0                       on the cube faces,
/// by diagonalization with the type-I discrete sine transform per axis.
/// Grid sizes need not be powers of two.
class FastApSolver {
 public:
  explicit FastApSolver(const GridSpec& spec);
  ~FastApSolver();
  FastApSolver(FastApSolver&&) noexcept;
  FastApSolver& operator=(FastApSolver&&) noexcept;
  FastApSolver(const FastApSolver&) = delete;
  FastApSolver& operator=(const FastApSolver&) = delete;

  /// q and w are full-lattice arrays of (cells+1)^3 values; q is read on the
  /// cube interior only and w is written everywhere (zero on the faces).
  /// Rejects non-finite right-hand sides.  Not safe for concurrent calls on
  /// one solver; use `solve_buffered` with per-thread scratch instead.
  void solve(std::span<const double> q, std::span<double> w) const;

  /// Thread-safe variant: `scratch` must hold interior_count() doubles
  /// allocated by make_scratch().
  void solve_buffered(std::span<const double> q, std::span<double> w,
                      double* scratch) const;

  std::int64_t interior_count() const;
  std::shared_ptr<double[]> make_scratch() const;

  const GridSpec& spec() const { return spec_; }

  /// Number of solves performed by this instance; the time loop asserts its
  /// per-step budget against this.
  std::int64_t solves() const;

  /// Process-wide solve counter across all instances.
  static std::int64_t total_solves();

 private:
  struct Impl;
  GridSpec spec_;
  std::unique_ptr<Impl> impl_;
};

/// Reference solver: explicit sparse assembly and direct factorization.
/// Restricted to cells <= 20; same contract as FastApSolver::solve.
std::vector<double> solve_ap_dense(const GridSpec& spec,
                                   std::span<const double> q);

}  // namespace dpm
