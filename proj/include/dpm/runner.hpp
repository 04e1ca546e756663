#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dpm/grid.hpp"
#include "dpm/metrics.hpp"

namespace dpm {

struct RunOptions {
  std::string test_id = "d1";
  int cells = 31;
  int harmonics = 0;  // per surface term; 0 = test-case default
  int order = 2;      // linearization order for the nonlinear coupling
  PerturbTargets perturb;
  std::uint64_t seed = 0;
  double t_final = 0.1;
  bool verbose = false;
  bool keep_final_fields = false;   // retain dump data in the result
  bool record_conditions = true;    // eigen-decompose the normal matrix
};

struct RunResult {
  int cells = 0;
  double h = 0.0;
  double dt = 0.0;
  int steps = 0;
  double radius = 0.0;
  std::size_t count_m_plus = 0;
  std::size_t count_gamma = 0;
  std::size_t count_gamma_in = 0;

  BulkNorms bulk;  // max over time levels i >= 1
  SurfaceNorms surf;

  /// Condition numbers of the scaled normal matrix.  Constant in time for
  /// the dynamic and linear-coupling cases; first/last time step for the
  /// nonlinear case.
  double cond_first = 0.0;
  double cond_last = 0.0;

  /// Max over steps of |L u - F|_inf / |F|_inf on M+.
  double max_equation_residual = 0.0;
  std::int64_t loop_ap_solves = 0;
  double seconds = 0.0;

  // Populated when keep_final_fields is set.
  double final_time = 0.0;
  std::vector<double> final_bulk;    // full lattice, meaningful on N+
  Eigen::MatrixXd final_surface;     // surface-grid samples
};

/// Full time integration of one test case on one mesh (Algorithm: classify,
/// precompute projected basis blocks, then per step particular solution,
/// least-squares boundary solve, Green's formula, tracker updates).
RunResult run_simulation(const RunOptions& opts);

}  // namespace dpm
