#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace dpm {

/// Uniform Cartesian mesh on a cubical auxiliary domain that embeds a sphere
/// of radius `radius` centered at the origin.  The lattice has `cells + 1`
/// nodes per axis; node (j,k,l) sits at (lo + j*h, lo + k*h, lo + l*h).
struct GridSpec {
  double radius = 0.0;
  int cells = 0;
  double lo = 0.0;
  double hi = 0.0;
  double h = 0.0;
  double dt = 0.0;
  double sigma = 0.0;  // 2/dt
  double t_final = 0.0;

  /// Standard setup: cube [-(R + R/5), R + R/5]^3, time step dt = h rounded
  /// down so that t_final is a power-of-two number of steps.
  static GridSpec standard(double radius, int cells, double t_final);

  /// Same cube construction but with an explicit time step (unit tests).
  static GridSpec with_dt(double radius, int cells, double dt);

  /// Custom cube half-width (small verification grids where the standard
  /// R/5 margin would be thinner than two cells).
  static GridSpec with_half_width(double radius, double half_width, int cells,
                                  double dt);

  int nodes_per_axis() const { return cells + 1; }
  std::int64_t node_count() const {
    const std::int64_t n = nodes_per_axis();
    return n * n * n;
  }
  std::int32_t index(int j, int k, int l) const {
    const int n = nodes_per_axis();
    return static_cast<std::int32_t>((j * n + k) * n + l);
  }
  void coords(std::int32_t idx, int& j, int& k, int& l) const {
    const int n = nodes_per_axis();
    l = idx % n;
    k = (idx / n) % n;
    j = idx / (n * n);
  }
  double coord(int i) const { return lo + i * h; }

  bool interior(int j, int k, int l) const {
    return j > 0 && j < cells && k > 0 && k < cells && l > 0 && l < cells;
  }

  /// Throws std::invalid_argument on a malformed spec (sigma mismatch,
  /// sphere too close to the cube faces, cells < 8).
  void validate() const;
};

namespace flag {
inline constexpr std::uint8_t m_plus = 1 << 0;
inline constexpr std::uint8_t m_minus = 1 << 1;
inline constexpr std::uint8_t n_plus = 1 << 2;
inline constexpr std::uint8_t n_minus = 1 << 3;
inline constexpr std::uint8_t gamma = 1 << 4;
inline constexpr std::uint8_t gamma_in = 1 << 5;
}  // namespace flag

/// Node classification for the difference-potentials point sets.  `gamma`
/// lists the discrete grid boundary in lexicographic (j,k,l) order;
/// `gamma_in_positions` holds the positions within `gamma` of the nodes that
/// lie inside the sphere.
struct PointSets {
  int cells = 0;
  std::vector<std::uint8_t> flags;              // (cells+1)^3 bitmasks
  std::vector<std::int32_t> m_plus;             // lexicographic order
  std::vector<std::int32_t> gamma;              // lexicographic order
  std::vector<std::int32_t> gamma_in_positions;  // indices into `gamma`

  std::size_t count_m_plus = 0;
  std::size_t count_m_minus = 0;
  std::size_t count_gamma_in = 0;
  std::size_t count_gamma_ex = 0;

  bool has(std::int32_t idx, std::uint8_t f) const { return flags[idx] & f; }
};

/// Classifies lattice nodes into M+/M-/N+/N-/gamma per the 7-point stencil
/// definitions.  Membership of M+ is by the strict test |x|^2 < R^2.
/// Validates the spec first; `classify_nodes_unchecked` skips validation for
/// deliberately degenerate grids in tests.
PointSets classify_nodes(const GridSpec& spec);
PointSets classify_nodes_unchecked(const GridSpec& spec);

/// A gamma node together with the spherical angles of its radial projection
/// onto the sphere and the signed distance d = |x| - R.
struct BoundaryNode {
  std::int32_t index = 0;  // lattice linear index
  double theta = 0.0;      // in [0, pi]
  double phi = 0.0;        // in [0, 2*pi)
  double d = 0.0;
};

/// Foot point of a single lattice node; throws std::domain_error at the
/// origin where the radial direction is undefined.
BoundaryNode foot_point(const GridSpec& spec, int j, int k, int l);

/// Foot points for every gamma node, in gamma order.
std::vector<BoundaryNode> foot_points(const GridSpec& spec,
                                      const PointSets& sets);

struct PerturbTargets {
  bool d = false;
  bool theta = false;
  bool phi = false;

  bool any() const { return d || theta || phi; }
  static PerturbTargets parse(const std::string& csv);  // "d,theta,phi"
};

/// Adds eps*h^3 to each targeted field, eps drawn uniformly from [0,1) by a
/// counter-based generator keyed on (seed, lattice index, field id) so the
/// result is independent of iteration order.  Draws happen once per node and
/// field, never per time step.
std::vector<BoundaryNode> perturb_boundary_data(
    const std::vector<BoundaryNode>& nodes, double h, std::uint64_t seed,
    PerturbTargets targets);

/// Uniform [0,1) deviate for the perturbation stream; exposed for tests.
double perturb_uniform(std::uint64_t seed, std::int64_t node_index, int field);

}  // namespace dpm
