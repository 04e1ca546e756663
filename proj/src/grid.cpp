#include "dpm/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dpm {

static GridSpec make_spec(double radius, double half_width, int cells,
                          double dt) {
  GridSpec s;
  s.radius = radius;
  s.cells = cells;
  s.lo = -half_width;
  s.hi = half_width;
  s.h = 2.0 * half_width / cells;
  s.dt = dt;
  s.sigma = 2.0 / dt;
  return s;
}

GridSpec GridSpec::standard(double radius, int cells, double t_final) {
  if (t_final <= 0.0) throw std::invalid_argument("t_final must be positive");
  const double half_width = radius + radius / 5.0;
  const double h = 2.0 * half_width / cells;
  // Smallest power-of-two step count with dt <= h.  Power-of-two rounding
  // keeps the dt ratio between successive mesh doublings exactly 2, so
  // time-dominated errors show clean convergence rates across meshes.
  int steps = 1;
  while (steps * h < t_final) steps *= 2;
  GridSpec s = make_spec(radius, half_width, cells, t_final / steps);
  s.t_final = t_final;
  return s;
}

GridSpec GridSpec::with_dt(double radius, int cells, double dt) {
  GridSpec s = make_spec(radius, radius + radius / 5.0, cells, dt);
  s.t_final = dt;
  return s;
}

GridSpec GridSpec::with_half_width(double radius, double half_width, int cells,
                                   double dt) {
  GridSpec s = make_spec(radius, half_width, cells, dt);
  s.t_final = dt;
  return s;
}

void GridSpec::validate() const {
  if (h <= 0.0 || dt <= 0.0)
    throw std::invalid_argument("grid spacing and time step must be positive");
  if (sigma != 2.0 / dt)
    throw std::invalid_argument("sigma must equal 2/dt exactly");
  if (cells < 8) throw std::invalid_argument("need at least 8 cells per axis");
  if (!(radius < hi - 2.0 * h)) {
    std::ostringstream msg;
    msg << "sphere of radius " << radius << " needs a two-cell margin inside "
        << "the cube [" << lo << ", " << hi << "] at h = " << h;
    throw std::invalid_argument(msg.str());
  }
}

static PointSets classify_impl(const GridSpec& spec) {
  const int n = spec.nodes_per_axis();
  PointSets sets;
  sets.cells = spec.cells;
  sets.flags.assign(static_cast<std::size_t>(spec.node_count()), 0);

  const double r2 = spec.radius * spec.radius;
  std::uint8_t* f = sets.flags.data();

  // M+/M- over the interior of the cube.
#pragma omp parallel for schedule(static)
  for (int j = 1; j < spec.cells; ++j) {
    const double x = spec.coord(j);
    for (int k = 1; k < spec.cells; ++k) {
      const double y = spec.coord(k);
      for (int l = 1; l < spec.cells; ++l) {
        const double z = spec.coord(l);
        const double q = x * x + y * y + z * z;
        f[spec.index(j, k, l)] = (q < r2) ? flag::m_plus : flag::m_minus;
      }
    }
  }

  // N+/N- by gathering: a node is covered by the stencil of a neighbor in
  // M+/M- (or is itself such a node).  Gather keeps the loop race-free.
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      for (int l = 0; l < n; ++l) {
        const std::int32_t idx = spec.index(j, k, l);
        std::uint8_t covered = f[idx];
        if (j > 0) covered |= f[spec.index(j - 1, k, l)];
        if (j < n - 1) covered |= f[spec.index(j + 1, k, l)];
        if (k > 0) covered |= f[spec.index(j, k - 1, l)];
        if (k < n - 1) covered |= f[spec.index(j, k + 1, l)];
        if (l > 0) covered |= f[spec.index(j, k, l - 1)];
        if (l < n - 1) covered |= f[spec.index(j, k, l + 1)];
        std::uint8_t out = f[idx];
        if (covered & flag::m_plus) out |= flag::n_plus;
        if (covered & flag::m_minus) out |= flag::n_minus;
        if ((out & flag::n_plus) && (out & flag::n_minus)) {
          out |= flag::gamma;
          if (out & flag::m_plus) out |= flag::gamma_in;
        }
        f[idx] = out;
      }
    }
  }

  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) {
        const std::int32_t idx = spec.index(j, k, l);
        const std::uint8_t v = f[idx];
        if (v & flag::m_plus) {
          sets.m_plus.push_back(idx);
          ++sets.count_m_plus;
        }
        if (v & flag::m_minus) ++sets.count_m_minus;
        if (v & flag::gamma) {
          if (v & flag::gamma_in) {
            sets.gamma_in_positions.push_back(
                static_cast<std::int32_t>(sets.gamma.size()));
            ++sets.count_gamma_in;
          } else {
            ++sets.count_gamma_ex;
          }
          sets.gamma.push_back(idx);
        }
      }
  return sets;
}

PointSets classify_nodes(const GridSpec& spec) {
  spec.validate();
  return classify_impl(spec);
}

PointSets classify_nodes_unchecked(const GridSpec& spec) {
  return classify_impl(spec);
}

BoundaryNode foot_point(const GridSpec& spec, int j, int k, int l) {
  const double x = spec.coord(j);
  const double y = spec.coord(k);
  const double z = spec.coord(l);
  const double r = std::sqrt(x * x + y * y + z * z);
  if (r == 0.0)
    throw std::domain_error("foot point undefined at the origin");
  BoundaryNode node;
  node.index = spec.index(j, k, l);
  node.d = r - spec.radius;
  node.theta = std::acos(std::clamp(z / r, -1.0, 1.0));
  node.phi = std::atan2(y, x);
  if (node.phi < 0.0) node.phi += 2.0 * M_PI;
  return node;
}

std::vector<BoundaryNode> foot_points(const GridSpec& spec,
                                      const PointSets& sets) {
  std::vector<BoundaryNode> nodes(sets.gamma.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(sets.gamma.size());
       ++i) {
    int j, k, l;
    spec.coords(sets.gamma[i], j, k, l);
    nodes[i] = foot_point(spec, j, k, l);
  }
  return nodes;
}

PerturbTargets PerturbTargets::parse(const std::string& csv) {
  PerturbTargets t;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "d")
      t.d = true;
    else if (item == "theta")
      t.theta = true;
    else if (item == "phi")
      t.phi = true;
    else
      throw std::invalid_argument("unknown perturbation target: " + item);
  }
  return t;
}

static std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double perturb_uniform(std::uint64_t seed, std::int64_t node_index,
                       int field) {
  std::uint64_t z = mix64(seed);
  z = mix64(z ^ (static_cast<std::uint64_t>(node_index) *
                 0xd6e8feb86659fd93ULL));
  z = mix64(z ^ (static_cast<std::uint64_t>(field) + 0x2545f4914f6cdd1dULL));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::vector<BoundaryNode> perturb_boundary_data(
    const std::vector<BoundaryNode>& nodes, double h, std::uint64_t seed,
    PerturbTargets targets) {
  std::vector<BoundaryNode> out = nodes;
  if (!targets.any()) return out;
  const double scale = h * h * h;
  for (auto& node : out) {
    if (targets.d)
      node.d += scale * perturb_uniform(seed, node.index, 0);
    if (targets.theta)
      node.theta += scale * perturb_uniform(seed, node.index, 1);
    if (targets.phi)
      node.phi += scale * perturb_uniform(seed, node.index, 2);
  }
  return out;
}

}  // namespace dpm
