#include "dpm/potentials.hpp"

#include <algorithm>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dpm {

PotentialOperator::PotentialOperator(const GridSpec& spec,
                                     const PointSets& sets,
                                     const FastApSolver& solver)
    : spec_(spec), sets_(&sets), solver_(&solver) {
  // Position of each gamma node within the gamma ordering.
  std::vector<std::int32_t> gamma_pos(spec.node_count(), -1);
  for (std::size_t i = 0; i < sets.gamma.size(); ++i)
    gamma_pos[sets.gamma[i]] = static_cast<std::int32_t>(i);

  // M- nodes whose stencil reads a gamma node.  Only these carry a nonzero
  // right-hand side when the operator hits a zero-extended density.
  std::vector<std::int32_t> touched;
  const int n = spec.nodes_per_axis();
  for (std::int32_t g : sets.gamma) {
    int j, k, l;
    spec.coords(g, j, k, l);
    const std::int32_t nb[7] = {g,
                                spec.index(j - 1, k, l),
                                spec.index(j + 1, k, l),
                                spec.index(j, k - 1, l),
                                spec.index(j, k + 1, l),
                                spec.index(j, k, l - 1),
                                spec.index(j, k, l + 1)};
    (void)n;
    for (std::int32_t p : nb)
      if (sets.has(p, flag::m_minus)) touched.push_back(p);
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

  const double inv_h2 = 1.0 / (spec.h * spec.h);
  for (std::int32_t p : touched) {
    Scatter s;
    s.node = p;
    s.first = static_cast<std::int32_t>(contrib_pos_.size());
    int j, k, l;
    spec.coords(p, j, k, l);
    if (gamma_pos[p] >= 0) {
      contrib_pos_.push_back(gamma_pos[p]);
      contrib_coef_.push_back(-6.0 * inv_h2 - spec.sigma);
    }
    const std::int32_t nb[6] = {spec.index(j - 1, k, l), spec.index(j + 1, k, l),
                                spec.index(j, k - 1, l), spec.index(j, k + 1, l),
                                spec.index(j, k, l - 1), spec.index(j, k, l + 1)};
    for (std::int32_t q : nb)
      if (gamma_pos[q] >= 0) {
        contrib_pos_.push_back(gamma_pos[q]);
        contrib_coef_.push_back(inv_h2);
      }
    s.count = static_cast<std::int32_t>(contrib_pos_.size()) - s.first;
    scatter_.push_back(s);
  }
}

void PotentialOperator::particular_solution(std::span<const double> f,
                                            std::span<double> field) const {
  if (f.size() != sets_->m_plus.size())
    throw std::invalid_argument("forcing must be given on M+");
  std::vector<double> q(static_cast<std::size_t>(spec_.node_count()), 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) q[sets_->m_plus[i]] = f[i];
  solver_->solve(q, field);
}

void PotentialOperator::scatter_density(std::span<const double> density,
                                        std::span<double> q) const {
  if (density.size() != sets_->gamma.size())
    throw std::invalid_argument("density length must equal |gamma|");
  for (const Scatter& s : scatter_) {
    double acc = 0.0;
    for (std::int32_t i = s.first; i < s.first + s.count; ++i)
      acc += contrib_coef_[i] * density[contrib_pos_[i]];
    q[s.node] = acc;
  }
}

void PotentialOperator::apply_potential(std::span<const double> density,
                                        std::span<double> field) const {
  std::vector<double> q(static_cast<std::size_t>(spec_.node_count()), 0.0);
  scatter_density(density, q);
  solver_->solve(q, field);
}

std::vector<double> PotentialOperator::trace_gamma(
    std::span<const double> field) const {
  std::vector<double> out(sets_->gamma.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = field[sets_->gamma[i]];
  return out;
}

std::vector<double> PotentialOperator::trace_gamma_in(
    std::span<const double> field) const {
  std::vector<double> out(sets_->gamma_in_positions.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = field[sets_->gamma[sets_->gamma_in_positions[i]]];
  return out;
}

std::vector<double> PotentialOperator::project_density(
    std::span<const double> density) const {
  std::vector<double> field(static_cast<std::size_t>(spec_.node_count()));
  apply_potential(density, field);
  std::vector<double> out(sets_->gamma_in_positions.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::int32_t pos = sets_->gamma_in_positions[i];
    out[i] = density[pos] - field[sets_->gamma[pos]];
  }
  return out;
}

Eigen::MatrixXd PotentialOperator::project_columns(
    const Eigen::MatrixXd& cols) const {
  if (static_cast<std::size_t>(cols.rows()) != sets_->gamma.size())
    throw std::invalid_argument("columns must be densities on gamma");
  const Eigen::Index ncols = cols.cols();
  const std::size_t nn = static_cast<std::size_t>(spec_.node_count());
  Eigen::MatrixXd out(sets_->gamma_in_positions.size(), ncols);

#pragma omp parallel
  {
    std::vector<double> q(nn, 0.0), field(nn);
    auto scratch = solver_->make_scratch();
#pragma omp for schedule(dynamic)
    for (Eigen::Index c = 0; c < ncols; ++c) {
      std::span<const double> density(cols.col(c).data(),
                                      static_cast<std::size_t>(cols.rows()));
      scatter_density(density, q);
      solver_->solve_buffered(q, field, scratch.get());
      for (Eigen::Index i = 0;
           i < static_cast<Eigen::Index>(sets_->gamma_in_positions.size());
           ++i) {
        const std::int32_t pos = sets_->gamma_in_positions[i];
        out(i, c) = density[pos] - field[sets_->gamma[pos]];
      }
    }
  }
  return out;
}

std::vector<double> PotentialOperator::bep_residual(
    std::span<const double> u_gamma, std::span<const double> gf_gamma,
    bool reduced) const {
  if (u_gamma.size() != sets_->gamma.size() ||
      gf_gamma.size() != sets_->gamma.size())
    throw std::invalid_argument("inputs must live on gamma");
  std::vector<double> field(static_cast<std::size_t>(spec_.node_count()));
  apply_potential(u_gamma, field);
  if (!reduced) {
    std::vector<double> out(sets_->gamma.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      out[i] = u_gamma[i] - field[sets_->gamma[i]] - gf_gamma[i];
    return out;
  }
  std::vector<double> out(sets_->gamma_in_positions.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::int32_t pos = sets_->gamma_in_positions[i];
    out[i] = u_gamma[pos] - field[sets_->gamma[pos]] - gf_gamma[pos];
  }
  return out;
}

}  // namespace dpm
