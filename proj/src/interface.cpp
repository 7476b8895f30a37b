#include "gridbie/errors.hpp"
#include "gridbie/solvers.hpp"

namespace gridbie {

InterfaceSolver::InterfaceSolver(const GridGeometry& g, CgOptions opts) : g_(&g), opts_(opts) {
  slot_.assign(g.num_points(), -1);
  for (int p = 0; p < g.num_points(); ++p)
    if (!g.on_box_boundary(p)) {
      slot_[p] = static_cast<int>(unknowns_.size());
      unknowns_.push_back(p);
    }
  const int n = static_cast<int>(unknowns_.size());
  kernels::CsrBuilder b(n, n);
  for (int k = 0; k < n; ++k) {
    const int p = unknowns_[k];
    b.add(k, k, 2.0 * g.dim());
    for (int a = 0; a < g.dim(); ++a)
      for (int dir : {-1, 1}) {
        const int nb = g.neighbor(p, a, dir);
        if (slot_[nb] >= 0) b.add(k, slot_[nb], -1.0);
      }
  }
  matrix_ = b.build();
}

InterfaceSolution InterfaceSolver::solve(const IntervalFn& phi,
                                         const std::vector<double>* warm_start) const {
  const auto& g = *g_;
  if (static_cast<int>(phi.size()) != g.num_cuts())
    throw FieldError("interface solve: density has the wrong size");

  // Substituting u+ = grid + phi at minus endpoints and u- = grid - phi at plus
  // endpoints into the two discrete Laplace equations gives these sources.
  std::vector<double> rhs(unknowns_.size(), 0.0);
  for (int id = 0; id < g.num_cuts(); ++id) {
    const auto& c = g.cuts()[id];
    rhs[slot_[c.plus_end()]] += phi[id];
    rhs[slot_[c.minus_end()]] -= phi[id];
  }
  std::vector<double> x0;
  if (warm_start) {
    x0.resize(unknowns_.size());
    for (std::size_t k = 0; k < unknowns_.size(); ++k) x0[k] = (*warm_start)[unknowns_[k]];
  }
  auto result = cg_solve(matrix_, rhs, opts_, x0);

  InterfaceSolution s;
  s.stats = result.stats;
  s.grid.assign(g.num_points(), 0.0);
  for (std::size_t k = 0; k < unknowns_.size(); ++k) s.grid[unknowns_[k]] = result.x[k];

  s.plus = ExtendedField::zeros(g, Side::plus);
  s.minus = ExtendedField::zeros(g, Side::minus);
  for (int p = 0; p < g.num_points(); ++p)
    (g.in_plus(p) ? s.plus : s.minus).values[p] = s.grid[p];
  for (int id = 0; id < g.num_cuts(); ++id) {
    const auto& c = g.cuts()[id];
    s.plus.ext[id] = s.grid[c.minus_end()] + phi[id];
    s.minus.ext[id] = s.grid[c.plus_end()] - phi[id];
  }
  return s;
}

}  // namespace gridbie
