#include "gridbie/errors.hpp"
#include "gridbie/solvers.hpp"

namespace gridbie {

SingleLayerSolver::SingleLayerSolver(const GridGeometry& g, Side side, CgOptions opts)
    : g_(&g), side_(side), opts_(opts) {
  unknowns_ = is_plus(side) ? g.plus_points() : g.minus_points();
  slot_.assign(g.num_points(), -1);
  for (int k = 0; k < static_cast<int>(unknowns_.size()); ++k) slot_[unknowns_[k]] = k;

  const int n = static_cast<int>(unknowns_.size());
  kernels::CsrBuilder b(n, n);
  const auto& edges = is_plus(side) ? g.plus_edges() : g.minus_edges();
  for (const auto& e : edges) {
    const int i = slot_[e.lower], j = slot_[e.upper];
    if (i >= 0) b.add(i, i, 1.0);
    if (j >= 0) b.add(j, j, 1.0);
    if (i >= 0 && j >= 0) {
      b.add(i, j, -1.0);
      b.add(j, i, -1.0);
    }
  }
  for (const auto& c : g.cuts()) {
    const int own = c.end_on(is_plus(side));
    b.add(slot_[own], slot_[own], 1.0 / c.s1_from(own));
  }
  matrix_ = b.build();
}

ExtendedField SingleLayerSolver::solve(const IntervalFn& psi, SolveStats* stats) const {
  const auto& g = *g_;
  if (static_cast<int>(psi.size()) != g.num_cuts())
    throw FieldError("single layer: boundary function has the wrong size");
  std::vector<double> rhs(unknowns_.size(), 0.0);
  for (int id = 0; id < g.num_cuts(); ++id) {
    const auto& c = g.cuts()[id];
    const int own = c.end_on(is_plus(side_));
    rhs[slot_[own]] += psi[id] / c.s1_from(own);
  }
  auto result = cg_solve(matrix_, rhs, opts_);
  if (stats) *stats = result.stats;
  std::vector<double> values(g.num_points(), 0.0);
  for (std::size_t k = 0; k < unknowns_.size(); ++k) values[unknowns_[k]] = result.x[k];
  return lift_from_trace(g, std::move(values), psi, side_);
}

}  // namespace gridbie
