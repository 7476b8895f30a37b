#include "gridbie/operators.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "gridbie/errors.hpp"

namespace gridbie {

const char* to_string(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::calA: return "calA";
    case OperatorTag::calB: return "calB";
    case OperatorTag::Ah: return "Ah";
    case OperatorTag::Splus: return "Splus";
    case OperatorTag::Sminus: return "Sminus";
  }
  return "?";
}

IntervalFn tilde_lift(const GridGeometry& g, const CrossingFn& phi) {
  if (static_cast<int>(phi.size()) != g.num_crossings())
    throw OperatorError("tilde_lift: density has the wrong size");
  IntervalFn out(g.num_cuts());
  for (int id = 0; id < g.num_cuts(); ++id) out[id] = phi[g.cuts()[id].crossing];
  return out;
}

namespace {

// Returns the common value of `value(interval)` over the group of crossing c.
template <class F>
double group_value(const GridGeometry& g, int c, F&& value, const char* what) {
  const auto& ids = g.crossings()[c].intervals;
  const double first = value(ids.front());
  double lo = first, hi = first, big = std::abs(first);
  for (int id : ids) {
    const double v = value(id);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    big = std::max(big, std::abs(v));
  }
  if (hi - lo > kSharpTolerance * std::max(1.0, big))
    throw OperatorError(std::string(what) + ": values differ across the intervals sharing crossing " +
                        std::to_string(c) + " (spread " + std::to_string(hi - lo) + ")");
  return first;
}

}  // namespace

CrossingFn restrict_sharp(const GridGeometry& g, const IntervalFn& psi) {
  if (static_cast<int>(psi.size()) != g.num_cuts())
    throw OperatorError("restrict_sharp: boundary function has the wrong size");
  CrossingFn out(g.num_crossings());
  for (int c = 0; c < g.num_crossings(); ++c)
    out[c] = group_value(g, c, [&](int id) { return psi[id]; }, "restrict_sharp");
  return out;
}

CrossingFn interp_Q(const GridGeometry& g, const ExtendedField& u) {
  if (u.side != Side::plus) throw OperatorError("interp_Q: field must live on the plus side");
  CrossingFn out(g.num_crossings());
  for (int c = 0; c < g.num_crossings(); ++c) {
    const auto& cp = g.crossings()[c];
    if (cp.grid_node) {
      out[c] = group_value(g, c, [&](int id) { return u.ext[id]; }, "interp_Q");
      continue;
    }
    const int id = cp.intervals.front();
    const auto& cut = g.cuts()[id];
    const int p = cut.plus_end();
    const int dir = cut.minus_end() == g.neighbor(p, cut.axis, 1) ? 1 : -1;
    const int back = g.neighbor(p, cut.axis, -dir);
    const double back_value =
        g.in_plus(back) ? u.values[back] : u.ext[g.cut_towards(p, cut.axis, -dir)];
    out[c] = quadratic_through(-1.0, back_value, 0.0, u.values[p], 1.0, u.ext[id],
                               cut.crossing_from_plus());
  }
  return out;
}

LayerOperators::LayerOperators(const GridGeometry& g, CgOptions opts, SwBackend sw_backend)
    : g_(&g),
      opts_(opts),
      plus_(g, Side::plus, opts),
      minus_(g, Side::minus, opts),
      interface_(g, opts),
      sw_(g, sw_backend, opts) {}

ExtendedField LayerOperators::single_layer(const IntervalFn& psi, Side side,
                                           SolveStats* stats) const {
  return (is_plus(side) ? plus_ : minus_).solve(psi, stats);
}

SingleLayerPair LayerOperators::single_layers(const IntervalFn& psi) const {
  return {plus_.solve(psi), minus_.solve(psi)};
}

InterfaceSolution LayerOperators::double_layer(const IntervalFn& phi,
                                               const std::vector<double>* warm_start) const {
  return interface_.solve(phi, warm_start);
}

IntervalFn LayerOperators::apply_calA(const IntervalFn& phi) const {
  return trace(*g_, double_layer(phi).plus);
}

IntervalFn LayerOperators::apply_calB(const IntervalFn& phi) const {
  return trace(*g_, double_layer(phi).minus);
}

double LayerOperators::sl_inner(const IntervalFn& psi, const IntervalFn& zeta) const {
  const auto v = single_layers(psi);
  const auto z = single_layers(zeta);
  return inner(*g_, v.plus, z.plus) + inner(*g_, v.minus, z.minus);
}

double LayerOperators::sl_norm(const IntervalFn& psi) const {
  const auto v = single_layers(psi);
  return std::sqrt(inner(*g_, v.plus, v.plus) + inner(*g_, v.minus, v.minus));
}

double LayerOperators::sl_inner_boundary(const IntervalFn& psi, const IntervalFn& zeta) const {
  const auto v = single_layers(psi);
  return jump_pairing(*g_, v.plus, v.minus, zeta);
}

CrossingFn LayerOperators::apply_Ah(const CrossingFn& phi, InterfaceSolution* solution,
                                    const std::vector<double>* warm_start) const {
  auto dl = double_layer(tilde_lift(*g_, phi), warm_start);
  auto out = interp_Q(*g_, dl.plus);
  if (solution) *solution = std::move(dl);
  return out;
}

ExtendedField LayerOperators::extended_sw(const CrossingFn& f) const {
  return quadratic_extrapolate(*g_, sw_.solve(f), f);
}

double LayerOperators::norm1(const CrossingFn& phi) const {
  return sl_norm(tilde_lift(*g_, phi));
}

double LayerOperators::norm2(const CrossingFn& f) const {
  return sl_norm(trace(*g_, extended_sw(f)));
}

int LayerOperators::domain_size(OperatorTag tag) const {
  return tag == OperatorTag::Ah ? g_->num_crossings() : g_->num_cuts();
}

int LayerOperators::range_size(OperatorTag tag) const {
  switch (tag) {
    case OperatorTag::Ah: return g_->num_crossings();
    case OperatorTag::Splus:
    case OperatorTag::Sminus: return g_->num_points() + g_->num_cuts();
    default: return g_->num_cuts();
  }
}

std::vector<double> LayerOperators::apply(OperatorTag tag, std::span<const double> x) const {
  if (static_cast<int>(x.size()) != domain_size(tag))
    throw OperatorError(std::string("apply(") + to_string(tag) + "): input has the wrong size");
  std::vector<double> in(x.begin(), x.end());
  switch (tag) {
    case OperatorTag::calA: return apply_calA(IntervalFn(std::move(in))).values;
    case OperatorTag::calB: return apply_calB(IntervalFn(std::move(in))).values;
    case OperatorTag::Ah: return apply_Ah(CrossingFn(std::move(in))).values;
    case OperatorTag::Splus:
    case OperatorTag::Sminus: {
      const Side side = tag == OperatorTag::Splus ? Side::plus : Side::minus;
      auto v = single_layer(IntervalFn(std::move(in)), side);
      v.values.insert(v.values.end(), v.ext.begin(), v.ext.end());
      return std::move(v.values);
    }
  }
  return {};
}

Eigen::MatrixXd LayerOperators::assemble_dense(OperatorTag tag, int cap) const {
  const int cols = domain_size(tag);
  if (cols > cap)
    throw ConfigError(std::string("dense assembly of ") + to_string(tag) + " needs " +
                      std::to_string(cols) + " columns, cap is " + std::to_string(cap));
  const int rows = range_size(tag);
  Eigen::MatrixXd m(rows, cols);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < cols; ++j) {
    try {
      std::vector<double> e(cols, 0.0);
      e[j] = 1.0;
      const auto col = apply(tag, e);
      for (int i = 0; i < rows; ++i) m(i, j) = col[i];
    } catch (...) {
#pragma omp critical(gridbie_assembly_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return m;
}

Eigen::MatrixXd LayerOperators::assemble_energy(Side side, int cap) const {
  const auto& g = *g_;
  const int n = g.num_cuts();
  if (n > cap)
    throw ConfigError("energy assembly needs " + std::to_string(n) + " columns, cap is " +
                      std::to_string(cap));
  std::exception_ptr failure;
  const auto& edges = is_plus(side) ? g.plus_edges() : g.minus_edges();
  const int rows = static_cast<int>(edges.size()) + n;
  // Row r of d holds the weighted difference of basis layer j over interval r.
  Eigen::MatrixXd d(rows, n);
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < n; ++j) {
    try {
      IntervalFn e(n);
      e[j] = 1.0;
      const auto v = single_layer(e, side);
      for (std::size_t r = 0; r < edges.size(); ++r)
        d(r, j) = (v.values[edges[r].upper] - v.values[edges[r].lower]) / g.h();
      for (int id = 0; id < n; ++id) {
        const double w = is_plus(side) ? g.cuts()[id].xi : 1.0 - g.cuts()[id].xi;
        d(edges.size() + id, j) = cut_difference(g, v, id) * std::sqrt(w);
      }
    } catch (...) {
#pragma omp critical(gridbie_assembly_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  Eigen::MatrixXd part = Eigen::MatrixXd::Zero(n, n);
  part.selfadjointView<Eigen::Lower>().rankUpdate(d.transpose());
  Eigen::MatrixXd full = part.selfadjointView<Eigen::Lower>();
  return full * g.cell_volume();
}

Eigen::MatrixXd LayerOperators::assemble_gram(int cap) const {
  return assemble_energy(Side::plus, cap) + assemble_energy(Side::minus, cap);
}

const Eigen::MatrixXd& OperatorHandle::dense(int cap) const {
  if (!dense_) dense_ = ops_->assemble_dense(tag_, cap);
  return *dense_;
}

}  // namespace gridbie
