#pragma once

// Discrete calculus on extended grid functions.
//
// An ExtendedField lives on one side of the boundary. It stores a value at
// every grid point of that side plus one value per cut interval at the
// interval's opposite-side endpoint. Extension values are owned by the
// interval, so a grid point shared by several cut intervals can carry a
// different value for each of them.

#include <span>
#include <vector>

#include "gridbie/geometry.hpp"

namespace gridbie {

enum class Side { plus, minus };

inline bool is_plus(Side s) { return s == Side::plus; }

enum class BoundarySet {
  /// One value per cut interval, at its delta-separated point.
  separated,
  /// One value per crossing point (shared crossings carry one value).
  crossing,
};

template <BoundarySet Set>
struct BoundaryFn {
  std::vector<double> values;

  BoundaryFn() = default;
  explicit BoundaryFn(std::vector<double> v) : values(std::move(v)) {}
  explicit BoundaryFn(std::size_t size, double fill = 0.0) : values(size, fill) {}

  std::size_t size() const { return values.size(); }
  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
};

/// Boundary function indexed by cut interval.
using IntervalFn = BoundaryFn<BoundarySet::separated>;
/// Boundary function indexed by crossing point.
using CrossingFn = BoundaryFn<BoundarySet::crossing>;

struct ExtendedField {
  Side side = Side::plus;
  /// One value per grid point; entries off this side are unused and kept zero.
  std::vector<double> values;
  /// One value per cut interval, at the endpoint on the other side.
  std::vector<double> ext;

  static ExtendedField zeros(const GridGeometry& g, Side side);
};

/// Value of u at `endpoint` of cut interval `cut`, reading the extension value
/// when the endpoint lies on the other side.
double endpoint_value(const GridGeometry& g, const ExtendedField& u, int cut, int endpoint);

/// Divided difference (u(upper) - u(lower)) / h over a cut interval.
double cut_difference(const GridGeometry& g, const ExtendedField& u, int cut);

/// Linear interpolation of u to the delta-separated point of each cut interval.
IntervalFn trace(const GridGeometry& g, const ExtendedField& u);

/// Field with the given grid values whose extension values make trace() equal psi.
ExtendedField lift_from_trace(const GridGeometry& g, std::vector<double> values,
                              const IntervalFn& psi, Side side);

/// (2d+1)-point Laplacian at every grid point of u's side (box-boundary points
/// excluded); zero elsewhere.
std::vector<double> laplacian(const GridGeometry& g, const ExtendedField& u);

/// Dirichlet inner product with interval weights xi (plus) or 1 - xi (minus).
double inner(const GridGeometry& g, const ExtendedField& u, const ExtendedField& v);

/// Sum of (D u)(M v)(D chi) h^d over the cut intervals.
double boundary_sum(const GridGeometry& g, const ExtendedField& u, const ExtendedField& v);

/// Relative residual of the discrete Green identity for u, v on the same side.
/// For the minus side v must vanish on the box boundary.
double green_residual(const GridGeometry& g, const ExtendedField& u, const ExtendedField& v);

/// -sum [D v] zeta (D chi) h^d with [D v] = D v_plus - D v_minus: the boundary
/// form of the single-layer inner product, v being the single layer of some psi.
double jump_pairing(const GridGeometry& g, const ExtendedField& v_plus,
                    const ExtendedField& v_minus, const IntervalFn& zeta);

/// sum of u^2 h^d over the grid points of u's side.
double mass(const GridGeometry& g, const ExtendedField& u);

}  // namespace gridbie
