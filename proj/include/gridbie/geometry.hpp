#pragma once

// Embedded-boundary grid data: classification of the grid points of the box,
// the cut intervals where the boundary crosses a grid line, the boundary point
// sets used by the method (crossing points) and by the theory (points kept a
// distance delta*h from the interval endpoints), and the interval weights.
//
// Sign convention: the plus side is the interior region (level set < 0); grid
// points where the level set is >= 0, exact zeros included, are on the minus
// side. Every point of the box boundary is on the minus side.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "gridbie/domains.hpp"

namespace gridbie {

inline constexpr double kDefaultDelta = 0.1;

/// A grid interval [lower, lower + e_axis].
struct Edge {
  int lower;
  int upper;
  int axis;
};

/// A grid interval with one endpoint on each side of the boundary.
struct CutInterval {
  int axis = 0;
  int lower = 0;
  int upper = 0;
  bool lower_plus = false;
  /// Crossing location as a fraction of h measured from the lower endpoint.
  double s_cross = 0.5;
  /// Location of the delta-separated boundary point, same measure.
  double s1 = 0.5;
  /// Fraction of the interval attributed to the plus-side closure.
  double xi = 0.5;
  /// Index of the crossing point in GridGeometry::crossings().
  int crossing = -1;

  int plus_end() const { return lower_plus ? lower : upper; }
  int minus_end() const { return lower_plus ? upper : lower; }
  /// Endpoint on the given side (true = plus side).
  int end_on(bool plus) const { return plus ? plus_end() : minus_end(); }
  /// Distance in units of h from the plus-side endpoint to the crossing.
  double crossing_from_plus() const { return lower_plus ? s_cross : 1.0 - s_cross; }
  /// Distance in units of h from `endpoint` to the delta-separated point.
  double s1_from(int endpoint) const { return endpoint == lower ? s1 : 1.0 - s1; }
  /// h times the difference of the characteristic function across the interval.
  double chi_jump() const { return lower_plus ? -1.0 : 1.0; }
};

/// A boundary node of the method: the crossing of one cut interval, or a grid
/// point shared by several cut intervals that all cross exactly there.
struct CrossingPoint {
  Point x{};
  std::vector<int> intervals;
  std::optional<int> grid_node;
};

class GridGeometry {
 public:
  /// Runs classification, crossing search, crossing-point assignment and the
  /// delta-separated point assignment. Throws GeometryError or ConfigError.
  static GridGeometry build(const ImplicitDomain& domain, int n, double delta = kDefaultDelta);

  /// Copy with the delta-separated points reassigned.
  GridGeometry with_delta(double delta) const;

  int dim() const { return dim_; }
  int n() const { return n_; }
  double h() const { return h_; }
  double half_width() const { return half_width_; }
  double delta() const { return delta_; }
  /// h^dim, the cell measure used by every discrete sum.
  double cell_volume() const;

  int num_points() const { return num_points_; }
  int stride(int axis) const { return stride_[axis]; }
  std::array<int, 3> grid_index(int point) const;
  Point coords(int point) const;
  /// Neighbor along `axis` in direction dir = +1 or -1; -1 when off the grid.
  int neighbor(int point, int axis, int dir) const;

  bool in_plus(int point) const { return chi_[point] != 0; }
  int chi(int point) const { return chi_[point]; }
  bool on_box_boundary(int point) const { return box_boundary_[point] != 0; }

  const std::vector<int>& plus_points() const { return plus_points_; }
  /// Minus-side points that are not on the box boundary.
  const std::vector<int>& minus_points() const { return minus_points_; }

  const std::vector<Edge>& plus_edges() const { return plus_edges_; }
  /// Edges with both endpoints on the minus side, including edges touching the box boundary.
  const std::vector<Edge>& minus_edges() const { return minus_edges_; }

  const std::vector<CutInterval>& cuts() const { return cuts_; }
  int num_cuts() const { return static_cast<int>(cuts_.size()); }
  /// Cut interval id of edge [point, point + e_axis], or -1.
  int cut_on_edge(int lower, int axis) const { return edge_cut_[lower * dim_ + axis]; }
  /// Cut interval id of the edge leaving `point` along axis in direction dir, or -1.
  int cut_towards(int point, int axis, int dir) const;

  const std::vector<CrossingPoint>& crossings() const { return crossings_; }
  int num_crossings() const { return static_cast<int>(crossings_.size()); }
  /// Crossing points shared by more than one cut interval.
  std::vector<int> shared_crossings() const;

  // Construction stages; build() runs them in order.
  static GridGeometry classify_grid(const ImplicitDomain& domain, int n);
  void find_cut_intervals(const ImplicitDomain& domain);
  void assign_crossings();
  void assign_delta_points(double delta);
  /// Union-find connectivity of both sides through uncut intervals.
  void check_connectivity() const;

 private:
  GridGeometry() = default;

  int dim_ = 2;
  int n_ = 0;
  double h_ = 0.0;
  double half_width_ = 1.0;
  double delta_ = kDefaultDelta;
  int num_points_ = 0;
  std::array<int, 3> stride_{1, 0, 0};

  std::vector<std::uint8_t> chi_;
  std::vector<std::uint8_t> box_boundary_;
  std::vector<int> plus_points_;
  std::vector<int> minus_points_;
  std::vector<Edge> plus_edges_;
  std::vector<Edge> minus_edges_;
  std::vector<CutInterval> cuts_;
  std::vector<int> edge_cut_;
  std::vector<CrossingPoint> crossings_;
};

/// clamp(s_cross, delta, 1 - delta)
double delta_separated_fraction(double s_cross, double delta);
/// s1 chi(lower) + (1 - s1) chi(upper)
double interval_weight(double s1, bool lower_plus);

}  // namespace gridbie
