#include "gridbie/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "gridbie/errors.hpp"

namespace gridbie {

namespace {

constexpr int kMaxBisections = 60;
constexpr double kRootTolerance = 1e-12;  // in units of h
constexpr double kSnapTolerance = 1e-10;  // in units of h

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

std::string point_str(const Point& x, int dim) {
  std::string s = "(";
  for (int a = 0; a < dim; ++a) {
    if (a) s += ", ";
    s += std::to_string(x[a]);
  }
  return s + ")";
}

}  // namespace

double delta_separated_fraction(double s_cross, double delta) {
  return std::clamp(s_cross, delta, 1.0 - delta);
}

double interval_weight(double s1, bool lower_plus) { return lower_plus ? s1 : 1.0 - s1; }

double GridGeometry::cell_volume() const { return std::pow(h_, dim_); }

std::array<int, 3> GridGeometry::grid_index(int point) const {
  std::array<int, 3> ijk{0, 0, 0};
  for (int a = 0; a < dim_; ++a) {
    ijk[a] = point % (n_ + 1);
    point /= (n_ + 1);
  }
  return ijk;
}

Point GridGeometry::coords(int point) const {
  const auto ijk = grid_index(point);
  Point x{0.0, 0.0, 0.0};
  for (int a = 0; a < dim_; ++a) x[a] = -half_width_ + ijk[a] * h_;
  return x;
}

int GridGeometry::neighbor(int point, int axis, int dir) const {
  const int i = grid_index(point)[axis] + dir;
  if (i < 0 || i > n_) return -1;
  return point + dir * stride_[axis];
}

int GridGeometry::cut_towards(int point, int axis, int dir) const {
  const int nb = neighbor(point, axis, dir);
  if (nb < 0) return -1;
  return dir > 0 ? cut_on_edge(point, axis) : cut_on_edge(nb, axis);
}

std::vector<int> GridGeometry::shared_crossings() const {
  std::vector<int> out;
  for (int c = 0; c < num_crossings(); ++c)
    if (crossings_[c].intervals.size() > 1) out.push_back(c);
  return out;
}

GridGeometry GridGeometry::classify_grid(const ImplicitDomain& domain, int n) {
  if (domain.dim != 2 && domain.dim != 3)
    throw ConfigError("dimension must be 2 or 3, got " + std::to_string(domain.dim));
  if (n < 8) throw ConfigError("resolution must be at least 8, got " + std::to_string(n));
  if (!domain.level_set) throw ConfigError("domain '" + domain.name + "' has no level set");

  GridGeometry g;
  g.dim_ = domain.dim;
  g.n_ = n;
  g.half_width_ = domain.half_width;
  g.h_ = 2.0 * domain.half_width / n;
  g.stride_ = {1, n + 1, (n + 1) * (n + 1)};
  if (g.dim_ == 2) g.stride_[2] = 0;
  g.num_points_ = 1;
  for (int a = 0; a < g.dim_; ++a) g.num_points_ *= (n + 1);

  g.chi_.assign(g.num_points_, 0);
  g.box_boundary_.assign(g.num_points_, 0);
  for (int p = 0; p < g.num_points_; ++p) {
    const auto ijk = g.grid_index(p);
    bool boundary = false;
    bool near_box = false;
    for (int a = 0; a < g.dim_; ++a) {
      boundary = boundary || ijk[a] == 0 || ijk[a] == n;
      near_box = near_box || ijk[a] <= 1 || ijk[a] >= n - 1;
    }
    const double value = domain(g.coords(p));
    if (std::isnan(value))
      throw GeometryError("level set is NaN at " + point_str(g.coords(p), g.dim_));
    g.chi_[p] = value < 0.0 ? 1 : 0;
    g.box_boundary_[p] = boundary ? 1 : 0;
    if (near_box && value <= 0.0)
      throw GeometryError("boundary comes within one grid layer of the box at " +
                          point_str(g.coords(p), g.dim_) + "; enlarge the box or refine");
    if (g.chi_[p])
      g.plus_points_.push_back(p);
    else if (!boundary)
      g.minus_points_.push_back(p);
  }

  g.edge_cut_.assign(static_cast<std::size_t>(g.num_points_) * g.dim_, -1);
  for (int p = 0; p < g.num_points_; ++p) {
    const auto ijk = g.grid_index(p);
    for (int a = 0; a < g.dim_; ++a) {
      if (ijk[a] == n) continue;
      const int q = p + g.stride_[a];
      if (g.chi_[p] && g.chi_[q])
        g.plus_edges_.push_back({p, q, a});
      else if (!g.chi_[p] && !g.chi_[q])
        g.minus_edges_.push_back({p, q, a});
      else {
        CutInterval c;
        c.axis = a;
        c.lower = p;
        c.upper = q;
        c.lower_plus = g.chi_[p] != 0;
        g.edge_cut_[p * g.dim_ + a] = static_cast<int>(g.cuts_.size());
        g.cuts_.push_back(c);
      }
    }
  }
  return g;
}

void GridGeometry::find_cut_intervals(const ImplicitDomain& domain) {
  auto along = [&](int lower, int axis, double t) {
    Point x = coords(lower);
    x[axis] += t * h_;
    return domain(x);
  };

  // Reject intervals the boundary crosses more than once.
  auto check_edge = [&](int lower, int axis) {
    int changes = 0;
    bool prev = along(lower, axis, 0.0) < 0.0;
    for (double t : {0.25, 0.5, 0.75, 1.0}) {
      const bool cur = along(lower, axis, t) < 0.0;
      changes += cur != prev;
      prev = cur;
    }
    if (changes > 1)
      throw GeometryError("boundary crosses the interval at " +
                          point_str(coords(lower), dim_) + " along axis " + std::to_string(axis) +
                          " more than once; refine the grid");
  };
  for (const auto& e : plus_edges_) check_edge(e.lower, e.axis);
  for (const auto& e : minus_edges_) check_edge(e.lower, e.axis);

  for (std::size_t id = 0; id < cuts_.size(); ++id) {
    auto& c = cuts_[id];
    check_edge(c.lower, c.axis);
    // Invariant: (value(t) < 0) == lower_plus on [0, a], opposite at b.
    double a = 0.0, b = 1.0;
    int it = 0;
    for (; it < kMaxBisections && b - a > kRootTolerance; ++it) {
      const double m = 0.5 * (a + b);
      const double v = along(c.lower, c.axis, m);
      if (std::isnan(v)) break;
      ((v < 0.0) == c.lower_plus ? a : b) = m;
    }
    if (b - a > kRootTolerance)
      throw GeometryError("crossing search did not converge on cut interval " +
                          std::to_string(id));
    c.s_cross = 0.5 * (a + b);
    // Snap a crossing that lands on the minus-side grid point onto it.
    const double minus_t = c.lower_plus ? 1.0 : 0.0;
    if (std::abs(c.s_cross - minus_t) <= kSnapTolerance) c.s_cross = minus_t;
  }

  // Each plus point must keep an uncut arm.
  for (int p : plus_points_) {
    int cut_arms = 0;
    for (int a = 0; a < dim_; ++a)
      for (int dir : {-1, 1}) cut_arms += cut_towards(p, a, dir) >= 0;
    if (cut_arms == 2 * dim_)
      throw GeometryError("every stencil arm of the grid point " + point_str(coords(p), dim_) +
                          " is cut; resolution too coarse");
  }
}

void GridGeometry::assign_crossings() {
  crossings_.clear();
  std::map<int, int> by_node;
  for (int id = 0; id < num_cuts(); ++id) {
    auto& c = cuts_[id];
    const double minus_t = c.lower_plus ? 1.0 : 0.0;
    if (c.s_cross == minus_t) {
      const int node = c.minus_end();
      auto [it, fresh] = by_node.try_emplace(node, num_crossings());
      if (fresh) crossings_.push_back({coords(node), {}, node});
      crossings_[it->second].intervals.push_back(id);
      c.crossing = it->second;
    } else {
      Point x = coords(c.lower);
      x[c.axis] += c.s_cross * h_;
      c.crossing = num_crossings();
      crossings_.push_back({x, {id}, std::nullopt});
    }
  }
}

void GridGeometry::assign_delta_points(double delta) {
  if (!(delta > 0.0 && delta <= 0.5))
    throw ConfigError("delta must lie in (0, 1/2], got " + std::to_string(delta));
  delta_ = delta;
  for (auto& c : cuts_) {
    c.s1 = delta_separated_fraction(c.s_cross, delta);
    c.xi = interval_weight(c.s1, c.lower_plus);
  }
}

void GridGeometry::check_connectivity() const {
  UnionFind uf(num_points_);
  for (const auto& e : plus_edges_) uf.unite(e.lower, e.upper);
  for (const auto& e : minus_edges_) uf.unite(e.lower, e.upper);
  auto connected = [&](auto&& points, const char* side) {
    if (points.empty()) throw GeometryError(std::string("the ") + side + " side has no grid points");
    const int root = uf.find(points.front());
    for (int p : points)
      if (uf.find(p) != root)
        throw GeometryError(std::string("the ") + side +
                            " side is not connected through uncut intervals at " +
                            point_str(coords(p), dim_) + "; resolution too coarse");
  };
  connected(plus_points_, "plus");
  std::vector<int> all_minus;
  for (int p = 0; p < num_points_; ++p)
    if (!chi_[p]) all_minus.push_back(p);
  connected(all_minus, "minus");
}

GridGeometry GridGeometry::build(const ImplicitDomain& domain, int n, double delta) {
  if (!(delta > 0.0 && delta <= 0.5))
    throw ConfigError("delta must lie in (0, 1/2], got " + std::to_string(delta));
  auto g = classify_grid(domain, n);
  g.find_cut_intervals(domain);
  g.check_connectivity();
  g.assign_crossings();
  g.assign_delta_points(delta);
  return g;
}

GridGeometry GridGeometry::with_delta(double delta) const {
  GridGeometry g = *this;
  g.assign_delta_points(delta);
  return g;
}

}  // namespace gridbie
