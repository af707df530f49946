#pragma once

// Uniform 2D node lattice, domain rasterization and exact Euclidean
// distance transform.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <variant>
#include <vector>

#include "plimit/error.hpp"

namespace plimit {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Lattice index pair. Ordering is lexicographic on (i, j).
struct Node {
  int i = 0;
  int j = 0;

  friend auto operator<=>(const Node&, const Node&) = default;
};

inline std::int64_t squared_index_distance(Node a, Node b) {
  const std::int64_t di = a.i - b.i;
  const std::int64_t dj = a.j - b.j;
  return di * di + dj * dj;
}

/// Node (i, j) sits at (x0 + i h, y0 + j h). Storage is row-major in j.
struct Grid {
  int nx = 0;
  int ny = 0;
  double h = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;

  Grid() = default;
  Grid(int nx_, int ny_, double h_, double x0_ = 0.0, double y0_ = 0.0)
      : nx(nx_), ny(ny_), h(h_), x0(x0_), y0(y0_) {
    require(nx >= 3 && ny >= 3, ErrorKind::invalid_argument,
            "grid needs at least 3x3 nodes");
    require(h > 0.0 && std::isfinite(h), ErrorKind::invalid_argument,
            "grid spacing must be positive");
  }

  /// Smallest lattice aligned to integer multiples of h that covers the box
  /// with at least one spare node on every side.
  static Grid covering(double xmin, double xmax, double ymin, double ymax,
                       double h) {
    require(h > 0.0 && xmax > xmin && ymax > ymin,
            ErrorKind::invalid_argument, "invalid bounding box");
    const auto lo = [h](double v) {
      return static_cast<long>(std::floor(v / h + 1e-9)) - 1;
    };
    const auto hi = [h](double v) {
      return static_cast<long>(std::ceil(v / h - 1e-9)) + 1;
    };
    const long i0 = lo(xmin), i1 = hi(xmax);
    const long j0 = lo(ymin), j1 = hi(ymax);
    return Grid(static_cast<int>(i1 - i0 + 1), static_cast<int>(j1 - j0 + 1),
                h, static_cast<double>(i0) * h, static_cast<double>(j0) * h);
  }

  std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) +
           static_cast<std::size_t>(i);
  }
  std::size_t index(Node n) const { return index(n.i, n.j); }
  Node node(std::size_t k) const {
    return {static_cast<int>(k % static_cast<std::size_t>(nx)),
            static_cast<int>(k / static_cast<std::size_t>(nx))};
  }
  bool in_bounds(int i, int j) const {
    return i >= 0 && j >= 0 && i < nx && j < ny;
  }
  bool on_border(int i, int j) const {
    return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
  }
  double x(int i) const { return x0 + i * h; }
  double y(int j) const { return y0 + j * h; }
  Point point(Node n) const { return {x(n.i), y(n.j)}; }

  bool same_shape(const Grid& o) const {
    return nx == o.nx && ny == o.ny && h == o.h && x0 == o.x0 && y0 == o.y0;
  }
};

/// Counter-clockwise quarter turn of the lattice about the world origin.
inline Grid rotated90(const Grid& g) {
  return Grid(g.ny, g.nx, g.h, -(g.y0 + (g.ny - 1) * g.h), g.x0);
}

/// Permutes nodal values under rotated90: node (i, j) moves to (ny-1-j, i).
template <class T>
std::vector<T> rotate90(const Grid& g, const std::vector<T>& values) {
  const Grid r = rotated90(g);
  std::vector<T> out(values.size());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      out[r.index(g.ny - 1 - j, i)] = values[g.index(i, j)];
  return out;
}

// ---------------------------------------------------------------------------
// Shapes

struct Disk {
  Point center;
  double radius = 0.0;
};

struct Rect {
  Point lo;
  Point hi;
};

struct Polygon {
  std::vector<Point> vertices;
};

using Shape = std::variant<Disk, Rect, Polygon>;

enum class Closure { open, closed };

inline bool contains(const Disk& d, Point p, Closure c) {
  const double dx = p.x - d.center.x, dy = p.y - d.center.y;
  const double rr = dx * dx + dy * dy, r2 = d.radius * d.radius;
  return c == Closure::open ? rr < r2 : rr <= r2;
}

inline bool contains(const Rect& r, Point p, Closure c) {
  if (c == Closure::open)
    return p.x > r.lo.x && p.x < r.hi.x && p.y > r.lo.y && p.y < r.hi.y;
  return p.x >= r.lo.x && p.x <= r.hi.x && p.y >= r.lo.y && p.y <= r.hi.y;
}

// Even-odd rule; points exactly on an edge are unspecified.
inline bool contains(const Polygon& poly, Point p, Closure) {
  const auto& v = poly.vertices;
  bool in = false;
  for (std::size_t a = 0, b = v.size() - 1; a < v.size(); b = a++) {
    if ((v[a].y > p.y) != (v[b].y > p.y)) {
      const double xc =
          v[a].x + (p.y - v[a].y) * (v[b].x - v[a].x) / (v[b].y - v[a].y);
      if (p.x < xc) in = !in;
    }
  }
  return in;
}

inline bool contains(const Shape& s, Point p, Closure c) {
  return std::visit([&](const auto& shape) { return contains(shape, p, c); },
                    s);
}

enum class SetOp { unite, subtract };

struct Primitive {
  Shape shape;
  SetOp op = SetOp::unite;
};

// ---------------------------------------------------------------------------
// Domain mask

/// Inside/outside flag per node. Border nodes are always outside, so every
/// inside node has its full 3x3 neighbourhood in bounds.
class DomainMask {
 public:
  DomainMask() = default;
  DomainMask(Grid grid, std::vector<std::uint8_t> inside)
      : grid_(grid), inside_(std::move(inside)) {
    require(inside_.size() == grid_.size(), ErrorKind::invalid_argument,
            "mask size does not match grid");
    count_ = 0;
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i) {
        auto& v = inside_[grid_.index(i, j)];
        if (grid_.on_border(i, j)) v = 0;
        v = v ? 1 : 0;
        count_ += v;
      }
    require(count_ > 0, ErrorKind::degenerate_domain,
            "degenerate domain: no inside nodes");
  }

  const Grid& grid() const { return grid_; }
  const std::vector<std::uint8_t>& values() const { return inside_; }
  bool inside(std::size_t k) const { return inside_[k] != 0; }
  bool inside(int i, int j) const { return inside_[grid_.index(i, j)] != 0; }
  std::size_t count() const { return count_; }

  /// True when the node and its 8 neighbours are all inside.
  bool interior(int i, int j) const {
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di)
        if (!inside(i + di, j + dj)) return false;
    return true;
  }

  friend bool operator==(const DomainMask& a, const DomainMask& b) {
    return a.grid_.same_shape(b.grid_) && a.inside_ == b.inside_;
  }

 private:
  Grid grid_;
  std::vector<std::uint8_t> inside_;
  std::size_t count_ = 0;
};

inline DomainMask rotate90(const DomainMask& m) {
  return DomainMask(rotated90(m.grid()), rotate90(m.grid(), m.values()));
}

/// Composes the primitives in order (union / difference) starting from the
/// empty set. Membership is strict: boundary points are outside.
inline DomainMask rasterize(std::span<const Primitive> primitives,
                            const Grid& grid) {
  require(!primitives.empty(), ErrorKind::invalid_argument,
          "primitive list is empty");
  std::vector<std::uint8_t> inside(grid.size(), 0);
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const Point p{grid.x(i), grid.y(j)};
      bool in = false;
      for (const auto& prim : primitives) {
        const bool hit = contains(prim.shape, p, Closure::open);
        if (prim.op == SetOp::unite)
          in = in || hit;
        else
          in = in && !hit;
      }
      inside[grid.index(i, j)] = in ? 1 : 0;
    }
  return DomainMask(grid, std::move(inside));
}

// ---------------------------------------------------------------------------
// Distance transform

/// Distance from each node to the nearest outside node. `squared` holds the
/// exact squared distance in index units; `d = h * sqrt(squared)`.
struct DistanceField {
  Grid grid;
  std::vector<std::int64_t> squared;
  std::vector<double> d;

  double at(Node n) const { return d[grid.index(n)]; }
};

namespace detail {

constexpr std::int64_t kFar = std::numeric_limits<std::int64_t>::max() / 4;

// Lower envelope of parabolas (Felzenszwalb & Huttenlocher), exact on
// integer inputs.
inline void edt_1d(std::span<const std::int64_t> f, std::span<std::int64_t> out,
                   std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (f[q] >= kFar) continue;
    const double fq = static_cast<double>(f[q]) + double(q) * q;
    while (k >= 0) {
      const int p = v[k];
      const double s = (fq - (static_cast<double>(f[p]) + double(p) * p)) /
                       (2.0 * (q - p));
      if (s <= z[k]) {
        --k;
      } else {
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
        break;
      }
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -std::numeric_limits<double>::infinity();
      z[1] = std::numeric_limits<double>::infinity();
    }
  }
  if (k < 0) {
    std::fill(out.begin(), out.end(), kFar);
    return;
  }
  int seg = 0;
  for (int q = 0; q < n; ++q) {
    while (z[seg + 1] < q) ++seg;
    const std::int64_t dq = q - v[seg];
    out[q] = dq * dq + f[v[seg]];
  }
}

}  // namespace detail

/// Exact Euclidean distance transform, O(N).
inline DistanceField edt(const DomainMask& mask) {
  const Grid& g = mask.grid();
  std::vector<std::int64_t> sq(g.size());
  for (std::size_t k = 0; k < g.size(); ++k)
    sq[k] = mask.inside(k) ? detail::kFar : 0;

  std::vector<int> v;
  std::vector<double> z;
  std::vector<std::int64_t> col(g.ny), colout(g.ny);
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.ny; ++j) col[j] = sq[g.index(i, j)];
    detail::edt_1d(col, colout, v, z);
    for (int j = 0; j < g.ny; ++j) sq[g.index(i, j)] = colout[j];
  }
  std::vector<std::int64_t> row(g.nx);
  for (int j = 0; j < g.ny; ++j) {
    std::span<std::int64_t> r(sq.data() + g.index(0, j), g.nx);
    std::copy(r.begin(), r.end(), row.begin());
    detail::edt_1d(row, r, v, z);
  }

  DistanceField out{g, std::move(sq), std::vector<double>(g.size())};
  for (std::size_t k = 0; k < g.size(); ++k)
    out.d[k] = g.h * std::sqrt(static_cast<double>(out.squared[k]));
  return out;
}

}  // namespace plimit
