#pragma once

// Geometric p -> infinity limits: inscribed radii restricted to the sign
// sets of the weight, k-ball packings, and the cone test functions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "plimit/error.hpp"
#include "plimit/field.hpp"
#include "plimit/grid.hpp"
#include "plimit/weight.hpp"

namespace plimit {

struct RadiusAt {
  double radius = 0.0;
  Node center;
};

/// Largest ball inside the domain centred at a node of `region`.
/// Ties go to the lexicographically smallest (i, j).
inline RadiusAt r_plus(const DistanceField& dist,
                       std::span<const std::uint8_t> region) {
  const Grid& g = dist.grid;
  require(region.size() == g.size(), ErrorKind::invalid_argument,
          "region mask does not match grid");
  std::int64_t best = -1;
  Node arg{};
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const std::size_t k = g.index(i, j);
      if (region[k] && dist.squared[k] > best) {
        best = dist.squared[k];
        arg = {i, j};
      }
    }
  require(best >= 0, ErrorKind::no_positive_region, "no positive region");
  return {dist.at(arg), arg};
}

struct PackingResult {
  int k = 0;
  double radius = 0.0;
  std::vector<Node> centers;
  /// False for the k >= 3 heuristic, whose radius is only a lower bound.
  bool exact = true;
};

struct PackOptions {
  std::uint64_t seed = 0;
  int restarts = 8;
};

namespace detail {

inline double half_distance(const Grid& g, Node a, Node b) {
  return 0.5 * g.h * std::sqrt(static_cast<double>(squared_index_distance(a, b)));
}

inline std::int64_t cross(Node o, Node a, Node b) {
  return static_cast<std::int64_t>(a.i - o.i) * (b.j - o.j) -
         static_cast<std::int64_t>(a.j - o.j) * (b.i - o.i);
}

// Squared diameter of a point set given in lexicographic order, via the
// monotone-chain hull. Returns the farthest pair.
inline std::pair<std::int64_t, std::pair<Node, Node>> diameter(
    std::span<const Node> sorted) {
  if (sorted.size() == 1) return {0, {sorted[0], sorted[0]}};
  std::vector<Node> hull(2 * sorted.size());
  std::size_t k = 0;
  for (const Node& p : sorted) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t t = sorted.size() - 1, lo = k + 1; t-- > 0;) {
    const Node& p = sorted[t];
    while (k >= lo && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  std::int64_t best = -1;
  std::pair<Node, Node> pair{hull[0], hull[0]};
  for (std::size_t a = 0; a < hull.size(); ++a)
    for (std::size_t b = a + 1; b < hull.size(); ++b) {
      const auto d2 = squared_index_distance(hull[a], hull[b]);
      if (d2 > best) {
        best = d2;
        pair = {hull[a], hull[b]};
      }
    }
  if (best < 0) best = 0;
  return {best, pair};
}

// Exact two-ball packing. With S_t the region nodes whose distance is at
// least t, the optimum is max_t min(t, diam(S_t) / 2); diam(S_t) grows as t
// falls, so a binary search over the distinct thresholds finds the crossing.
inline PackingResult pack_two(const DistanceField& dist,
                              std::span<const std::uint8_t> region) {
  const Grid& g = dist.grid;
  std::vector<Node> nodes;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      if (region[g.index(i, j)]) nodes.push_back({i, j});
  require(nodes.size() >= 2, ErrorKind::infeasible_packing,
          "infeasible packing: fewer region nodes than balls");

  std::vector<std::int64_t> thresholds;
  thresholds.reserve(nodes.size());
  for (const Node& n : nodes) thresholds.push_back(dist.squared[g.index(n)]);
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());

  std::vector<Node> subset;
  auto diam_at = [&](std::size_t m) {
    subset.clear();
    for (const Node& n : nodes)
      if (dist.squared[g.index(n)] >= thresholds[m]) subset.push_back(n);
    return diameter(subset);
  };

  // First threshold index whose set is wide enough: diam >= 2 t.
  std::size_t lo = 0, hi = thresholds.size();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (diam_at(mid).first >= 4 * thresholds[mid])
      hi = mid;
    else
      lo = mid + 1;
  }

  auto evaluate = [&](std::pair<Node, Node> pr) {
    PackingResult r;
    r.k = 2;
    r.exact = true;
    r.centers = {pr.first, pr.second};
    r.radius = std::min({dist.at(pr.first), dist.at(pr.second),
                         half_distance(g, pr.first, pr.second)});
    return r;
  };

  std::optional<PackingResult> best;
  if (lo < thresholds.size()) best = evaluate(diam_at(lo).second);
  const std::size_t narrow = lo < thresholds.size() ? lo : thresholds.size();
  if (narrow > 0) {
    auto cand = evaluate(diam_at(narrow - 1).second);
    if (!best || cand.radius > best->radius) best = cand;
  }
  return *best;
}

inline double config_radius(const DistanceField& dist,
                            std::span<const Node> centers) {
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < centers.size(); ++a) {
    r = std::min(r, dist.at(centers[a]));
    for (std::size_t b = a + 1; b < centers.size(); ++b)
      r = std::min(r, half_distance(dist.grid, centers[a], centers[b]));
  }
  return r;
}

// Score of placing centre `i` at node n given the others.
inline double center_score(const DistanceField& dist,
                           std::span<const Node> centers, std::size_t i,
                           Node n) {
  double r = dist.at(n);
  for (std::size_t b = 0; b < centers.size(); ++b)
    if (b != i) r = std::min(r, half_distance(dist.grid, n, centers[b]));
  return r;
}

inline PackingResult pack_heuristic(int k, const DistanceField& dist,
                                    std::span<const std::uint8_t> region,
                                    const PackOptions& opts) {
  const Grid& g = dist.grid;
  std::vector<Node> nodes;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j)
      if (region[g.index(i, j)]) nodes.push_back({i, j});
  require(nodes.size() >= static_cast<std::size_t>(k),
          ErrorKind::infeasible_packing,
          "infeasible packing: fewer region nodes than balls");

  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  const Node top = r_plus(dist, region).center;

  PackingResult best;
  best.k = k;
  best.exact = false;
  best.radius = -1.0;
  const int restarts = std::max(1, opts.restarts);
  for (int rs = 0; rs < restarts; ++rs) {
    std::vector<Node> centers{rs == 0 ? top : nodes[pick(rng)]};
    // Farthest-point seeding.
    while (static_cast<int>(centers.size()) < k) {
      double s_best = -1.0;
      Node arg = nodes.front();
      for (const Node& n : nodes) {
        const double s = center_score(dist, centers, centers.size(), n);
        if (s > s_best) {
          s_best = s;
          arg = n;
        }
      }
      centers.push_back(arg);
    }
    // Coordinate descent over shrinking windows.
    for (int w = std::max(1, std::max(g.nx, g.ny) / 16); w >= 1; w /= 2) {
      bool moved = true;
      while (moved) {
        moved = false;
        for (std::size_t c = 0; c < centers.size(); ++c) {
          double s_cur = center_score(dist, centers, c, centers[c]);
          Node arg = centers[c];
          for (int dj = -w; dj <= w; ++dj)
            for (int di = -w; di <= w; ++di) {
              const int i = centers[c].i + di, j = centers[c].j + dj;
              if (!g.in_bounds(i, j) || !region[g.index(i, j)]) continue;
              const double s = center_score(dist, centers, c, {i, j});
              if (s > s_cur) {
                s_cur = s;
                arg = {i, j};
              }
            }
          if (!(arg == centers[c])) {
            centers[c] = arg;
            moved = true;
          }
        }
      }
    }
    const double r = config_radius(dist, centers);
    if (r > best.radius) {
      best.radius = r;
      best.centers = centers;
    }
  }
  return best;
}

}  // namespace detail

/// Largest common radius of k disjoint balls inside the domain centred in
/// `region`. Exact for k <= 2; for k >= 3 a local-search lower bound.
inline PackingResult pack(int k, const DistanceField& dist,
                          std::span<const std::uint8_t> region,
                          const PackOptions& opts = {}) {
  require(k >= 1, ErrorKind::invalid_argument, "k must be at least 1");
  require(region.size() == dist.grid.size(), ErrorKind::invalid_argument,
          "region mask does not match grid");
  bool any = false;
  for (auto v : region) any = any || v;
  require(any, ErrorKind::no_positive_region, "no positive region");
  if (k == 1) {
    const auto r = r_plus(dist, region);
    return {1, r.radius, {r.center}, true};
  }
  if (k == 2) return detail::pack_two(dist, region);
  return detail::pack_heuristic(k, dist, region, opts);
}

/// (radius - |x - center|)^+ sampled at nodes.
inline ScalarField cone_field(Node center, double radius,
                              const DistanceField& dist) {
  const Grid& g = dist.grid;
  require(g.in_bounds(center.i, center.j), ErrorKind::invalid_argument,
          "cone centre out of bounds");
  require(radius > 0.0, ErrorKind::invalid_argument,
          "cone radius must be positive");
  require(radius <= dist.at(center), ErrorKind::ball_outside_domain,
          "ball exits the domain");
  ScalarField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double r = g.h * std::sqrt(static_cast<double>(
                                 squared_index_distance({i, j}, center)));
      f[g.index(i, j)] = std::max(0.0, radius - r);
    }
  return f;
}

/// alpha * cone(c1) + beta * cone(c2) on disjoint balls of equal radius.
inline ScalarField two_cone_field(double alpha, double beta, Node c1, Node c2,
                                  double radius, const DistanceField& dist) {
  require(detail::half_distance(dist.grid, c1, c2) >= radius,
          ErrorKind::invalid_argument, "cone balls overlap");
  ScalarField a = cone_field(c1, radius, dist);
  const ScalarField b = cone_field(c2, radius, dist);
  for (std::size_t k = 0; k < a.u.size(); ++k)
    a.u[k] = alpha * a.u[k] + beta * b.u[k];
  return a;
}

struct GeoLimits {
  double r_plus = 0.0;
  Node center_plus;
  std::optional<double> r_minus;
  std::optional<Node> center_minus;
  double r2_plus = 0.0;
  std::vector<Node> centers2;
  double lambda1_inf = 0.0;
  double lambda2_inf = 0.0;
  std::optional<double> mu1_inf;
  double lambda1_inf_C = 0.0;
};

inline double lambda1_inf_with_potential(double r_plus) {
  return std::max(1.0 / r_plus, 1.0);
}

inline GeoLimits geo_limits(const DistanceField& dist, const WeightField& w) {
  GeoLimits out;
  const auto rp = r_plus(dist, w.plus());
  out.r_plus = rp.radius;
  out.center_plus = rp.center;
  out.lambda1_inf = 1.0 / rp.radius;
  out.lambda1_inf_C = lambda1_inf_with_potential(rp.radius);
  if (w.minus_count() > 0) {
    const auto rm = r_plus(dist, w.minus());
    out.r_minus = rm.radius;
    out.center_minus = rm.center;
    out.mu1_inf = -1.0 / rm.radius;
  }
  const auto two = pack(2, dist, w.plus());
  out.r2_plus = two.radius;
  out.centers2 = two.centers;
  out.lambda2_inf = 1.0 / two.radius;
  return out;
}

}  // namespace plimit
