#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "plimit/plimit.hpp"

namespace plimit::testing {

inline Grid disk_grid(double h, double radius = 1.0) {
  return Grid::covering(-radius, radius, -radius, radius, h);
}

inline DomainMask disk_mask(double h, double radius = 1.0) {
  const Primitive prim{Disk{{0.0, 0.0}, radius}, SetOp::unite};
  return rasterize(std::span<const Primitive>(&prim, 1), disk_grid(h, radius));
}

inline PiecewiseWeight ball_weight(double delta) {
  return {-1.0, {{Disk{{0.0, 0.0}, delta}, 1.0}}};
}

inline PiecewiseWeight strip_weight(double delta, double radius = 1.0) {
  return {1.0, {{Disk{{0.0, 0.0}, radius - delta}, -1.0}}};
}

inline PiecewiseWeight two_ball_weight(double delta) {
  return {-1.0, {{Disk{{-0.5, 0.0}, delta}, 1.0}, {Disk{{0.5, 0.0}, delta}, 1.0}}};
}

inline DomainMask random_mask(int nx, int ny, double fill, std::mt19937_64& rng) {
  const Grid g(nx, ny, 1.0);
  std::bernoulli_distribution in(fill);
  std::vector<std::uint8_t> v(g.size());
  for (auto& x : v) x = in(rng) ? 1 : 0;
  v[g.index(nx / 2, ny / 2)] = 1;
  return DomainMask(g, std::move(v));
}

/// Nearest outside node by scanning every node pair.
inline std::vector<double> brute_force_distance(const DomainMask& m) {
  const Grid& g = m.grid();
  std::vector<double> d(g.size(), 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!m.inside(i, j)) continue;
      std::int64_t best = std::numeric_limits<std::int64_t>::max();
      for (int b = 0; b < g.ny; ++b)
        for (int a = 0; a < g.nx; ++a)
          if (!m.inside(a, b))
            best = std::min(best, squared_index_distance({i, j}, {a, b}));
      d[g.index(i, j)] = g.h * std::sqrt(static_cast<double>(best));
    }
  return d;
}

/// max over region pairs of min(d(a), d(b), |a - b| / 2).
inline double brute_force_pack_two(const DistanceField& dist,
                                   std::span<const std::uint8_t> region) {
  const Grid& g = dist.grid;
  std::vector<Node> nodes;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (region[g.index(i, j)]) nodes.push_back({i, j});
  double best = -1.0;
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b)
      best = std::max(best, std::min({dist.at(nodes[a]), dist.at(nodes[b]),
                                      detail::half_distance(g, nodes[a], nodes[b])}));
  return best;
}

inline std::vector<Node> inside_nodes(const DomainMask& m) {
  std::vector<Node> out;
  const Grid& g = m.grid();
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (m.inside(i, j)) out.push_back({i, j});
  return out;
}

/// Random admissible cones centred in the region: radius in (h, d(c)].
inline std::vector<std::pair<Node, double>> random_cones(const DistanceField& dist,
                                                         std::span<const std::uint8_t> region,
                                                         int count, std::uint64_t seed) {
  const Grid& g = dist.grid;
  std::vector<Node> cand;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (region[g.index(i, j)] && dist.at({i, j}) > g.h) cand.push_back({i, j});
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cand.size() - 1);
  std::uniform_real_distribution<double> frac(0.2, 1.0);
  std::vector<std::pair<Node, double>> out;
  for (int k = 0; k < count; ++k) {
    const Node c = cand[pick(rng)];
    out.push_back({c, std::max(g.h, frac(rng) * dist.at(c))});
  }
  return out;
}

// Probe fields keep every node's share of the global sums comparable, so a
// single-node perturbation is not swamped by rounding at large p: slopes near
// 1 everywhere for E, values near 1 everywhere for G.
inline ScalarField energy_probe(const DomainMask& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(0.0, 0.3 * m.grid().h);
  ScalarField f(m.grid(), edt(m).d);
  for (std::size_t k = 0; k < f.u.size(); ++k)
    if (m.inside(k)) f[k] += noise(rng);
  return f;
}

inline ScalarField mass_probe(const DomainMask& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> val(0.8, 1.2);
  ScalarField f(m.grid());
  for (std::size_t k = 0; k < f.u.size(); ++k)
    if (m.inside(k)) f[k] = val(rng);
  return f;
}

struct GradientError {
  double energy = 0.0;  ///< worst relative error of dE over the sampled nodes
  double mass = 0.0;
};

/// Analytic dE and dG against fourth-order central differences of the
/// scalar functionals at `nodes` random inside nodes.
inline GradientError gradient_check(const WeightField& w, double p, const ScalarField* c,
                                    int nodes, std::uint64_t seed) {
  const RayleighFunctional f(w, p, c);
  const auto& idx = f.inside_nodes();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);

  auto fd = [&](const ScalarField& u, std::size_t k, auto&& fn) {
    const double eps = 1e-4 * u[k];
    auto at = [&](double t) {
      auto v = u.u;
      v[k] += t * eps;
      return fn(v);
    };
    return (8 * (at(1) - at(-1)) - (at(2) - at(-2))) / (12 * eps);
  };

  const ScalarField ue = energy_probe(w.mask(), seed + 1);
  const ScalarField ug = mass_probe(w.mask(), seed + 2);
  const auto gE = f.energy_gradient(ue.u);
  const auto gG = f.mass_gradient(ug.u);
  GradientError err;
  for (int n = 0; n < nodes; ++n) {
    const std::size_t k = idx[pick(rng)];
    const double fdE = fd(ue, k, [&](const std::vector<double>& v) { return f.energy(v).value; });
    const double fdG = fd(ug, k, [&](const std::vector<double>& v) { return f.mass(v); });
    err.energy = std::max(err.energy, std::abs(gE[k] - fdE) / std::abs(gE[k]));
    err.mass = std::max(err.mass, std::abs(gG[k] - fdG) / std::abs(gG[k]));
  }
  return err;
}

}  // namespace plimit::testing
