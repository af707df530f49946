#pragma once

// Pointwise residuals of the limit equation
//
//   -Dinf v = 0                               in {m v = 0}°
//   min{-Dinf v, |grad v| - lambda v} = 0     in {m v > 0}
//   max{-Dinf v, -|grad v| - lambda v} = 0    in {m v < 0}
//
// with Dinf u = <D^2u grad u, grad u>, evaluated on interior nodes (full 3x3
// stencil inside the domain) where u is smooth enough for centred stencils.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "plimit/error.hpp"
#include "plimit/field.hpp"
#include "plimit/weight.hpp"

namespace plimit {

/// uxx ux^2 + 2 ux uy uxy + uyy uy^2 with centred differences; zero on the
/// grid border.
inline ScalarField inf_laplacian(const ScalarField& f) {
  const Grid& g = f.grid;
  ScalarField out(g);
  const double h = g.h;
  for (int j = 1; j + 1 < g.ny; ++j)
    for (int i = 1; i + 1 < g.nx; ++i) {
      const double c = f.at(i, j);
      const double e = f.at(i + 1, j), wv = f.at(i - 1, j);
      const double n = f.at(i, j + 1), s = f.at(i, j - 1);
      const double ux = (e - wv) / (2.0 * h);
      const double uy = (n - s) / (2.0 * h);
      const double uxx = (e - 2.0 * c + wv) / (h * h);
      const double uyy = (n - 2.0 * c + s) / (h * h);
      const double uxy = (f.at(i + 1, j + 1) - f.at(i + 1, j - 1) -
                          f.at(i - 1, j + 1) + f.at(i - 1, j - 1)) /
                         (4.0 * h * h);
      out[g.index(i, j)] = ux * ux * uxx + 2.0 * ux * uy * uxy + uy * uy * uyy;
    }
  return out;
}

enum class Regime : std::uint8_t { none, pos, neg, zero, excluded };

struct RegimeMask {
  Grid grid;
  std::vector<Regime> label;  ///< `none` on nodes that are not interior
};

struct ViscosityOptions {
  /// |m u| at or below this counts as zero; negative selects 1e-12 max|m u|.
  double regime_tol = -1.0;
  /// Kink threshold on one-sided slope jumps; unset selects 0.2 Lip(u).
  std::optional<double> kink_tol;
  /// Pass threshold is c_tol * h.
  double c_tol = 4.0;
  bool keep_residual_field = false;
};

struct RegimeStats {
  std::size_t count = 0;
  double max_residual = 0.0;
  bool pass = true;
};

struct ViscosityReport {
  RegimeStats pos, neg, zero;
  std::size_t excluded = 0;
  double tolerance = 0.0;
  double boundary_max = 0.0;  ///< max |u| on outside nodes
  double lipschitz = 0.0;
  double kink_tol = 0.0;
  std::optional<ScalarField> residual;
};

/// Largest one-sided slope between 4-neighbours.
inline double lipschitz_estimate(const ScalarField& f) {
  const Grid& g = f.grid;
  double lip = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (i + 1 < g.nx) lip = std::max(lip, std::abs(f.at(i + 1, j) - f.at(i, j)));
      if (j + 1 < g.ny) lip = std::max(lip, std::abs(f.at(i, j + 1) - f.at(i, j)));
    }
  return lip / g.h;
}

inline RegimeMask classify_regimes(const ScalarField& u, const WeightField& w,
                                   const ViscosityOptions& opts,
                                   double* kink_tol_used = nullptr) {
  const Grid& g = u.grid;
  const DomainMask& mask = w.mask();
  std::vector<double> mu(g.size());
  double mu_max = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    mu[k] = w[k] * u[k];
    mu_max = std::max(mu_max, std::abs(mu[k]));
  }
  const double eps = opts.regime_tol >= 0.0 ? opts.regime_tol : 1e-12 * mu_max;
  const double kink = opts.kink_tol ? *opts.kink_tol : 0.2 * lipschitz_estimate(u);
  if (kink_tol_used) *kink_tol_used = kink;

  RegimeMask out{g, std::vector<Regime>(g.size(), Regime::none)};
  for (int j = 1; j + 1 < g.ny; ++j)
    for (int i = 1; i + 1 < g.nx; ++i) {
      if (!mask.interior(i, j)) continue;
      const std::size_t k = g.index(i, j);
      const double c = u[k];
      const double jump_x =
          std::abs((u.at(i + 1, j) - c) - (c - u.at(i - 1, j))) / g.h;
      const double jump_y =
          std::abs((u.at(i, j + 1) - c) - (c - u.at(i, j - 1))) / g.h;
      Regime r;
      if (jump_x > kink || jump_y > kink) {
        r = Regime::excluded;
      } else if (mu[k] > eps) {
        r = Regime::pos;
      } else if (mu[k] < -eps) {
        r = Regime::neg;
      } else {
        r = Regime::zero;
        for (int dj = -1; dj <= 1 && r == Regime::zero; ++dj)
          for (int di = -1; di <= 1; ++di)
            if (std::abs(mu[g.index(i + di, j + dj)]) > eps) {
              r = Regime::excluded;
              break;
            }
      }
      out.label[k] = r;
    }
  return out;
}

inline ViscosityReport check_viscosity(const ScalarField& u, double lambda,
                                       const WeightField& w,
                                       const ViscosityOptions& opts = {}) {
  require(lambda > 0.0, ErrorKind::invalid_argument, "lambda must be positive");
  require(u.grid.same_shape(w.grid()), ErrorKind::grid_mismatch,
          "field grid does not match the weight grid");
  const Grid& g = u.grid;
  ViscosityReport rep;
  rep.tolerance = opts.c_tol * g.h;
  rep.lipschitz = lipschitz_estimate(u);
  const RegimeMask regimes = classify_regimes(u, w, opts, &rep.kink_tol);
  const ScalarField dinf = inf_laplacian(u);
  if (opts.keep_residual_field) rep.residual = ScalarField(g);

  for (std::size_t k = 0; k < g.size(); ++k)
    if (!w.mask().inside(k)) rep.boundary_max = std::max(rep.boundary_max, std::abs(u[k]));

  for (int j = 1; j + 1 < g.ny; ++j)
    for (int i = 1; i + 1 < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      const Regime r = regimes.label[k];
      if (r == Regime::none) continue;
      if (r == Regime::excluded) {
        ++rep.excluded;
        continue;
      }
      const double ux = (u.at(i + 1, j) - u.at(i - 1, j)) / (2.0 * g.h);
      const double uy = (u.at(i, j + 1) - u.at(i, j - 1)) / (2.0 * g.h);
      const double grad = std::hypot(ux, uy);
      const double minus_dinf = -dinf[k];
      double res = 0.0;
      RegimeStats* st = nullptr;
      switch (r) {
        case Regime::zero:
          res = std::abs(minus_dinf);
          st = &rep.zero;
          break;
        case Regime::pos:
          res = std::abs(std::min(minus_dinf, grad - lambda * u[k]));
          st = &rep.pos;
          break;
        case Regime::neg:
          res = std::abs(std::max(minus_dinf, -grad - lambda * u[k]));
          st = &rep.neg;
          break;
        default:
          break;
      }
      ++st->count;
      st->max_residual = std::max(st->max_residual, res);
      if (rep.residual) (*rep.residual)[k] = res;
    }
  for (RegimeStats* st : {&rep.pos, &rep.neg, &rep.zero})
    st->pass = st->max_residual <= rep.tolerance;
  return rep;
}

}  // namespace plimit
