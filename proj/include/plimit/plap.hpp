#pragma once

// Discrete weighted p-Laplacian principal eigenproblem.
//
//   E(u) = h^2/4 sum_cells sum_corners |g_corner|^p  (+ h^2 sum_nodes C |u|^p)
//   G(u) = h^2 sum_nodes m |u|^p
//
// Each cell corner gradient uses the two forward differences along the cell
// edges meeting at that corner. Averaging the four corners keeps the stencil
// invariant under the square's symmetry group; for p = 2 it reduces to the
// 5-point Laplacian. The principal eigenvalue minimizes R = E / G over
// nonnegative fields with G > 0.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "plimit/error.hpp"
#include "plimit/field.hpp"
#include "plimit/geo_limits.hpp"
#include "plimit/grid.hpp"
#include "plimit/weight.hpp"

namespace plimit {

inline constexpr double kMinP = 2.0;
inline constexpr double kMaxP = 64.0;

struct EnergyValue {
  double value = 0.0;
  double log = -std::numeric_limits<double>::infinity();
};

namespace detail {

inline void check_p(double p) {
  require(std::isfinite(p) && p - 2.0 >= 0.0, ErrorKind::invalid_argument,
          "exponent p must satisfy p >= 2");
}

inline void check_potential(const ScalarField* c, const DomainMask& mask) {
  if (!c) return;
  require(c->grid.same_shape(mask.grid()), ErrorKind::grid_mismatch,
          "potential grid does not match domain");
  for (std::size_t k = 0; k < c->u.size(); ++k)
    if (mask.inside(k))
      require(c->u[k] > 0.0, ErrorKind::invalid_argument,
              "zero-order coefficient C must be positive inside the domain");
}

// log(sum) from a max-rescaled sum; -inf for an empty sum.
inline double log_scaled(double scaled_sum, double log_scale) {
  if (scaled_sum <= 0.0) return -std::numeric_limits<double>::infinity();
  return log_scale + std::log(scaled_sum);
}

}  // namespace detail

/// Energy, Rayleigh quotient and the gradient of log R for fixed (m, C, p).
/// All sums are max-rescaled so large p cannot overflow.
class RayleighFunctional {
 public:
  struct Evaluation {
    double log_energy = -std::numeric_limits<double>::infinity();
    double log_mass = -std::numeric_limits<double>::infinity();
    bool mass_positive = false;
    double log_rayleigh = std::numeric_limits<double>::infinity();
  };

  RayleighFunctional(const WeightField& w, double p,
                     const ScalarField* c = nullptr)
      : w_(w), c_(c), p_(p) {
    detail::check_p(p);
    detail::check_potential(c, w.mask());
    const Grid& g = w.grid();
    for (int j = 0; j + 1 < g.ny; ++j)
      for (int i = 0; i + 1 < g.nx; ++i) {
        const auto& mk = w.mask();
        if (mk.inside(i, j) || mk.inside(i + 1, j) || mk.inside(i, j + 1) ||
            mk.inside(i + 1, j + 1))
          cells_.push_back(g.index(i, j));
      }
    for (std::size_t k = 0; k < g.size(); ++k)
      if (w.mask().inside(k)) inside_.push_back(k);
  }

  double p() const { return p_; }
  const WeightField& weight() const { return w_; }
  const std::vector<std::size_t>& inside_nodes() const { return inside_; }

  Evaluation evaluate(const std::vector<double>& u) const {
    Evaluation ev;
    const auto e = energy(u);
    ev.log_energy = e.log;
    double gs = 0.0, log_scale = 0.0;
    mass_scaled(u, gs, log_scale);
    ev.mass_positive = gs > 0.0;
    if (ev.mass_positive) {
      ev.log_mass = detail::log_scaled(gs, log_scale);
      ev.log_rayleigh = ev.log_energy - ev.log_mass;
    }
    return ev;
  }

  EnergyValue energy(const std::vector<double>& u) const {
    const double inv_h = 1.0 / w_.grid().h;
    const double scale = energy_scale(u, inv_h);
    if (scale == 0.0) return {};
    double es = 0.0;
    for_each_cell(u, inv_h, scale, [&](const CellTerms& t) {
      for (int c = 0; c < 4; ++c) es += t.pow_p[c];
    });
    es *= 0.25;
    if (c_) {
      for (std::size_t k : inside_) {
        const double a = std::abs(u[k]) / scale;
        es += c_->u[k] * std::pow(a, p_);
      }
    }
    const double h2 = w_.grid().h * w_.grid().h;
    const double log_e =
        detail::log_scaled(es, std::log(h2) + p_ * std::log(scale));
    return {std::exp(log_e), log_e};
  }

  double mass(const std::vector<double>& u) const {
    double gs = 0.0, log_scale = 0.0;
    mass_scaled(u, gs, log_scale);
    if (gs == 0.0) return 0.0;
    return (gs > 0.0 ? 1.0 : -1.0) * std::exp(log_scale + std::log(std::abs(gs)));
  }

  /// Gradient of E with respect to the nodal values (unscaled).
  std::vector<double> energy_gradient(const std::vector<double>& u) const {
    return energy_gradient_scaled(u, /*log_form=*/false);
  }

  /// Gradient of G with respect to the nodal values (unscaled).
  std::vector<double> mass_gradient(const std::vector<double>& u) const {
    const double h2 = w_.grid().h * w_.grid().h;
    std::vector<double> grad(u.size(), 0.0);
    for (std::size_t k : inside_)
      grad[k] = h2 * p_ * w_[k] * std::pow(std::abs(u[k]), p_ - 2.0) * u[k];
    return grad;
  }

  /// Gradient of log R = log E - log G. Requires E > 0 and G > 0.
  std::vector<double> log_rayleigh_gradient(const std::vector<double>& u) const {
    std::vector<double> grad = energy_gradient_scaled(u, /*log_form=*/true);
    double gs = 0.0, log_scale = 0.0;
    const double scale = mass_scaled(u, gs, log_scale);
    for (std::size_t k : inside_) {
      const double a = u[k] / scale;
      grad[k] -= p_ * w_[k] * std::pow(std::abs(a), p_ - 2.0) * a / scale / gs;
    }
    return grad;
  }

 private:
  struct CellTerms {
    std::size_t n00, n10, n01, n11;
    double bottom, top, left, right;  // scaled edge slopes
    double pow_p[4];                  // |g_c / scale|^p, corners 00 10 01 11
    double pow_pm2[4];                // |g_c / scale|^(p-2)
  };

  double energy_scale(const std::vector<double>& u, double inv_h) const {
    const std::size_t nx = static_cast<std::size_t>(w_.grid().nx);
    double m2 = 0.0;
    for (std::size_t k : cells_) {
      const double b = (u[k + 1] - u[k]) * inv_h;
      const double t = (u[k + nx + 1] - u[k + nx]) * inv_h;
      const double l = (u[k + nx] - u[k]) * inv_h;
      const double r = (u[k + nx + 1] - u[k + 1]) * inv_h;
      m2 = std::max({m2, b * b + l * l, b * b + r * r, t * t + l * l,
                     t * t + r * r});
    }
    double scale = std::sqrt(m2);
    if (c_) {
      for (std::size_t k : inside_) scale = std::max(scale, std::abs(u[k]));
    }
    return scale;
  }

  template <class F>
  void for_each_cell(const std::vector<double>& u, double inv_h, double scale,
                     F&& fn) const {
    const std::size_t nx = static_cast<std::size_t>(w_.grid().nx);
    const double s = inv_h / scale;
    const double half_pm2 = 0.5 * (p_ - 2.0);
    CellTerms t;
    for (std::size_t k : cells_) {
      t.n00 = k;
      t.n10 = k + 1;
      t.n01 = k + nx;
      t.n11 = k + nx + 1;
      t.bottom = (u[t.n10] - u[t.n00]) * s;
      t.top = (u[t.n11] - u[t.n01]) * s;
      t.left = (u[t.n01] - u[t.n00]) * s;
      t.right = (u[t.n11] - u[t.n10]) * s;
      const double sq[4] = {t.bottom * t.bottom + t.left * t.left,
                            t.bottom * t.bottom + t.right * t.right,
                            t.top * t.top + t.left * t.left,
                            t.top * t.top + t.right * t.right};
      for (int c = 0; c < 4; ++c) {
        t.pow_pm2[c] = half_pm2 == 0.0 ? 1.0 : std::pow(sq[c], half_pm2);
        t.pow_p[c] = t.pow_pm2[c] * sq[c];
      }
      fn(t);
    }
  }

  // Unscaled dE, or d log E when log_form is set.
  std::vector<double> energy_gradient_scaled(const std::vector<double>& u,
                                             bool log_form) const {
    const Grid& g = w_.grid();
    const double inv_h = 1.0 / g.h;
    std::vector<double> grad(u.size(), 0.0);
    const double scale = energy_scale(u, inv_h);
    if (scale == 0.0) return grad;
    double es = 0.0;
    for_each_cell(u, inv_h, scale, [&](const CellTerms& t) {
      const double fb = t.pow_pm2[0] + t.pow_pm2[1];
      const double ft = t.pow_pm2[2] + t.pow_pm2[3];
      const double fl = t.pow_pm2[0] + t.pow_pm2[2];
      const double fr = t.pow_pm2[1] + t.pow_pm2[3];
      const double vb = fb * t.bottom, vt = ft * t.top;
      const double vl = fl * t.left, vr = fr * t.right;
      grad[t.n10] += vb - vr;
      grad[t.n00] -= vb + vl;
      grad[t.n11] += vt + vr;
      grad[t.n01] += vl - vt;
      for (int c = 0; c < 4; ++c) es += t.pow_p[c];
    });
    es *= 0.25;
    // With a = u / scale and g = scale * slope:
    //   dE/du = h^2 scale^(p-1) p q,  q = acc / (4h) + C |a|^(p-2) a,
    //   E     = h^2 scale^p es.
    const double quarter_inv_h = 0.25 * inv_h;
    for (auto& v : grad) v *= quarter_inv_h;
    if (c_) {
      for (std::size_t k : inside_) {
        const double a = u[k] / scale;
        const double apm2 = std::pow(std::abs(a), p_ - 2.0);
        es += c_->u[k] * apm2 * a * a;
        grad[k] += c_->u[k] * apm2 * a;
      }
    }
    const double mult =
        log_form ? p_ / (scale * es)
                 : g.h * g.h * p_ * std::exp((p_ - 1.0) * std::log(scale));
    for (std::size_t k = 0; k < grad.size(); ++k)
      grad[k] = w_.mask().inside(k) ? grad[k] * mult : 0.0;
    return grad;
  }

  // Returns the scale U; sets the scaled sum sum m (|u|/U)^p and log(h^2 U^p).
  double mass_scaled(const std::vector<double>& u, double& gs,
                     double& log_scale) const {
    double scale = 0.0;
    for (std::size_t k : inside_) scale = std::max(scale, std::abs(u[k]));
    gs = 0.0;
    log_scale = 0.0;
    if (scale == 0.0) return 0.0;
    for (std::size_t k : inside_) {
      if (u[k] == 0.0) continue;
      gs += w_[k] * std::pow(std::abs(u[k]) / scale, p_);
    }
    const double h = w_.grid().h;
    log_scale = std::log(h * h) + p_ * std::log(scale);
    return scale;
  }

  const WeightField& w_;
  const ScalarField* c_;
  double p_;
  std::vector<std::size_t> cells_;
  std::vector<std::size_t> inside_;
};

// ---------------------------------------------------------------------------
// Scalar functionals

inline EnergyValue dirichlet_energy_p(const ScalarField& u,
                                      const WeightField& w, double p,
                                      const ScalarField* c = nullptr) {
  require(satisfies_dirichlet(u, w.mask()), ErrorKind::invalid_argument,
          "field violates the Dirichlet condition");
  return RayleighFunctional(w, p, c).energy(u.u);
}

inline double weighted_mass_p(const ScalarField& u, const WeightField& w,
                              double p) {
  require(satisfies_dirichlet(u, w.mask()), ErrorKind::invalid_argument,
          "field violates the Dirichlet condition");
  return RayleighFunctional(w, p).mass(u.u);
}

struct RayleighValue {
  double lambda = 0.0;
  double log_lambda = 0.0;
  double root = 0.0;  ///< lambda^(1/p), from the log
};

inline RayleighValue rayleigh_quotient(const ScalarField& u,
                                       const WeightField& w, double p,
                                       const ScalarField* c = nullptr) {
  require(satisfies_dirichlet(u, w.mask()), ErrorKind::invalid_argument,
          "field violates the Dirichlet condition");
  const auto ev = RayleighFunctional(w, p, c).evaluate(u.u);
  require(ev.mass_positive, ErrorKind::invalid_argument,
          "Rayleigh quotient needs positive weighted mass");
  return {std::exp(ev.log_rayleigh), ev.log_rayleigh,
          std::exp(ev.log_rayleigh / p)};
}

// ---------------------------------------------------------------------------
// Principal eigenpair

struct EigenOptions {
  double tol = 1e-8;
  int max_iter = 20000;
  /// Starting field; used when it beats the cone seed.
  std::optional<ScalarField> warm_start;
  bool record_history = false;
};

struct EigenResult {
  double p = 0.0;
  double lambda = 0.0;
  double log_lambda = 0.0;
  double lambda_root = 0.0;
  ScalarField field;  ///< normalized so the weighted p-mass is 1
  int iterations = 0;
  double final_step = 0.0;
  bool converged = false;
  double residual = 0.0;  ///< |d lambda| / lambda of the last step
  std::vector<double> history;  ///< accepted log lambda, if requested
};

struct ConeSeed {
  ScalarField field;
  double radius = 0.0;
  Node center;
  double log_rayleigh = std::numeric_limits<double>::infinity();
};

inline constexpr double kConeShrink = 0.9;

/// Cones at the R+ centre with radii R+, 0.9 R+, ... down to one cell;
/// returns the one with the smallest Rayleigh quotient among those with
/// positive weighted mass.
inline ConeSeed best_cone_seed(const RayleighFunctional& f,
                               const DistanceField& dist) {
  const auto& w = f.weight();
  const auto top = r_plus(dist, w.plus());
  ConeSeed best;
  best.center = top.center;
  for (double r = top.radius; r >= w.grid().h * (1.0 - 1e-12);
       r *= kConeShrink) {
    ScalarField cone = cone_field(top.center, r, dist);
    const auto ev = f.evaluate(cone.u);
    if (ev.mass_positive && ev.log_rayleigh < best.log_rayleigh) {
      best.field = std::move(cone);
      best.radius = r;
      best.log_rayleigh = ev.log_rayleigh;
    }
  }
  require(std::isfinite(best.log_rayleigh), ErrorKind::seed_failure,
          "cannot seed positive mass");
  return best;
}

namespace detail {

inline void normalize(std::vector<double>& u, double log_mass, double p) {
  const double s = std::exp(-log_mass / p);
  for (auto& v : u) v *= s;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b,
                  const std::vector<std::size_t>& idx) {
  double s = 0.0;
  for (std::size_t k : idx) s += a[k] * b[k];
  return s;
}

}  // namespace detail

namespace detail {

// Limited-memory inverse-Hessian product (two-loop recursion) restricted to
// the nodes in idx.
class LbfgsMemory {
 public:
  explicit LbfgsMemory(std::size_t depth) : depth_(depth) {}

  void clear() { s_.clear(), y_.clear(), rho_.clear(); }
  bool empty() const { return s_.empty(); }

  void push(std::vector<double> s, std::vector<double> y, double sy) {
    if (s_.size() == depth_) {
      s_.erase(s_.begin());
      y_.erase(y_.begin());
      rho_.erase(rho_.begin());
    }
    s_.push_back(std::move(s));
    y_.push_back(std::move(y));
    rho_.push_back(1.0 / sy);
  }

  // Returns -H g, with H0 = gamma I.
  std::vector<double> direction(const std::vector<double>& g, double gamma,
                                const std::vector<std::size_t>& idx) const {
    std::vector<double> q = g;
    std::vector<double> alpha(s_.size());
    for (std::size_t m = s_.size(); m-- > 0;) {
      alpha[m] = rho_[m] * dot(s_[m], q, idx);
      for (std::size_t k : idx) q[k] -= alpha[m] * y_[m][k];
    }
    for (std::size_t k : idx) q[k] *= gamma;
    for (std::size_t m = 0; m < s_.size(); ++m) {
      const double beta = rho_[m] * dot(y_[m], q, idx);
      for (std::size_t k : idx) q[k] += (alpha[m] - beta) * s_[m][k];
    }
    for (std::size_t k : idx) q[k] = -q[k];
    return q;
  }

 private:
  std::size_t depth_;
  std::vector<std::vector<double>> s_, y_;
  std::vector<double> rho_;
};

inline constexpr std::size_t kLbfgsDepth = 12;

}  // namespace detail

/// Projected descent on the Rayleigh quotient over u >= 0 with G(u) = 1.
/// Directions come from a limited-memory quasi-Newton model of log R (the
/// plain gradient -grad log R, parallel to -(grad E - lambda grad G) at
/// G = 1, whenever the model fails to give descent). Nodes pinned at zero
/// by the projection are frozen for the step. Steps are halved until lambda
/// strictly decreases, so the accepted sequence is monotone.
inline EigenResult solve_lambda1(const WeightField& w, double p,
                                 const ScalarField* c = nullptr,
                                 const EigenOptions& opts = {}) {
  require(p >= kMinP && p <= kMaxP, ErrorKind::invalid_argument,
          "p must lie in [2, 64]");
  require(w.plus_count() > 0, ErrorKind::no_positive_region,
          "no positive region");
  const RayleighFunctional f(w, p, c);
  const DistanceField dist = edt(w.mask());
  const auto& idx = f.inside_nodes();

  ConeSeed seed = best_cone_seed(f, dist);
  std::vector<double> u = std::move(seed.field.u);
  auto ev = f.evaluate(u);
  if (opts.warm_start) {
    require(opts.warm_start->grid.same_shape(w.grid()),
            ErrorKind::grid_mismatch, "warm start grid does not match");
    std::vector<double> ws(u.size(), 0.0);
    for (std::size_t k : idx) ws[k] = std::max(0.0, opts.warm_start->u[k]);
    const auto ev_ws = f.evaluate(ws);
    if (ev_ws.mass_positive && ev_ws.log_rayleigh < ev.log_rayleigh) {
      u = std::move(ws);
      ev = ev_ws;
    }
  }
  detail::normalize(u, ev.log_mass, p);
  ev = f.evaluate(u);

  EigenResult res;
  res.p = p;
  if (opts.record_history) res.history.push_back(ev.log_rayleigh);
  std::vector<double> g = f.log_rayleigh_gradient(u);
  double gmax = 0.0, umax = 0.0;
  for (std::size_t k : idx) {
    gmax = std::max(gmax, std::abs(g[k]));
    umax = std::max(umax, u[k]);
  }
  // Initial model scale: a step moving the largest entry by 10%.
  double gamma = gmax > 0.0 ? 0.1 * umax / gmax : 1.0;

  detail::LbfgsMemory memory(detail::kLbfgsDepth);
  std::vector<double> trial(u.size(), 0.0), g_new, dir;
  for (res.iterations = 0; res.iterations < opts.max_iter;) {
    std::vector<double> gf = g;
    for (std::size_t k : idx)
      if (u[k] <= 0.0 && g[k] > 0.0) gf[k] = 0.0;

    bool accepted = false;
    RayleighFunctional::Evaluation ev_t;
    double step = 1.0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      // First the quasi-Newton direction, then plain steepest descent.
      dir = memory.direction(gf, gamma, idx);
      for (std::size_t k : idx)
        if (u[k] <= 0.0 && g[k] > 0.0) dir[k] = 0.0;
      if (attempt == 1 || detail::dot(dir, gf, idx) >= 0.0) {
        if (memory.empty() && attempt == 1) break;
        memory.clear();
        dir = memory.direction(gf, gamma, idx);
        attempt = 1;
      }
      step = 1.0;
      for (int bt = 0; bt < 80; ++bt) {
        for (std::size_t k : idx) trial[k] = std::max(0.0, u[k] + step * dir[k]);
        ev_t = f.evaluate(trial);
        if (ev_t.mass_positive && ev_t.log_rayleigh < ev.log_rayleigh) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
    }
    if (!accepted) {
      // No decrease along any projected descent direction.
      res.converged = true;
      res.residual = 0.0;
      break;
    }
    ++res.iterations;
    detail::normalize(trial, ev_t.log_mass, p);
    g_new = f.log_rayleigh_gradient(trial);

    std::vector<double> sv(u.size(), 0.0), yv(u.size(), 0.0);
    double sy = 0.0, yy = 0.0;
    for (std::size_t k : idx) {
      sv[k] = trial[k] - u[k];
      yv[k] = g_new[k] - g[k];
      sy += sv[k] * yv[k];
      yy += yv[k] * yv[k];
    }
    if (sy > 1e-12 * std::sqrt(yy * detail::dot(sv, sv, idx)) && yy > 0.0) {
      memory.push(std::move(sv), std::move(yv), sy);
      gamma = sy / yy;
    }
    res.final_step = step;
    res.residual = -std::expm1(ev_t.log_rayleigh - ev.log_rayleigh);
    std::swap(u, trial);
    std::swap(g, g_new);
    ev.log_rayleigh = ev_t.log_rayleigh;
    if (opts.record_history) res.history.push_back(ev.log_rayleigh);
    if (res.residual < opts.tol) {
      res.converged = true;
      break;
    }
  }

  ev = f.evaluate(u);
  res.log_lambda = ev.log_rayleigh;
  res.lambda = std::exp(ev.log_rayleigh);
  res.lambda_root = std::exp(ev.log_rayleigh / p);
  res.field = ScalarField(w.grid(), std::move(u));
  return res;
}

/// First negative eigenvalue via the negated weight: mu = -lambda1(-m).
/// `lambda` is negative and `lambda_root` is -(-mu)^(1/p).
inline EigenResult mu1(const WeightField& w, double p,
                       const EigenOptions& opts = {}) {
  require(w.minus_count() > 0, ErrorKind::no_negative_region,
          "no negative region");
  EigenResult r = solve_lambda1(negate(w), p, nullptr, opts);
  r.lambda = -r.lambda;
  r.lambda_root = -r.lambda_root;
  return r;
}

/// p-th root of the sup of R(alpha C1 + beta C2) over |alpha|^p + |beta|^p = 1,
/// by golden-section search on the angle theta with |alpha|^p = cos^2 theta.
inline double two_cone_upper_bound(double p, Node c1, Node c2, double radius,
                                   const WeightField& w,
                                   const DistanceField& dist,
                                   const ScalarField* c = nullptr) {
  require(w.plus_count() > 0 && w.plus()[w.grid().index(c1)] &&
              w.plus()[w.grid().index(c2)],
          ErrorKind::invalid_argument, "cone centres must be positive nodes");
  const RayleighFunctional f(w, p, c);
  const ScalarField cone1 = cone_field(c1, radius, dist);
  const ScalarField cone2 = cone_field(c2, radius, dist);
  (void)two_cone_field(1.0, 0.0, c1, c2, radius, dist);  // overlap check

  std::vector<double> v(cone1.u.size());
  auto objective = [&](double theta) {
    const double cs = std::cos(theta), sn = std::sin(theta);
    const double alpha = std::pow(cs * cs, 1.0 / p);
    const double beta = -std::pow(sn * sn, 1.0 / p);
    for (std::size_t k = 0; k < v.size(); ++k)
      v[k] = alpha * cone1.u[k] + beta * cone2.u[k];
    const auto ev = f.evaluate(v);
    return ev.mass_positive ? ev.log_rayleigh
                            : -std::numeric_limits<double>::infinity();
  };

  const double half_pi = 0.5 * 3.14159265358979323846;
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = half_pi;
  double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  double best = std::max({objective(a), objective(b), f1, f2});
  for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = objective(x1);
      best = std::max(best, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = objective(x2);
      best = std::max(best, f2);
    }
  }
  require(std::isfinite(best), ErrorKind::invalid_argument,
          "two-cone family has no positive weighted mass");
  return std::exp(best / p);
}

// ---------------------------------------------------------------------------
// p sweeps

struct SweepRecord {
  double p = 0.0;
  double lambda_root = std::numeric_limits<double>::quiet_NaN();
  double target = 0.0;
  double deviation = std::numeric_limits<double>::quiet_NaN();
  double cone_bound = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  bool converged = false;
  std::string error;  ///< nonempty when the solve for this p failed
  ScalarField field;
};

/// Solves for each p in increasing order, warm-starting from the previous
/// eigenfield. The target is 1/R+ (or max{1/R+, 1} with a potential) and the
/// cone bound is the best cone-seed Rayleigh quotient, to the power 1/p.
inline std::vector<SweepRecord> sweep(const WeightField& w,
                                      const std::vector<double>& p_list,
                                      const ScalarField* c = nullptr,
                                      const EigenOptions& opts = {}) {
  require(std::is_sorted(p_list.begin(), p_list.end()) &&
              std::adjacent_find(p_list.begin(), p_list.end()) == p_list.end(),
          ErrorKind::invalid_argument, "p list must be increasing");
  const DistanceField dist = edt(w.mask());
  const auto rp = r_plus(dist, w.plus());
  const double target =
      c ? lambda1_inf_with_potential(rp.radius) : 1.0 / rp.radius;

  std::vector<SweepRecord> out;
  EigenOptions run = opts;
  for (double p : p_list) {
    SweepRecord rec;
    rec.p = p;
    rec.target = target;
    try {
      const RayleighFunctional f(w, p, c);
      rec.cone_bound = std::exp(best_cone_seed(f, dist).log_rayleigh / p);
      EigenResult r = solve_lambda1(w, p, c, run);
      rec.lambda_root = r.lambda_root;
      rec.deviation = std::abs(r.lambda_root - target);
      rec.iterations = r.iterations;
      rec.converged = r.converged;
      run.warm_start = r.field;
      rec.field = std::move(r.field);
    } catch (const Error& e) {
      rec.error = e.what();
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace plimit
