#pragma once

// Sign-changing weight m sampled at nodes, with its sign partition.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <variant>
#include <vector>

#include "plimit/error.hpp"
#include "plimit/grid.hpp"

namespace plimit {

/// Constant `background`, overridden by later regions (closed membership).
struct PiecewiseWeight {
  struct Region {
    Shape shape;
    double value = 0.0;
  };
  double background = 1.0;
  std::vector<Region> regions;
};

/// m(x, y) = a + b x + c y
struct AffineWeight {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// m(x) = a + b |x - center|
struct RadialWeight {
  Point center;
  double a = 0.0;
  double b = 0.0;
};

using WeightSpec = std::variant<PiecewiseWeight, AffineWeight, RadialWeight>;

inline double evaluate(const PiecewiseWeight& s, Point p) {
  double v = s.background;
  for (const auto& r : s.regions)
    if (contains(r.shape, p, Closure::closed)) v = r.value;
  return v;
}
inline double evaluate(const AffineWeight& s, Point p) {
  return s.a + s.b * p.x + s.c * p.y;
}
inline double evaluate(const RadialWeight& s, Point p) {
  return s.a + s.b * std::hypot(p.x - s.center.x, p.y - s.center.y);
}
inline double evaluate(const WeightSpec& s, Point p) {
  return std::visit([&](const auto& w) { return evaluate(w, p); }, s);
}

inline constexpr double kDefaultZeroRel = 1e-12;

class WeightField {
 public:
  WeightField() = default;

  /// Values on outside nodes are forced to zero. `zero_rel` scales the sign
  /// threshold by the sup norm of m so the partition is scale invariant.
  WeightField(DomainMask mask, std::vector<double> m,
              double zero_rel = kDefaultZeroRel)
      : mask_(std::move(mask)), m_(std::move(m)), zero_rel_(zero_rel) {
    const Grid& g = mask_.grid();
    require(m_.size() == g.size(), ErrorKind::invalid_argument,
            "weight size does not match grid");
    double sup = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!mask_.inside(k)) m_[k] = 0.0;
      require(std::isfinite(m_[k]), ErrorKind::invalid_argument,
              "weight must be finite");
      sup = std::max(sup, std::abs(m_[k]));
    }
    eps_zero_ = zero_rel * sup;
    classify();
  }

  const Grid& grid() const { return mask_.grid(); }
  const DomainMask& mask() const { return mask_; }
  const std::vector<double>& values() const { return m_; }
  double operator[](std::size_t k) const { return m_[k]; }
  double eps_zero() const { return eps_zero_; }
  double zero_rel() const { return zero_rel_; }

  const std::vector<std::uint8_t>& plus() const { return plus_; }
  const std::vector<std::uint8_t>& minus() const { return minus_; }
  const std::vector<std::uint8_t>& zero() const { return zero_; }
  std::size_t plus_count() const { return plus_count_; }
  std::size_t minus_count() const { return minus_count_; }

  /// False when m is one-signed; such weights are still valid.
  bool sign_changing() const { return plus_count_ > 0 && minus_count_ > 0; }

  friend WeightField negate(const WeightField& w) {
    WeightField out;
    out.mask_ = w.mask_;
    out.m_.resize(w.m_.size());
    std::transform(w.m_.begin(), w.m_.end(), out.m_.begin(),
                   [](double v) { return -v; });
    out.eps_zero_ = w.eps_zero_;
    out.zero_rel_ = w.zero_rel_;
    out.plus_ = w.minus_;
    out.minus_ = w.plus_;
    out.zero_ = w.zero_;
    out.plus_count_ = w.minus_count_;
    out.minus_count_ = w.plus_count_;
    return out;
  }

 private:
  void classify() {
    const std::size_t n = m_.size();
    plus_.assign(n, 0);
    minus_.assign(n, 0);
    zero_.assign(n, 0);
    plus_count_ = minus_count_ = 0;
    for (std::size_t k = 0; k < n; ++k) {
      if (!mask_.inside(k)) continue;
      if (m_[k] > eps_zero_) {
        plus_[k] = 1;
        ++plus_count_;
      } else if (m_[k] < -eps_zero_) {
        minus_[k] = 1;
        ++minus_count_;
      } else {
        zero_[k] = 1;
      }
    }
  }

  DomainMask mask_;
  std::vector<double> m_;
  double zero_rel_ = kDefaultZeroRel;
  double eps_zero_ = 0.0;
  std::vector<std::uint8_t> plus_, minus_, zero_;
  std::size_t plus_count_ = 0, minus_count_ = 0;
};

inline WeightField build_weight(const WeightSpec& spec, const DomainMask& mask,
                                double zero_rel = kDefaultZeroRel) {
  const Grid& g = mask.grid();
  std::vector<double> m(g.size(), 0.0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i)
      if (mask.inside(i, j))
        m[g.index(i, j)] = evaluate(spec, Point{g.x(i), g.y(j)});
  return WeightField(mask, std::move(m), zero_rel);
}

inline WeightField rotate90(const WeightField& w) {
  const Grid& g = w.grid();
  return WeightField(rotate90(w.mask()), rotate90(g, w.values()),
                     w.zero_rel());
}

}  // namespace plimit
