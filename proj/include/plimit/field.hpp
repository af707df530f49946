#pragma once

#include <vector>

#include "plimit/grid.hpp"

namespace plimit {

/// Nodal values of a candidate eigenfunction. Dirichlet data (zero on
/// outside nodes) is checked by the operations that need it.
struct ScalarField {
  Grid grid;
  std::vector<double> u;

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(g), u(g.size(), 0.0) {}
  ScalarField(const Grid& g, std::vector<double> values)
      : grid(g), u(std::move(values)) {
    require(u.size() == grid.size(), ErrorKind::invalid_argument,
            "field size does not match grid");
  }

  double& operator[](std::size_t k) { return u[k]; }
  double operator[](std::size_t k) const { return u[k]; }
  double at(int i, int j) const { return u[grid.index(i, j)]; }

  friend bool operator==(const ScalarField& a, const ScalarField& b) {
    return a.grid.same_shape(b.grid) && a.u == b.u;
  }
};

inline bool satisfies_dirichlet(const ScalarField& f, const DomainMask& mask) {
  if (!f.grid.same_shape(mask.grid())) return false;
  for (std::size_t k = 0; k < f.u.size(); ++k)
    if (!mask.inside(k) && f.u[k] != 0.0) return false;
  return true;
}

inline ScalarField rotate90(const ScalarField& f) {
  return ScalarField(rotated90(f.grid), rotate90(f.grid, f.u));
}

}  // namespace plimit
