// Solve the principal eigenvalue on the unit disk with an indefinite weight
// and compare lambda_p^(1/p) against the limit 1/R+.

#include <iostream>

#include "plimit/plimit.hpp"

int main() {
  using namespace plimit;
  const double h = 1.0 / 48;
  const Primitive disk{Disk{{0.0, 0.0}, 1.0}, SetOp::unite};
  const auto mask = rasterize(std::span<const Primitive>(&disk, 1),
                              Grid::covering(-1, 1, -1, 1, h));
  const PiecewiseWeight spec{-1.0, {{Disk{{0.0, 0.0}, 0.5}, 1.0}}};
  const auto w = build_weight(spec, mask);

  const auto limits = geo_limits(edt(mask), w);
  std::cout << "R+ = " << limits.r_plus << ", lambda1_inf = " << limits.lambda1_inf << '\n';
  for (const auto& r : sweep(w, {2.0, 4.0, 8.0, 16.0}))
    std::cout << "p = " << r.p << "  lambda^(1/p) = " << r.lambda_root
              << "  deviation = " << r.deviation << '\n';
}
