#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "support.hpp"

using namespace plimit;
using namespace plimit::testing;

namespace {

// Smallest eigenvalue of the 5-point Dirichlet Laplacian on the inside nodes.
double five_point_lambda(const DomainMask& m) {
  const Grid& g = m.grid();
  std::vector<int> id(g.size(), -1);
  int n = 0;
  for (std::size_t k = 0; k < g.size(); ++k)
    if (m.inside(k)) id[k] = n++;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const int a = id[g.index(i, j)];
      if (a < 0) continue;
      A(a, a) = 4.0;
      const int nb[4] = {id[g.index(i + 1, j)], id[g.index(i - 1, j)], id[g.index(i, j + 1)],
                         id[g.index(i, j - 1)]};
      for (int b : nb)
        if (b >= 0) A(a, b) = -1.0;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) / (g.h * g.h);
}

}  // namespace

TEST(OracleP2, MatchesLinearEigensolveOnDisk) {
  const auto mask = disk_mask(1.0 / 14);
  const auto w = build_weight(PiecewiseWeight{}, mask);
  EigenOptions opts;
  opts.tol = 1e-10;
  const auto r = solve_lambda1(w, 2.0, nullptr, opts);
  const double ref = five_point_lambda(mask);
  EXPECT_NEAR(r.lambda, ref, 1e-6 * ref);
  EXPECT_NEAR(r.lambda_root, std::sqrt(ref), 1e-6 * std::sqrt(ref));
}

TEST(OracleP2, MatchesLinearEigensolveOnPolygon) {
  const std::vector<Primitive> prims{
      {Polygon{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}}, SetOp::unite}};
  const auto mask = rasterize(prims, Grid::covering(0, 2, 0, 2, 1.0 / 12));
  const auto w = build_weight(PiecewiseWeight{}, mask);
  EigenOptions opts;
  opts.tol = 1e-10;
  const auto r = solve_lambda1(w, 2.0, nullptr, opts);
  const double ref = five_point_lambda(mask);
  EXPECT_NEAR(r.lambda, ref, 1e-6 * ref);
}
