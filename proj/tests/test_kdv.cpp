#include <doctest.h>

#include <cmath>

#include "nvsoliton/error.hpp"
#include "nvsoliton/kdv.hpp"
#include "nvsoliton/potentials.hpp"

using namespace nvsoliton;

TEST_CASE("soliton residual") {
  CHECK(kdv_residual_soliton(1.0, 0.0, Grid1D(40.0, 1024)) <= 1e-6);
  CHECK(kdv_residual_soliton(0.0, 0.0, Grid1D(40.0, 1024)) == 0.0);
  CHECK(kdv_residual_soliton(0.7, 1.5, Grid1D(60.0, 1024)) <= 1e-6);
}

TEST_CASE("residual floor is set by periodic truncation") {
  const double small = kdv_residual_soliton(1.0, 0.0, Grid1D(10.0, 256));
  const double large = kdv_residual_soliton(1.0, 0.0, Grid1D(20.0, 512));
  // Tails ~ e^{-2 kappa L/2}: doubling L from 10 to 20 gains ~e^{-10}.
  CHECK(small / large > 1e3);
}

TEST_CASE("kdv_rhs on the soliton is a translation at speed 4 kappa^2") {
  const Grid1D grid(40.0, 512);
  KdVProfile p{grid, {}};
  for (int i = 0; i < grid.points; ++i) p.u.push_back(kdv_soliton_profile(1.0, 0.0, grid.node(i)));
  const KdVProfile rhs = kdv_rhs(p);
  const auto ux = spectral_deriv_1d(grid, p.u, 1);
  double err = 0.0;
  for (int i = 0; i < grid.points; ++i) err = std::max(err, std::abs(rhs.u[i] + 4.0 * ux[i]));
  CHECK(err <= 1e-8);
}

TEST_CASE("reduction map") {
  const Grid1D grid(40.0, 1024);
  const KdVSolution u = kdv_soliton(1.0, 0.0);
  CHECK(kdv_reduction_map_check(u, 1.0, grid) <= 1e-6);
  CHECK(kdv_reduction_map_check(u, 0.0, grid) <= 1e-6);
  CHECK(kdv_reduction_map_check(u, 1.0, grid, 0.3) <= 1e-6);
  const KdVSolution constant = [](double, double) { return 0.25; };
  CHECK(kdv_reduction_map_check(constant, 1.0, grid) <= 1e-12);
  // The opposite argument order is not a solution.
  const KdVSolution swapped = [&](double x, double t) { return u(t, x); };
  CHECK(kdv_reduction_map_check(swapped, 1.0, Grid1D(40.0, 256)) > 1e-2);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid1D(40.0, 7), InvalidInput);
  CHECK_THROWS_AS(Grid1D(-1.0, 64), InvalidInput);
  CHECK_THROWS_AS(spectral_deriv_1d(Grid1D(10.0, 16), std::vector<double>(16), 4), InvalidInput);
}
