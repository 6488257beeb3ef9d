#include <doctest.h>

#include <cmath>

#include "nvsoliton/error.hpp"
#include "nvsoliton/hankel.hpp"

using namespace nvsoliton;
using cplx = std::complex<double>;

TEST_CASE("J0 and Y0 against the standard library") {
  double worst = 0.0;
  for (double z = 1e-4; z < 80.0; z *= 1.013) {
    const BesselPair p = bessel_jy0(z);
    const double j = std::cyl_bessel_j(0.0, z);
    const double y = std::cyl_neumann(0.0, z);
    // Relative to the modulus of H0, which stays well away from zero.
    const double scale = std::hypot(j, y);
    worst = std::max({worst, std::abs(p.j0 - j) / scale, std::abs(p.y0 - y) / scale});
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("continuity across the series/asymptotic crossover") {
  const double below = std::nextafter(kHankelCrossover, 0.0);
  const double above = std::nextafter(kHankelCrossover, 100.0);
  CHECK(std::abs(hankel1_0(below) - hankel1_0(above)) <= 1e-13);
}

TEST_CASE("green kernel small-argument form") {
  const double r = 1e-4;
  const cplx g = greens_kernel(1.0, r);
  const cplx expected = -0.25 * cplx(0.0, 1.0) *
                        (1.0 + cplx(0.0, 2.0 / M_PI) * (std::log(r / 2.0) + 0.57721566490153286));
  CHECK(std::abs(g - expected) <= 1e-6 * std::abs(expected));

  const cplx regular = greens_regular_part_at_origin(1.0);
  CHECK(std::abs(g - std::log(r) / (2.0 * M_PI) - regular) <= 1e-7);
}

TEST_CASE("green kernel at E = 1, r = 1") {
  // J0(1), Y0(1) to 16 digits.
  const double j0 = 0.76519768655796655;
  const double y0 = 0.088256964215676957;
  const cplx g = greens_kernel(1.0, 1.0);
  CHECK(std::abs(g - cplx(y0 / 4.0, -j0 / 4.0)) <= 1e-10);
  // Energy scaling G_E(r) = G_1(sqrt(E) r).
  CHECK(std::abs(greens_kernel(4.0, 0.5) - g) <= 1e-15);
}

TEST_CASE("invalid kernel arguments") {
  CHECK_THROWS_AS(greens_kernel(0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(greens_kernel(-1.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(greens_kernel(1.0, 0.0), InvalidInput);
}
