#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "nvsoliton/hankel.hpp"
#include "nvsoliton/kernels.hpp"

using namespace nvsoliton;

namespace {

bool bitwise_equal(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(cplx)) == 0;
}

std::vector<cplx> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {u(rng), u(rng)};
  return v;
}

}  // namespace

TEST_CASE("green table: serial and OpenMP agree bitwise, values match the kernel") {
  const kernels::TableShape shape{9, 7, 18, 14};
  const double h = 0.25;
  const cplx diag(0.1, -0.2);
  const auto a = kernels::serial::green_table(1.0, h, shape, diag);
  const auto b = kernels::omp::green_table(1.0, h, shape, diag);
  CHECK(bitwise_equal(a, b));
  CHECK(a[0] == diag);
  // Displacement (-3, 2) lives at slot (p1 - 3) + p1 * 2.
  const cplx expected = h * h * greens_kernel(1.0, h * std::hypot(3.0, 2.0));
  CHECK(std::abs(a[(18 - 3) + 18 * 2] - expected) <= 1e-15);
  // Unused slots stay zero.
  CHECK(a[9 + 18 * 0] == cplx{});
}

TEST_CASE("plane-wave projection: serial and OpenMP agree bitwise") {
  std::vector<Vec2> dirs, pts;
  for (int a = 0; a < 16; ++a) dirs.push_back({std::cos(0.4 * a), std::sin(0.4 * a)});
  for (int j = 0; j < 300; ++j) pts.push_back({0.01 * j - 1.5, std::sin(0.1 * j)});
  const auto src = random_vector(pts.size(), 1);
  std::vector<cplx> out_s(dirs.size()), out_p(dirs.size());
  kernels::serial::plane_wave_projection(dirs, pts, src, out_s);
  kernels::omp::plane_wave_projection(dirs, pts, src, out_p);
  CHECK(bitwise_equal(out_s, out_p));

  cplx direct{};
  for (std::size_t j = 0; j < pts.size(); ++j) direct += std::polar(1.0, -dot(dirs[3], pts[j])) * src[j];
  CHECK(std::abs(direct - out_s[3]) <= 1e-12);
}

TEST_CASE("direct convolution: serial and OpenMP agree bitwise") {
  std::vector<int> i1, i2;
  for (int a = 0; a < 15; ++a)
    for (int b = 0; b < 15; ++b)
      if ((a - 7) * (a - 7) + (b - 7) * (b - 7) <= 49) {
        i1.push_back(a);
        i2.push_back(b);
      }
  const auto src = random_vector(i1.size(), 2);
  std::vector<cplx> out_s(i1.size()), out_p(i1.size());
  kernels::serial::direct_convolution(i1, i2, 1.0, 0.2, {0.3, 0.1}, src, out_s);
  kernels::omp::direct_convolution(i1, i2, 1.0, 0.2, {0.3, 0.1}, src, out_p);
  CHECK(bitwise_equal(out_s, out_p));

  cplx expected = cplx(0.3, 0.1) * src[5];
  for (std::size_t j = 0; j < i1.size(); ++j)
    if (j != 5) expected += 0.04 * greens_kernel(1.0, 0.2 * std::hypot(i1[5] - i1[j], i2[5] - i2[j])) * src[j];
  CHECK(std::abs(expected - out_s[5]) <= 1e-13);
}
