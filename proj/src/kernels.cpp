#include "nvsoliton/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "nvsoliton/hankel.hpp"

namespace nvsoliton::kernels {
namespace {

void check_shape(const TableShape& s) {
  if (s.n1 < 1 || s.n2 < 1 || s.p1 < 2 * s.n1 - 1 || s.p2 < 2 * s.n2 - 1)
    throw std::invalid_argument("green_table: padded shape too small");
}

cplx weight(double energy, double spacing, int d1, int d2, cplx diagonal) {
  if (d1 == 0 && d2 == 0) return diagonal;
  const double r = spacing * std::sqrt(static_cast<double>(d1) * d1 + static_cast<double>(d2) * d2);
  return spacing * spacing * greens_kernel(energy, r);
}

// Writes the four mirror images of the (d1, d2) >= 0 entry.
void scatter_quadrants(std::vector<cplx>& table, const TableShape& s, int d1, int d2, cplx value) {
  for (int s2 : {1, -1}) {
    if (d2 == 0 && s2 < 0) continue;
    for (int s1 : {1, -1}) {
      if (d1 == 0 && s1 < 0) continue;
      const int slot1 = ((s1 * d1) % s.p1 + s.p1) % s.p1;
      const int slot2 = ((s2 * d2) % s.p2 + s.p2) % s.p2;
      table[static_cast<std::size_t>(slot2) * s.p1 + slot1] = value;
    }
  }
}

cplx project_one(Vec2 dir, std::span<const Vec2> points, std::span<const cplx> sources) {
  cplx sum{};
  for (std::size_t j = 0; j < points.size(); ++j) sum += std::polar(1.0, -dot(dir, points[j])) * sources[j];
  return sum;
}

cplx convolve_one(std::size_t i, std::span<const int> i1, std::span<const int> i2, double energy, double spacing,
                  cplx diagonal, std::span<const cplx> sources) {
  cplx sum{};
  for (std::size_t j = 0; j < sources.size(); ++j)
    sum += weight(energy, spacing, i1[i] - i1[j], i2[i] - i2[j], diagonal) * sources[j];
  return sum;
}

}  // namespace

namespace serial {

std::vector<cplx> green_table(double energy, double spacing, TableShape shape, cplx diagonal) {
  check_shape(shape);
  std::vector<cplx> table(static_cast<std::size_t>(shape.p1) * shape.p2, cplx{});
  for (int d2 = 0; d2 < shape.n2; ++d2)
    for (int d1 = 0; d1 < shape.n1; ++d1)
      scatter_quadrants(table, shape, d1, d2, weight(energy, spacing, d1, d2, diagonal));
  return table;
}

void plane_wave_projection(std::span<const Vec2> directions, std::span<const Vec2> points,
                           std::span<const cplx> sources, std::span<cplx> out) {
  for (std::size_t a = 0; a < directions.size(); ++a) out[a] = project_one(directions[a], points, sources);
}

void direct_convolution(std::span<const int> i1, std::span<const int> i2, double energy, double spacing,
                        cplx diagonal, std::span<const cplx> sources, std::span<cplx> out) {
  for (std::size_t i = 0; i < sources.size(); ++i)
    out[i] = convolve_one(i, i1, i2, energy, spacing, diagonal, sources);
}

}  // namespace serial

namespace omp {

std::vector<cplx> green_table(double energy, double spacing, TableShape shape, cplx diagonal) {
  check_shape(shape);
  std::vector<cplx> table(static_cast<std::size_t>(shape.p1) * shape.p2, cplx{});
  // Distinct (d1, d2) write disjoint slots.
#pragma omp parallel for schedule(dynamic, 4)
  for (int d2 = 0; d2 < shape.n2; ++d2)
    for (int d1 = 0; d1 < shape.n1; ++d1)
      scatter_quadrants(table, shape, d1, d2, weight(energy, spacing, d1, d2, diagonal));
  return table;
}

void plane_wave_projection(std::span<const Vec2> directions, std::span<const Vec2> points,
                           std::span<const cplx> sources, std::span<cplx> out) {
  const auto count = static_cast<std::ptrdiff_t>(directions.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t a = 0; a < count; ++a) out[a] = project_one(directions[a], points, sources);
}

void direct_convolution(std::span<const int> i1, std::span<const int> i2, double energy, double spacing,
                        cplx diagonal, std::span<const cplx> sources, std::span<cplx> out) {
  const auto count = static_cast<std::ptrdiff_t>(sources.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < count; ++i)
    out[i] = convolve_one(static_cast<std::size_t>(i), i1, i2, energy, spacing, diagonal, sources);
}

}  // namespace omp

}  // namespace nvsoliton::kernels
