#pragma once

// Hot loops of the scattering solver, each in a serial reference form and an
// OpenMP form. The OpenMP versions split work over output entries only and
// keep each entry's summation order, so they match the serial results bit
// for bit.

#include <complex>
#include <span>
#include <vector>

#include "nvsoliton/grid.hpp"

namespace nvsoliton::kernels {

/// Quadrature weights W(d) = h^2 G(|d| h) for integer displacements
/// |d1| < n1, |d2| < n2, stored at slot ((d1 mod p1) + p1 (d2 mod p2)) of a
/// zero-filled p1 x p2 array; W(0) = diagonal. Requires p1 >= 2 n1 - 1 and
/// p2 >= 2 n2 - 1.
struct TableShape {
  int n1, n2, p1, p2;
};

namespace serial {
std::vector<cplx> green_table(double energy, double spacing, TableShape shape, cplx diagonal);
/// out[a] = sum_j exp(-i dir_a . x_j) src_j.
void plane_wave_projection(std::span<const Vec2> directions, std::span<const Vec2> points,
                           std::span<const cplx> sources, std::span<cplx> out);
/// out_i = sum_j W(x_i - x_j) src_j over integer node offsets (direct sum).
void direct_convolution(std::span<const int> i1, std::span<const int> i2, double energy, double spacing,
                        cplx diagonal, std::span<const cplx> sources, std::span<cplx> out);
}  // namespace serial

namespace omp {
std::vector<cplx> green_table(double energy, double spacing, TableShape shape, cplx diagonal);
void plane_wave_projection(std::span<const Vec2> directions, std::span<const Vec2> points,
                           std::span<const cplx> sources, std::span<cplx> out);
void direct_convolution(std::span<const int> i1, std::span<const int> i2, double energy, double spacing,
                        cplx diagonal, std::span<const cplx> sources, std::span<cplx> out);
}  // namespace omp

}  // namespace nvsoliton::kernels
