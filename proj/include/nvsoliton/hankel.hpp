#pragma once

#include <complex>

namespace nvsoliton {

/// Below this argument J0/Y0 come from their power series (accumulated in
/// long double); above it from the Hankel asymptotic expansion truncated at
/// its smallest term. At 16 both branches are accurate to ~1e-14 relative.
inline constexpr double kHankelCrossover = 16.0;

struct BesselPair {
  double j0 = 0.0;
  double y0 = 0.0;
};

/// J0(z) and Y0(z) for z > 0.
BesselPair bessel_jy0(double z);

/// H0^(1)(z) = J0(z) + i Y0(z) for z > 0.
std::complex<double> hankel1_0(double z);

/// Outgoing 2D Helmholtz Green function -(i/4) H0^(1)(sqrt(E) r), r > 0.
/// Throws InvalidInput for E <= 0 or r <= 0.
std::complex<double> greens_kernel(double energy, double r);

/// The regular part lim_{r->0} [G(r) - log(r) / (2 pi)]
/// = -i/4 + (log(sqrt(E)/2) + gamma) / (2 pi).
std::complex<double> greens_regular_part_at_origin(double energy);

}  // namespace nvsoliton
