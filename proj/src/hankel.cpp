#include "nvsoliton/hankel.hpp"

#include <cmath>
#include <numbers>

#include "nvsoliton/error.hpp"

namespace nvsoliton {
namespace {

BesselPair power_series(double z) {
  using real = long double;
  const real q = static_cast<real>(z) * z / 4.0L;
  real term = 1.0L;      // (-1)^k q^k / (k!)^2
  real j0 = 1.0L;
  real harmonic = 0.0L;  // H_k
  real y_sum = 0.0L;     // sum_{k>=1} (-1)^{k+1} H_k q^k / (k!)^2
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<real>(k) * k);
    harmonic += 1.0L / k;
    j0 += term;
    y_sum -= harmonic * term;
    if (std::abs(term) * (1.0L + harmonic) < 1e-22L) break;
  }
  const real two_over_pi = 2.0L / std::numbers::pi_v<real>;
  const real log_term = std::log(static_cast<real>(z) / 2.0L) + std::numbers::egamma_v<real>;
  const real y0 = two_over_pi * (log_term * j0 + y_sum);
  return {static_cast<double>(j0), static_cast<double>(y0)};
}

// H0(z) ~ sqrt(2/(pi z)) e^{i(z - pi/4)} sum_k i^k a_k / z^k,
// a_k = (-1)^k [1^2 3^2 ... (2k-1)^2] / (k! 8^k).
std::complex<double> asymptotic(double z) {
  std::complex<double> sum = 1.0;
  std::complex<double> term = 1.0;
  double previous = 1.0;
  const std::complex<double> i{0.0, 1.0};
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    const std::complex<double> next = term * (-odd * odd / (8.0 * k * z)) * i;
    const double size = std::abs(next);
    if (size >= previous) break;  // smallest term reached
    term = next;
    sum += term;
    previous = size;
    if (size < 1e-17) break;
  }
  const double amplitude = std::sqrt(2.0 / (std::numbers::pi * z));
  return amplitude * std::polar(1.0, z - 0.25 * std::numbers::pi) * sum;
}

}  // namespace

BesselPair bessel_jy0(double z) {
  if (!(z > 0.0)) throw InvalidInput("bessel_jy0 needs z > 0");
  if (z <= kHankelCrossover) return power_series(z);
  const auto h = asymptotic(z);
  return {h.real(), h.imag()};
}

std::complex<double> hankel1_0(double z) {
  const auto [j0, y0] = bessel_jy0(z);
  return {j0, y0};
}

std::complex<double> greens_kernel(double energy, double r) {
  if (!(energy > 0.0)) throw InvalidInput("Green kernel needs E > 0");
  if (!(r > 0.0)) throw InvalidInput("Green kernel is singular at r = 0");
  return std::complex<double>(0.0, -0.25) * hankel1_0(std::sqrt(energy) * r);
}

std::complex<double> greens_regular_part_at_origin(double energy) {
  if (!(energy > 0.0)) throw InvalidInput("Green kernel needs E > 0");
  const double real = (std::log(0.5 * std::sqrt(energy)) + std::numbers::egamma) / (2.0 * std::numbers::pi);
  return {real, -0.25};
}

}  // namespace nvsoliton
