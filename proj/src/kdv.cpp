#include "nvsoliton/kdv.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "nvsoliton/error.hpp"
#include "nvsoliton/fft.hpp"
#include "nvsoliton/potentials.hpp"

namespace nvsoliton {

Grid1D::Grid1D(double side_length_, int points_) : side_length(side_length_), points(points_) {
  if (!(side_length_ > 0.0) || points_ < 8 || points_ % 2 != 0)
    throw InvalidInput("1D grid needs L > 0 and an even N >= 8");
}

std::vector<double> spectral_deriv_1d(const Grid1D& grid, const std::vector<double>& u, int order) {
  if (order < 1 || order > 3) throw InvalidInput("1D spectral derivative supports orders 1..3");
  const int n = grid.points;
  if (static_cast<int>(u.size()) != n) throw InvalidInput("profile size does not match grid");
  std::vector<std::complex<double>> data(u.begin(), u.end());
  std::vector<std::complex<double>> spectrum(n);
  fft::forward_1d(data, spectrum);
  for (int m = 0; m < n; ++m) {
    const int signed_m = m < n / 2 ? m : m - n;
    double xi = 2.0 * std::numbers::pi * signed_m / grid.side_length;
    if (m == n / 2 && order % 2 == 1) xi = 0.0;
    spectrum[m] *= std::pow(std::complex<double>(0.0, xi), order);
  }
  fft::inverse_1d(spectrum, data);
  std::vector<double> out(n);
  std::transform(data.begin(), data.end(), out.begin(), [](auto c) { return c.real(); });
  return out;
}

KdVProfile kdv_rhs(const KdVProfile& profile) {
  const auto ux = spectral_deriv_1d(profile.grid, profile.u, 1);
  const auto uxxx = spectral_deriv_1d(profile.grid, profile.u, 3);
  KdVProfile out{profile.grid, std::vector<double>(profile.u.size())};
  for (std::size_t i = 0; i < out.u.size(); ++i) out.u[i] = 6.0 * profile.u[i] * ux[i] - uxxx[i];
  return out;
}

double kdv_residual_soliton(double kappa, double phi, const Grid1D& grid) {
  if (kappa == 0.0) return 0.0;
  std::vector<double> u(grid.points);
  for (int i = 0; i < grid.points; ++i) u[i] = kdv_soliton_profile(kappa, phi, grid.node(i));
  const auto ux = spectral_deriv_1d(grid, u, 1);
  const auto uxxx = spectral_deriv_1d(grid, u, 3);
  double worst = 0.0;
  for (int i = 0; i < grid.points; ++i)
    worst = std::max(worst, std::abs(-4.0 * kappa * kappa * ux[i] - 6.0 * u[i] * ux[i] + uxxx[i]));
  return worst;
}

KdVSolution kdv_soliton(double kappa, double phi) {
  return [kappa, phi](double x, double t) { return kdv_soliton_profile(kappa, phi, x - 4.0 * kappa * kappa * t); };
}

double kdv_reduction_map_check(const KdVSolution& u, double energy, const Grid1D& grid, double t, double time_step) {
  const int n = grid.points;
  auto mapped = [&](double time) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = u(grid.node(i) + 6.0 * energy * time, -2.0 * time);
    return v;
  };
  // 6th-order centered first derivative.
  static constexpr double kWeights[3] = {45.0 / 60.0, -9.0 / 60.0, 1.0 / 60.0};
  std::vector<double> vt(n, 0.0);
  for (int s = 1; s <= 3; ++s) {
    const auto plus = mapped(t + s * time_step);
    const auto minus = mapped(t - s * time_step);
    for (int i = 0; i < n; ++i) vt[i] += kWeights[s - 1] * (plus[i] - minus[i]) / time_step;
  }
  const auto v = mapped(t);
  const auto vx = spectral_deriv_1d(grid, v, 1);
  const auto vxxx = spectral_deriv_1d(grid, v, 3);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double rhs = 2.0 * vxxx[i] - 12.0 * v[i] * vx[i] + 6.0 * energy * vx[i];
    worst = std::max(worst, std::abs(vt[i] - rhs));
  }
  return worst;
}

}  // namespace nvsoliton
