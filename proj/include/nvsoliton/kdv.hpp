#pragma once

// One-dimensional KdV checks for the x2-independent reduction of the NV
// equation:
//   (6)  dv/dt = 2 v_xxx - 12 v v_x + 6 E v_x
//   (8)  u_t - 6 u u_x + u_xxx = 0
// related by v(x, t) = u(x + 6 E t, -2 t) (space argument first).

#include <functional>
#include <vector>

namespace nvsoliton {

/// Periodic interval [-L/2, L/2) with N nodes.
struct Grid1D {
  double side_length = 40.0;
  int points = 1024;

  Grid1D(double side_length, int points);
  double spacing() const { return side_length / points; }
  double node(int i) const { return -0.5 * side_length + i * spacing(); }
};

struct KdVProfile {
  Grid1D grid;
  std::vector<double> u;
};

/// Spectral derivative of order 1..3 (Nyquist zeroed for odd orders).
std::vector<double> spectral_deriv_1d(const Grid1D& grid, const std::vector<double>& u, int order);

/// u_t = 6 u u_x - u_xxx.
KdVProfile kdv_rhs(const KdVProfile& profile);

/// Sup-norm of -4 kappa^2 u' - 6 u u' + u''' for the soliton profile.
double kdv_residual_soliton(double kappa, double phi, const Grid1D& grid);

/// A space-time KdV solution u(x, t).
using KdVSolution = std::function<double(double x, double t)>;

/// Soliton u(x, t) = -2 kappa^2 / cosh^2(kappa (x - 4 kappa^2 t - phi)).
KdVSolution kdv_soliton(double kappa, double phi);

/// Maps u to v(x, t) = u(x + 6 E t, -2 t) and returns the sup-residual of
/// dv/dt - (2 v_xxx - 12 v v_x + 6 E v_x) at time t. Space derivatives are
/// spectral; the time derivative is a centered 6th-order stencil with step
/// time_step.
double kdv_reduction_map_check(const KdVSolution& u, double energy, const Grid1D& grid, double t = 0.0,
                               double time_step = 1e-3);

}  // namespace nvsoliton
