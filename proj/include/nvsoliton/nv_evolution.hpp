#pragma once

// Novikov-Veselov evolution at fixed energy E on the periodic grid:
//
//   dv/dt = 4 Re(4 dz^3 v + dz(v w) - E dz w),   dzbar w = -3 dz v,   v real.
//
// The constraint is solved in Fourier space with the zero-mean convention
// w^(0) = 0. Time stepping is integrating-factor RK4: the linear part is
// applied as an exact exponential of its (purely imaginary) Fourier symbol
// and the quadratic term dz(v w) goes through classical RK4.

#include <vector>

#include "nvsoliton/grid.hpp"
#include "nvsoliton/potentials.hpp"

namespace nvsoliton {

struct NVState {
  Field2D v;
  Field2D w;
  double t = 0.0;
  double energy = 1.0;
};

/// w^(xi) = -3 (xi1 - i xi2)/(xi1 + i xi2) v^(xi) for xi != 0, w^(0) = 0.
/// Uses the odd-order (Nyquist-zeroed) wavenumbers so that the discrete
/// dzbar w + 3 dz v vanishes to rounding.
Field2D solve_w(const Field2D& v);

/// Builds a state with w = solve_w(v). Throws InvalidInput if v is not real
/// to 1e-12 or energy <= 0.
NVState make_state(const Field2D& v, double energy, double t = 0.0);

/// 4 Re(4 dz^3 v + dz(v w) - E dz w), real by construction.
Field2D nv_rhs(const NVState& state);

/// || dzbar w + 3 dz v ||_2.
double constraint_residual(const NVState& state);

/// C / (16 (pi N / L)^3 + 4 E (pi N / L)), default C = 0.5.
double stability_dt(const Grid2D& grid, double energy, double safety = 0.5);

/// Reusable stepper: owns the precomputed symbols for one (grid, E).
class NVIntegrator {
 public:
  NVIntegrator(const Grid2D& grid, double energy);

  const Grid2D& grid() const { return grid_; }
  double energy() const { return energy_; }

  /// One IF-RK4 step. With reverse = true the right-hand side is negated
  /// (time-reversed run). Throws Instability if sup|v| grows by more than 10x.
  NVState step(const NVState& state, double dt, bool reverse = false) const;

  /// Fourier symbol of the linear part acting on v^ (purely imaginary).
  std::span<const cplx> linear_symbol() const { return linear_; }

 private:
  std::vector<cplx> nonlinear(std::span<const cplx> v_hat) const;
  void symmetrize(std::vector<cplx>& v_hat) const;

  Grid2D grid_;
  double energy_;
  std::vector<cplx> linear_;     // symbol of 4 Re(4 dz^3 - E dz W)
  std::vector<cplx> dz_;         // (i/2)(xi1 - i xi2), Nyquist-zeroed
  std::vector<cplx> w_symbol_;   // -3 (xi1 - i xi2)/(xi1 + i xi2)
  std::vector<std::size_t> mirror_;  // index of -xi
};

/// Convenience wrapper around NVIntegrator::step.
NVState step(const NVState& state, double dt);

struct EvolutionOptions {
  double dt = 0.0;       // 0: use stability_dt(grid, E, safety)
  double safety = 0.5;
  bool reverse = false;
  int max_diagnostics = 1000;
};

struct DiagnosticSample {
  double t = 0.0;
  double mean = 0.0;
  double l2 = 0.0;
  double sup = 0.0;
};

struct EvolutionResult {
  NVState state;
  std::vector<DiagnosticSample> diagnostics;
  int steps = 0;
  double dt = 0.0;
};

/// Steps v0 to time T with dt_eff = T / ceil(T / dt). T = 0 returns the
/// initial state. Throws InvalidInput for T < 0 or a dt above the stability
/// bound.
EvolutionResult evolve(const Potential& v0, double energy, double final_time, EvolutionOptions options = {});
EvolutionResult evolve(const NVState& initial, double final_time, EvolutionOptions options = {});

DiagnosticSample diagnostics_of(const NVState& state);

}  // namespace nvsoliton
