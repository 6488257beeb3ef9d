#include "nvsoliton/nv_evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nvsoliton/error.hpp"
#include "nvsoliton/fft.hpp"

namespace nvsoliton {
namespace {

constexpr cplx kI{0.0, 1.0};

// zeta' = xi1 + i xi2 with Nyquist-zeroed wavenumbers.
cplx zeta(const Grid2D& grid, int m1, int m2) {
  return {grid.odd_wavenumber(m1), grid.odd_wavenumber(m2)};
}

cplx w_multiplier(cplx z) {
  if (z == cplx{}) return 0.0;
  return -3.0 * std::conj(z) / z;
}

}  // namespace

Field2D solve_w(const Field2D& v) {
  const Grid2D& grid = v.grid();
  const int n = grid.points();
  auto spectrum = to_spectral(v);
  for (int m2 = 0; m2 < n; ++m2)
    for (int m1 = 0; m1 < n; ++m1) spectrum[grid.index(m1, m2)] *= w_multiplier(zeta(grid, m1, m2));
  return from_spectral(grid, spectrum);
}

NVState make_state(const Field2D& v, double energy, double t) {
  if (!(energy > 0.0)) throw InvalidInput("NV evolution needs E > 0");
  if (max_imag(v) > 1e-12) throw InvalidInput("NV state requires a real v");
  Field2D real_v = real_part(v);
  Field2D w = solve_w(real_v);
  return NVState{std::move(real_v), std::move(w), t, energy};
}

Field2D nv_rhs(const NVState& state) {
  const Field2D& v = state.v;
  const Field2D& w = state.w;
  return real_part(4.0 * (4.0 * dz(dz(dz(v))) + dz(v * w) - state.energy * dz(w)));
}

double constraint_residual(const NVState& state) {
  return l2_norm(dzbar(state.w) + 3.0 * dz(state.v));
}

double stability_dt(const Grid2D& grid, double energy, double safety) {
  const double k_max = std::numbers::pi * grid.points() / grid.side_length();
  return safety / (16.0 * k_max * k_max * k_max + 4.0 * energy * k_max);
}

NVIntegrator::NVIntegrator(const Grid2D& grid, double energy) : grid_(grid), energy_(energy) {
  if (!(energy > 0.0)) throw InvalidInput("NV evolution needs E > 0");
  const int n = grid.points();
  const std::size_t size = grid.size();
  linear_.resize(size);
  dz_.resize(size);
  w_symbol_.resize(size);
  mirror_.resize(size);

  // m(xi): symbol of 4 dz^3 - E dz W acting on v^.
  auto base_symbol = [&](int m1, int m2) {
    const cplx z = zeta(grid, m1, m2);
    const cplx d = 0.5 * kI * std::conj(z);
    return 4.0 * d * d * d - energy * d * w_multiplier(z);
  };
  for (int m2 = 0; m2 < n; ++m2) {
    for (int m1 = 0; m1 < n; ++m1) {
      const std::size_t idx = grid.index(m1, m2);
      const int r1 = (n - m1) % n;
      const int r2 = (n - m2) % n;
      mirror_[idx] = grid.index(r1, r2);
      const cplx z = zeta(grid, m1, m2);
      dz_[idx] = 0.5 * kI * std::conj(z);
      w_symbol_[idx] = w_multiplier(z);
      // 4 Re(g) has transform 2 (g^(xi) + conj(g^(-xi))) for real v.
      linear_[idx] = 2.0 * (base_symbol(m1, m2) + std::conj(base_symbol(r1, r2)));
    }
  }
}

std::vector<cplx> NVIntegrator::nonlinear(std::span<const cplx> v_hat) const {
  const int n = grid_.points();
  const std::size_t size = grid_.size();
  std::vector<cplx> w_hat(size);
  for (std::size_t i = 0; i < size; ++i) w_hat[i] = w_symbol_[i] * v_hat[i];
  std::vector<cplx> v(size);
  std::vector<cplx> w(size);
  fft::inverse_2d(v_hat, v, n, n);
  fft::inverse_2d(w_hat, w, n, n);
  for (std::size_t i = 0; i < size; ++i) v[i] = v[i].real() * w[i];
  std::vector<cplx> g(size);
  fft::forward_2d(v, g, n, n);
  for (std::size_t i = 0; i < size; ++i) g[i] *= dz_[i];
  std::vector<cplx> out(size);
  for (std::size_t i = 0; i < size; ++i) out[i] = 2.0 * (g[i] + std::conj(g[mirror_[i]]));
  return out;
}

void NVIntegrator::symmetrize(std::vector<cplx>& v_hat) const {
  std::vector<cplx> sym(v_hat.size());
  for (std::size_t i = 0; i < v_hat.size(); ++i) sym[i] = 0.5 * (v_hat[i] + std::conj(v_hat[mirror_[i]]));
  v_hat = std::move(sym);
}

NVState NVIntegrator::step(const NVState& state, double dt, bool reverse) const {
  if (!(state.v.grid() == grid_)) throw InvalidInput("state grid does not match integrator grid");
  const std::size_t size = grid_.size();
  const double sign = reverse ? -1.0 : 1.0;
  const double h = sign * dt;

  std::vector<cplx> half(size);
  std::vector<cplx> full(size);
  for (std::size_t i = 0; i < size; ++i) {
    half[i] = std::exp(linear_[i] * (0.5 * h));
    full[i] = half[i] * half[i];
  }

  auto nl = [&](std::span<const cplx> u) {
    auto out = nonlinear(u);
    if (reverse)
      for (auto& x : out) x = -x;
    return out;
  };

  const auto u = to_spectral(state.v);
  std::vector<cplx> stage(size);

  const auto a = nl(u);
  for (std::size_t i = 0; i < size; ++i) stage[i] = half[i] * (u[i] + 0.5 * dt * a[i]);
  const auto b = nl(stage);
  for (std::size_t i = 0; i < size; ++i) stage[i] = half[i] * u[i] + 0.5 * dt * b[i];
  const auto c = nl(stage);
  for (std::size_t i = 0; i < size; ++i) stage[i] = full[i] * u[i] + dt * half[i] * c[i];
  const auto d = nl(stage);

  std::vector<cplx> next(size);
  for (std::size_t i = 0; i < size; ++i)
    next[i] = full[i] * u[i] + dt / 6.0 * (full[i] * a[i] + 2.0 * half[i] * (b[i] + c[i]) + d[i]);
  symmetrize(next);

  Field2D v = real_part(from_spectral(grid_, next));
  const double before = sup_norm(state.v);
  const double after = sup_norm(v);
  if (!std::isfinite(after) || (before > 0.0 && after > 10.0 * before))
    throw Instability("NV step: sup|v| grew from " + std::to_string(before) + " to " + std::to_string(after));
  Field2D w = solve_w(v);
  return NVState{std::move(v), std::move(w), state.t + h, energy_};
}

NVState step(const NVState& state, double dt) {
  return NVIntegrator(state.v.grid(), state.energy).step(state, dt);
}

DiagnosticSample diagnostics_of(const NVState& state) {
  return {state.t, mean(state.v).real(), l2_norm(state.v), sup_norm(state.v)};
}

EvolutionResult evolve(const NVState& initial, double final_time, EvolutionOptions options) {
  if (!(final_time >= 0.0) || !std::isfinite(final_time)) throw InvalidInput("evolution time must be >= 0");
  const Grid2D& grid = initial.v.grid();
  const double dt_max = stability_dt(grid, initial.energy, options.safety);
  double dt = options.dt > 0.0 ? options.dt : dt_max;
  if (dt > dt_max * (1.0 + 1e-12))
    throw InvalidInput("time step " + std::to_string(dt) + " exceeds the stability bound " + std::to_string(dt_max));

  EvolutionResult result{initial, {}, 0, 0.0};
  result.diagnostics.push_back(diagnostics_of(initial));
  if (final_time == 0.0) return result;

  const int steps = static_cast<int>(std::ceil(final_time / dt - 1e-9));
  dt = final_time / steps;
  const int stride = std::max(1, steps / std::max(1, options.max_diagnostics));
  NVIntegrator integrator(grid, initial.energy);
  NVState state = initial;
  for (int s = 1; s <= steps; ++s) {
    state = integrator.step(state, dt, options.reverse);
    if (s % stride == 0 || s == steps) result.diagnostics.push_back(diagnostics_of(state));
  }
  // Land exactly on the requested time despite accumulated rounding.
  state.t = initial.t + (options.reverse ? -final_time : final_time);
  result.state = std::move(state);
  result.steps = steps;
  result.dt = dt;
  return result;
}

EvolutionResult evolve(const Potential& v0, double energy, double final_time, EvolutionOptions options) {
  return evolve(make_state(v0.field, energy), final_time, options);
}

}  // namespace nvsoliton
