#include <doctest.h>

#include <cmath>
#include <random>

#include "nvsoliton/error.hpp"
#include "nvsoliton/nv_evolution.hpp"

using namespace nvsoliton;

namespace {

Field2D random_band_limited(const Grid2D& g, int cutoff, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cplx> hat(g.size());
  for (int m2 = 0; m2 < g.points(); ++m2)
    for (int m1 = 0; m1 < g.points(); ++m1)
      if (std::abs(g.signed_mode(m1)) <= cutoff && std::abs(g.signed_mode(m2)) <= cutoff)
        hat[g.index(m1, m2)] = {n(rng), n(rng)};
  return real_part(from_spectral(g, hat));
}

Field2D gaussian(const Grid2D& g, double a, Vec2 c = {}) {
  return Field2D::sample(g, [&](Vec2 x) { return cplx(a * std::exp(-dot(x - c, x - c)), 0.0); });
}

}  // namespace

TEST_CASE("solve_w multiplier on axis waves") {
  const Grid2D g(20.0, 32);
  const double k = 2.0 * M_PI / 20.0;
  const Field2D c1 = Field2D::sample(g, [&](Vec2 x) { return cplx(std::cos(k * x.x1), 0.0); });
  const Field2D c2 = Field2D::sample(g, [&](Vec2 x) { return cplx(std::cos(k * x.x2), 0.0); });
  CHECK(sup_norm(solve_w(c1) + 3.0 * c1) <= 1e-13);
  CHECK(sup_norm(solve_w(c2) - 3.0 * c2) <= 1e-13);
  // Zero-frequency convention: constants map to zero.
  const Field2D one = Field2D::sample(g, [](Vec2) { return cplx(1.0, 0.0); });
  CHECK(sup_norm(solve_w(one)) == 0.0);
}

TEST_CASE("constraint solver on random band-limited fields") {
  const Grid2D g(20.0, 64);
  for (unsigned seed = 1; seed <= 20; ++seed) {
    const Field2D v = random_band_limited(g, 20, seed);
    const Field2D w = solve_w(v);
    CHECK(sup_norm(dzbar(w) + 3.0 * dz(v)) <= 1e-10 * sup_norm(v));
  }
}

TEST_CASE("make_state validation") {
  const Grid2D g(20.0, 32);
  CHECK_THROWS_AS(make_state(gaussian(g, 1.0), 0.0), InvalidInput);
  Field2D complex_v = gaussian(g, 1.0);
  complex_v(3, 3) += cplx(0.0, 1e-6);
  CHECK_THROWS_AS(make_state(complex_v, 1.0), InvalidInput);
}

TEST_CASE("nv_rhs: zero, realness, zero mean") {
  const Grid2D g(20.0, 64);
  CHECK(sup_norm(nv_rhs(make_state(Field2D(g), 1.0))) == 0.0);
  const Field2D v = gaussian(g, 0.7, {0.5, -0.3});
  const Field2D rhs = nv_rhs(make_state(v, 1.0));
  CHECK(max_imag(rhs) == 0.0);
  CHECK(std::abs(mean(rhs)) <= 1e-12 * sup_norm(v));
}

TEST_CASE("nv_rhs linearizes to 4 Re(4 dz^3 v - E dz w)") {
  const Grid2D g(20.0, 64);
  const Field2D v1 = gaussian(g, 1.0);
  const Field2D w1 = solve_w(v1);
  const Field2D linear = real_part(4.0 * (4.0 * dz(dz(dz(v1))) - 1.0 * dz(w1)));
  std::vector<double> gaps;
  for (double a : {1e-2, 1e-3}) gaps.push_back(sup_norm((1.0 / a) * nv_rhs(make_state(a * v1, 1.0)) - linear));
  CHECK(gaps[0] / gaps[1] == doctest::Approx(10.0).epsilon(0.01));
}

TEST_CASE("x2-independent reduction of the rhs") {
  // Zero-mean x2-independent data: rhs = 2 v''' - 12 v v' + 6 E v'.
  const Grid2D g(20.0, 64);
  const double k = 2.0 * M_PI / 20.0;
  const Field2D v = Field2D::sample(g, [&](Vec2 x) {
    return cplx(0.3 * std::cos(k * x.x1) + 0.2 * std::sin(3.0 * k * x.x1), 0.0);
  });
  const double e = 1.5;
  const Field2D vx = spectral_deriv(v, {1, 0});
  const Field2D expected = 2.0 * spectral_deriv(v, {3, 0}) - 12.0 * (v * vx) + (6.0 * e) * vx;
  CHECK(sup_norm(nv_rhs(make_state(v, e)) - expected) <= 1e-12);
}

TEST_CASE("step: zero state and linear phase") {
  const Grid2D g(20.0, 32);
  const NVIntegrator integrator(g, 1.0);
  const NVState zero = make_state(Field2D(g), 1.0);
  CHECK(sup_norm(integrator.step(zero, 1e-3).v) == 0.0);

  // Tiny amplitude: each Fourier mode picks up exp(symbol * dt).
  const Field2D v = gaussian(g, 1e-10);
  const double dt = stability_dt(g, 1.0);
  const NVState next = integrator.step(make_state(v, 1.0), dt);
  const auto before = to_spectral(v);
  const auto after = to_spectral(next.v);
  const auto symbol = integrator.linear_symbol();
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < before.size(); ++i) {
    CHECK(std::abs(symbol[i].real()) == 0.0);
    worst = std::max(worst, std::abs(after[i] - std::exp(symbol[i] * dt) * before[i]));
    scale = std::max(scale, std::abs(before[i]));
  }
  CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("IF-RK4 converges at fourth order") {
  const Grid2D g(10.0, 32);
  const NVState s0 = make_state(gaussian(g, 2.0), 1.0);
  const double t_end = 0.02;
  auto run = [&](int steps) {
    NVIntegrator integrator(g, 1.0);
    NVState s = s0;
    for (int i = 0; i < steps; ++i) s = integrator.step(s, t_end / steps);
    return s.v;
  };
  // The integrating factor absorbs the stiff linear part, so steps far above the
  // explicit bound are stable; at the bound itself the error is already at roundoff.
  CHECK(t_end / 8 > 10.0 * stability_dt(g, 1.0));
  const Field2D ref = run(256);
  const double e1 = sup_norm(run(8) - ref);
  const double e2 = sup_norm(run(16) - ref);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 40.0);
}

TEST_CASE("evolve: T = 0, invariants, reversibility") {
  const Grid2D g(20.0, 64);
  const Potential v0 = sample_potential(PotentialSpec::gaussian(0.1, 1.0), g);
  const EvolutionResult same = evolve(v0, 1.0, 0.0);
  CHECK(same.steps == 0);
  CHECK(sup_norm(same.state.v - v0.field) == 0.0);
  CHECK_THROWS_AS(evolve(v0, 1.0, -1.0), InvalidInput);
  EvolutionOptions too_big;
  too_big.dt = 2.0 * stability_dt(g, 1.0);
  CHECK_THROWS_AS(evolve(v0, 1.0, 0.01, too_big), InvalidInput);

  const EvolutionResult fwd = evolve(v0, 1.0, 0.02);
  CHECK(fwd.state.t == 0.02);
  CHECK(max_imag(fwd.state.v) == 0.0);
  CHECK(constraint_residual(fwd.state) <= 1e-10 * (1.0 + l2_norm(fwd.state.v)));
  const double m0 = fwd.diagnostics.front().mean;
  for (const auto& d : fwd.diagnostics) CHECK(std::abs(d.mean - m0) <= 1e-10 * std::abs(m0));

  EvolutionOptions back;
  back.reverse = true;
  const EvolutionResult rev = evolve(fwd.state, 0.02, back);
  CHECK(sup_norm(rev.state.v - v0.field) <= 1e-6);
}

TEST_CASE("x2-independent data stays x2-independent") {
  const Grid2D g(20.0, 32);
  const Field2D v = Field2D::sample(g, [](Vec2 x) { return cplx(-0.5 / std::pow(std::cosh(0.5 * x.x1), 2), 0.0); });
  const EvolutionResult r = evolve(make_state(v, 1.0), 0.01);
  double dev = 0.0;
  for (int i2 = 1; i2 < 32; ++i2)
    for (int i1 = 0; i1 < 32; ++i1) dev = std::max(dev, std::abs(r.state.v(i1, i2) - r.state.v(i1, 0)));
  CHECK(dev <= 1e-8);
}

TEST_CASE("instability is reported") {
  const Grid2D g(20.0, 32);
  const NVIntegrator integrator(g, 1.0);
  const NVState big = make_state(gaussian(g, 1e4), 1.0);
  CHECK_THROWS_AS(
      [&] {
        NVState s = big;
        for (int i = 0; i < 50; ++i) s = integrator.step(s, stability_dt(g, 1.0));
      }(),
      Instability);
}
