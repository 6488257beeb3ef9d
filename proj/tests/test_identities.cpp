#include <doctest.h>

#include <cmath>
#include <random>

#include "nvsoliton/error.hpp"
#include "nvsoliton/identities.hpp"

using namespace nvsoliton;

namespace {

constexpr cplx kI{0.0, 1.0};

ScatteringAmplitude synthetic(int m, double energy, const std::function<cplx(int, int)>& f) {
  ScatteringAmplitude a;
  a.energy = energy;
  a.angles_per_axis = m;
  a.samples.resize(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a.samples[static_cast<std::size_t>(i) * m + j] = f(i, j);
  return a;
}

}  // namespace

TEST_CASE("torus parametrization") {
  const Vec2 k1 = k_from_torus(TorusPoint(1.0), 1.0);
  CHECK(k1.x1 == doctest::Approx(1.0));
  CHECK(std::abs(k1.x2) <= 1e-15);
  const Vec2 ki = k_from_torus(TorusPoint(kI), 1.0);
  CHECK(std::abs(ki.x1) <= 1e-15);
  CHECK(ki.x2 == doctest::Approx(1.0));

  std::mt19937 rng(4);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (double e : {0.5, 1.0, 4.0})
    for (int s = 0; s < 64; ++s) {
      const double a = angle(rng);
      const Vec2 k{std::sqrt(e) * std::cos(a), std::sqrt(e) * std::sin(a)};
      const Vec2 back = k_from_torus(torus_from_k(k, e), e);
      CHECK(std::hypot(back.x1 - k.x1, back.x2 - k.x2) <= 1e-12);
    }

  CHECK_THROWS_AS(torus_from_k({1.0, 0.5}, 1.0), InvalidInput);
  CHECK_THROWS_AS(TorusPoint(cplx(1.0, 1e-3)), InvalidInput);
  CHECK_THROWS_AS(torus_from_k({1.0, 0.0}, 0.0), InvalidInput);
}

TEST_CASE("phase laws") {
  const cplx t = translation_phase({1.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0});
  CHECK(std::abs(t - std::polar(1.0, 2.0)) <= 1e-15);
  CHECK(translation_phase({0.3, -2.0}, {0.6, 0.8}, {0.6, 0.8}) == cplx(1.0, 0.0));
  CHECK(evolution_phase(0.7, {0.6, 0.8}, {0.6, 0.8}) == cplx(1.0, 0.0));
  CHECK(std::abs(evolution_phase(1.0, {1.0, 0.0}, {0.0, 1.0}) - std::polar(1.0, 2.0)) <= 1e-15);

  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int s = 0; s < 1000; ++s) {
    const double e = 0.5 + 0.1 * std::abs(u(rng));
    const double a = u(rng), b = u(rng);
    const Vec2 k{std::sqrt(e) * std::cos(a), std::sqrt(e) * std::sin(a)};
    const Vec2 l{std::sqrt(e) * std::cos(b), std::sqrt(e) * std::sin(b)};
    const Vec2 y{u(rng), u(rng)};
    const double time = u(rng);
    const TorusPoint lk = torus_from_k(k, e), ll = torus_from_k(l, e);
    const cplx tp = translation_phase(y, k, l);
    const cplx ep = evolution_phase(time, k, l);
    CHECK(std::abs(std::abs(tp) - 1.0) <= 1e-12);
    CHECK(std::abs(std::abs(ep) - 1.0) <= 1e-12);
    CHECK(std::abs(tp - translation_phase_torus(y, lk, ll, e)) <= 1e-12);
    CHECK(std::abs(ep - evolution_phase_torus(time, lk, ll, e)) <= 1e-12);
  }
}

TEST_CASE("traveling phase mismatch") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int s = 0; s < 200; ++s) {
    const TorusPoint a = TorusPoint::from_angle(3.0 * u(rng));
    const TorusPoint b = TorusPoint::from_angle(3.0 * u(rng));
    const Vec2 c{u(rng), u(rng)};
    CHECK(traveling_phase_mismatch(a, a, c, 1.3) == 0.0);
    CHECK(std::abs(traveling_phase_mismatch_complex(a, b, c, 1.3).imag()) <= 1e-12);
    CHECK(std::abs(traveling_phase_mismatch(a, b, c, 1.3) + traveling_phase_mismatch(b, a, c, 1.3)) <= 1e-12);
  }
  // Phi is the phase rate: e^{i t Phi} = translation(ct) / evolution(t).
  const double e = 1.0, t = 0.3;
  const Vec2 c{0.4, -1.1};
  const TorusPoint a = TorusPoint::from_angle(0.5), b = TorusPoint::from_angle(2.0);
  const cplx ratio = translation_phase_torus(t * c, a, b, e) / evolution_phase_torus(t, a, b, e);
  CHECK(std::abs(ratio - std::polar(1.0, t * traveling_phase_mismatch(a, b, c, e))) <= 1e-12);
}

TEST_CASE("Gram certificate") {
  CHECK(linear_independence_gram(0.0, 2.0 * M_PI, 256) == doctest::Approx(1.0).epsilon(1e-12));
  const auto gram = gram_matrix(0.0, 2.0 * M_PI, 256);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(std::abs(gram[i * 5 + j] - (i == j ? 1.0 : 0.0)) <= 1e-12);
  const double arc = linear_independence_gram(0.0, 0.1, 64);
  CHECK(arc > 0.0);
  // Regression baseline (recorded on first run).
  CHECK(arc == doctest::Approx(1.9608e-14).epsilon(0.05));
  CHECK_THROWS_AS(linear_independence_gram(0.0, 1e-4, 64), InvalidInput);
  CHECK_THROWS_AS(linear_independence_gram(0.0, 1.0, 8), InvalidInput);
}

TEST_CASE("transparency verdict") {
  const ScatteringAmplitude zero = synthetic(32, 1.0, [](int, int) { return cplx{}; });
  const Verdict v0 = transparency_verdict(zero, {1.0, 0.0}, 1.0, 1e-9);
  CHECK(v0.consistent_with_traveling_wave);
  CHECK(v0.max_amplitude == 0.0);
  CHECK(v0.m1 == 0.0);
  CHECK(v0.m2 == 0.0);
  CHECK_FALSE(v0.support_confined_to_coincidence_set);

  // Born-oracle amplitude of the A = 1e-3 Gaussian.
  const ScatteringAmplitude born = synthetic(32, 1.0, [](int i, int j) {
    const double a = 2.0 * M_PI * i / 32, b = 2.0 * M_PI * j / 32;
    const double q2 = std::pow(std::cos(a) - std::cos(b), 2) + std::pow(std::sin(a) - std::sin(b), 2);
    return cplx(1e-3 * M_PI * std::exp(-q2 / 4.0) / (4.0 * M_PI * M_PI), 0.0);
  });
  const Verdict vb = transparency_verdict(born, {0.5, 0.2}, 1.0, 1e-6);
  CHECK_FALSE(vb.consistent_with_traveling_wave);
  CHECK(vb.max_amplitude == doctest::Approx(7.9577e-5).epsilon(1e-3));
  CHECK(vb.m2 > 0.1 * vb.max_amplitude);

  // Diagonal support: Phi vanishes there, so m2 = 0 but the diagnostic fires.
  const ScatteringAmplitude diag = synthetic(32, 1.0, [](int i, int j) { return i == j ? cplx(1.0) : cplx{}; });
  const Verdict vd = transparency_verdict(diag, {1.0, 0.0}, 1.0, 1e-6);
  CHECK(vd.m2 == 0.0);
  CHECK(vd.consistent_with_traveling_wave);
  CHECK(vd.support_confined_to_coincidence_set);
}

TEST_CASE("detector soundness for f = g Phi") {
  const Vec2 c{0.7, 0.3};
  const double e = 1.0;
  const int m = 32;
  double sup_phi = 0.0;
  const ScatteringAmplitude f = synthetic(m, e, [&](int i, int j) {
    const double phi = traveling_phase_mismatch(TorusPoint::from_angle(2.0 * M_PI * i / m),
                                                TorusPoint::from_angle(2.0 * M_PI * j / m), c, e);
    sup_phi = std::max(sup_phi, std::abs(phi));
    const double g = 0.5 + 0.25 * std::cos(i - 2.0 * j);  // bounded, away from 0
    return cplx(g * phi, 0.0);
  });
  const Verdict v = transparency_verdict(f, c, e, 1e-9);
  CHECK(v.m1 <= 0.75 * sup_phi * sup_phi);
  CHECK(v.m2 > 0.0);
  CHECK_FALSE(v.consistent_with_traveling_wave);
}

TEST_CASE("theorem-1 pipeline") {
  PipelineInputs inputs;
  inputs.grid = Grid2D(20.0, 64);
  inputs.angles_per_axis = 16;
  const Theorem1Report trivial = theorem1_pipeline(PotentialSpec::gaussian(0.0, 1.0), {1.0, 0.0}, 1.0, inputs);
  CHECK(trivial.trivial);
  CHECK(trivial.residual == 0.0);
  CHECK(trivial.max_amplitude == 0.0);
  CHECK(trivial.summary.find("trivial solution") != std::string::npos);
  CHECK_FALSE(trivial.forbidden_outcome);

  const Theorem1Report r = theorem1_pipeline(PotentialSpec::gaussian(0.1, 1.0), {1.0, 0.0}, 1.0, inputs);
  CHECK(r.residual > inputs.tolerances.residual);
  CHECK_FALSE(r.traveling_wave);
  CHECK(r.nonzero_scattering_data);
  CHECK_FALSE(r.verdict.consistent_with_traveling_wave);
  CHECK_FALSE(r.forbidden_outcome);
  const auto json = to_json(r);
  CHECK(json["residual"].get<double>() == r.residual);
  CHECK(json["tolerances"]["amplitude"].get<double>() == 1e-9);

  CHECK_THROWS_AS(theorem1_pipeline(PotentialSpec::kdv_line(1.0, 0.0), {1.0, 0.0}, 1.0, inputs), InvalidInput);
  CHECK_THROWS_AS(theorem1_pipeline(PotentialSpec::gaussian(0.1, 1.0), {1.0, 0.0}, -1.0, inputs), InvalidInput);
}
