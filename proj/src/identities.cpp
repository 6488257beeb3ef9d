#include "nvsoliton/identities.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nvsoliton/error.hpp"

namespace nvsoliton {
namespace {

constexpr cplx kI{0.0, 1.0};

cplx as_complex(Vec2 v) { return {v.x1, v.x2}; }

cplx cubic_sum(cplx lambda) { return lambda * lambda * lambda + 1.0 / (lambda * lambda * lambda); }

}  // namespace

TorusPoint::TorusPoint(cplx lambda) : lambda_(lambda) {
  if (!(std::abs(std::abs(lambda) - 1.0) <= 1e-12)) throw InvalidInput("torus point must have |lambda| = 1");
}

TorusPoint torus_from_k(Vec2 k, double energy) {
  if (!(energy > 0.0)) throw InvalidInput("torus parametrization needs E > 0");
  if (!(std::abs(dot(k, k) - energy) <= 1e-10 * energy)) throw InvalidInput("off-shell momentum: k.k != E");
  const cplx lambda = as_complex(k) / std::sqrt(energy);
  return TorusPoint(lambda / std::abs(lambda));
}

Vec2 k_from_torus(TorusPoint lambda, double energy) {
  if (!(energy > 0.0)) throw InvalidInput("torus parametrization needs E > 0");
  const cplx l = lambda.value();
  const double r = std::sqrt(energy);
  const cplx k1 = 0.5 * r * (l + 1.0 / l);
  const cplx k2 = 0.5 * kI * r * (1.0 / l - l);
  return {k1.real(), k2.real()};
}

cplx translation_phase(Vec2 shift, Vec2 k, Vec2 l) { return std::polar(1.0, dot(shift, k - l)); }

cplx translation_phase_torus(Vec2 shift, TorusPoint lambda, TorusPoint lambda_out, double energy) {
  const cplx y = as_complex(shift);
  const cplx a = lambda.value();
  const cplx b = lambda_out.value();
  const cplx exponent = 0.5 * kI * std::sqrt(energy) * (a * std::conj(y) + y / a - b * std::conj(y) - y / b);
  return std::exp(exponent);
}

cplx evolution_phase(double t, Vec2 k, Vec2 l) {
  const double cubic = k.x1 * k.x1 * k.x1 - 3.0 * k.x1 * k.x2 * k.x2 - l.x1 * l.x1 * l.x1 + 3.0 * l.x1 * l.x2 * l.x2;
  return std::polar(1.0, 2.0 * t * cubic);
}

cplx evolution_phase_torus(double t, TorusPoint lambda, TorusPoint lambda_out, double energy) {
  const cplx exponent = kI * std::pow(energy, 1.5) * t * (cubic_sum(lambda.value()) - cubic_sum(lambda_out.value()));
  return std::exp(exponent);
}

cplx traveling_phase_mismatch_complex(TorusPoint lambda, TorusPoint lambda_out, Vec2 velocity, double energy) {
  const cplx c = as_complex(velocity);
  const cplx a = lambda.value();
  const cplx b = lambda_out.value();
  // Grouped as differences so that Phi(lambda, lambda) is exactly 0.
  const cplx translation = 0.5 * std::sqrt(energy) * ((a - b) * std::conj(c) + c * (1.0 / a - 1.0 / b));
  const cplx evolution =
      std::pow(energy, 1.5) * ((a * a * a - b * b * b) + (1.0 / (a * a * a) - 1.0 / (b * b * b)));
  return translation - evolution;
}

double traveling_phase_mismatch(TorusPoint lambda, TorusPoint lambda_out, Vec2 velocity, double energy) {
  return traveling_phase_mismatch_complex(lambda, lambda_out, velocity, energy).real();
}

namespace {

// Rows of the scaled sample matrix B; Gram = B^H B.
Eigen::MatrixXcd gram_basis(double theta0, double theta1, int samples) {
  if (!(theta1 - theta0 >= 1e-3)) throw InvalidInput("degenerate arc: length below 1e-3");
  if (samples < 16) throw InvalidInput("Gram certificate needs at least 16 samples");
  static constexpr int kPowers[5] = {3, -3, 1, -1, 0};
  Eigen::MatrixXcd basis(samples, 5);
  const double step = (theta1 - theta0) / samples;
  const double scale = 1.0 / std::sqrt(static_cast<double>(samples));
  for (int j = 0; j < samples; ++j) {
    const double theta = theta0 + j * step;
    for (int p = 0; p < 5; ++p) basis(j, p) = scale * std::polar(1.0, kPowers[p] * theta);
  }
  return basis;
}

}  // namespace

std::vector<cplx> gram_matrix(double theta0, double theta1, int samples) {
  const Eigen::MatrixXcd basis = gram_basis(theta0, theta1, samples);
  const Eigen::MatrixXcd gram = basis.adjoint() * basis;
  std::vector<cplx> out(25);
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) out[r * 5 + c] = gram(r, c);
  return out;
}

double linear_independence_gram(double theta0, double theta1, int samples) {
  const Eigen::MatrixXcd basis = gram_basis(theta0, theta1, samples);
  // sigma_min(Gram) = sigma_min(B)^2, computed from B for accuracy.
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(basis);
  const double smallest = svd.singularValues()(4);
  return smallest * smallest;
}

Verdict transparency_verdict(const ScatteringAmplitude& amplitude, Vec2 velocity, double energy, double tolerance) {
  const int m = amplitude.angles_per_axis;
  const std::size_t count = static_cast<std::size_t>(m) * m;
  std::vector<double> phi(count);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      phi[static_cast<std::size_t>(a) * m + b] =
          std::abs(traveling_phase_mismatch(TorusPoint::from_angle(amplitude.angle(a)),
                                            TorusPoint::from_angle(amplitude.angle(b)), velocity, energy));

  std::vector<double> sorted = phi;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(count / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  double median = *mid;
  if (count % 2 == 0) median = 0.5 * (median + *std::max_element(sorted.begin(), mid));

  Verdict verdict;
  verdict.median_phi = median;
  verdict.tolerance = tolerance;
  verdict.velocity = velocity;
  verdict.energy = energy;
  for (std::size_t q = 0; q < count; ++q) {
    const double f = std::abs(amplitude.samples[q]);
    verdict.max_amplitude = std::max(verdict.max_amplitude, f);
    verdict.m1 = std::max(verdict.m1, f * phi[q]);
    if (phi[q] > median) verdict.m2 = std::max(verdict.m2, f);
  }
  verdict.consistent_with_traveling_wave = verdict.m2 <= tolerance;
  verdict.support_confined_to_coincidence_set =
      verdict.consistent_with_traveling_wave && verdict.max_amplitude > tolerance;
  return verdict;
}

Theorem1Report theorem1_report(const PotentialSpec& spec, const Potential& potential,
                               const ScatteringAmplitude& amplitude, Vec2 velocity, double energy,
                               const PipelineTolerances& tolerances) {
  Theorem1Report report;
  report.family = to_string(spec.family);
  report.velocity = velocity;
  report.energy = energy;
  report.tolerances = tolerances;
  report.trivial = potential.is_zero();
  report.residual = traveling_wave_residual(potential, velocity, energy);
  report.max_amplitude = amplitude_norm(amplitude);
  report.verdict = transparency_verdict(amplitude, velocity, energy, tolerances.amplitude);
  report.traveling_wave = report.residual <= tolerances.residual;
  report.nonzero_scattering_data = report.max_amplitude > tolerances.amplitude;
  report.forbidden_outcome =
      report.traveling_wave && report.nonzero_scattering_data && report.verdict.consistent_with_traveling_wave;

  std::ostringstream summary;
  if (report.trivial) {
    summary << "trivial solution: V == 0, residual " << report.residual << ", sup|f| " << report.max_amplitude;
  } else if (report.forbidden_outcome) {
    summary << "FORBIDDEN: nonzero localized traveling wave with nonzero consistent scattering data";
  } else if (report.traveling_wave) {
    summary << "residual " << report.residual << " <= tol_r for nonzero V: contradicts the no-soliton theorem";
  } else {
    summary << "not a traveling wave (residual " << report.residual << " > tol_r " << tolerances.residual
            << "); sup|f| = " << report.max_amplitude
            << (report.verdict.consistent_with_traveling_wave ? ", verdict consistent" : ", verdict not consistent");
  }
  report.summary = summary.str();
  return report;
}

Theorem1Report theorem1_pipeline(const PotentialSpec& spec, Vec2 velocity, double energy,
                                 const PipelineInputs& inputs) {
  if (!spec.localized())
    throw InvalidInput("theorem-1 pipeline needs a two-dimensionally localized potential (not kdv-line)");
  if (!(energy > 0.0)) throw InvalidInput("theorem-1 pipeline needs E > 0");
  const Potential potential = sample_potential(spec, inputs.grid);
  const ScatteringAmplitude amplitude = compute_amplitude(potential, energy, inputs.angles_per_axis, inputs.solver);
  return theorem1_report(spec, potential, amplitude, velocity, energy, inputs.tolerances);
}

nlohmann::json to_json(const Verdict& verdict) {
  return {
      {"consistent_with_traveling_wave", verdict.consistent_with_traveling_wave},
      {"max_amplitude", verdict.max_amplitude},
      {"m1", verdict.m1},
      {"m2", verdict.m2},
      {"median_abs_phi", verdict.median_phi},
      {"tolerance", verdict.tolerance},
      {"support_confined_to_coincidence_set", verdict.support_confined_to_coincidence_set},
      {"velocity", {verdict.velocity.x1, verdict.velocity.x2}},
      {"energy", verdict.energy},
  };
}

nlohmann::json to_json(const Theorem1Report& report) {
  return {
      {"family", report.family},
      {"velocity", {report.velocity.x1, report.velocity.x2}},
      {"energy", report.energy},
      {"residual", report.residual},
      {"max_amplitude", report.max_amplitude},
      {"verdict", to_json(report.verdict)},
      {"tolerances", {{"residual", report.tolerances.residual}, {"amplitude", report.tolerances.amplitude}}},
      {"trivial", report.trivial},
      {"traveling_wave", report.traveling_wave},
      {"nonzero_scattering_data", report.nonzero_scattering_data},
      {"forbidden_outcome", report.forbidden_outcome},
      {"summary", report.summary},
  };
}

}  // namespace nvsoliton
