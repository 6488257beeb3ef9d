#pragma once

// The fixed-energy manifold {k^2 = l^2 = E} as the torus T x T, the
// translation and time-evolution phase laws of the scattering amplitude in
// Cartesian and torus form, the traveling-wave phase mismatch, and the
// transparency detector built on them.

#include <complex>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvsoliton/grid.hpp"
#include "nvsoliton/potentials.hpp"
#include "nvsoliton/scattering.hpp"

namespace nvsoliton {

/// A point of the unit circle |lambda| = 1.
class TorusPoint {
 public:
  /// Throws InvalidInput unless ||lambda| - 1| <= 1e-12.
  explicit TorusPoint(cplx lambda);
  static TorusPoint from_angle(double theta) { return TorusPoint(std::polar(1.0, theta)); }

  cplx value() const { return lambda_; }

 private:
  cplx lambda_;
};

/// lambda = (k1 + i k2) / sqrt(E). Throws InvalidInput ("off-shell") unless
/// |k.k - E| <= 1e-10 E.
TorusPoint torus_from_k(Vec2 k, double energy);
/// k1 = sqrt(E)/2 (lambda + 1/lambda), k2 = i sqrt(E)/2 (1/lambda - lambda).
Vec2 k_from_torus(TorusPoint lambda, double energy);

/// e^{i y.(k - l)}.
cplx translation_phase(Vec2 shift, Vec2 k, Vec2 l);
/// exp[(i/2) sqrt(E) (lambda conj(y) + y/lambda - lambda' conj(y) - y/lambda')], y = y1 + i y2.
cplx translation_phase_torus(Vec2 shift, TorusPoint lambda, TorusPoint lambda_out, double energy);

/// exp[2 i t (k1^3 - 3 k1 k2^2 - l1^3 + 3 l1 l2^2)].
cplx evolution_phase(double t, Vec2 k, Vec2 l);
/// exp[i E^{3/2} t (lambda^3 + lambda^-3 - lambda'^3 - lambda'^-3)].
cplx evolution_phase_torus(double t, TorusPoint lambda, TorusPoint lambda_out, double energy);

/// Phi = (sqrt(E)/2)(lambda conj(c) + c/lambda - lambda' conj(c) - c/lambda')
///       - E^{3/2}(lambda^3 + lambda^-3 - lambda'^3 - lambda'^-3),   c = c1 + i c2.
/// Real on T x T. A traveling wave with velocity c needs f Phi = 0.
double traveling_phase_mismatch(TorusPoint lambda, TorusPoint lambda_out, Vec2 velocity, double energy);
/// The same expression without discarding the imaginary part.
cplx traveling_phase_mismatch_complex(TorusPoint lambda, TorusPoint lambda_out, Vec2 velocity, double energy);

/// Smallest singular value of the normalized Gram matrix of
/// {lambda^3, lambda^-3, lambda, lambda^-1, 1} sampled at theta_j = theta0 + j (theta1 - theta0)/samples.
/// Throws InvalidInput for arcs shorter than 1e-3 or fewer than 16 samples.
double linear_independence_gram(double theta0, double theta1, int samples);

/// The 5x5 normalized Gram matrix itself (row-major), same sampling and
/// basis order. On the full circle with samples > 6 it is the identity.
std::vector<cplx> gram_matrix(double theta0, double theta1, int samples);

struct Verdict {
  bool consistent_with_traveling_wave = true;
  double max_amplitude = 0.0;  // sup |f|
  double m1 = 0.0;             // sup |f| |Phi|
  double m2 = 0.0;             // sup |f| where |Phi| > median |Phi|
  double median_phi = 0.0;
  double tolerance = 0.0;
  /// f is nonzero only where Phi vanishes, which a continuous amplitude
  /// cannot do; reported but does not flip the verdict.
  bool support_confined_to_coincidence_set = false;
  Vec2 velocity{};
  double energy = 1.0;
};

Verdict transparency_verdict(const ScatteringAmplitude& amplitude, Vec2 velocity, double energy, double tolerance);

struct PipelineTolerances {
  double residual = 1e-8;   // tol_r
  double amplitude = 1e-9;  // tol_f
};

struct PipelineInputs {
  Grid2D grid{20.0, 128};
  int angles_per_axis = 64;
  SolverOptions solver{};
  PipelineTolerances tolerances{};
};

struct Theorem1Report {
  std::string family;
  Vec2 velocity{};
  double energy = 1.0;
  double residual = 0.0;
  double max_amplitude = 0.0;
  Verdict verdict{};
  PipelineTolerances tolerances{};
  bool trivial = false;                  // V == 0
  bool traveling_wave = false;           // residual <= tol_r
  bool forbidden_outcome = false;        // traveling wave with nonzero f and consistent verdict
  bool nonzero_scattering_data = false;  // sup|f| > tol_f
  std::string summary;
};

/// Residual of the traveling-wave ansatz, full amplitude at E and the
/// transparency verdict, combined into the report. Throws InvalidInput for
/// non-localized potentials (kdv-line).
Theorem1Report theorem1_pipeline(const PotentialSpec& spec, Vec2 velocity, double energy,
                                 const PipelineInputs& inputs = {});

/// Same with a precomputed potential and amplitude (used for velocity sweeps,
/// since the amplitude does not depend on c).
Theorem1Report theorem1_report(const PotentialSpec& spec, const Potential& potential,
                               const ScatteringAmplitude& amplitude, Vec2 velocity, double energy,
                               const PipelineTolerances& tolerances);

nlohmann::json to_json(const Verdict& verdict);
nlohmann::json to_json(const Theorem1Report& report);

}  // namespace nvsoliton
