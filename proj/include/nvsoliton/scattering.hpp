#pragma once

// Fixed-energy scattering for -Lap psi + v psi = E psi on the plane.
//
// The outgoing solution solves the Lippmann-Schwinger equation
//   psi(x) = e^{i k.x} + int G(x - y) v(y) psi(y) dy,  G = -(i/4) H0^(1)(sqrt(E)|x|),
// discretized by Nystrom quadrature on the grid cells where
// |v| > support_threshold * sup|v|. Off-diagonal weights are h^2 G(|x_i - x_j|);
// the singular diagonal weight comes from one of two rules (see DiagonalRule).
//
// The amplitude is
//   f(k, l) = (2 pi)^-2 int e^{-i l.y} v(y) psi(y, k) dy,
// which makes psi - e^{ikx} ~ -i pi sqrt(2 pi) e^{-i pi/4} f e^{i sqrt(E)|x|} / sqrt(sqrt(E)|x|).

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nvsoliton/grid.hpp"
#include "nvsoliton/potentials.hpp"

namespace nvsoliton {

enum class DiagonalRule {
  /// h^2 [ (log h + C0) / (2 pi) + R(0) ] with the square-lattice constant
  /// C0 = -log(2 pi)/2 - log(Gamma(1/4)^2 / (2 pi sqrt 2)); matches the
  /// point-sampled off-diagonal weights to O(h^4 log h).
  LatticeCorrected,
  /// Exact average of G over one cell; O(h^2) consistent with point sampling.
  CellAverage,
};

enum class SolverBackend {
  /// Matrix-free GMRES with FFT convolution over the support bounding box.
  FftGmres,
  /// Assembled dense matrix, partial-pivot LU (serial reference path).
  DenseLu,
};

struct SolverOptions {
  double tolerance = 1e-10;
  int max_iterations = 400;
  int restart = 80;
  double support_threshold = 1e-12;
  DiagonalRule diagonal = DiagonalRule::LatticeCorrected;
  SolverBackend backend = SolverBackend::FftGmres;
  /// Condition estimates above this raise SingularSystem.
  double conditioning_limit = 1e12;
  /// Condition estimates above this attach a near-resonance warning.
  double conditioning_warning = 1e8;
  /// DenseLu refuses supports larger than this.
  std::size_t dense_limit = 6000;
};

struct IncidentWave {
  Vec2 k{};
  double energy = 1.0;
  double angle = 0.0;

  /// k = sqrt(E) (cos theta, sin theta).
  static IncidentWave from_angle(double energy, double angle);
  /// Throws InvalidInput unless |k.k - E| <= 1e-12 E.
  static IncidentWave from_momentum(Vec2 k, double energy);
};

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  double condition_estimate = 1.0;
  std::vector<std::string> warnings;
};

namespace detail {
struct ScatteringEngine;
}

class ScatteringSolution {
 public:
  ScatteringSolution(std::shared_ptr<const detail::ScatteringEngine> engine, IncidentWave incident,
                     std::vector<cplx> psi_on_support, SolveStats stats);

  const IncidentWave& incident() const { return incident_; }
  const SolveStats& stats() const { return stats_; }
  const Grid2D& grid() const;

  /// psi+ at every grid node (support values from the solve, the rest from
  /// the quadrature formula).
  Field2D psi_plus() const;
  /// psi+ on the active cells, in support order.
  std::span<const cplx> psi_on_support() const& { return psi_; }
  std::span<const cplx> psi_on_support() const&& = delete;
  /// Largest |x| over active cells (0 for an empty support).
  double support_radius() const;

  const detail::ScatteringEngine& engine() const { return *engine_; }

 private:
  std::shared_ptr<const detail::ScatteringEngine> engine_;
  IncidentWave incident_;
  std::vector<cplx> psi_;
  SolveStats stats_;
};

/// Assembled solver for one (potential, E). Immutable after construction;
/// solve() may be called concurrently.
class LippmannSchwinger {
 public:
  /// Throws InvalidInput for E <= 0 or a complex potential.
  LippmannSchwinger(const Potential& potential, double energy, SolverOptions options = {});

  ScatteringSolution solve(const IncidentWave& incident) const;

  std::size_t active_cells() const;
  double energy() const;
  const SolverOptions& options() const;

  /// (I - K) psi on the support via FFT convolution.
  std::vector<cplx> apply(std::span<const cplx> psi) const;
  /// Same operator by direct summation (serial reference).
  std::vector<cplx> apply_reference(std::span<const cplx> psi) const;

  /// Quadrature weight attached to the zero displacement.
  cplx diagonal_weight() const;

 private:
  std::shared_ptr<const detail::ScatteringEngine> engine_;
};

/// Convenience: assemble and solve once.
ScatteringSolution solve_lippmann_schwinger(const Potential& potential, const IncidentWave& incident,
                                            SolverOptions options = {});

/// f(k, l) for outgoing directions l = sqrt(E)(cos a, sin a), a in angles.
std::vector<cplx> far_field_amplitude(const ScatteringSolution& solution, std::span<const double> angles);

/// f sampled on the uniform M x M torus grid theta = 2 pi j / M.
struct ScatteringAmplitude {
  double energy = 1.0;
  int angles_per_axis = 64;
  std::vector<cplx> samples;  // samples[i_k * M + i_l]
  std::vector<SolveStats> stats;

  double angle(int i) const;
  /// Torus coordinate lambda = e^{i theta}.
  cplx torus(int i) const;
  cplx at(int i_k, int i_l) const { return samples[static_cast<std::size_t>(i_k) * angles_per_axis + i_l]; }
  std::span<const cplx> row(int i_k) const;
  /// Largest |second difference| along either angle axis (periodic); a
  /// finite value is the discrete continuity proxy.
  double max_second_difference() const;
};

/// Full amplitude on the M x M grid (M >= 16). Incident directions are solved
/// in parallel; every sample is computed by one thread with a fixed summation
/// order, so results are bitwise reproducible.
ScatteringAmplitude compute_amplitude(const Potential& potential, double energy, int angles_per_axis = 64,
                                      SolverOptions options = {});

/// Same, reusing an assembled solver.
ScatteringAmplitude compute_amplitude(const LippmannSchwinger& solver, int angles_per_axis = 64);

/// sup |f| over the samples.
double amplitude_norm(const ScatteringAmplitude& amplitude);

struct Annulus {
  double inner = 0.0;
  double outer = 0.0;
};

/// Default annulus 0.3 L/2 <= |x| <= 0.45 L/2.
Annulus default_annulus(const Grid2D& grid);

/// Relative sup-mismatch between psi+ - e^{ikx} on the annulus and the
/// far-field asymptotic built from `row` (f(k, .) on a uniform angle grid,
/// trigonometrically interpolated). Throws InvalidInput ("annulus too
/// small") if the annulus meets the support, leaves the box, or holds fewer
/// than 16 nodes.
double far_field_fit(const ScatteringSolution& solution, std::span<const cplx> row, Annulus annulus);
double far_field_fit(const ScatteringSolution& solution, const ScatteringAmplitude& amplitude, int incident_index,
                     Annulus annulus);

/// Trigonometric interpolation of uniform samples on [0, 2 pi).
cplx interpolate_periodic(std::span<const cplx> samples, double angle);

}  // namespace nvsoliton
