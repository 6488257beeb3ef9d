#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nvsoliton/grid.hpp"

namespace nvsoliton {

enum class PotentialFamily { Gaussian, MultiGaussian, ExponentialBump, KdvLine, CustomGrid };

std::string to_string(PotentialFamily family);
/// Throws InvalidInput for unknown names.
PotentialFamily parse_family(const std::string& name);

/// One localized term. Gaussian: A exp(-|x-y|^2 / sigma^2).
/// Exponential bump: A exp(-|x-y| / sigma).
struct Bump {
  double amplitude = 1.0;
  double width = 1.0;
  Vec2 center{};
};

struct PotentialSpec {
  PotentialFamily family = PotentialFamily::Gaussian;
  std::vector<Bump> bumps;  // gaussian (one), multi-gaussian, exponential-bump
  double kappa = 1.0;       // kdv-line
  double phi = 0.0;         // kdv-line
  std::optional<Field2D> samples;  // custom-grid (real values)

  static PotentialSpec gaussian(double amplitude, double width, Vec2 center = {});
  static PotentialSpec multi_gaussian(std::vector<Bump> bumps);
  static PotentialSpec exponential_bump(double amplitude, double width, Vec2 center = {});
  static PotentialSpec kdv_line(double kappa, double phi);
  /// Rejects non-finite samples and samples with nonzero imaginary part.
  static PotentialSpec custom_grid(Field2D samples);

  /// Exponentially localized in both directions by construction.
  bool localized() const;
  /// Analytic families only; custom grids carry "unverified decay".
  bool decay_certified() const;
};

struct DecayEstimate {
  double alpha = 0.0;
  /// Log-profile slope steepens across the fit window (e.g. Gaussians):
  /// alpha then underestimates the true decay, which beats any fixed rate.
  bool super_exponential = false;
  int shells_used = 0;
};

/// Real potential sampled on a grid plus decay metadata.
struct Potential {
  Field2D field;
  double sup_norm = 0.0;
  DecayEstimate decay{};
  bool localized = true;
  bool decay_certified = true;

  const Grid2D& grid() const { return field.grid(); }
  bool is_zero() const { return sup_norm == 0.0; }
};

/// Samples the spec at the grid nodes. Throws InvalidInput with a
/// "boundary leak" message when the outer ring exceeds 1e-8 * amplitude
/// (kdv-line is only checked along the x1 edges; custom grids are not checked).
Potential sample_potential(const PotentialSpec& spec, const Grid2D& grid);

/// v_y(x) = v(x - y). Analytic families move their centers; custom grids are
/// spectrally shifted.
PotentialSpec translate_spec(const PotentialSpec& spec, Vec2 shift);

/// The t = 0 KdV soliton -2 kappa^2 / cosh^2(kappa (x - phi)).
double kdv_soliton_profile(double kappa, double phi, double x);

/// Radial-shell log-slope fit over the outer half of the populated radii.
/// Throws NumericalFailure ("degenerate fit") with fewer than 4 shells above 1e-14.
DecayEstimate decay_rate_estimate(const Potential& potential);

/// Discrete L2 norm of (-c . grad V) - nv_rhs(V) at energy E: zero exactly
/// when v(x, t) = V(x - c t) solves the NV equation.
double traveling_wave_residual(const Potential& potential, Vec2 velocity, double energy);

/// The terms of the residual that are linear in V, for the small-amplitude
/// check: || -c . grad V - 4 Re(4 dz^3 V - E dz w_V) ||.
double traveling_wave_residual_linear(const Potential& potential, Vec2 velocity, double energy);

}  // namespace nvsoliton
