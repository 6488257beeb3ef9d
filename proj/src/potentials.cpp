#include "nvsoliton/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "nvsoliton/error.hpp"
#include "nvsoliton/nv_evolution.hpp"

namespace nvsoliton {

std::string to_string(PotentialFamily family) {
  switch (family) {
    case PotentialFamily::Gaussian: return "gaussian";
    case PotentialFamily::MultiGaussian: return "multi-gaussian";
    case PotentialFamily::ExponentialBump: return "exponential-bump";
    case PotentialFamily::KdvLine: return "kdv-line";
    case PotentialFamily::CustomGrid: return "custom-grid";
  }
  return "unknown";
}

PotentialFamily parse_family(const std::string& name) {
  static const std::map<std::string, PotentialFamily> names = {
      {"gaussian", PotentialFamily::Gaussian},
      {"multi-gaussian", PotentialFamily::MultiGaussian},
      {"exponential-bump", PotentialFamily::ExponentialBump},
      {"kdv-line", PotentialFamily::KdvLine},
      {"custom-grid", PotentialFamily::CustomGrid},
  };
  if (auto it = names.find(name); it != names.end()) return it->second;
  throw InvalidInput("unknown potential family '" + name + "'");
}

namespace {

void check_bump(const Bump& bump) {
  if (!std::isfinite(bump.amplitude) || !(bump.width > 0.0) || !std::isfinite(bump.width) ||
      !std::isfinite(bump.center.x1) || !std::isfinite(bump.center.x2))
    throw InvalidInput("potential bump needs finite amplitude/center and positive width");
}

double bump_scale(const PotentialSpec& spec) {
  double scale = 0.0;
  for (const auto& b : spec.bumps) scale += std::abs(b.amplitude);
  return scale;
}

}  // namespace

PotentialSpec PotentialSpec::gaussian(double amplitude, double width, Vec2 center) {
  PotentialSpec spec;
  spec.family = PotentialFamily::Gaussian;
  spec.bumps = {Bump{amplitude, width, center}};
  check_bump(spec.bumps.front());
  return spec;
}

PotentialSpec PotentialSpec::multi_gaussian(std::vector<Bump> bumps) {
  if (bumps.empty()) throw InvalidInput("multi-gaussian needs at least one term");
  for (const auto& b : bumps) check_bump(b);
  PotentialSpec spec;
  spec.family = PotentialFamily::MultiGaussian;
  spec.bumps = std::move(bumps);
  return spec;
}

PotentialSpec PotentialSpec::exponential_bump(double amplitude, double width, Vec2 center) {
  PotentialSpec spec;
  spec.family = PotentialFamily::ExponentialBump;
  spec.bumps = {Bump{amplitude, width, center}};
  check_bump(spec.bumps.front());
  return spec;
}

PotentialSpec PotentialSpec::kdv_line(double kappa, double phi) {
  if (!(kappa > 0.0) || !std::isfinite(kappa) || !std::isfinite(phi))
    throw InvalidInput("kdv-line needs kappa > 0 and finite phi");
  PotentialSpec spec;
  spec.family = PotentialFamily::KdvLine;
  spec.kappa = kappa;
  spec.phi = phi;
  return spec;
}

PotentialSpec PotentialSpec::custom_grid(Field2D samples) {
  for (const auto& v : samples.values()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw InvalidInput("custom-grid potential contains a non-finite sample");
    if (std::abs(v.imag()) > 1e-12) throw InvalidInput("custom-grid potential must be real");
  }
  PotentialSpec spec;
  spec.family = PotentialFamily::CustomGrid;
  spec.samples = real_part(samples);
  return spec;
}

bool PotentialSpec::localized() const { return family != PotentialFamily::KdvLine; }

bool PotentialSpec::decay_certified() const { return family != PotentialFamily::CustomGrid; }

double kdv_soliton_profile(double kappa, double phi, double x) {
  if (!(kappa > 0.0)) throw InvalidInput("kdv soliton needs kappa > 0");
  const double c = std::cosh(kappa * (x - phi));
  return -2.0 * kappa * kappa / (c * c);
}

namespace {

double evaluate_analytic(const PotentialSpec& spec, Vec2 x) {
  switch (spec.family) {
    case PotentialFamily::Gaussian:
    case PotentialFamily::MultiGaussian: {
      double sum = 0.0;
      for (const auto& b : spec.bumps) {
        const Vec2 d = x - b.center;
        sum += b.amplitude * std::exp(-dot(d, d) / (b.width * b.width));
      }
      return sum;
    }
    case PotentialFamily::ExponentialBump: {
      double sum = 0.0;
      for (const auto& b : spec.bumps) {
        const Vec2 d = x - b.center;
        sum += b.amplitude * std::exp(-std::sqrt(dot(d, d)) / b.width);
      }
      return sum;
    }
    case PotentialFamily::KdvLine:
      return kdv_soliton_profile(spec.kappa, spec.phi, x.x1);
    case PotentialFamily::CustomGrid:
      break;
  }
  return 0.0;
}

void check_boundary_leak(const PotentialSpec& spec, const Field2D& field) {
  const Grid2D& grid = field.grid();
  const int n = grid.points();
  double ring = 0.0;
  if (spec.family == PotentialFamily::KdvLine) {
    for (int i2 = 0; i2 < n; ++i2) ring = std::max({ring, std::abs(field(0, i2)), std::abs(field(n - 1, i2))});
  } else {
    for (int i = 0; i < n; ++i) {
      ring = std::max({ring, std::abs(field(i, 0)), std::abs(field(i, n - 1)), std::abs(field(0, i)),
                       std::abs(field(n - 1, i))});
    }
  }
  const double scale = spec.family == PotentialFamily::KdvLine ? 2.0 * spec.kappa * spec.kappa : bump_scale(spec);
  if (ring > 1e-8 * scale) {
    throw InvalidInput("boundary leak: potential reaches " + std::to_string(ring) +
                       " on the outer grid ring; enlarge the box");
  }
}

}  // namespace

Potential sample_potential(const PotentialSpec& spec, const Grid2D& grid) {
  Potential out{Field2D(grid)};
  if (spec.family == PotentialFamily::CustomGrid) {
    if (!spec.samples) throw InvalidInput("custom-grid spec carries no samples");
    const Field2D& src = *spec.samples;
    if (std::abs(src.grid().side_length() - grid.side_length()) > 1e-12 * grid.side_length())
      throw InvalidInput("custom-grid side length does not match the target grid");
    out.field = real_part(resample(src, grid.points()));
  } else {
    if (spec.bumps.empty() && spec.family != PotentialFamily::KdvLine)
      throw InvalidInput("potential spec has no terms");
    out.field = Field2D::sample(grid, [&](Vec2 x) { return cplx(evaluate_analytic(spec, x), 0.0); });
    check_boundary_leak(spec, out.field);
  }
  out.sup_norm = sup_norm(out.field);
  out.localized = spec.localized();
  out.decay_certified = spec.decay_certified();
  if (!out.is_zero() && out.localized) {
    try {
      out.decay = decay_rate_estimate(out);
    } catch (const NumericalFailure&) {
      // Too compact to fit (e.g. a single spike); leave alpha = 0.
    }
  }
  return out;
}

PotentialSpec translate_spec(const PotentialSpec& spec, Vec2 shift) {
  PotentialSpec out = spec;
  switch (spec.family) {
    case PotentialFamily::Gaussian:
    case PotentialFamily::MultiGaussian:
    case PotentialFamily::ExponentialBump:
      for (auto& b : out.bumps) b.center = b.center + shift;
      break;
    case PotentialFamily::KdvLine:
      out.phi += shift.x1;
      break;
    case PotentialFamily::CustomGrid:
      out.samples = real_part(spectral_shift(*spec.samples, shift));
      break;
  }
  return out;
}

DecayEstimate decay_rate_estimate(const Potential& potential) {
  const Field2D& field = potential.field;
  const Grid2D& grid = field.grid();
  const int n = grid.points();
  const double h = grid.spacing();
  const double r_max = 0.5 * grid.side_length();
  const int shells = static_cast<int>(std::floor(r_max / h));

  // Per shell: largest |v| and the radius where it is attained.
  std::vector<double> peak(shells, 0.0);
  std::vector<double> radius(shells, 0.0);
  for (int i2 = 0; i2 < n; ++i2) {
    for (int i1 = 0; i1 < n; ++i1) {
      const Vec2 x = grid.position(i1, i2);
      const double r = std::sqrt(dot(x, x));
      const int shell = static_cast<int>(r / h);
      if (shell >= shells) continue;
      const double value = std::abs(field(i1, i2));
      if (value > peak[shell]) {
        peak[shell] = value;
        radius[shell] = r;
      }
    }
  }
  int last = -1;
  for (int s = 0; s < shells; ++s)
    if (peak[s] > 1e-14) last = s;
  std::vector<int> used;
  if (last >= 0) {
    const double r_cut = 0.5 * (last + 1) * h;
    for (int s = 0; s <= last; ++s)
      if (peak[s] > 1e-14 && (s + 0.5) * h >= r_cut) used.push_back(s);
  }
  if (used.size() < 4) throw NumericalFailure("degenerate fit: fewer than 4 radial shells above 1e-14");

  auto fit_slope = [&](std::span<const int> ids) {
    double sr = 0, sy = 0, srr = 0, sry = 0;
    for (int s : ids) {
      const double y = std::log(peak[s]);
      sr += radius[s];
      sy += y;
      srr += radius[s] * radius[s];
      sry += radius[s] * y;
    }
    const double m = static_cast<double>(ids.size());
    const double denom = m * srr - sr * sr;
    return denom > 0.0 ? (m * sry - sr * sy) / denom : 0.0;
  };

  DecayEstimate estimate;
  estimate.shells_used = static_cast<int>(used.size());
  estimate.alpha = std::max(0.0, -fit_slope(used));
  // Compare the slope over the inner and outer quarter of the window.
  const std::size_t quarter = used.size() / 4;
  if (quarter >= 2) {
    std::span<const int> all(used);
    const double inner = -fit_slope(all.first(quarter));
    const double outer = -fit_slope(all.last(quarter));
    estimate.super_exponential = inner > 0.0 && outer > 1.25 * inner;
  }
  return estimate;
}

namespace {

Field2D transport_term(const Field2D& v, Vec2 velocity) {
  return -1.0 * (velocity.x1 * spectral_deriv(v, {1, 0}) + velocity.x2 * spectral_deriv(v, {0, 1}));
}

void require_positive_energy(double energy) {
  if (!(energy > 0.0)) throw InvalidInput("energy must be positive");
}

}  // namespace

double traveling_wave_residual(const Potential& potential, Vec2 velocity, double energy) {
  require_positive_energy(energy);
  const NVState state = make_state(potential.field, energy);
  return l2_norm(transport_term(potential.field, velocity) - nv_rhs(state));
}

double traveling_wave_residual_linear(const Potential& potential, Vec2 velocity, double energy) {
  require_positive_energy(energy);
  const Field2D& v = potential.field;
  const Field2D w = solve_w(v);
  const Field2D linear = real_part(4.0 * (4.0 * dz(dz(dz(v))) - energy * dz(w)));
  return l2_norm(transport_term(v, velocity) - linear);
}

}  // namespace nvsoliton
