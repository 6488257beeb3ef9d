#include "nvsoliton/scattering.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <limits>
#include <optional>
#include <cmath>
#include <mutex>
#include <numbers>

#include "gmres.hpp"
#include "nvsoliton/error.hpp"
#include "nvsoliton/fft.hpp"
#include "nvsoliton/hankel.hpp"
#include "nvsoliton/kernels.hpp"

namespace nvsoliton {
namespace detail {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Lattice constant of the punctured trapezoidal rule for log|x| on Z^2.
double lattice_log_constant() {
  const double g = std::tgamma(0.25);
  return -0.5 * std::log(kTwoPi) - std::log(g * g / (kTwoPi * std::numbers::sqrt2));
}

// Mean of log|x| over [-h/2, h/2]^2 is log h + this.
double cell_log_constant() { return -0.5 * std::log(2.0) + 0.25 * std::numbers::pi - 1.5; }

cplx regular_part(double energy, double r) {
  if (r == 0.0) return greens_regular_part_at_origin(energy);
  return greens_kernel(energy, r) - std::log(r) / kTwoPi;
}

// Cell average of the regular part by 8-point Gauss-Legendre per quadrant.
cplx cell_average_regular(double energy, double h) {
  static constexpr std::array<double, 8> nodes = {0.0198550717512319, 0.1016667612931866, 0.2372337950418355,
                                                   0.4082826787521751, 0.5917173212478249, 0.7627662049581645,
                                                   0.8983332387068134, 0.9801449282487681};
  static constexpr std::array<double, 8> weights = {0.0506142681451881, 0.1111905172266872, 0.1568533229389436,
                                                     0.1813418916891810, 0.1813418916891810, 0.1568533229389436,
                                                     0.1111905172266872, 0.0506142681451881};
  cplx sum{};
  const double half = 0.5 * h;
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = 0; b < nodes.size(); ++b)
      sum += weights[a] * weights[b] * regular_part(energy, half * std::hypot(nodes[a], nodes[b]));
  return sum;  // quadrant symmetry: the four quadrants have equal averages
}

}  // namespace

cplx diagonal_weight(double energy, double h, DiagonalRule rule) {
  const double log_part = std::log(h) + (rule == DiagonalRule::LatticeCorrected ? lattice_log_constant()
                                                                                 : cell_log_constant());
  const cplx regular = rule == DiagonalRule::LatticeCorrected ? greens_regular_part_at_origin(energy)
                                                              : cell_average_regular(energy, h);
  return h * h * (log_part / kTwoPi + regular);
}

struct ScatteringEngine {
  Grid2D grid;
  double energy;
  SolverOptions options;
  cplx diagonal;

  // Active cells, in grid-index order.
  std::vector<int> i1, i2;
  std::vector<Vec2> points;
  std::vector<double> v;
  double support_radius = 0.0;

  // Bounding box of the support and the padded convolution for it.
  int lo1 = 0, lo2 = 0, nb1 = 0, nb2 = 0;
  kernels::TableShape box_shape{1, 1, 1, 1};
  std::vector<cplx> box_kernel_hat;

  // Whole-grid convolution, built on first use by psi_plus().
  mutable std::once_flag full_once;
  mutable kernels::TableShape full_shape{1, 1, 1, 1};
  mutable std::vector<cplx> full_kernel_hat;

  // Dense LU of the assembled matrix for the reference backend.
  std::optional<Eigen::PartialPivLU<Eigen::MatrixXcd>> dense_lu;
  double dense_condition = 1.0;

  ScatteringEngine(const Potential& potential, double energy_, SolverOptions options_)
      : grid(potential.grid()), energy(energy_), options(options_),
        diagonal(diagonal_weight(energy_, potential.grid().spacing(), options_.diagonal)) {
    const Field2D& field = potential.field;
    if (max_imag(field) > 1e-12) throw InvalidInput("scattering needs a real potential");
    const double sup = sup_norm(field);
    const int n = grid.points();
    if (sup > 0.0) {
      const double cut = options.support_threshold * sup;
      for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a)
          if (std::abs(field(a, b).real()) > cut) {
            i1.push_back(a);
            i2.push_back(b);
            points.push_back(grid.position(a, b));
            v.push_back(field(a, b).real());
            support_radius = std::max(support_radius, std::sqrt(dot(points.back(), points.back())));
          }
    }
    if (v.empty()) return;
    lo1 = *std::min_element(i1.begin(), i1.end());
    lo2 = *std::min_element(i2.begin(), i2.end());
    nb1 = *std::max_element(i1.begin(), i1.end()) - lo1 + 1;
    nb2 = *std::max_element(i2.begin(), i2.end()) - lo2 + 1;

    if (options.backend == SolverBackend::DenseLu) {
      assemble_dense();
    } else {
      box_shape = {nb1, nb2, fft::good_size(2 * nb1 - 1), fft::good_size(2 * nb2 - 1)};
      box_kernel_hat = transformed_table(box_shape);
    }
  }

  std::vector<cplx> transformed_table(const kernels::TableShape& shape) const {
    auto table = kernels::omp::green_table(energy, grid.spacing(), shape, diagonal);
    std::vector<cplx> hat(table.size());
    fft::forward_2d(table, hat, shape.p1, shape.p2);
    return hat;
  }

  void assemble_dense() {
    const std::size_t s = v.size();
    if (s > options.dense_limit)
      throw InvalidInput("dense backend limited to " + std::to_string(options.dense_limit) + " active cells, got " +
                         std::to_string(s));
    const double h = grid.spacing();
    Eigen::MatrixXcd a(s, s);
    for (std::size_t col = 0; col < s; ++col) {
      for (std::size_t row = 0; row < s; ++row) {
        const int d1 = i1[row] - i1[col];
        const int d2 = i2[row] - i2[col];
        const cplx w = (d1 == 0 && d2 == 0) ? diagonal
                                            : h * h * greens_kernel(energy, h * std::hypot(double(d1), double(d2)));
        a(row, col) = (row == col ? 1.0 : 0.0) - w * v[col];
      }
    }
    dense_lu.emplace(a);
    const double rcond = dense_lu->rcond();
    dense_condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  }

  // K psi = sum_j W(x_i - x_j) v_j psi_j on the support, by FFT.
  std::vector<cplx> convolve_box(std::span<const cplx> psi) const {
    const auto& s = box_shape;
    std::vector<cplx> buffer(static_cast<std::size_t>(s.p1) * s.p2, cplx{});
    for (std::size_t j = 0; j < v.size(); ++j)
      buffer[static_cast<std::size_t>(i2[j] - lo2) * s.p1 + (i1[j] - lo1)] = v[j] * psi[j];
    std::vector<cplx> hat(buffer.size());
    fft::forward_2d(buffer, hat, s.p1, s.p2);
    for (std::size_t q = 0; q < hat.size(); ++q) hat[q] *= box_kernel_hat[q];
    fft::inverse_2d(hat, buffer, s.p1, s.p2);
    std::vector<cplx> out(v.size());
    for (std::size_t j = 0; j < v.size(); ++j)
      out[j] = buffer[static_cast<std::size_t>(i2[j] - lo2) * s.p1 + (i1[j] - lo1)];
    return out;
  }

  std::vector<cplx> apply(std::span<const cplx> psi) const {
    if (options.backend == SolverBackend::DenseLu) return apply_reference(psi);
    auto k = convolve_box(psi);
    for (std::size_t j = 0; j < k.size(); ++j) k[j] = psi[j] - k[j];
    return k;
  }

  std::vector<cplx> apply_reference(std::span<const cplx> psi) const {
    std::vector<cplx> sources(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) sources[j] = v[j] * psi[j];
    std::vector<cplx> out(v.size());
    kernels::serial::direct_convolution(i1, i2, energy, grid.spacing(), diagonal, sources, out);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = psi[j] - out[j];
    return out;
  }

  std::vector<cplx> incident_on_support(Vec2 k) const {
    std::vector<cplx> out(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) out[j] = std::polar(1.0, dot(k, points[j]));
    return out;
  }

  void check_conditioning(SolveStats& stats) const {
    if (!(stats.condition_estimate <= options.conditioning_limit))
      throw SingularSystem("Lippmann-Schwinger system conditioning " + std::to_string(stats.condition_estimate) +
                           " exceeds " + std::to_string(options.conditioning_limit));
    if (stats.condition_estimate > options.conditioning_warning)
      stats.warnings.push_back("near-resonance: condition estimate " + std::to_string(stats.condition_estimate));
  }

  std::pair<std::vector<cplx>, SolveStats> solve(Vec2 k) const {
    SolveStats stats;
    const auto rhs = incident_on_support(k);
    if (v.empty()) return {rhs, stats};
    if (options.backend == SolverBackend::DenseLu) {
      stats.condition_estimate = dense_condition;
      check_conditioning(stats);
      Eigen::VectorXcd b = Eigen::Map<const Eigen::VectorXcd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
      Eigen::VectorXcd x = dense_lu->solve(b);
      std::vector<cplx> psi(x.data(), x.data() + x.size());
      const auto ax = apply_reference(psi);
      double num = 0.0;
      for (std::size_t j = 0; j < ax.size(); ++j) num += std::norm(ax[j] - rhs[j]);
      stats.relative_residual = std::sqrt(num) / detail::norm2(rhs);
      stats.iterations = 1;
      return {std::move(psi), stats};
    }
    auto result = gmres([this](std::span<const cplx> x) { return apply(x); }, rhs, options.tolerance,
                        options.max_iterations, options.restart);
    stats.iterations = result.iterations;
    stats.relative_residual = result.relative_residual;
    stats.condition_estimate = result.condition_estimate;
    check_conditioning(stats);
    if (!result.converged)
      throw SingularSystem("GMRES did not reach tolerance " + std::to_string(options.tolerance) + " in " +
                           std::to_string(result.iterations) + " iterations (residual " +
                           std::to_string(result.relative_residual) + ")");
    return {std::move(result.x), stats};
  }

  Field2D full_field(Vec2 k, std::span<const cplx> psi) const {
    const int n = grid.points();
    Field2D out = Field2D::sample(grid, [&](Vec2 x) { return std::polar(1.0, dot(k, x)); });
    if (v.empty()) return out;
    std::call_once(full_once, [&] {
      full_shape = {n, n, fft::good_size(2 * n - 1), fft::good_size(2 * n - 1)};
      full_kernel_hat = transformed_table(full_shape);
    });
    const auto& s = full_shape;
    std::vector<cplx> buffer(static_cast<std::size_t>(s.p1) * s.p2, cplx{});
    for (std::size_t j = 0; j < v.size(); ++j)
      buffer[static_cast<std::size_t>(i2[j]) * s.p1 + i1[j]] = v[j] * psi[j];
    std::vector<cplx> hat(buffer.size());
    fft::forward_2d(buffer, hat, s.p1, s.p2);
    for (std::size_t q = 0; q < hat.size(); ++q) hat[q] *= full_kernel_hat[q];
    fft::inverse_2d(hat, buffer, s.p1, s.p2);
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) out(a, b) += buffer[static_cast<std::size_t>(b) * s.p1 + a];
    return out;
  }

  // (2 pi)^-2 h^2 sum_j e^{-i l.y_j} v_j psi_j for each direction.
  std::vector<cplx> amplitudes(std::span<const cplx> psi, std::span<const Vec2> directions, bool parallel) const {
    std::vector<cplx> out(directions.size(), cplx{});
    if (v.empty()) return out;
    const double h = grid.spacing();
    const double scale = h * h / (kTwoPi * kTwoPi);
    std::vector<cplx> sources(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) sources[j] = scale * v[j] * psi[j];
    if (parallel)
      kernels::omp::plane_wave_projection(directions, points, sources, out);
    else
      kernels::serial::plane_wave_projection(directions, points, sources, out);
    return out;
  }
};

}  // namespace detail

// ---------------------------------------------------------------------------

IncidentWave IncidentWave::from_angle(double energy, double angle) {
  if (!(energy > 0.0)) throw InvalidInput("scattering requires E > 0");
  const double r = std::sqrt(energy);
  return {{r * std::cos(angle), r * std::sin(angle)}, energy, angle};
}

IncidentWave IncidentWave::from_momentum(Vec2 k, double energy) {
  if (!(energy > 0.0)) throw InvalidInput("scattering requires E > 0");
  if (std::abs(dot(k, k) - energy) > 1e-12 * energy) throw InvalidInput("incident momentum is off the energy shell");
  double angle = std::atan2(k.x2, k.x1);
  if (angle < 0.0) angle += 2.0 * std::numbers::pi;
  return {k, energy, angle};
}

ScatteringSolution::ScatteringSolution(std::shared_ptr<const detail::ScatteringEngine> engine,
                                       IncidentWave incident, std::vector<cplx> psi_on_support, SolveStats stats)
    : engine_(std::move(engine)), incident_(incident), psi_(std::move(psi_on_support)), stats_(std::move(stats)) {}

const Grid2D& ScatteringSolution::grid() const { return engine_->grid; }

Field2D ScatteringSolution::psi_plus() const { return engine_->full_field(incident_.k, psi_); }

double ScatteringSolution::support_radius() const { return engine_->support_radius; }

LippmannSchwinger::LippmannSchwinger(const Potential& potential, double energy, SolverOptions options) {
  if (!(energy > 0.0)) throw InvalidInput("scattering requires E > 0");
  engine_ = std::make_shared<const detail::ScatteringEngine>(potential, energy, options);
}

ScatteringSolution LippmannSchwinger::solve(const IncidentWave& incident) const {
  if (std::abs(incident.energy - engine_->energy) > 1e-12 * engine_->energy)
    throw InvalidInput("incident wave energy does not match the solver energy");
  auto [psi, stats] = engine_->solve(incident.k);
  return ScatteringSolution(engine_, incident, std::move(psi), std::move(stats));
}

std::size_t LippmannSchwinger::active_cells() const { return engine_->v.size(); }
double LippmannSchwinger::energy() const { return engine_->energy; }
const SolverOptions& LippmannSchwinger::options() const { return engine_->options; }
cplx LippmannSchwinger::diagonal_weight() const { return engine_->diagonal; }

std::vector<cplx> LippmannSchwinger::apply(std::span<const cplx> psi) const {
  if (psi.size() != engine_->v.size()) throw InvalidInput("apply: vector size does not match the support");
  return engine_->apply(psi);
}

std::vector<cplx> LippmannSchwinger::apply_reference(std::span<const cplx> psi) const {
  if (psi.size() != engine_->v.size()) throw InvalidInput("apply: vector size does not match the support");
  return engine_->apply_reference(psi);
}

ScatteringSolution solve_lippmann_schwinger(const Potential& potential, const IncidentWave& incident,
                                            SolverOptions options) {
  return LippmannSchwinger(potential, incident.energy, options).solve(incident);
}

std::vector<cplx> far_field_amplitude(const ScatteringSolution& solution, std::span<const double> angles) {
  const double r = std::sqrt(solution.incident().energy);
  std::vector<Vec2> directions;
  directions.reserve(angles.size());
  for (double a : angles) directions.push_back({r * std::cos(a), r * std::sin(a)});
  return solution.engine().amplitudes(solution.psi_on_support(), directions, true);
}

double ScatteringAmplitude::angle(int i) const { return 2.0 * std::numbers::pi * i / angles_per_axis; }

cplx ScatteringAmplitude::torus(int i) const { return std::polar(1.0, angle(i)); }

std::span<const cplx> ScatteringAmplitude::row(int i_k) const {
  return std::span<const cplx>(samples).subspan(static_cast<std::size_t>(i_k) * angles_per_axis, angles_per_axis);
}

double ScatteringAmplitude::max_second_difference() const {
  const int m = angles_per_axis;
  double worst = 0.0;
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      const cplx c = at(a, b);
      const cplx along_l = at(a, (b + 1) % m) - 2.0 * c + at(a, (b + m - 1) % m);
      const cplx along_k = at((a + 1) % m, b) - 2.0 * c + at((a + m - 1) % m, b);
      const double d = std::max(std::abs(along_l), std::abs(along_k));
      if (!std::isfinite(d)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, d);
    }
  }
  return worst;
}

ScatteringAmplitude compute_amplitude(const LippmannSchwinger& solver, int angles_per_axis) {
  if (angles_per_axis < 16) throw InvalidInput("amplitude sampling needs M >= 16");
  ScatteringAmplitude amp;
  amp.energy = solver.energy();
  amp.angles_per_axis = angles_per_axis;
  const int m = angles_per_axis;
  amp.samples.assign(static_cast<std::size_t>(m) * m, cplx{});
  amp.stats.resize(m);
  std::vector<double> angles(m);
  for (int i = 0; i < m; ++i) angles[i] = amp.angle(i);
  const double r = std::sqrt(amp.energy);
  std::vector<Vec2> directions;
  for (double a : angles) directions.push_back({r * std::cos(a), r * std::sin(a)});

  std::exception_ptr failure;
  std::mutex failure_mutex;
#pragma omp parallel for schedule(dynamic, 1)
  for (int i_k = 0; i_k < m; ++i_k) {
    try {
      const auto solution = solver.solve(IncidentWave::from_angle(amp.energy, angles[i_k]));
      const auto row = solution.engine().amplitudes(solution.psi_on_support(), directions, false);
      std::copy(row.begin(), row.end(), amp.samples.begin() + static_cast<std::ptrdiff_t>(i_k) * m);
      amp.stats[i_k] = solution.stats();
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return amp;
}

ScatteringAmplitude compute_amplitude(const Potential& potential, double energy, int angles_per_axis,
                                      SolverOptions options) {
  return compute_amplitude(LippmannSchwinger(potential, energy, options), angles_per_axis);
}

double amplitude_norm(const ScatteringAmplitude& amplitude) {
  double best = 0.0;
  for (const auto& f : amplitude.samples) best = std::max(best, std::abs(f));
  return best;
}

Annulus default_annulus(const Grid2D& grid) {
  const double half = 0.5 * grid.side_length();
  return {0.3 * half, 0.45 * half};
}

cplx interpolate_periodic(std::span<const cplx> samples, double angle) {
  const int m = static_cast<int>(samples.size());
  if (m == 0) return {};
  std::vector<cplx> coeff(m);
  fft::forward_1d(samples, coeff);
  cplx sum{};
  for (int q = 0; q < m; ++q) {
    const int mode = q < m / 2 ? q : q - m;
    if (m % 2 == 0 && q == m / 2) {
      sum += coeff[q] * std::cos(0.5 * m * angle);  // split Nyquist
    } else {
      sum += coeff[q] * std::polar(1.0, mode * angle);
    }
  }
  return sum / static_cast<double>(m);
}

double far_field_fit(const ScatteringSolution& solution, std::span<const cplx> row, Annulus annulus) {
  const Grid2D& grid = solution.grid();
  const double h = grid.spacing();
  if (!(annulus.inner > solution.support_radius() + h) || !(annulus.outer > annulus.inner) ||
      annulus.outer > 0.5 * grid.side_length() - 2.0 * h)
    throw InvalidInput("annulus too small: it must lie outside the potential support and inside the box");
  const Field2D psi = solution.psi_plus();
  const double sqrt_e = std::sqrt(solution.incident().energy);
  const Vec2 k = solution.incident().k;
  const cplx constant = cplx(0.0, -std::numbers::pi * std::sqrt(2.0 * std::numbers::pi)) *
                        std::polar(1.0, -0.25 * std::numbers::pi);
  double worst = 0.0;
  double scale = 0.0;
  int count = 0;
  const int n = grid.points();
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      const Vec2 x = grid.position(a, b);
      const double r = std::sqrt(dot(x, x));
      if (r < annulus.inner || r > annulus.outer) continue;
      ++count;
      const cplx scattered = psi(a, b) - std::polar(1.0, dot(k, x));
      double direction = std::atan2(x.x2, x.x1);
      if (direction < 0.0) direction += 2.0 * std::numbers::pi;
      const cplx f = interpolate_periodic(row, direction);
      const cplx predicted = constant * f * std::polar(1.0, sqrt_e * r) / std::sqrt(sqrt_e * r);
      worst = std::max(worst, std::abs(scattered - predicted));
      scale = std::max(scale, std::abs(predicted));
    }
  }
  if (count < 16) throw InvalidInput("annulus too small: fewer than 16 grid nodes inside");
  if (scale == 0.0) return worst == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return worst / scale;
}

double far_field_fit(const ScatteringSolution& solution, const ScatteringAmplitude& amplitude, int incident_index,
                     Annulus annulus) {
  return far_field_fit(solution, amplitude.row(incident_index), annulus);
}

}  // namespace nvsoliton
