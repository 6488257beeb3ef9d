#include "nvsoliton/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nvsoliton/error.hpp"
#include "nvsoliton/fft.hpp"

namespace nvsoliton {

Grid2D::Grid2D(double side_length, int points_per_axis)
    : side_length_(side_length), points_(points_per_axis), spacing_(0.0) {
  if (!(side_length > 0.0) || !std::isfinite(side_length)) {
    std::ostringstream msg;
    msg << "grid side length must be positive and finite, got " << side_length;
    throw InvalidInput(msg.str());
  }
  if (points_per_axis < 8 || points_per_axis % 2 != 0) {
    std::ostringstream msg;
    msg << "grid points per axis must be even and >= 8, got " << points_per_axis;
    throw InvalidInput(msg.str());
  }
  spacing_ = side_length / points_per_axis;
}

double Grid2D::wavenumber(int m) const {
  return 2.0 * std::numbers::pi * signed_mode(m) / side_length_;
}

std::vector<double> Grid2D::frequencies() const {
  std::vector<double> out;
  out.reserve(points_);
  for (int m = -points_ / 2; m < points_ / 2; ++m)
    out.push_back(2.0 * std::numbers::pi * m / side_length_);
  return out;
}

Field2D::Field2D(Grid2D grid) : grid_(grid), values_(grid.size(), cplx{}) {}

Field2D::Field2D(Grid2D grid, std::vector<cplx> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw InvalidInput("field sample count does not match grid");
}

namespace {

void require_same_grid(const Field2D& a, const Field2D& b) {
  if (!(a.grid() == b.grid())) throw InvalidInput("fields live on different grids");
}

}  // namespace

Field2D& Field2D::operator+=(const Field2D& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field2D& Field2D::operator-=(const Field2D& other) {
  require_same_grid(*this, other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field2D& Field2D::operator*=(cplx factor) {
  for (auto& v : values_) v *= factor;
  return *this;
}

Field2D operator*(const Field2D& a, const Field2D& b) {
  require_same_grid(a, b);
  Field2D out(a.grid());
  auto dst = out.values();
  auto lhs = a.values();
  auto rhs = b.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = lhs[i] * rhs[i];
  return out;
}

double sup_norm(const Field2D& field) {
  double best = 0.0;
  for (const auto& v : field.values()) best = std::max(best, std::abs(v));
  return best;
}

double max_imag(const Field2D& field) {
  double best = 0.0;
  for (const auto& v : field.values()) best = std::max(best, std::abs(v.imag()));
  return best;
}

double l2_norm(const Field2D& field) {
  double sum = 0.0;
  for (const auto& v : field.values()) sum += std::norm(v);
  const double h = field.grid().spacing();
  return std::sqrt(sum) * h;
}

cplx mean(const Field2D& field) {
  cplx sum{};
  for (const auto& v : field.values()) sum += v;
  return sum / static_cast<double>(field.values().size());
}

Field2D real_part(const Field2D& field) {
  Field2D out(field.grid());
  auto dst = out.values();
  auto src = field.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i].real();
  return out;
}

Field2D conj(const Field2D& field) {
  Field2D out(field.grid());
  auto dst = out.values();
  auto src = field.values();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = std::conj(src[i]);
  return out;
}

std::vector<cplx> to_spectral(const Field2D& field) {
  const int n = field.grid().points();
  std::vector<cplx> out(field.grid().size());
  fft::forward_2d(field.values(), out, n, n);
  return out;
}

Field2D from_spectral(const Grid2D& grid, std::span<const cplx> spectrum) {
  Field2D out(grid);
  fft::inverse_2d(spectrum, out.values(), grid.points(), grid.points());
  return out;
}

namespace {

cplx axis_symbol(const Grid2D& grid, int m, int order) {
  if (order == 0) return 1.0;
  const double xi = (order % 2 == 1) ? grid.odd_wavenumber(m) : grid.wavenumber(m);
  return std::pow(cplx(0.0, xi), order);
}

template <typename Symbol>
Field2D apply_multiplier(const Field2D& field, Symbol&& symbol) {
  const Grid2D& grid = field.grid();
  const int n = grid.points();
  auto spectrum = to_spectral(field);
  for (int m2 = 0; m2 < n; ++m2)
    for (int m1 = 0; m1 < n; ++m1) spectrum[grid.index(m1, m2)] *= symbol(m1, m2);
  return from_spectral(grid, spectrum);
}

}  // namespace

Field2D spectral_deriv(const Field2D& field, std::array<int, 2> order) {
  const auto [j1, j2] = order;
  if (j1 < 0 || j2 < 0 || j1 + j2 > 3) throw InvalidInput("spectral_deriv supports orders with j1 + j2 <= 3");
  if (j1 == 0 && j2 == 0) return field;
  const Grid2D& grid = field.grid();
  return apply_multiplier(field, [&](int m1, int m2) {
    return axis_symbol(grid, m1, j1) * axis_symbol(grid, m2, j2);
  });
}

Field2D dz(const Field2D& field) {
  return 0.5 * (spectral_deriv(field, {1, 0}) - cplx(0.0, 1.0) * spectral_deriv(field, {0, 1}));
}

Field2D dzbar(const Field2D& field) {
  return 0.5 * (spectral_deriv(field, {1, 0}) + cplx(0.0, 1.0) * spectral_deriv(field, {0, 1}));
}

Field2D laplacian(const Field2D& field) {
  return spectral_deriv(field, {2, 0}) + spectral_deriv(field, {0, 2});
}

Field2D spectral_shift(const Field2D& field, Vec2 shift) {
  const Grid2D& grid = field.grid();
  const int nyquist = grid.points() / 2;
  auto factor = [&](int m, double y) -> cplx {
    // cos() at the Nyquist slot keeps real fields real.
    if (m == nyquist) return std::cos(std::abs(grid.wavenumber(m)) * y);
    return std::polar(1.0, -grid.wavenumber(m) * y);
  };
  return apply_multiplier(field, [&](int m1, int m2) { return factor(m1, shift.x1) * factor(m2, shift.x2); });
}

namespace {

// Maps a spectrum of length n_from onto length n_to along one axis, splitting
// or folding the Nyquist coefficient so real data stays real.
struct AxisMap {
  int dest = -1;
  int dest_alt = -1;
  double weight = 1.0;
};

AxisMap map_mode(int m, int n_from, int n_to) {
  const int signed_m = m < n_from / 2 ? m : m - n_from;
  AxisMap map;
  if (n_to >= n_from) {
    if (m == n_from / 2 && n_to > n_from) {
      map.dest = n_to - n_from / 2;
      map.dest_alt = n_from / 2;
      map.weight = 0.5;
      return map;
    }
    map.dest = signed_m >= 0 ? signed_m : signed_m + n_to;
    return map;
  }
  if (signed_m < -n_to / 2 || signed_m > n_to / 2) return map;
  if (signed_m == n_to / 2 || signed_m == -n_to / 2) {
    // Both +/- n_to/2 alias onto the new Nyquist slot.
    map.dest = n_to / 2;
    return map;
  }
  map.dest = signed_m >= 0 ? signed_m : signed_m + n_to;
  return map;
}

}  // namespace

Field2D resample(const Field2D& field, int points_per_axis) {
  const Grid2D& from = field.grid();
  Grid2D to(from.side_length(), points_per_axis);
  const int n_from = from.points();
  const int n_to = to.points();
  if (n_from == n_to) return field;
  auto spectrum = to_spectral(field);
  std::vector<cplx> target(to.size(), cplx{});
  const double scale = static_cast<double>(n_to) * n_to / (static_cast<double>(n_from) * n_from);
  for (int m2 = 0; m2 < n_from; ++m2) {
    const AxisMap a2 = map_mode(m2, n_from, n_to);
    if (a2.dest < 0) continue;
    for (int m1 = 0; m1 < n_from; ++m1) {
      const AxisMap a1 = map_mode(m1, n_from, n_to);
      if (a1.dest < 0) continue;
      const cplx c = spectrum[from.index(m1, m2)] * scale * a1.weight * a2.weight;
      for (int d2 : {a2.dest, a2.dest_alt}) {
        if (d2 < 0) continue;
        for (int d1 : {a1.dest, a1.dest_alt}) {
          if (d1 < 0) continue;
          target[to.index(d1, d2)] += c;
        }
      }
    }
  }
  return from_spectral(to, target);
}

}  // namespace nvsoliton
