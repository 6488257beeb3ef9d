#pragma once

// Periodic square grids and the spectral calculus shared by all modules.
//
// Layout convention (used everywhere in the toolkit):
//   * the domain is [-L/2, L/2)^2 with nodes x_i = -L/2 + i*h, h = L/N;
//   * a field stores N*N samples row-major with x1 FASTEST:
//       values[i2 * N + i1]  <->  (x1, x2) = (x_{i1}, x_{i2});
//   * spectral arrays use the same layout with FFT ordering per axis:
//       index m in [0, N)  <->  wavenumber 2*pi*m~/L,
//       m~ = m for m < N/2 and m~ = m - N otherwise,
//     so the frequency set per axis is {2*pi*m/L : m = -N/2, ..., N/2-1}.
//   * odd-order derivative symbols vanish at the unmatched Nyquist index
//     m = N/2 (m~ = -N/2); even orders keep it.

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace nvsoliton {

using cplx = std::complex<double>;

struct Vec2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend Vec2 operator-(Vec2 a) { return {-a.x1, -a.x2}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x1, s * a.x2}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }

class Grid2D {
 public:
  /// Throws InvalidInput unless L > 0, N even and N >= 8.
  Grid2D(double side_length, int points_per_axis);

  double side_length() const { return side_length_; }
  int points() const { return points_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return static_cast<std::size_t>(points_) * points_; }

  double node(int i) const { return -0.5 * side_length_ + i * spacing_; }
  Vec2 position(int i1, int i2) const { return {node(i1), node(i2)}; }
  std::size_t index(int i1, int i2) const {
    return static_cast<std::size_t>(i2) * points_ + static_cast<std::size_t>(i1);
  }

  /// Signed frequency index m~ in [-N/2, N/2) for FFT slot m.
  int signed_mode(int m) const { return m < points_ / 2 ? m : m - points_; }
  /// Angular wavenumber 2*pi*m~/L for FFT slot m.
  double wavenumber(int m) const;
  /// Same, but zero at the Nyquist slot (used for odd-order symbols).
  double odd_wavenumber(int m) const { return m == points_ / 2 ? 0.0 : wavenumber(m); }

  /// Per-axis frequencies in ascending order {2*pi*m/L : m = -N/2..N/2-1}.
  std::vector<double> frequencies() const;

  friend bool operator==(const Grid2D&, const Grid2D&) = default;

 private:
  double side_length_;
  int points_;
  double spacing_;
};

inline Grid2D make_grid(double side_length, int points_per_axis) {
  return Grid2D(side_length, points_per_axis);
}

/// Complex samples on a Grid2D. Value type; copying copies the samples.
class Field2D {
 public:
  explicit Field2D(Grid2D grid);
  Field2D(Grid2D grid, std::vector<cplx> values);

  const Grid2D& grid() const { return grid_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> values() { return values_; }

  cplx& operator()(int i1, int i2) { return values_[grid_.index(i1, i2)]; }
  const cplx& operator()(int i1, int i2) const { return values_[grid_.index(i1, i2)]; }

  template <typename F>
  static Field2D sample(const Grid2D& grid, F&& fn) {
    Field2D out(grid);
    const int n = grid.points();
    for (int i2 = 0; i2 < n; ++i2)
      for (int i1 = 0; i1 < n; ++i1) out(i1, i2) = fn(grid.position(i1, i2));
    return out;
  }

  Field2D& operator+=(const Field2D& other);
  Field2D& operator-=(const Field2D& other);
  Field2D& operator*=(cplx factor);

  friend Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
  friend Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }
  friend Field2D operator*(cplx s, Field2D a) { return a *= s; }
  friend Field2D operator*(const Field2D& a, const Field2D& b);

 private:
  Grid2D grid_;
  std::vector<cplx> values_;
};

// Pointwise helpers.
double sup_norm(const Field2D& field);
double max_imag(const Field2D& field);
/// Discrete L2 norm (h^2 * sum |f|^2)^(1/2).
double l2_norm(const Field2D& field);
/// Grid mean (1/N^2) * sum f, summed in index order.
cplx mean(const Field2D& field);
/// Drop the imaginary part.
Field2D real_part(const Field2D& field);
Field2D conj(const Field2D& field);

// Spectral transforms (unnormalized forward, normalized inverse).
std::vector<cplx> to_spectral(const Field2D& field);
Field2D from_spectral(const Grid2D& grid, std::span<const cplx> spectrum);

/// Derivative d^{j1}/dx1^{j1} d^{j2}/dx2^{j2} via the Fourier multiplier
/// (i xi1)^{j1} (i xi2)^{j2}; requires j1 + j2 <= 3.
Field2D spectral_deriv(const Field2D& field, std::array<int, 2> order);

/// d/dz = (d/dx1 - i d/dx2) / 2.
Field2D dz(const Field2D& field);
/// d/dzbar = (d/dx1 + i d/dx2) / 2.
Field2D dzbar(const Field2D& field);
/// Sum of the two pure second derivatives.
Field2D laplacian(const Field2D& field);

/// f(x - y) for arbitrary y, by phase-shifting the trigonometric interpolant.
Field2D spectral_shift(const Field2D& field, Vec2 shift);

/// Trigonometric interpolation onto a grid with the same side length and a
/// different even N (zero padding or truncation of the spectrum).
Field2D resample(const Field2D& field, int points_per_axis);

}  // namespace nvsoliton
