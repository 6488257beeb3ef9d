#pragma once

// Restarted GMRES for complex systems (internal to the scattering solver).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace nvsoliton::detail {

struct GmresResult {
  std::vector<std::complex<double>> x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  /// sigma_max / sigma_min of the last Arnoldi Hessenberg matrix.
  double condition_estimate = 1.0;
};

using LinearOperator = std::function<std::vector<std::complex<double>>(std::span<const std::complex<double>>)>;

inline double norm2(std::span<const std::complex<double>> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

inline GmresResult gmres(const LinearOperator& apply, std::span<const std::complex<double>> rhs, double tolerance,
                         int max_iterations, int restart) {
  using cplx = std::complex<double>;
  const std::size_t n = rhs.size();
  GmresResult result;
  result.x.assign(n, cplx{});
  const double rhs_norm = norm2(rhs);
  if (n == 0 || rhs_norm == 0.0) {
    result.converged = true;
    return result;
  }

  std::vector<cplx> r(rhs.begin(), rhs.end());
  double beta = rhs_norm;
  while (result.iterations < max_iterations) {
    const int m = std::min(restart, max_iterations - result.iterations);
    std::vector<std::vector<cplx>> basis;
    basis.reserve(m + 1);
    basis.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;

    Eigen::MatrixXcd hessenberg = Eigen::MatrixXcd::Zero(m + 1, m);
    std::vector<cplx> cs(m), sn(m), g(m + 1, cplx{});
    g[0] = beta;
    int used = 0;
    for (int j = 0; j < m; ++j) {
      auto w = apply(basis[j]);
      for (int i = 0; i <= j; ++i) {  // modified Gram-Schmidt
        cplx h{};
        for (std::size_t q = 0; q < n; ++q) h += std::conj(basis[i][q]) * w[q];
        hessenberg(i, j) = h;
        for (std::size_t q = 0; q < n; ++q) w[q] -= h * basis[i][q];
      }
      const double h_next = norm2(w);
      hessenberg(j + 1, j) = h_next;

      // Apply the accumulated rotations to the new column of a working copy.
      std::vector<cplx> col(j + 2);
      for (int i = 0; i <= j + 1; ++i) col[i] = hessenberg(i, j);
      for (int i = 0; i < j; ++i) {
        const cplx a = col[i];
        const cplx b = col[i + 1];
        col[i] = std::conj(cs[i]) * a + std::conj(sn[i]) * b;
        col[i + 1] = -sn[i] * a + cs[i] * b;
      }
      const double denom = std::hypot(std::abs(col[j]), std::abs(col[j + 1]));
      cs[j] = denom == 0.0 ? cplx(1.0) : col[j] / denom;
      sn[j] = denom == 0.0 ? cplx{} : col[j + 1] / denom;
      g[j + 1] = -sn[j] * g[j];
      g[j] = std::conj(cs[j]) * g[j];
      // Store the rotated column for the back substitution.
      col[j] = denom;
      for (int i = 0; i <= j; ++i) hessenberg(i, j) = col[i];
      hessenberg(j + 1, j) = h_next;  // keep the Arnoldi entry for the estimate

      ++used;
      ++result.iterations;
      result.relative_residual = std::abs(g[j + 1]) / rhs_norm;
      if (result.relative_residual <= tolerance || h_next == 0.0) break;
      basis.emplace_back(n);
      for (std::size_t q = 0; q < n; ++q) basis[j + 1][q] = w[q] / h_next;
    }

    // Back substitution on the rotated (upper-triangular) Hessenberg.
    std::vector<cplx> y(used);
    for (int i = used - 1; i >= 0; --i) {
      cplx s = g[i];
      for (int k = i + 1; k < used; ++k) s -= hessenberg(i, k) * y[k];
      y[i] = s / hessenberg(i, i);
    }
    for (int k = 0; k < used; ++k)
      for (std::size_t q = 0; q < n; ++q) result.x[q] += y[k] * basis[k][q];

    // The rotated triangle has the same singular values as the Arnoldi matrix.
    Eigen::MatrixXcd tri = hessenberg.topLeftCorner(used, used).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(tri);
    const auto& sv = svd.singularValues();
    if (sv.size() > 0 && sv(sv.size() - 1) > 0.0) result.condition_estimate = sv(0) / sv(sv.size() - 1);

    // True residual for the restart.
    const auto ax = apply(result.x);
    for (std::size_t q = 0; q < n; ++q) r[q] = rhs[q] - ax[q];
    beta = norm2(r);
    result.relative_residual = beta / rhs_norm;
    if (result.relative_residual <= tolerance) {
      result.converged = true;
      return result;
    }
  }
  return result;
}

}  // namespace nvsoliton::detail
