#pragma once

#include <complex>
#include <span>

namespace nvsoliton::fft {

using cplx = std::complex<double>;

// Thin wrappers over FFTW. Plans are created once per shape with
// FFTW_ESTIMATE | FFTW_UNALIGNED and cached behind a mutex; execution uses
// the new-array interface, so concurrent calls on distinct buffers are safe.
//
// 2D arrays are row-major with the fast index first: a[i2 * n1 + i1].
// Transforms are unnormalized; inverse() divides by the number of points.

void forward_2d(std::span<const cplx> in, std::span<cplx> out, int n1, int n2);
void inverse_2d(std::span<const cplx> in, std::span<cplx> out, int n1, int n2);

void forward_1d(std::span<const cplx> in, std::span<cplx> out);
void inverse_1d(std::span<const cplx> in, std::span<cplx> out);

/// Smallest n' >= n whose only prime factors are 2, 3, 5 and 7.
int good_size(int n);

}  // namespace nvsoliton::fft
