#pragma once

// Thin FFTW wrapper. Plans are cached per (size, direction) and created
// under a mutex; execution uses the new-array interface and is thread-safe.

#include "cosmic/types.hpp"

namespace cosmic::detail {

/// Unnormalized forward DFT of x zero-padded (or truncated) to n points:
/// X[k] = sum_t x[t] exp(-j 2 pi k t / n).
ComplexVector fft(const ComplexVector& x, Eigen::Index n);

/// Inverse DFT scaled by 1/n.
ComplexVector ifft(const ComplexVector& x);

/// Frequency of bin k in cycles per sample, in [-0.5, 0.5).
double bin_frequency(Eigen::Index k, Eigen::Index n) noexcept;

/// Smallest 2^a 3^b 5^c >= n (fast FFTW sizes).
Eigen::Index good_fft_size(Eigen::Index n) noexcept;

}  // namespace cosmic::detail
