#pragma once

// Slow, obviously-correct reference implementations. Nothing here shares
// code with the library.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double pi = 3.14159265358979323846;

// sum_k conj(s[k]) x[k + lag], out-of-range samples are zero
inline cd xcorr(const Vec& s, const Vec& x, int lag) {
  cd acc = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const Eigen::Index j = k + lag;
    if (j >= 0 && j < x.size()) acc += std::conj(s[k]) * x[j];
  }
  return acc;
}

inline cd circular_xcorr(const Vec& s, const Vec& x, int lag) {
  const auto k_len = s.size();
  cd acc = 0.0;
  for (Eigen::Index k = 0; k < k_len; ++k) {
    const auto j = ((k + lag) % k_len + k_len) % k_len;
    acc += std::conj(s[k]) * x[j];
  }
  return acc;
}

inline Vec random_vector(Eigen::Index n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (auto& z : v) z = cd(g(gen), g(gen));
  return v;
}

inline Mat random_matrix(Eigen::Index r, Eigen::Index c, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat m(r, c);
  for (Eigen::Index j = 0; j < c; ++j)
    for (Eigen::Index i = 0; i < r; ++i) m(i, j) = cd(g(gen), g(gen));
  return m;
}

// unitary DFT, X[f] = sum_k x[k] e^{-j2pi fk/K} / sqrt(K)
inline Vec dft(const Vec& x) {
  const auto n = x.size();
  Vec out(n);
  for (Eigen::Index f = 0; f < n; ++f) {
    cd acc = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) acc += x[k] * std::polar(1.0, -2.0 * pi * double(f * k % n) / double(n));
    out[f] = acc / std::sqrt(double(n));
  }
  return out;
}

inline double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace oracle
