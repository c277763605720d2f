#pragma once
// Shared generators and brute-force helpers for the test suites.

#include "cavity/cavity.hpp"

#include <cmath>
#include <complex>
#include <random>

namespace cavity::fixtures {

inline Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

inline QubitState random_qubit(std::mt19937_64& rng) {
  const Complex a = random_complex(rng), b = random_complex(rng);
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  return {a / norm, b / norm};
}

/// Random field supported on 0..occupied (occupied < n_max keeps the top sector empty).
inline FieldState random_field(std::mt19937_64& rng, int n_max, int occupied) {
  CVector v = CVector::Zero(n_max + 1);
  for (int n = 0; n <= occupied; ++n) v(n) = random_complex(rng);
  v.normalize();
  return FieldState(v);
}

inline ProductInit random_init(std::mt19937_64& rng, int n_max, int occupied) {
  return {random_field(rng, n_max, occupied), random_qubit(rng), random_qubit(rng)};
}

/// Partial trace by explicit index loops, written independently of cavity::reduce.
inline CMatrix loop_trace_keep_atom(const CVector& psi, int n_max, int atom) {
  CMatrix rho = CMatrix::Zero(2, 2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int n = 0; n <= n_max; ++n)
        for (int other = 0; other < 2; ++other) {
          const int row = atom == 1 ? 4 * n + 2 * i + other : 4 * n + 2 * other + i;
          const int col = atom == 1 ? 4 * n + 2 * j + other : 4 * n + 2 * other + j;
          rho(i, j) += psi(row) * std::conj(psi(col));
        }
  return rho;
}

inline CMatrix loop_trace_keep_field(const CVector& psi, int n_max) {
  CMatrix rho = CMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n)
    for (int m = 0; m <= n_max; ++m)
      for (int s = 0; s < 4; ++s) rho(n, m) += psi(4 * n + s) * std::conj(psi(4 * m + s));
  return rho;
}

/// exp(-i H t) psi by a truncated Taylor series with scaling and squaring.
inline CVector taylor_propagate(const CMatrix& h, const CVector& psi, double t) {
  const double scale = h.cwiseAbs().rowwise().sum().maxCoeff() * std::abs(t);
  int squarings = 0;
  while (scale / std::pow(2.0, squarings) > 0.5) ++squarings;
  const CMatrix x = Complex(0.0, -t / std::pow(2.0, squarings)) * h;
  CMatrix u = CMatrix::Identity(h.rows(), h.cols());
  CMatrix term = u;
  for (int k = 1; k <= 30; ++k) {
    term = (term * x / static_cast<double>(k)).eval();
    u += term;
  }
  for (int s = 0; s < squarings; ++s) u = (u * u).eval();
  return u * psi;
}

}  // namespace cavity::fixtures
