#pragma once
/**
 * @file analytic.hpp
 * @brief Closed-form evolution of the resonant + dispersive two-atom model.
 *
 * Interaction-picture Hamiltonian (hbar = 1):
 *
 *     H_I = (delta + lambda2 n) Z2 + lambda1 (a^dag s1- + s1+ a)
 *
 * where Z2 is the atom-2 Pauli operator (eigenvalues +-1). Atom 2 is never
 * flipped, so each (excitation number, atom-2 level) pair spans at most two
 * states and evolves as a driven two-level problem at Rabi rate
 *
 *     Delta_n = sqrt(lambda2^2 / 4 + n lambda1^2).
 */

#include "cavity/core.hpp"

#include <cmath>
#include <complex>

namespace cavity {

/// Theta = lambda2 / (2 lambda1).
struct Theta {
  double value = 0.0;

  explicit Theta(double v) : value(v) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ModelError("Theta must be finite and >= 0");
  }
  static Theta of(const ModelParams& p) { return Theta(p.lambda2 / (2.0 * p.lambda1)); }
};

/// Initial product state |phi> (x) (a1|g> + b1|e>) (x) (a2|g> + b2|e>).
struct ProductInit {
  FieldState field;
  QubitState atom1;
  QubitState atom2;

  JointKet ket() const { return product_state(field, atom1, atom2); }
};

/**
 * Amplitudes at excitation index n before the free phase factors:
 * c1 -> |n-1,e,e>, c2 -> |n,g,e>, c3 -> |n,e,g>, c4 -> |n+1,g,g>.
 */
struct CoefficientQuad {
  Complex c1, c2, c3, c4;
};

inline double rabi_frequency(int n, const ModelParams& p) {
  if (n < 0) throw ModelError("photon index must be >= 0");
  return std::sqrt(0.25 * p.lambda2 * p.lambda2 + n * p.lambda1 * p.lambda1);
}

/// sin(rate t) / rate, finite as rate -> 0.
inline double sin_over_rate(double rate, double t) {
  const double x = rate * t;
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return t * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
  }
  return std::sin(x) / rate;
}

namespace detail {

// One two-state block: upper component picks up +i lambda2/2 (atom 2 excited)
// or -i lambda2/2 (atom 2 ground) on the diagonal, coupling is -i lambda1 sqrt(n).
struct BlockRotation {
  Complex diag_plus;   // cos + i (lambda2/2) sin/Delta
  Complex diag_minus;  // cos - i (lambda2/2) sin/Delta
  Complex offdiag;     // -i lambda1 sqrt(n) sin/Delta
};

inline BlockRotation block_rotation(int n, double t, const ModelParams& p) {
  const double rate = std::sqrt(0.25 * p.lambda2 * p.lambda2 +
                                std::max(n, 0) * p.lambda1 * p.lambda1);
  const double c = std::cos(rate * t);
  const double s = sin_over_rate(rate, t);
  const double half = 0.5 * p.lambda2 * s;
  const Complex i{0.0, 1.0};
  return {c + i * half, c - i * half, -i * p.lambda1 * std::sqrt(std::max(n, 0)) * s};
}

}  // namespace detail

/**
 * Coefficients of the evolved state at index n (n = -1 reaches the isolated
 * |0,g,g> state through c4). Amplitudes with Fock index outside 0..n_max
 * enter as zero.
 */
inline CoefficientQuad coefficients(int n, double t, const ProductInit& init,
                                    const ModelParams& p) {
  const auto& f = init.field;
  const Complex a1 = init.atom1.amp_g(), b1 = init.atom1.amp_e();
  const Complex a2 = init.atom2.amp_g(), b2 = init.atom2.amp_e();

  const auto lower = detail::block_rotation(n, t, p);      // sector n, atom 2 excited
  const auto upper = detail::block_rotation(n + 1, t, p);  // sector n+1, atom 2 ground

  CoefficientQuad q;
  q.c1 = lower.diag_plus * f.amp(n - 1) * b1 * b2 + lower.offdiag * f.amp(n) * a1 * b2;
  q.c2 = lower.diag_minus * f.amp(n) * a1 * b2 + lower.offdiag * f.amp(n - 1) * b1 * b2;
  q.c3 = upper.diag_minus * f.amp(n) * b1 * a2 + upper.offdiag * f.amp(n + 1) * a1 * a2;
  q.c4 = upper.diag_plus * f.amp(n + 1) * a1 * a2 + upper.offdiag * f.amp(n) * b1 * a2;
  return q;
}

/// exp(-i [delta + lambda2 (n - 1/2)] t), shared by c1 and c2.
inline Complex phase_atom2_excited(int n, double t, const ModelParams& p) {
  return std::polar(1.0, -(p.delta + p.lambda2 * (n - 0.5)) * t);
}

/// exp(+i [delta + lambda2 (n + 1/2)] t), shared by c3 and c4.
inline Complex phase_atom2_ground(int n, double t, const ModelParams& p) {
  return std::polar(1.0, (p.delta + p.lambda2 * (n + 0.5)) * t);
}

/**
 * Evolved interaction-picture state. Throws TruncationError when more than
 * `tol` of population would be carried above n_max.
 */
inline JointKet evolve_analytic(const ProductInit& init, double t, const ModelParams& p) {
  p.validate();
  if (t < 0.0) throw ModelError("time must be >= 0");
  if (init.field.n_max() != p.n_max)
    throw ModelError("field state truncation does not match n_max");

  const int n_max = p.n_max;
  CVector psi = CVector::Zero(4 * (n_max + 1));
  double leaked = 0.0;
  const auto put = [&](int n, Level s1, Level s2, Complex value) {
    if (n > n_max) leaked += std::norm(value);
    else if (n >= 0) psi(joint_index(n, s1, s2)) += value;
  };

  for (int n = -1; n <= n_max + 1; ++n) {
    const CoefficientQuad q = coefficients(n, t, init, p);
    const Complex pe = phase_atom2_excited(n, t, p);
    const Complex pg = phase_atom2_ground(n, t, p);
    put(n - 1, Level::e, Level::e, pe * q.c1);
    put(n, Level::g, Level::e, pe * q.c2);
    put(n, Level::e, Level::g, pg * q.c3);
    put(n + 1, Level::g, Level::g, pg * q.c4);
  }
  if (leaked > p.tol)
    throw TruncationError("population " + std::to_string(leaked) +
                          " leaked above n_max = " + std::to_string(n_max));
  return JointKet(std::move(psi));
}

namespace detail {

struct VacuumBlock {
  double cos_t;
  double sin_over;  // sin(Delta_1 t) / Delta_1
};

inline VacuumBlock vacuum_block(double t, const ModelParams& p) {
  if (t < 0.0) throw ModelError("time must be >= 0");
  const double rate = rabi_frequency(1, p);
  return {std::cos(rate * t), sin_over_rate(rate, t)};
}

// Diagonal weights (excited/vacuum, ground/one-photon) for the vacuum + excited start.
inline std::pair<double, double> vacuum_weights(double t, const ModelParams& p) {
  const auto [c, s] = vacuum_block(t, p);
  const double upper = c * c + 0.25 * p.lambda2 * p.lambda2 * s * s;
  const double lower = p.lambda1 * p.lambda1 * s * s;
  return {upper, lower};
}

}  // namespace detail

/*
 * Closed-form reduced states. All three assume the start
 * |0> (x) |e1> (x) (a2|g2> + b2|e2>).
 */

inline DensityMatrix rho1_closed(double t, const ModelParams& p) {
  const auto [excited, ground] = detail::vacuum_weights(t, p);
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = ground;
  m(1, 1) = excited;
  return DensityMatrix(std::move(m), p.tol);
}

inline DensityMatrix rho2_closed(double t, const QubitState& atom2, const ModelParams& p) {
  const auto [c, s] = detail::vacuum_block(t, p);
  const Complex i{0.0, 1.0};
  const Complex rot = c - i * (0.5 * p.lambda2 * s);
  const Complex coherence = (rot * rot + p.lambda1 * p.lambda1 * s * s) *
                            std::polar(1.0, 2.0 * (p.delta + 0.5 * p.lambda2) * t);
  const Complex a2 = atom2.amp_g(), b2 = atom2.amp_e();
  CMatrix m(2, 2);
  m(0, 0) = std::norm(a2);
  m(1, 1) = std::norm(b2);
  m(0, 1) = coherence * a2 * std::conj(b2);
  m(1, 0) = std::conj(m(0, 1));
  return DensityMatrix(std::move(m), p.tol);
}

inline DensityMatrix rhof_closed(double t, const ModelParams& p) {
  const auto [vac, one] = detail::vacuum_weights(t, p);
  CMatrix m = CMatrix::Zero(p.n_max + 1, p.n_max + 1);
  m(0, 0) = vac;
  m(1, 1) = one;
  return DensityMatrix(std::move(m), p.tol);
}

/// 2 P (1 - P), P = sin^2(sqrt(1 + Theta^2) lambda1 t) / (1 + Theta^2).
inline double zeta1_closed(double t, Theta theta, double lambda1) {
  const double w = 1.0 + theta.value * theta.value;
  const double s = std::sin(std::sqrt(w) * lambda1 * t);
  const double prob = s * s / w;
  return 2.0 * prob * (1.0 - prob);
}

/// 8 a2^2 b2^2 Theta^2 sin^4(sqrt(1 + Theta^2) lambda1 t) / (1 + Theta^2)^2.
inline double zeta2_closed(double t, Theta theta, double a2, double b2, double lambda1) {
  if (std::abs(a2 * a2 + b2 * b2 - 1.0) > kRenormalizeLimit)
    throw ModelError("atom-2 magnitudes must satisfy a2^2 + b2^2 = 1");
  const double w = 1.0 + theta.value * theta.value;
  const double s = std::sin(std::sqrt(w) * lambda1 * t);
  return 8.0 * a2 * a2 * b2 * b2 * theta.value * theta.value * (s * s) * (s * s) / (w * w);
}

}  // namespace cavity
