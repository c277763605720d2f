#pragma once
/**
 * @file core.hpp
 * @brief Hilbert-space foundation for one cavity mode and two two-level atoms.
 *
 * Joint basis ordering is n-major, then atom 1, then atom 2:
 *
 *     index(n, s1, s2) = 4 n + 2 s1 + s2,   s = 0 for |g>, 1 for |e>
 *
 * Single-atom matrices use the same (g, e) ordering. Nothing in this header
 * knows about the cavity Hamiltonian.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavity {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Rejected input: bad parameters, unnormalized states, wrong dimensions.
class ModelError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that could not be carried out faithfully.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Population escaped the truncated Fock ladder.
class TruncationError : public NumericError {
public:
  using NumericError::NumericError;
};

/// Amplitude norms off by more than this are rejected, smaller drift is renormalized.
inline constexpr double kRenormalizeLimit = 1e-6;

/// Physical constants (hbar = 1) plus truncation and tolerance settings.
struct ModelParams {
  double lambda1 = 1.0;  ///< resonant atom-field coupling
  double lambda2 = 0.0;  ///< effective dispersive rate of atom 2
  double delta = 0.0;    ///< atom-2 detuning omega2 - omega
  std::optional<double> omega;   ///< cavity frequency, only needed in the lab frame
  std::optional<double> omega2;  ///< atom-2 frequency, only needed in the lab frame
  int n_max = 15;
  double tol = 1e-10;

  void validate() const {
    if (!(lambda1 > 0.0) || !std::isfinite(lambda1))
      throw ModelError("lambda1 must be finite and > 0");
    if (!(lambda2 >= 0.0) || !std::isfinite(lambda2))
      throw ModelError("lambda2 must be finite and >= 0");
    if (!std::isfinite(delta)) throw ModelError("delta must be finite");
    if (n_max < 1) throw ModelError("n_max must be >= 1");
    if (!(tol > 0.0)) throw ModelError("tol must be > 0");
    if (omega && omega2) {
      const double expected = *omega2 - *omega;
      if (std::abs(delta - expected) > tol * std::max(1.0, std::abs(expected)))
        throw ModelError("delta must equal omega2 - omega");
    }
  }

  double cavity_frequency() const { return omega.value_or(0.0); }
  double atom2_frequency() const { return omega2.value_or(cavity_frequency() + delta); }

  std::size_t field_dim() const { return static_cast<std::size_t>(n_max) + 1; }
  std::size_t joint_dim() const { return 4 * field_dim(); }
};

enum class Level : int { g = 0, e = 1 };
enum class Subsystem : int { field = 0, atom1 = 1, atom2 = 2 };

inline std::string to_string(Subsystem s) {
  switch (s) {
    case Subsystem::field: return "field";
    case Subsystem::atom1: return "atom1";
    case Subsystem::atom2: return "atom2";
  }
  throw ModelError("invalid subsystem id");
}

inline Subsystem subsystem_from_string(const std::string& name) {
  if (name == "field") return Subsystem::field;
  if (name == "atom1") return Subsystem::atom1;
  if (name == "atom2") return Subsystem::atom2;
  throw ModelError("invalid subsystem id '" + name + "'");
}

namespace detail {

// Applies the normalization policy in place.
inline void enforce_unit_norm(CVector& amps, const char* what) {
  const double norm = amps.norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kRenormalizeLimit)
    throw ModelError(std::string(what) + " is not normalized (norm = " +
                     std::to_string(norm) + ")");
  amps /= norm;
}

}  // namespace detail

/// Pure state of one two-level atom.
class QubitState {
public:
  QubitState(Complex amp_g, Complex amp_e) {
    CVector v(2);
    v << amp_g, amp_e;
    detail::enforce_unit_norm(v, "qubit state");
    g_ = v(0);
    e_ = v(1);
  }

  static QubitState ground() { return {1.0, 0.0}; }
  static QubitState excited() { return {0.0, 1.0}; }
  /// (|g> + |e>)/sqrt(2)
  static QubitState plus() { return {M_SQRT1_2, M_SQRT1_2}; }

  Complex amp_g() const { return g_; }
  Complex amp_e() const { return e_; }
  Complex amp(Level s) const { return s == Level::g ? g_ : e_; }

private:
  Complex g_;
  Complex e_;
};

/// Pure field state on the truncated Fock ladder 0..n_max.
class FieldState {
public:
  explicit FieldState(CVector amps) : amps_(std::move(amps)) {
    if (amps_.size() < 2) throw ModelError("field state needs n_max >= 1");
    detail::enforce_unit_norm(amps_, "field state");
  }

  static FieldState vacuum(int n_max) { return fock(0, n_max); }

  static FieldState fock(int n, int n_max) {
    if (n_max < 1) throw ModelError("n_max must be >= 1");
    if (n < 0 || n > n_max) throw ModelError("Fock index outside 0..n_max");
    CVector v = CVector::Zero(n_max + 1);
    v(n) = 1.0;
    return FieldState(std::move(v));
  }

  int n_max() const { return static_cast<int>(amps_.size()) - 1; }
  const CVector& amps() const { return amps_; }

  /// A_n with A_n = 0 outside 0..n_max.
  Complex amp(int n) const { return (n < 0 || n > n_max()) ? Complex{} : amps_(n); }

private:
  CVector amps_;
};

constexpr std::size_t joint_index(std::size_t n, Level s1, Level s2) {
  return 4 * n + 2 * static_cast<std::size_t>(s1) + static_cast<std::size_t>(s2);
}

/// Normalized state vector on field x atom1 x atom2.
class JointKet {
public:
  explicit JointKet(CVector amps) : amps_(std::move(amps)) {
    if (amps_.size() < 8 || amps_.size() % 4 != 0)
      throw ModelError("joint ket dimension must be 4 (n_max + 1) with n_max >= 1");
    detail::enforce_unit_norm(amps_, "joint ket");
  }

  int n_max() const { return static_cast<int>(amps_.size() / 4) - 1; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const CVector& amps() const { return amps_; }

  Complex operator()(std::size_t n, Level s1, Level s2) const {
    return amps_(static_cast<Eigen::Index>(joint_index(n, s1, s2)));
  }

private:
  CVector amps_;
};

/// Hermitian, unit-trace, positive-semidefinite matrix (checked on construction).
class DensityMatrix {
public:
  explicit DensityMatrix(CMatrix entries, double tol = 1e-10) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0)
      throw ModelError("density matrix must be square and non-empty");
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw ModelError("density matrix is not Hermitian");
    if (std::abs(m_.trace() - 1.0) > tol)
      throw ModelError("density matrix trace differs from 1");
    const CMatrix herm = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue check failed");
    if (es.eigenvalues().minCoeff() < -tol)
      throw ModelError("density matrix has a negative eigenvalue");
  }

  static DensityMatrix pure(const CVector& ket, double tol = 1e-10) {
    return DensityMatrix(ket * ket.adjoint(), tol);
  }

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

private:
  CMatrix m_;
};

/// |field> (x) |atom1> (x) |atom2>
inline JointKet product_state(const FieldState& field, const QubitState& atom1,
                              const QubitState& atom2) {
  const int n_max = field.n_max();
  CVector v(4 * (n_max + 1));
  for (int n = 0; n <= n_max; ++n)
    for (Level s1 : {Level::g, Level::e})
      for (Level s2 : {Level::g, Level::e})
        v(joint_index(n, s1, s2)) = field.amp(n) * atom1.amp(s1) * atom2.amp(s2);
  return JointKet(std::move(v));
}

inline JointKet product_state(const FieldState& field, const QubitState& atom1,
                              const QubitState& atom2, const ModelParams& params) {
  if (field.n_max() != params.n_max)
    throw ModelError("field state truncation does not match n_max");
  return product_state(field, atom1, atom2);
}

/**
 * Generic tripartite partial trace.
 *
 * `keep` lists the subsystems to retain; the reduced matrix is indexed in
 * (field, atom1, atom2) order restricted to those kept, whatever order they
 * are given in. Works on the amplitude vector directly: with the kept and
 * traced indices separated into rows and columns of M, rho = M M^dagger.
 */
inline CMatrix reduce(const CVector& psi, int n_max, std::span<const Subsystem> keep) {
  const std::array<std::size_t, 3> dims{static_cast<std::size_t>(n_max) + 1, 2, 2};
  if (static_cast<std::size_t>(psi.size()) != dims[0] * 4)
    throw ModelError("state dimension does not match n_max");
  std::array<bool, 3> kept{};
  for (Subsystem s : keep) {
    const int id = static_cast<int>(s);
    if (id < 0 || id > 2) throw ModelError("invalid subsystem id");
    kept[id] = true;
  }
  std::size_t dim_keep = 1, dim_trace = 1;
  for (int k = 0; k < 3; ++k) (kept[k] ? dim_keep : dim_trace) *= dims[k];

  CMatrix m = CMatrix::Zero(dim_keep, dim_trace);
  for (std::size_t n = 0; n < dims[0]; ++n)
    for (std::size_t s1 = 0; s1 < 2; ++s1)
      for (std::size_t s2 = 0; s2 < 2; ++s2) {
        const std::array<std::size_t, 3> idx{n, s1, s2};
        std::size_t row = 0, col = 0;
        for (int k = 0; k < 3; ++k) {
          if (kept[k]) row = row * dims[k] + idx[k];
          else col = col * dims[k] + idx[k];
        }
        m(row, col) = psi(4 * n + 2 * s1 + s2);
      }
  return m * m.adjoint();
}

/// Same contraction on a joint density matrix: rho_red(k, k') = sum_r rho((k, r), (k', r)).
inline CMatrix reduce(const CMatrix& rho, std::span<const Subsystem> keep) {
  if (rho.rows() != rho.cols() || rho.rows() < 8 || rho.rows() % 4 != 0)
    throw ModelError("joint density matrix dimension must be 4 (n_max + 1)");
  const std::array<std::size_t, 3> dims{static_cast<std::size_t>(rho.rows()) / 4, 2, 2};
  std::array<bool, 3> kept{};
  for (Subsystem s : keep) {
    const int id = static_cast<int>(s);
    if (id < 0 || id > 2) throw ModelError("invalid subsystem id");
    kept[id] = true;
  }
  std::size_t dim_keep = 1;
  for (int k = 0; k < 3; ++k)
    if (kept[k]) dim_keep *= dims[k];

  const auto split = [&](std::size_t flat) {
    const std::array<std::size_t, 3> idx{flat / 4, (flat / 2) % 2, flat % 2};
    std::size_t row = 0, col = 0;
    for (int k = 0; k < 3; ++k) {
      if (kept[k]) row = row * dims[k] + idx[k];
      else col = col * dims[k] + idx[k];
    }
    return std::pair{row, col};
  };

  CMatrix out = CMatrix::Zero(dim_keep, dim_keep);
  const auto d = static_cast<std::size_t>(rho.rows());
  for (std::size_t i = 0; i < d; ++i) {
    const auto [ki, ri] = split(i);
    for (std::size_t j = 0; j < d; ++j) {
      const auto [kj, rj] = split(j);
      if (ri == rj) out(ki, kj) += rho(i, j);
    }
  }
  return out;
}

inline DensityMatrix partial_trace(const JointKet& state, Subsystem keep, double tol = 1e-10) {
  const std::array<Subsystem, 1> k{keep};
  return DensityMatrix(reduce(state.amps(), state.n_max(), k), tol);
}

inline DensityMatrix partial_trace(const DensityMatrix& joint, Subsystem keep,
                                   double tol = 1e-10) {
  const std::array<Subsystem, 1> k{keep};
  return DensityMatrix(reduce(joint.matrix(), k), tol);
}

/// zeta = 1 - Tr(rho^2); zero exactly for pure states.
inline double purity_deficit(const CMatrix& rho, double tol = 1e-10) {
  if (rho.rows() != rho.cols()) throw ModelError("purity needs a square matrix");
  if (std::abs(rho.trace() - 1.0) > tol) throw ModelError("purity needs a unit-trace matrix");
  // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
  return 1.0 - rho.cwiseAbs2().sum();
}

inline double purity_deficit(const DensityMatrix& rho, double tol = 1e-10) {
  return purity_deficit(rho.matrix(), tol);
}

/// <sigma_z> on the +-1 scale: rho_ee - rho_gg.
inline double expectation_sigma_z(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw ModelError("sigma_z expectation needs a 2x2 density matrix");
  return rho(1, 1).real() - rho(0, 0).real();
}

}  // namespace cavity
