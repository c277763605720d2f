#pragma once
/**
 * @file numeric.hpp
 * @brief Brute-force oracle: explicit Hamiltonian matrices on the truncated
 * joint space and exact unitary propagation by Hermitian eigendecomposition.
 *
 * Operator conventions on the (g, e) ordering:
 *   - atom 1 free energy and the frame generator use S1 = diag(-1/2, +1/2),
 *     so n + S1 commutes with the exchange term;
 *   - atom 2 in the dispersive model uses the Pauli Z2 = diag(-1, +1);
 *   - atom 2 in the exact dipole model has level splitting delta, i.e. delta S2.
 */

#include "cavity/analytic.hpp"
#include "cavity/core.hpp"
#include "cavity/time_grid.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace cavity {

enum class HamiltonianKind {
  lab_frame,           ///< full Hamiltonian with free terms
  interaction_picture, ///< free cavity rotation removed
  exact_two_dipole,    ///< both atoms with exchange coupling, rotating frame
  frame_generator,     ///< omega (n + S1 + Z2), diagonal
};

inline std::string to_string(HamiltonianKind k) {
  switch (k) {
    case HamiltonianKind::lab_frame: return "full-lab-frame";
    case HamiltonianKind::interaction_picture: return "interaction-picture";
    case HamiltonianKind::exact_two_dipole: return "exact-two-dipole";
    case HamiltonianKind::frame_generator: return "frame-generator";
  }
  throw ModelError("unknown Hamiltonian kind");
}

struct OperatorMatrix {
  HamiltonianKind kind;
  CMatrix entries;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

namespace ops {

inline CMatrix identity(Eigen::Index d) { return CMatrix::Identity(d, d); }

inline CMatrix annihilation(int n_max) {
  CMatrix a = CMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline CMatrix number(int n_max) {
  CMatrix m = CMatrix::Zero(n_max + 1, n_max + 1);
  for (int n = 0; n <= n_max; ++n) m(n, n) = n;
  return m;
}

/// |e><g|
inline CMatrix raising() {
  CMatrix s = CMatrix::Zero(2, 2);
  s(1, 0) = 1.0;
  return s;
}

inline CMatrix lowering() { return raising().transpose(); }

inline CMatrix pauli_z() {
  CMatrix z = CMatrix::Zero(2, 2);
  z(0, 0) = -1.0;
  z(1, 1) = 1.0;
  return z;
}

inline CMatrix spin_z() { return 0.5 * pauli_z(); }

/// field (x) atom1 (x) atom2
inline CMatrix embed(const CMatrix& field, const CMatrix& atom1, const CMatrix& atom2) {
  const CMatrix atoms = Eigen::kroneckerProduct(atom1, atom2).eval();
  return Eigen::kroneckerProduct(field, atoms).eval();
}

}  // namespace ops

namespace detail {

struct JointOperators {
  CMatrix n, a, a_dag, id;
  CMatrix s1_up, s1_down, s1_z, s2_up, s2_down, z2, s2_z;

  explicit JointOperators(int n_max) {
    const CMatrix f_id = ops::identity(n_max + 1), q_id = ops::identity(2);
    const CMatrix fa = ops::annihilation(n_max);
    n = ops::embed(ops::number(n_max), q_id, q_id);
    a = ops::embed(fa, q_id, q_id);
    a_dag = a.adjoint();
    id = ops::embed(f_id, q_id, q_id);
    s1_up = ops::embed(f_id, ops::raising(), q_id);
    s1_down = ops::embed(f_id, ops::lowering(), q_id);
    s1_z = ops::embed(f_id, ops::spin_z(), q_id);
    s2_up = ops::embed(f_id, q_id, ops::raising());
    s2_down = ops::embed(f_id, q_id, ops::lowering());
    z2 = ops::embed(f_id, q_id, ops::pauli_z());
    s2_z = 0.5 * z2;
  }

  CMatrix exchange1() const { return a_dag * s1_down + s1_up * a; }
  CMatrix exchange2() const { return a_dag * s2_down + s2_up * a; }
};

}  // namespace detail

/**
 * Builds the requested Hamiltonian. The lab frame needs omega (omega2
 * defaults to omega + delta); lambda_dipole is required exactly for the
 * exact two-dipole model.
 */
inline OperatorMatrix build_hamiltonian(HamiltonianKind kind, const ModelParams& p,
                                        std::optional<double> lambda_dipole = std::nullopt) {
  p.validate();
  if ((kind == HamiltonianKind::exact_two_dipole) != lambda_dipole.has_value())
    throw ModelError(lambda_dipole ? "lambda_dipole only applies to the exact-two-dipole model"
                                   : "exact-two-dipole model requires lambda_dipole");
  const detail::JointOperators o(p.n_max);
  CMatrix h;
  switch (kind) {
    case HamiltonianKind::lab_frame: {
      if (!p.omega) throw ModelError("lab-frame Hamiltonian requires omega");
      const double w = *p.omega;
      h = w * o.n + w * o.s1_z + p.atom2_frequency() * o.z2 + p.lambda1 * o.exchange1() +
          p.lambda2 * o.n * o.z2;
      break;
    }
    case HamiltonianKind::interaction_picture:
      h = (p.delta * o.id + p.lambda2 * o.n) * o.z2 + p.lambda1 * o.exchange1();
      break;
    case HamiltonianKind::exact_two_dipole:
      h = p.delta * o.s2_z + p.lambda1 * o.exchange1() + *lambda_dipole * o.exchange2();
      break;
    case HamiltonianKind::frame_generator:
      h = p.cavity_frequency() * (o.n + o.s1_z + o.z2);
      break;
    default:
      throw ModelError("unknown Hamiltonian kind");
  }
  return {kind, std::move(h)};
}

/// Cached eigendecomposition of a Hermitian matrix; evaluates exp(-i H t)|psi>.
class Propagator {
public:
  explicit Propagator(const OperatorMatrix& h) {
    if ((h.entries - h.entries.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw ModelError("propagator needs a Hermitian matrix");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h.entries);
    if (es.info() != Eigen::Success)
      throw NumericError("eigendecomposition of " + to_string(h.kind) + " failed");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  std::size_t dim() const { return static_cast<std::size_t>(energies_.size()); }

  CVector apply(const CVector& psi, double t) const {
    if (psi.size() != energies_.size()) throw ModelError("state dimension does not match H");
    CVector coeffs = vectors_.adjoint() * psi;
    for (Eigen::Index k = 0; k < coeffs.size(); ++k)
      coeffs(k) *= std::polar(1.0, -energies_(k) * t);
    return vectors_ * coeffs;
  }

  JointKet operator()(const JointKet& psi, double t) const {
    if (t < 0.0) throw ModelError("time must be >= 0");
    return JointKet(apply(psi.amps(), t));
  }

private:
  Eigen::VectorXd energies_;
  CMatrix vectors_;
};

inline JointKet propagate(const OperatorMatrix& h, const JointKet& init, double t) {
  return Propagator(h)(init, t);
}

enum class FrameDirection { to_lab, to_interaction };

/**
 * Applies U0(t) = exp(-i omega t (n + S1 + Z2)) (to_lab) or its inverse.
 * Lab evolution factors as U0(t) exp(-i H_I t) since the generator commutes
 * with H_I.
 */
inline JointKet frame_transform(const JointKet& state, double t, const ModelParams& p,
                                FrameDirection direction) {
  if (t < 0.0) throw ModelError("time must be >= 0");
  const double sign = direction == FrameDirection::to_lab ? -1.0 : 1.0;
  const double w = p.cavity_frequency();
  CVector out = state.amps();
  for (int n = 0; n <= state.n_max(); ++n)
    for (Level s1 : {Level::g, Level::e})
      for (Level s2 : {Level::g, Level::e}) {
        const double gen = n + (s1 == Level::e ? 0.5 : -0.5) + (s2 == Level::e ? 1.0 : -1.0);
        out(joint_index(n, s1, s2)) *= std::polar(1.0, sign * w * t * gen);
      }
  return JointKet(std::move(out));
}

/// sqrt(n + 1) lambda / |delta|; below 0.1 is conventionally a safe dispersive regime.
inline double dispersive_validity(const ModelParams& p, double lambda_dipole, int n) {
  if (p.delta == 0.0) throw ModelError("dispersive validity is undefined at delta = 0");
  if (n < 0) throw ModelError("photon index must be >= 0");
  return std::sqrt(n + 1.0) * std::abs(lambda_dipole) / std::abs(p.delta);
}

inline constexpr double kValidityThreshold = 0.1;

/// How the dipole coupling of atom 2 is obtained from lambda2 and delta.
enum class DipoleMapping {
  standard,  ///< lambda2 = lambda^2 / delta
  printed,   ///< lambda2 = lambda / delta
  explicit_value,
};

inline std::string to_string(DipoleMapping m) {
  switch (m) {
    case DipoleMapping::standard: return "standard (lambda2 = lambda^2/delta)";
    case DipoleMapping::printed: return "printed (lambda2 = lambda/delta)";
    case DipoleMapping::explicit_value: return "explicit lambda_dipole";
  }
  throw ModelError("unknown dipole mapping");
}

inline double dipole_coupling(const ModelParams& p, DipoleMapping m) {
  if (p.delta == 0.0) throw ModelError("dipole mapping is undefined at delta = 0");
  switch (m) {
    case DipoleMapping::standard:
      if (p.lambda2 * p.delta < 0.0)
        throw ModelError("standard mapping needs lambda2 and delta of equal sign");
      return std::sqrt(p.lambda2 * p.delta);
    case DipoleMapping::printed: return std::abs(p.lambda2 * p.delta);
    case DipoleMapping::explicit_value: break;
  }
  throw ModelError("explicit mapping carries its own lambda_dipole");
}

struct DispersiveComparison {
  DipoleMapping mapping;
  double lambda_dipole;
  double max_deviation;
  double mean_deviation;
  double max_leakage;  ///< population in the top two Fock levels of the exact run
  std::vector<double> zeta1_dispersive;
  std::vector<double> zeta1_exact;

  std::string describe() const {
    return "mapping: " + to_string(mapping) + ", lambda_dipole = " +
           std::to_string(lambda_dipole) + ", max |dzeta1| = " + std::to_string(max_deviation) +
           ", mean |dzeta1| = " + std::to_string(mean_deviation);
  }
};

namespace detail {

inline double top_fock_population(const CVector& psi, int n_max) {
  double pop = 0.0;
  for (int n = std::max(0, n_max - 1); n <= n_max; ++n)
    for (int k = 0; k < 4; ++k) pop += std::norm(psi(4 * n + k));
  return pop;
}

inline DispersiveComparison run_comparison(const ModelParams& p, DipoleMapping mapping,
                                           double lambda_dipole, const JointKet& init,
                                           const TimeGrid& grid) {
  p.validate();
  grid.validate();
  if (init.n_max() != p.n_max) throw ModelError("initial state truncation does not match n_max");
  if (p.delta != 0.0 && dispersive_validity(p, lambda_dipole, 0) >= 1.0)
    throw ModelError("dispersive validity ratio >= 1; comparison is meaningless");

  const Propagator dispersive(build_hamiltonian(HamiltonianKind::interaction_picture, p));
  const Propagator exact(build_hamiltonian(HamiltonianKind::exact_two_dipole, p, lambda_dipole));
  const std::array<Subsystem, 1> keep{Subsystem::atom1};

  DispersiveComparison r{mapping, lambda_dipole, 0.0, 0.0, 0.0, {}, {}};
  r.zeta1_dispersive.reserve(grid.size());
  r.zeta1_exact.reserve(grid.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double t = grid.at(k) / p.lambda1;
    const CVector psi_d = dispersive.apply(init.amps(), t);
    const CVector psi_e = exact.apply(init.amps(), t);
    const double leak = top_fock_population(psi_e, p.n_max);
    r.max_leakage = std::max(r.max_leakage, leak);
    if (leak > p.tol)
      throw TruncationError("exact-model population in the top Fock levels reached " +
                            std::to_string(leak));
    const double zd = purity_deficit(reduce(psi_d, p.n_max, keep), p.tol);
    const double ze = purity_deficit(reduce(psi_e, p.n_max, keep), p.tol);
    r.zeta1_dispersive.push_back(zd);
    r.zeta1_exact.push_back(ze);
    const double dev = std::abs(zd - ze);
    r.max_deviation = std::max(r.max_deviation, dev);
    sum += dev;
  }
  r.mean_deviation = sum / static_cast<double>(grid.size());
  return r;
}

}  // namespace detail

/**
 * Propagates `init` under the dispersive interaction-picture Hamiltonian and
 * the exact two-dipole Hamiltonian (same rotating frame) and compares the
 * atom-1 purity deficit over `grid` (scaled time).
 */
inline DispersiveComparison compare_dispersive_vs_exact(const ModelParams& p,
                                                        double lambda_dipole,
                                                        const JointKet& init,
                                                        const TimeGrid& grid) {
  return detail::run_comparison(p, DipoleMapping::explicit_value, lambda_dipole, init, grid);
}

inline DispersiveComparison compare_dispersive_vs_exact(const ModelParams& p,
                                                        DipoleMapping mapping,
                                                        const JointKet& init,
                                                        const TimeGrid& grid) {
  return detail::run_comparison(p, mapping, dipole_coupling(p, mapping), init, grid);
}

}  // namespace cavity
