#pragma once
/**
 * @file sweep.hpp
 * @brief Purity and inversion traces over time grids, and oscillation period
 * estimation.
 */

#include "cavity/analytic.hpp"
#include "cavity/core.hpp"
#include "cavity/numeric.hpp"
#include "cavity/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace cavity {

enum class Source { analytic, numeric };

inline std::string to_string(Source s) { return s == Source::analytic ? "analytic" : "numeric"; }

struct Scenario {
  ModelParams params;
  ProductInit init;

  /// Vacuum field, atom 1 excited: the start the closed forms are written for.
  bool has_closed_form() const {
    const double tol = params.tol;
    return init.field.n_max() == params.n_max && std::abs(std::abs(init.field.amp(0)) - 1.0) <= tol &&
           std::abs(init.atom1.amp_g()) <= tol;
  }

  /// Vacuum field, atom 1 excited, atom 2 in (a2|g> + b2|e>).
  static Scenario vacuum_excited(const ModelParams& p, const QubitState& atom2) {
    return {p, {FieldState::vacuum(p.n_max), QubitState::excited(), atom2}};
  }
};

struct PurityTrace {
  Subsystem subsystem;
  TimeGrid grid;
  std::vector<double> values;
};

namespace detail {

inline void require_closed_form(const Scenario& s) {
  if (!s.has_closed_form())
    throw ModelError("closed-form source needs vacuum field and excited atom 1");
}

// Reduced matrices along the grid from the numeric propagator.
template <typename Fn>
void for_each_numeric_state(const Scenario& s, const TimeGrid& grid, Fn&& fn) {
  const Propagator prop(build_hamiltonian(HamiltonianKind::interaction_picture, s.params));
  const CVector init = s.init.ket().amps();
  for (std::size_t k = 0; k < grid.size(); ++k)
    fn(k, prop.apply(init, grid.at(k) / s.params.lambda1));
}

}  // namespace detail

inline PurityTrace trace_purity(Source source, Subsystem subsystem, const TimeGrid& grid,
                                const Scenario& s) {
  s.params.validate();
  grid.validate();
  PurityTrace out{subsystem, grid, std::vector<double>(grid.size())};
  const auto& p = s.params;

  if (source == Source::analytic) {
    detail::require_closed_form(s);
    const Theta theta = Theta::of(p);
    const double a2 = std::abs(s.init.atom2.amp_g()), b2 = std::abs(s.init.atom2.amp_e());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid.at(k) / p.lambda1;
      switch (subsystem) {
        case Subsystem::atom1: out.values[k] = zeta1_closed(t, theta, p.lambda1); break;
        case Subsystem::atom2: out.values[k] = zeta2_closed(t, theta, a2, b2, p.lambda1); break;
        case Subsystem::field: out.values[k] = purity_deficit(rhof_closed(t, p), p.tol); break;
        default: throw ModelError("invalid subsystem id");
      }
    }
    return out;
  }

  const std::array<Subsystem, 1> keep{subsystem};
  detail::for_each_numeric_state(s, grid, [&](std::size_t k, const CVector& psi) {
    out.values[k] = purity_deficit(reduce(psi, p.n_max, keep), p.tol);
  });
  return out;
}

/// <sigma_z> (+-1 scale) of one atom along the grid.
inline std::vector<double> trace_inversion(Source source, const TimeGrid& grid, const Scenario& s,
                                           Subsystem atom = Subsystem::atom1) {
  s.params.validate();
  grid.validate();
  if (atom == Subsystem::field) throw ModelError("inversion is defined for atoms only");
  std::vector<double> out(grid.size());
  const auto& p = s.params;

  if (source == Source::analytic) {
    detail::require_closed_form(s);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const double t = grid.at(k) / p.lambda1;
      out[k] = atom == Subsystem::atom1 ? expectation_sigma_z(rho1_closed(t, p))
                                        : expectation_sigma_z(rho2_closed(t, s.init.atom2, p));
    }
    return out;
  }

  const std::array<Subsystem, 1> keep{atom};
  detail::for_each_numeric_state(s, grid, [&](std::size_t k, const CVector& psi) {
    const CMatrix rho = reduce(psi, p.n_max, keep);
    out[k] = rho(1, 1).real() - rho(0, 0).real();
  });
  return out;
}

/**
 * Mean spacing of successive local minima, each refined by a parabola
 * through its three neighbouring samples. Result is in grid units.
 */
inline double estimate_period(const std::vector<double>& values, const TimeGrid& grid) {
  grid.validate();
  if (values.size() != grid.size()) throw ModelError("trace length does not match grid");
  const double h = grid.spacing();
  std::vector<double> minima;
  for (std::size_t k = 1; k + 1 < values.size(); ++k) {
    const double left = values[k - 1], mid = values[k], right = values[k + 1];
    if (!(mid < left && mid <= right)) continue;
    const double curvature = left - 2.0 * mid + right;
    const double shift = curvature > 0.0 ? 0.5 * (left - right) / curvature : 0.0;
    minima.push_back(grid.at(k) + shift * h);
  }
  if (minima.size() < 2)
    throw NumericError("period estimate needs at least two minima, found " +
                       std::to_string(minima.size()));
  return (minima.back() - minima.front()) / static_cast<double>(minima.size() - 1);
}

}  // namespace cavity
