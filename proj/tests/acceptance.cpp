// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "cavity/cavity.hpp"
#include "cavity/cli.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace cavity;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  std::string id;
  std::string title;
  std::function<Outcome()> check;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

ModelParams vacuum_params(double lambda2, int n_max = 15) {
  ModelParams p;
  p.lambda1 = 1.0;
  p.lambda2 = lambda2;
  p.n_max = n_max;
  return p;
}

Scenario fig_scenario(double theta) {
  return Scenario::vacuum_excited(vacuum_params(2.0 * theta), QubitState::plus());
}

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double gap = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) gap = std::max(gap, std::abs(a[k] - b[k]));
  return gap;
}

const TimeGrid kFigureGrid{0.0, 20.0, 2001};

Outcome oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double theta : {0.0, 0.1, 0.25}) {
    const Scenario s = fig_scenario(theta);
    for (Subsystem sub : {Subsystem::atom1, Subsystem::atom2}) {
      const auto a = trace_purity(Source::analytic, sub, kFigureGrid, s).values;
      const auto n = trace_purity(Source::numeric, sub, kFigureGrid, s).values;
      worst = std::max(worst, max_gap(a, n));
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {worst < 1e-9 && seconds < 5.0,
          fmt("max |zeta_analytic - zeta_numeric| = %.3e (< 1e-9), runtime %.2f s (< 5 s)", worst, seconds)};
}

Outcome closed_form_peaks() {
  const double z1 = max_of(trace_purity(Source::analytic, Subsystem::atom1, kFigureGrid, fig_scenario(0.1)).values);
  const double z2a = max_of(trace_purity(Source::analytic, Subsystem::atom2, kFigureGrid, fig_scenario(0.1)).values);
  const double z2b = max_of(trace_purity(Source::analytic, Subsystem::atom2, kFigureGrid, fig_scenario(0.25)).values);
  const bool ok = std::abs(z1 - 0.5) <= 1e-3 && std::abs(z2a - 0.019606) <= 1e-4 &&
                  std::abs(z2b - 0.110727) <= 1e-4;
  return {ok, fmt("peak zeta1(0.1) = %.6f, peak zeta2(0.1) = %.6f, peak zeta2(0.25) = %.6f", z1, z2a, z2b)};
}

Outcome frequency_shift() {
  std::vector<double> periods;
  bool ok = true;
  std::string detail;
  for (double theta : {0.0, 0.1, 0.25}) {
    const Scenario s = fig_scenario(theta);
    const double period = estimate_period(trace_inversion(Source::analytic, kFigureGrid, s), kFigureGrid);
    const double expected = M_PI / rabi_frequency(1, s.params);
    const double rel = std::abs(period - expected) / expected;
    ok = ok && rel < 0.01;
    if (!periods.empty()) ok = ok && period < periods.back();
    periods.push_back(period);
    detail += fmt("Theta=%.2f period %.5f vs pi/Delta1 %.5f; ", theta, period, expected);
  }
  ok = ok && std::abs(periods.front() - M_PI) / M_PI < 0.01;
  return {ok, detail + "strictly decreasing"};
}

Outcome dispersive_validity_check() {
  ModelParams p = vacuum_params(0.2);
  p.delta = 50.0;
  const JointKet init = product_state(FieldState::vacuum(p.n_max), QubitState::excited(), QubitState::plus());
  const auto r = compare_dispersive_vs_exact(p, DipoleMapping::standard, init, TimeGrid{0.0, 4.0 * M_PI, 2001});
  const double ratio = dispersive_validity(p, r.lambda_dipole, 0);
  return {r.max_deviation < 0.1 && r.max_leakage < 1e-8,
          r.describe() + fmt(", validity ratio %.4f, top-level leakage %.1e", ratio, r.max_leakage)};
}

Outcome figure_shapes() {
  const TimeGrid two_periods{0.0, 2.0 * M_PI, 2001};
  const auto weak = trace_purity(Source::analytic, Subsystem::atom1, two_periods, fig_scenario(0.1)).values;
  const auto bare = trace_purity(Source::analytic, Subsystem::atom1, two_periods, fig_scenario(0.0)).values;
  const double dev = max_gap(weak, bare);
  const double z2_weak = max_of(trace_purity(Source::analytic, Subsystem::atom2, kFigureGrid, fig_scenario(0.1)).values);
  const double z2_strong = max_of(trace_purity(Source::analytic, Subsystem::atom2, kFigureGrid, fig_scenario(0.25)).values);
  return {dev < 0.08 && z2_strong >= 5.0 * z2_weak,
          fmt("max |zeta1(0.1) - zeta1(0)| = %.4f (< 0.08); max zeta2 ratio = %.3f (>= 5)", dev, z2_strong / z2_weak)};
}

Outcome property_suites() {
  constexpr int kSeeds = 100;
  const int n_max = 10;
  double norm_err = 0.0, herm_err = 0.0, trace_err = 0.0, min_eig = 0.0, comp_err = 0.0,
         exc_err = 0.0, compose_err = 0.0;

  CMatrix excitations = CMatrix::Zero(4 * (n_max + 1), 4 * (n_max + 1));
  for (int n = 0; n <= n_max; ++n)
    for (Level s1 : {Level::g, Level::e})
      for (Level s2 : {Level::g, Level::e}) {
        const auto k = joint_index(n, s1, s2);
        excitations(k, k) = n + (s1 == Level::e ? 1.0 : 0.0);
      }

  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(1000 + seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    ModelParams p = vacuum_params(unit(rng), n_max);
    p.delta = 10.0 * (unit(rng) - 0.5);
    ProductInit init = fixtures::random_init(rng, n_max, n_max - 2);
    const Propagator prop(build_hamiltonian(HamiltonianKind::interaction_picture, p));
    const double t1 = 10.0 * unit(rng), t2 = 10.0 * unit(rng);

    const JointKet analytic = evolve_analytic(init, t1, p);
    const JointKet numeric = prop(init.ket(), t1);
    norm_err = std::max({norm_err, std::abs(analytic.amps().norm() - 1.0), std::abs(numeric.amps().norm() - 1.0)});

    for (Subsystem s : {Subsystem::field, Subsystem::atom1, Subsystem::atom2}) {
      const std::array<Subsystem, 1> keep{s};
      const CMatrix rho = reduce(numeric.amps(), n_max, keep);
      herm_err = std::max(herm_err, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
      trace_err = std::max(trace_err, std::abs(rho.trace() - 1.0));
      Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
      min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }

    const double n0 = init.ket().amps().dot(excitations * init.ket().amps()).real();
    exc_err = std::max(exc_err, std::abs(numeric.amps().dot(excitations * numeric.amps()).real() - n0));

    const CVector once = prop.apply(init.ket().amps(), t1 + t2);
    const CVector twice = prop.apply(prop.apply(init.ket().amps(), t1), t2);
    compose_err = std::max(compose_err, (once - twice).cwiseAbs().maxCoeff());

    const ProductInit eigen_start{init.field, init.atom1,
                                  seed % 2 ? QubitState::excited() : QubitState::ground()};
    const JointKet psi = evolve_analytic(eigen_start, t1, p);
    comp_err = std::max(comp_err, std::abs(purity_deficit(partial_trace(psi, Subsystem::atom1)) -
                                           purity_deficit(partial_trace(psi, Subsystem::field))));
  }
  const bool ok = norm_err < 1e-12 && herm_err < 1e-10 && trace_err < 1e-10 && min_eig > -1e-10 &&
                  comp_err < 1e-10 && exc_err < 1e-10 && compose_err < 1e-10;
  std::ostringstream d;
  d << kSeeds << " seeds: norm " << norm_err << ", hermiticity " << herm_err << ", trace " << trace_err
    << ", min eigenvalue " << min_eig << ", complementarity " << comp_err << ", excitations " << exc_err
    << ", composition " << compose_err;
  return {ok, d.str()};
}

std::string run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  cli::main(args, out, err);
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome golden_files() {
  bool ok = true;
  std::string detail;
  for (const char* number : {"1", "2"}) {
    const std::string first = run_cli({"figure", number});
    const std::string second = run_cli({"figure", number});
    const std::string golden = read_file(std::string(CAVITY_GOLDEN_DIR) + "/figure" + number + ".csv");
    const bool same = first == second, match = !golden.empty() && first == golden;
    ok = ok && same && match;
    detail += std::string("figure ") + number + (same ? " deterministic" : " NON-deterministic") +
              (match ? ", matches golden; " : ", differs from golden; ");
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"A1", "oracle equivalence", oracle_equivalence},
      {"A2", "closed-form peaks", closed_form_peaks},
      {"A3", "frequency shift", frequency_shift},
      {"A4", "dispersive validity", dispersive_validity_check},
      {"A5", "figure shape claims", figure_shapes},
      {"A6", "property suites", property_suites},
      {"A7", "CLI golden files", golden_files},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o{false, ""};
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] %s %s: %s\n", o.pass ? "PASS" : "FAIL", c.id.c_str(), c.title.c_str(), o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
