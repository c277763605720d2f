#pragma once
/**
 * @file cli.hpp
 * @brief Command-line front end: flag parsing into RunConfig and dataset emission.
 *
 * Exit codes: 0 success, 2 configuration error, 3 numeric failure.
 */

#include "cavity/analytic.hpp"
#include "cavity/core.hpp"
#include "cavity/numeric.hpp"
#include "cavity/sweep.hpp"
#include "cavity/time_grid.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace cavity::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown by parse_config for --help; carries the rendered help text.
class HelpRequested : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class Command { purity, inversion, compare, validity, figure };

enum class SourceChoice { automatic, analytic, numeric };

/// Figure-1 parameters: lambda1 = 1, lambda2 = 0.2, resonant cavity frame.
inline ModelParams default_params() {
  ModelParams p;
  p.lambda1 = 1.0;
  p.lambda2 = 0.2;
  return p;
}

struct RunConfig {
  Command command = Command::purity;
  ModelParams params = default_params();
  ProductInit init{FieldState::vacuum(15), QubitState::excited(), QubitState::plus()};
  TimeGrid grid{};
  SourceChoice source = SourceChoice::automatic;
  std::optional<double> lambda_dipole;
  DipoleMapping mapping = DipoleMapping::standard;
  bool exact_dipole = false;  ///< compare: dispersive vs exact two-dipole instead of analytic vs numeric
  int photon_index = 0;       ///< validity: n in sqrt(n + 1) lambda / |delta|
  int figure = 1;
  std::string output = "-";
  int precision = 12;
};

namespace detail {

inline Complex parse_amplitude(const std::string& token, const std::string& flag) {
  const auto colon = token.find(':');
  try {
    std::size_t used = 0;
    const std::string re = token.substr(0, colon);
    const double real = std::stod(re, &used);
    if (used != re.size()) throw std::invalid_argument(re);
    double imag = 0.0;
    if (colon != std::string::npos) {
      const std::string im = token.substr(colon + 1);
      imag = std::stod(im, &used);
      if (used != im.size()) throw std::invalid_argument(im);
    }
    return {real, imag};
  } catch (const std::logic_error&) {
    throw ConfigError(flag + ": malformed amplitude '" + token + "' (expected re or re:im)");
  }
}

inline std::vector<Complex> parse_amplitudes(const std::string& text, const std::string& flag) {
  std::vector<Complex> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_amplitude(item, flag));
  if (out.empty()) throw ConfigError(flag + ": empty amplitude list");
  return out;
}

inline QubitState parse_atom(const std::string& text, const std::string& flag) {
  if (text == "g") return QubitState::ground();
  if (text == "e") return QubitState::excited();
  if (text == "plus") return QubitState::plus();
  const auto amps = parse_amplitudes(text, flag);
  if (amps.size() != 2) throw ConfigError(flag + ": expected g, e, plus or two amplitudes a,b");
  try {
    return {amps[0], amps[1]};
  } catch (const ModelError& e) {
    throw ConfigError(flag + ": " + e.what());
  }
}

inline FieldState parse_field(const std::string& text, int n_max, const std::string& flag) {
  try {
    if (text == "vacuum") return FieldState::vacuum(n_max);
    if (text.rfind("fock:", 0) == 0) {
      std::size_t used = 0;
      const std::string num = text.substr(5);
      int n = 0;
      try {
        n = std::stoi(num, &used);
      } catch (const std::logic_error&) {
        used = 0;
      }
      if (used == 0 || used != num.size())
        throw ConfigError(flag + ": malformed Fock index '" + num + "'");
      return FieldState::fock(n, n_max);
    }
    const auto amps = parse_amplitudes(text, flag);
    if (static_cast<int>(amps.size()) > n_max + 1)
      throw ConfigError(flag + ": more amplitudes than n_max + 1");
    CVector v = CVector::Zero(n_max + 1);
    for (std::size_t k = 0; k < amps.size(); ++k) v(static_cast<Eigen::Index>(k)) = amps[k];
    return FieldState(std::move(v));
  } catch (const ModelError& e) {
    throw ConfigError(flag + ": " + e.what());
  }
}

}  // namespace detail

/**
 * Parses a token list (without the program name). Throws ConfigError with a
 * message naming the offending flag, or HelpRequested.
 */
inline RunConfig parse_config(const std::vector<std::string>& argv) {
  CLI::App app{"Two atoms in a single-mode cavity: one resonant, one dispersive", "cavity_sim"};
  app.require_subcommand(1, 1);

  struct Raw {
    double lambda1 = 1.0;
    std::optional<double> lambda2;
    double delta = 0.0;
    std::optional<double> omega, omega2;
    int n_max = 15;
    double tol = 1e-10;
    std::string field = "vacuum", atom1 = "e", atom2 = "plus";
    double t_end = 20.0;
    int steps = 2001;
    std::string source = "auto";
    std::optional<double> lambda_dipole;
    std::string mapping = "standard";
    bool exact = false;
    int n = 0;
    int figure = 0;
    std::string output = "-";
    int precision = 12;
  } raw;

  const auto add_output = [&](CLI::App* sub) {
    sub->add_option("--t-end", raw.t_end, "end of the scaled-time grid lambda1 t");
    sub->add_option("--steps", raw.steps, "number of grid points (>= 2)");
    sub->add_option("-o,--output", raw.output, "output file, '-' for stdout");
    sub->add_option("--precision", raw.precision, "decimal digits in CSV output");
  };
  const auto add_model = [&](CLI::App* sub) {
    sub->add_option("--lambda1", raw.lambda1, "resonant coupling (> 0)");
    sub->add_option("--lambda2", raw.lambda2, "dispersive rate (>= 0)");
    sub->add_option("--delta", raw.delta, "atom-2 detuning omega2 - omega");
    sub->add_option("--omega", raw.omega, "cavity frequency");
    sub->add_option("--omega2", raw.omega2, "atom-2 frequency");
    sub->add_option("--n-max", raw.n_max, "Fock truncation (>= 1)");
    sub->add_option("--tol", raw.tol, "numeric tolerance (> 0)");
  };
  const auto add_state = [&](CLI::App* sub) {
    sub->add_option("--field", raw.field, "vacuum | fock:N | comma list of re[:im]");
    sub->add_option("--atom1", raw.atom1, "g | e | plus | a,b");
    sub->add_option("--atom2", raw.atom2, "g | e | plus | a,b");
  };

  auto* purity = app.add_subcommand("purity", "purity deficits 1 - Tr rho^2 over time");
  auto* inversion = app.add_subcommand("inversion", "atomic inversions over time");
  auto* compare = app.add_subcommand("compare", "closed form vs brute-force propagation");
  auto* validity = app.add_subcommand("validity", "dispersive validity ratio");
  auto* figure = app.add_subcommand("figure", "reproduce a figure dataset (1 or 2)");

  for (auto* sub : {purity, inversion, compare}) {
    add_model(sub);
    add_state(sub);
    add_output(sub);
  }
  for (auto* sub : {purity, inversion})
    sub->add_option("--source", raw.source, "auto | analytic | numeric");
  compare->add_flag("--exact-dipole", raw.exact, "dispersive model vs exact two-dipole model");
  compare->add_option("--mapping", raw.mapping, "standard | printed (with --exact-dipole)");
  compare->add_option("--lambda-dipole", raw.lambda_dipole, "explicit dipole coupling");

  add_model(validity);
  validity->add_option("--lambda-dipole", raw.lambda_dipole, "dipole coupling of atom 2")
      ->required();
  validity->add_option("--n", raw.n, "photon number");

  figure->add_option("number", raw.figure, "figure number")->required();
  add_output(figure);

  std::vector<std::string> reversed(argv.rbegin(), argv.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    for (const auto* sub : {purity, inversion, compare, validity, figure})
      if (sub->parsed()) throw HelpRequested(sub->help());
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig cfg;
  if (purity->parsed()) cfg.command = Command::purity;
  else if (inversion->parsed()) cfg.command = Command::inversion;
  else if (compare->parsed()) cfg.command = Command::compare;
  else if (validity->parsed()) cfg.command = Command::validity;
  else cfg.command = Command::figure;

  if (!(raw.lambda1 > 0.0)) throw ConfigError("--lambda1: must be > 0");
  if (raw.lambda2 && !(*raw.lambda2 >= 0.0)) throw ConfigError("--lambda2: must be >= 0");
  if (raw.n_max < 1) throw ConfigError("--n-max: must be >= 1");
  if (!(raw.tol > 0.0)) throw ConfigError("--tol: must be > 0");
  if (!(raw.t_end > 0.0)) throw ConfigError("--t-end: must be > 0");
  if (raw.steps < 2) throw ConfigError("--steps: must be >= 2");
  if (raw.precision < 1 || raw.precision > 17) throw ConfigError("--precision: must be in 1..17");
  if (raw.n < 0) throw ConfigError("--n: must be >= 0");

  cfg.grid = TimeGrid{0.0, raw.t_end, static_cast<std::size_t>(raw.steps)};
  cfg.output = raw.output;
  cfg.precision = raw.precision;
  cfg.photon_index = raw.n;
  cfg.lambda_dipole = raw.lambda_dipole;
  cfg.exact_dipole = raw.exact;

  ModelParams& p = cfg.params;
  p.lambda1 = raw.lambda1;
  p.lambda2 = raw.lambda2.value_or(0.2);
  p.delta = raw.delta;
  p.n_max = raw.n_max;
  p.tol = raw.tol;
  p.omega = raw.omega;
  p.omega2 = raw.omega2;
  if (raw.omega && raw.omega2 && raw.delta == 0.0) p.delta = *raw.omega2 - *raw.omega;

  if (cfg.command == Command::figure) {
    if (raw.figure != 1 && raw.figure != 2) throw ConfigError("figure: number must be 1 or 2");
    cfg.figure = raw.figure;
    p = ModelParams{};
    p.lambda1 = 1.0;
    p.lambda2 = raw.figure == 1 ? 0.2 : 0.5;
  }

  try {
    p.validate();
  } catch (const ModelError& e) {
    throw ConfigError(std::string("--delta/--omega/--omega2: ") + e.what());
  }

  if (raw.source == "auto") cfg.source = SourceChoice::automatic;
  else if (raw.source == "analytic") cfg.source = SourceChoice::analytic;
  else if (raw.source == "numeric") cfg.source = SourceChoice::numeric;
  else throw ConfigError("--source: expected auto, analytic or numeric");

  if (raw.mapping == "standard") cfg.mapping = DipoleMapping::standard;
  else if (raw.mapping == "printed") cfg.mapping = DipoleMapping::printed;
  else throw ConfigError("--mapping: expected standard or printed");
  if (raw.lambda_dipole) cfg.mapping = DipoleMapping::explicit_value;

  cfg.init = ProductInit{detail::parse_field(raw.field, p.n_max, "--field"),
                         detail::parse_atom(raw.atom1, "--atom1"),
                         detail::parse_atom(raw.atom2, "--atom2")};
  return cfg;
}

/// Fixed-point rendering with no negative zero.
inline std::string format_fixed(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  std::string s(buf);
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

namespace detail {

class CsvWriter {
public:
  CsvWriter(std::ostream& out, int precision) : out_(out), precision_(precision) {}

  void header(std::initializer_list<const char*> names) {
    bool first = true;
    for (const char* n : names) {
      out_ << (first ? "" : ",") << n;
      first = false;
    }
    out_ << '\n';
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << format_fixed(v, precision_);
      first = false;
    }
    out_ << '\n';
  }

private:
  std::ostream& out_;
  int precision_;
};

inline Source resolve_source(SourceChoice choice, const Scenario& s) {
  switch (choice) {
    case SourceChoice::analytic: return Source::analytic;
    case SourceChoice::numeric: return Source::numeric;
    case SourceChoice::automatic: break;
  }
  return s.has_closed_form() ? Source::analytic : Source::numeric;
}

// zeta1 from the closed form when available, otherwise from the evolved analytic state.
inline std::vector<double> analytic_zeta1(const Scenario& s, const TimeGrid& grid) {
  if (s.has_closed_form()) return trace_purity(Source::analytic, Subsystem::atom1, grid, s).values;
  std::vector<double> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const JointKet psi = evolve_analytic(s.init, grid.at(k) / s.params.lambda1, s.params);
    out[k] = purity_deficit(partial_trace(psi, Subsystem::atom1, s.params.tol), s.params.tol);
  }
  return out;
}

inline void emit(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  CsvWriter csv(out, cfg.precision);
  const TimeGrid& grid = cfg.grid;
  const Scenario scenario{cfg.params, cfg.init};

  switch (cfg.command) {
    case Command::figure: {
      const Scenario fig = Scenario::vacuum_excited(cfg.params, QubitState::plus());
      const auto z1 = trace_purity(Source::analytic, Subsystem::atom1, grid, fig).values;
      const auto z2 = trace_purity(Source::analytic, Subsystem::atom2, grid, fig).values;
      csv.header({"t", "zeta1", "zeta2"});
      for (std::size_t k = 0; k < grid.size(); ++k) csv.row({grid.at(k), z1[k], z2[k]});
      return;
    }
    case Command::purity: {
      const Source src = resolve_source(cfg.source, scenario);
      const auto z1 = trace_purity(src, Subsystem::atom1, grid, scenario).values;
      const auto z2 = trace_purity(src, Subsystem::atom2, grid, scenario).values;
      const auto zf = trace_purity(src, Subsystem::field, grid, scenario).values;
      csv.header({"t", "zeta1", "zeta2", "zeta_field"});
      for (std::size_t k = 0; k < grid.size(); ++k) csv.row({grid.at(k), z1[k], z2[k], zf[k]});
      return;
    }
    case Command::inversion: {
      const Source src = resolve_source(cfg.source, scenario);
      const auto w1 = trace_inversion(src, grid, scenario, Subsystem::atom1);
      const auto w2 = trace_inversion(src, grid, scenario, Subsystem::atom2);
      csv.header({"t", "inversion1", "inversion2"});
      for (std::size_t k = 0; k < grid.size(); ++k) csv.row({grid.at(k), w1[k], w2[k]});
      return;
    }
    case Command::compare: {
      if (cfg.exact_dipole) {
        const JointKet init = cfg.init.ket();
        const DispersiveComparison r =
            cfg.lambda_dipole
                ? compare_dispersive_vs_exact(cfg.params, *cfg.lambda_dipole, init, grid)
                : compare_dispersive_vs_exact(cfg.params, cfg.mapping, init, grid);
        err << r.describe() << '\n';
        csv.header({"t", "zeta1_dispersive", "zeta1_exact", "delta"});
        for (std::size_t k = 0; k < grid.size(); ++k)
          csv.row({grid.at(k), r.zeta1_dispersive[k], r.zeta1_exact[k],
                   r.zeta1_dispersive[k] - r.zeta1_exact[k]});
        return;
      }
      const auto za = analytic_zeta1(scenario, grid);
      const auto zn = trace_purity(Source::numeric, Subsystem::atom1, grid, scenario).values;
      csv.header({"t", "zeta1_analytic", "zeta1_numeric", "delta"});
      for (std::size_t k = 0; k < grid.size(); ++k)
        csv.row({grid.at(k), za[k], zn[k], za[k] - zn[k]});
      return;
    }
    case Command::validity: {
      const double ratio =
          dispersive_validity(cfg.params, *cfg.lambda_dipole, cfg.photon_index);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6g", ratio);
      out << buf << ' ' << (ratio < kValidityThreshold ? "PASS" : "WARN") << '\n';
      return;
    }
  }
}

}  // namespace detail

/// Emits the dataset for `cfg` to its output target; returns an exit code.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    if (cfg.output == "-" || cfg.command == Command::validity) {
      detail::emit(cfg, out, err);
    } else {
      std::ostringstream buffer;
      detail::emit(cfg, buffer, err);
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) {
        err << "error: cannot open output file '" << cfg.output << "'\n";
        return kExitConfig;
      }
      file << buffer.str();
    }
    return kExitOk;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

/// parse_config + run, for main() and tests.
inline int main(const std::vector<std::string>& args, std::ostream& out = std::cout,
                std::ostream& err = std::cerr) {
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const HelpRequested& h) {
    out << h.what();
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return run(cfg, out, err);
}

}  // namespace cavity::cli
