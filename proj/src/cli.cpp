#include "relfid/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "CLI11.hpp"
#include "json.hpp"
#include "relfid/analytic.hpp"
#include "relfid/bounds.hpp"
#include "relfid/certify.hpp"
#include "relfid/errors.hpp"
#include "relfid/heuristic.hpp"
#include "relfid/io.hpp"
#include "relfid/protosim.hpp"

namespace relfid {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Common {
  std::string family;
  std::string spec_path;
  std::optional<double> p, theta, delta_theta, gamma1, gamma2;
  std::uint64_t seed = 42;
  int restarts = 32;
  int idler = -1;
  std::string out_path;
  std::string format = "csv";
  int grid_points = 64;
  double grid_min = 1e-3;
  std::string grid_kind = "log";
};

void add_family_options(CLI::App* sub, Common& c) {
  sub->add_option("--family", c.family, "pauli_x | unitary_power_x | eb_measure_rotate | amplitude_damping");
  sub->add_option("--spec", c.spec_path, "JSON channel spec file");
  sub->add_option("--p", c.p, "Pauli-X probability");
  sub->add_option("--theta", c.theta, "exponent of X^theta");
  sub->add_option("--delta-theta", c.delta_theta, "measure-rotate angle difference");
  sub->add_option("--gamma1", c.gamma1, "damping rate of C1");
  sub->add_option("--gamma2", c.gamma2, "damping rate of C2");
  sub->add_option("--idler", c.idler, "idler dimension (-1 = automatic)");
}

void add_search_options(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed)->capture_default_str();
  sub->add_option("--restarts", c.restarts)->capture_default_str()->check(CLI::PositiveNumber);
}

void add_output_options(CLI::App* sub, Common& c) {
  sub->add_option("--out", c.out_path, "output file (default stdout)");
  sub->add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
}

void add_grid_options(CLI::App* sub, Common& c) {
  sub->add_option("--grid-points", c.grid_points)->capture_default_str()->check(CLI::PositiveNumber);
  sub->add_option("--grid-min", c.grid_min)->capture_default_str();
  sub->add_option("--grid", c.grid_kind)->check(CLI::IsMember({"log", "linear"}))->capture_default_str();
}

double need(const std::optional<double>& v, const char* name) {
  if (!v) throw ValidationError(std::string("missing --") + name);
  return *v;
}

FamilySpec family_spec(const Common& c) {
  if (!c.spec_path.empty()) {
    if (!c.family.empty()) throw ValidationError("give either --spec or --family, not both");
    return load_family_spec(c.spec_path);
  }
  if (c.family.empty()) throw ValidationError("missing --family or --spec");
  switch (family_from_name(c.family)) {
    case Family::pauli_x:
      return pauli_x_spec(need(c.p, "p"));
    case Family::unitary_power_x:
      return unitary_power_x_spec(need(c.theta, "theta"));
    case Family::eb_measure_rotate:
      return eb_measure_rotate_spec(need(c.delta_theta, "delta-theta"));
    case Family::amplitude_damping:
      return amplitude_damping_spec(need(c.gamma1, "gamma1"), need(c.gamma2, "gamma2"));
    case Family::raw_kraus:
      break;
  }
  throw ValidationError("raw_kraus pairs must be given with --spec");
}

SearchConfig search_config(const Common& c) {
  SearchConfig cfg;
  cfg.seed = c.seed;
  cfg.restarts = c.restarts;
  cfg.idler_dim = c.idler;
  return cfg;
}

std::vector<double> grid_of(const Common& c) {
  if (!(c.grid_min > 0.0) || c.grid_min > 1.0) throw ValidationError("--grid-min must be in (0, 1]");
  if (c.grid_kind == "linear") return linear_grid(c.grid_points, 1.0);
  if (c.grid_points == 1) return {1.0};
  return log_grid(c.grid_points, c.grid_min, 1.0);
}

/// Closed-form F_R,min(f) where one is known.
std::optional<double> analytic_value(const FamilySpec& s, double f) {
  switch (s.family) {
    case Family::pauli_x:
      return analytic::pauli_relfid_min(s.param("p"), f);
    case Family::unitary_power_x:
      return analytic::unitary_relfid_min(s.param("theta"), f);
    case Family::eb_measure_rotate:
      if (f == 1.0) return analytic::eb_fcon(s.param("delta_theta"));
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string metadata(const Common& c, const FamilySpec* s, bool with_grid) {
  std::ostringstream os;
  os << "# seed=" << c.seed << " restarts=" << c.restarts;
  if (with_grid) os << " grid=" << c.grid_points << ":" << c.grid_kind << "[" << c.grid_min << ",1]";
  os << "\n";
  if (s) {
    os << "# family=" << family_name(s->family);
    for (const auto& [k, v] : s->params) os << " " << k << "=" << fmt(v);
    os << "\n";
  }
  return os.str();
}

/// Writes to the --out path via a temporary file and rename, or to `out`.
void emit(const Common& c, std::ostream& out, const std::string& text) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  const std::string tmp = c.out_path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw ValidationError("cannot write '" + c.out_path + "'");
    f << text;
    if (!f) throw ValidationError("cannot write '" + c.out_path + "'");
  }
  std::filesystem::rename(tmp, c.out_path);
}

nlohmann::json bound_json(const BoundValue& b) {
  return {{"value", b.value},
          {"kind", std::string(bound_kind_name(b.kind))},
          {"idler_dim", b.idler_dim},
          {"converged", b.converged}};
}

std::string scalar_output(const Common& c, const BoundValue& b) {
  if (c.format == "json") {
    auto j = bound_json(b);
    j["seed"] = c.seed;
    j["restarts"] = c.restarts;
    return j.dump(2) + "\n";
  }
  return fixed6(b.value) + "\n";
}

/// Delta-theta with F_con^EB = target, on the first monotone branch (0, pi/8].
double eb_delta_for_fcon(double target) {
  auto g = [&](double d) { return analytic::eb_fcon(d) - target; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(g, 1e-9, kPi / 8.0, tol, iters);
  return 0.5 * (r.first + r.second);
}

std::string figure2(const Common& c) {
  const double target = 0.95;
  const double p = 1.0 - target * target;
  const double theta = 2.0 / kPi * std::acos(target);
  const double delta = eb_delta_for_fcon(target);
  const auto grid = grid_of(c);
  SearchConfig cfg;
  cfg.seed = c.seed;
  cfg.restarts = c.restarts;
  const ChannelPair eb = make_family(eb_measure_rotate_spec(delta));
  const RelFidCurve eb_curve = heuristic_curve(eb, grid, cfg);

  std::ostringstream os;
  os << metadata(c, nullptr, true);
  os << "# fcon=" << target << " pauli_p=" << fmt(p) << " unitary_theta=" << fmt(theta)
     << " eb_delta_theta=" << fmt(delta) << "\n";
  os << "# pauli,unitary: closed form; eb: heuristic upper estimate, no idler; envelope: adaptivity lower bound\n";
  os << "f,pauli,unitary,eb,envelope\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double f = grid[i];
    os << fmt(f) << "," << fmt(analytic::pauli_relfid_min(p, f)) << ","
       << fmt(analytic::unitary_relfid_min(theta, f)) << "," << fmt(eb_curve.samples()[i].value) << ","
       << fmt(adaptivity_envelope(target, f).relfid) << "\n";
  }
  return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Relative-fidelity bounds for channel discrimination"};
  app.require_subcommand(1);
  Common c;
  double f = 0.5;
  int n = 2;
  int budget = 200;
  double dtheta = 1e-4;
  double qfi_theta = 0.0;
  double tol = 1e-3;
  int samples = 100000;
  int ancilla = 0;
  std::string kind = "adaptive";

  auto* fcon = app.add_subcommand("fcon", "minimum output fidelity for a common input");
  add_family_options(fcon, c);
  add_search_options(fcon, c);
  add_output_options(fcon, c);

  auto* relfid = app.add_subcommand("relfid-min", "heuristic F_R,min at one input fidelity");
  add_family_options(relfid, c);
  add_search_options(relfid, c);
  add_output_options(relfid, c);
  relfid->add_option("--f", f)->required();

  auto* curve = app.add_subcommand("curve", "F_R,min over a grid of input fidelities");
  add_family_options(curve, c);
  add_search_options(curve, c);
  add_output_options(curve, c);
  add_grid_options(curve, c);
  curve->add_option("--budget", budget, "certification iterations per point (0 = skip)")->default_val(0);

  auto* nuse = app.add_subcommand("nuse", "N-use recursion table");
  add_family_options(nuse, c);
  add_search_options(nuse, c);
  add_output_options(nuse, c);
  nuse->add_option("--n", n)->required()->check(CLI::PositiveNumber);

  auto* qfi = app.add_subcommand("qfi", "single-use QFI and N-use bound");
  qfi->add_option("--family", c.family, "pauli_x | unitary_power_x | eb_measure_rotate | amplitude_damping");
  qfi->add_option("--idler", c.idler, "idler dimension (-1 = automatic)");
  add_search_options(qfi, c);
  add_output_options(qfi, c);
  qfi->add_option("--at", qfi_theta, "family parameter value")->required();
  qfi->add_option("--dtheta", dtheta)->capture_default_str();
  qfi->add_option("--n", n)->capture_default_str()->check(CLI::PositiveNumber);

  auto* cert = app.add_subcommand("certify", "certified bounds on F_out,min at exact overlap f");
  add_family_options(cert, c);
  add_output_options(cert, c);
  cert->add_option("--seed", c.seed)->capture_default_str();
  cert->add_option("--f", f)->required();
  cert->add_option("--budget", budget)->capture_default_str();

  auto* proto = app.add_subcommand("protosim", "optimize an explicit N-use protocol");
  add_family_options(proto, c);
  add_search_options(proto, c);
  add_output_options(proto, c);
  proto->add_option("--kind", kind)->check(CLI::IsMember({"product", "parallel_entangled", "adaptive"}))
      ->capture_default_str();
  proto->add_option("--n", n)->capture_default_str()->check(CLI::Range(1, 3));
  proto->add_option("--ancilla", ancilla)->capture_default_str()->check(CLI::Range(0, 2));

  auto* classify = app.add_subcommand("classify", "scaling scenario of the F_R,min curve");
  add_family_options(classify, c);
  add_search_options(classify, c);
  add_output_options(classify, c);
  add_grid_options(classify, c);
  classify->add_option("--tol", tol)->capture_default_str();

  auto* concave = app.add_subcommand("concavity", "search for a concavity violation of F_R");
  add_family_options(concave, c);
  add_search_options(concave, c);
  add_output_options(concave, c);
  concave->add_option("--samples", samples)->capture_default_str()->check(CLI::PositiveNumber);

  auto* fig2 = app.add_subcommand("figure2", "three scaling scenarios at F_con = 0.95");
  add_search_options(fig2, c);
  add_grid_options(fig2, c);
  fig2->add_option("--out", c.out_path, "output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (fig2->parsed()) {
      emit(c, out, figure2(c));
      return kExitOk;
    }
    if (qfi->parsed()) {
      // The scanned parameter comes from --at, so only the family name is needed.
      if (c.family.empty()) throw ValidationError("qfi needs --family");
      SearchConfig qcfg;
      qcfg.seed = c.seed;
      qcfg.restarts = c.restarts;
      qcfg.idler_dim = c.idler;
      const QfiResult r = qfi_bounds(parametrized_family(family_from_name(c.family)), qfi_theta, dtheta, n, qcfg);
      std::ostringstream os;
      if (c.format == "json") {
        os << nlohmann::json{{"qfi1", r.qfi1}, {"qfiN_upper", r.qfin_upper}, {"N", n},
                             {"qcrb_variance", r.qcrb_variance}, {"dtheta", r.dtheta}}
                  .dump(2)
           << "\n";
      } else {
        os << "qfi1,qfiN_upper,N,qcrb_variance,dtheta\n"
           << fmt(r.qfi1) << "," << fmt(r.qfin_upper) << "," << n << "," << fmt(r.qcrb_variance) << ","
           << fmt(r.dtheta) << "\n";
      }
      emit(c, out, os.str());
      return kExitOk;
    }
    const FamilySpec spec = family_spec(c);
    const ChannelPair pair = make_family(spec);
    const SearchConfig cfg = search_config(c);

    if (fcon->parsed()) {
      emit(c, out, scalar_output(c, fcon_min(pair, cfg)));
    } else if (relfid->parsed()) {
      emit(c, out, scalar_output(c, relfid_min(pair, f, cfg)));
    } else if (curve->parsed()) {
      const auto grid = grid_of(c);
      const RelFidCurve h = heuristic_curve(pair, grid, cfg);
      const double fc = analytic_value(spec, 1.0).value_or(h.lower_at(1.0));
      std::ostringstream os;
      os << metadata(c, &spec, true);
      if (budget > 0) os << "# certify budget=" << budget << " (exact overlap f, no certificate at f=1)\n";
      os << "f,analytic,heuristic_upper,certified_lower,envelope\n";
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const auto a = analytic_value(spec, x);
        std::string cert_col;
        if (budget > 0 && x < 1.0) {
          CertifyOptions co;
          co.budget = budget;
          co.seed = c.seed;
          co.idler_dim = c.idler;
          cert_col = fmt(std::max(0.0, certify_lower_bound(pair, x, co).lower) / x);
        }
        os << fmt(x) << "," << (a ? fmt(*a) : "") << "," << fmt(h.samples()[i].value) << "," << cert_col
           << "," << fmt(adaptivity_envelope(fc, x).relfid) << "\n";
      }
      emit(c, out, os.str());
    } else if (nuse->parsed()) {
      const bool closed = spec.family == Family::pauli_x || spec.family == Family::unitary_power_x;
      const auto grid = log_grid(16, 1e-3, 1.0);
      const RelFidCurve rc =
          closed ? RelFidCurve::from_function(grid, [&](double x) { return *analytic_value(spec, x); })
                 : RelFidCurve::from_function(
                       grid, [&](double x) { return relfid_min(pair, std::max(x, cfg.fidelity_floor), cfg).value; },
                       CurveSource::heuristic);
      const auto rows = nuse_recursion(rc, n);
      std::ostringstream os;
      if (c.format == "json") {
        nlohmann::json j;
        j["curve"] = std::string(curve_source_name(rc.source()));
        for (const auto& r : rows) {
          j["rows"].push_back({{"N", r.n}, {"F_N_lower", r.f_n_lower}, {"p_err_lower", r.p_err_lower},
                               {"quadratic", nuse_quadratic_bound(rc.lower_at(1.0), r.n)}});
        }
        os << j.dump(2) << "\n";
      } else {
        os << metadata(c, &spec, false) << "# curve=" << curve_source_name(rc.source()) << "\n";
        write_nuse_csv(os, rows);
      }
      emit(c, out, os.str());
    } else if (cert->parsed()) {
      CertifyOptions co;
      co.budget = budget;
      co.seed = c.seed;
      co.idler_dim = c.idler;
      const CertifyResult r = certify_lower_bound(pair, f, co);
      std::ostringstream os;
      write_trace_json(os, r, f);
      os << "\n";
      emit(c, out, os.str());
    } else if (proto->parsed()) {
      const ProtocolResult r = optimize_protocol(protocol_kind_from_name(kind), n, pair, cfg, ancilla);
      std::ostringstream os;
      if (c.format == "json") {
        nlohmann::json j{{"fidelity", r.fidelity},
                         {"perr_lower", perr_lower(r.fidelity)},
                         {"converged", r.converged},
                         {"witness", nlohmann::json::parse(protocol_spec_to_json(r.witness))}};
        os << j.dump(2) << "\n";
      } else {
        os << metadata(c, &spec, false) << "kind,N,ancilla_qubits,F_N,converged\n"
           << kind << "," << n << "," << ancilla << "," << fmt(r.fidelity) << "," << (r.converged ? 1 : 0)
           << "\n";
      }
      emit(c, out, os.str());
    } else if (classify->parsed()) {
      const auto grid = grid_of(c);
      const RelFidCurve h = heuristic_curve(pair, grid, cfg);
      const ScenarioResult s = classify_scenario(h, h.lower_at(1.0), tol);
      std::ostringstream os;
      if (c.format == "json") {
        nlohmann::json j{{"label", std::string(scenario_name(s.label))},
                         {"no_perfect_discrimination", s.no_perfect_discrimination}};
        j["f_threshold"] = s.f_threshold ? nlohmann::json(*s.f_threshold) : nlohmann::json(nullptr);
        os << j.dump(2) << "\n";
      } else {
        os << scenario_name(s.label);
        if (s.f_threshold) os << " f_T=" << fixed6(*s.f_threshold);
        os << "\n";
      }
      emit(c, out, os.str());
    } else if (concave->parsed()) {
      const auto w = concavity_counterexample(pair, cfg, samples);
      std::ostringstream os;
      nlohmann::json j{{"found", w.has_value()}, {"samples", samples}, {"seed", c.seed}};
      if (w) {
        j["violation"] = w->violation;
        j["lambda"] = w->lambda;
      }
      if (c.format == "json") {
        os << j.dump(2) << "\n";
      } else if (w) {
        os << "violation " << fmt(w->violation) << " lambda " << fmt(w->lambda) << "\n";
      } else {
        os << "no violation found\n";
      }
      emit(c, out, os.str());
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace relfid
