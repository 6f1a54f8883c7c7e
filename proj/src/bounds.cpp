#include "relfid/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>

#include "relfid/errors.hpp"

namespace relfid {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void require_fidelity(const char* name, double v) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw ValidationError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

}  // namespace

std::string_view curve_source_name(CurveSource s) {
  switch (s) {
    case CurveSource::analytic:
      return "analytic";
    case CurveSource::heuristic:
      return "heuristic";
    case CurveSource::certified:
      return "certified";
  }
  return "unknown";
}

RelFidCurve::RelFidCurve(std::vector<CurveSample> samples, CurveSource source)
    : samples_(std::move(samples)), source_(source) {
  if (samples_.empty()) throw ValidationError("curve needs at least one sample");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (!(s.f > 0.0 && s.f <= 1.0)) throw ValidationError("curve f values must lie in (0, 1]");
    require_fidelity("curve value", s.value);
    if (i > 0 && !(s.f > samples_[i - 1].f)) {
      throw ValidationError("curve f values must be strictly increasing");
    }
  }
}

RelFidCurve RelFidCurve::from_function(const std::vector<double>& grid,
                                       std::function<double(double)> fn, CurveSource source) {
  std::vector<CurveSample> samples;
  samples.reserve(grid.size());
  for (double f : grid) samples.push_back({f, fn(f)});
  RelFidCurve c(std::move(samples), source);
  c.exact_ = std::move(fn);
  return c;
}

double RelFidCurve::lower_at(double f) const {
  if (!(f > 0.0) || f > 1.0) throw ValidationError("curve evaluated outside (0, 1]");
  if (exact_) return clamp01(exact_(f));
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), f,
                                   [](double v, const CurveSample& s) { return v < s.f; });
  if (it == samples_.begin()) {
    const auto& first = samples_.front();
    return f == first.f ? first.value : continuity_relfid_lower(f, first.f, first.value);
  }
  return std::prev(it)->value;
}

RelFidCurve heuristic_curve(const ChannelPair& pair, const std::vector<double>& grid,
                            const SearchConfig& cfg) {
  std::vector<CurveSample> samples(grid.size());
  std::vector<StatePair> warm;
  double running = 1.0;
  for (std::size_t i = grid.size(); i-- > 0;) {
    const BoundValue b = relfid_min(pair, grid[i], cfg, warm);
    running = std::min(running, b.value);
    samples[i] = {grid[i], running};
    if (b.witness) warm.assign(1, *b.witness);
  }
  return RelFidCurve(std::move(samples), CurveSource::heuristic);
}

double continuity_relfid_lower(double f, double f_prime, double frmin_f_prime) {
  require_fidelity("frmin", frmin_f_prime);
  if (!(f > 0.0) || !(f <= f_prime) || f_prime > 1.0) {
    throw ValidationError("continuity bound needs 0 < f <= f' <= 1");
  }
  const double a = std::sqrt(std::max(0.0, 1.0 - f_prime * frmin_f_prime));
  const double b = std::sqrt(1.0 - f) - std::sqrt(1.0 - f_prime);
  return clamp01((1.0 - (a + b) * (a + b)) / f);
}

Envelope adaptivity_envelope(double fcon, double f) {
  require_fidelity("fcon", fcon);
  require_fidelity("f", f);
  if (f == 0.0) throw ValidationError("envelope undefined at f = 0");
  const double s = std::sqrt(1.0 - fcon) + std::sqrt(1.0 - f);
  const double out = std::max(0.0, 1.0 - s * s);
  return {clamp01(out / f), out};
}

double nuse_quadratic_bound(double fcon, int n) {
  require_fidelity("fcon", fcon);
  if (n < 1) throw ValidationError("number of uses must be positive");
  const double nn = static_cast<double>(n);
  return std::max(0.0, 1.0 - nn * nn * (1.0 - fcon));
}

double perr_lower(double fidelity) {
  require_fidelity("fidelity", fidelity);
  return 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - fidelity * fidelity)));
}

std::vector<NUseBound> nuse_recursion(const RelFidCurve& curve, int n) {
  if (n < 1) throw ValidationError("number of uses must be positive");
  std::vector<NUseBound> out;
  double fn = curve.lower_at(1.0);
  for (int k = 1; k <= n; ++k) {
    if (k > 1) fn = fn > 0.0 ? fn * curve.lower_at(fn) : 0.0;
    fn = clamp01(fn);
    out.push_back({k, fn, perr_lower(fn)});
  }
  return out;
}

FamilyGenerator parametrized_family(Family f) {
  switch (f) {
    case Family::pauli_x:
      return [](double a, double b) {
        const auto ca = make_family(pauli_x_spec(a)).c2;
        const auto cb = make_family(pauli_x_spec(b)).c2;
        return ChannelPair(ca, cb);
      };
    case Family::unitary_power_x:
      return [](double a, double b) {
        return ChannelPair(Channel::unitary(pauli_x_power(a)), Channel::unitary(pauli_x_power(b)));
      };
    case Family::eb_measure_rotate:
      return [](double a, double b) {
        return ChannelPair(eb_measure_rotate_channel(a), eb_measure_rotate_channel(b));
      };
    case Family::amplitude_damping:
      return [](double a, double b) {
        return ChannelPair(amplitude_damping_channel(a), amplitude_damping_channel(b));
      };
    case Family::raw_kraus:
      break;
  }
  throw ValidationError("family " + std::string(family_name(f)) + " has no scalar parameter");
}

double qfi_from_fidelity(double fidelity, double dtheta) {
  if (dtheta == 0.0) return 0.0;
  return 8.0 * (1.0 - fidelity) / (dtheta * dtheta);
}

QfiResult qfi_bounds(const FamilyGenerator& family, double theta, double dtheta, int n,
                     const SearchConfig& cfg) {
  if (n < 1) throw ValidationError("number of uses must be positive");
  if (!std::isfinite(theta) || !std::isfinite(dtheta) || dtheta < 0.0) {
    throw ValidationError("theta must be finite and dtheta non-negative");
  }
  QfiResult r;
  r.dtheta = dtheta;
  if (dtheta == 0.0) {
    r.qcrb_variance = std::numeric_limits<double>::infinity();
    return r;
  }
  // 1 - F is of order dtheta^2, so the fixed improvement threshold would stop
  // the searches long before 1 - F is resolved to relative accuracy.
  SearchConfig fine = cfg;
  fine.local_tol = 0.0;
  const auto at = [&](double step) {
    return qfi_from_fidelity(fcon_min(family(theta, theta + step), fine).value, step);
  };
  const double full = at(dtheta);
  const double half = at(0.5 * dtheta);
  const double scale = std::max({std::abs(full), std::abs(half), 1e-300});
  if (std::abs(full - half) > 0.01 * scale && std::max(full, half) > 1e-9) {
    throw NumericalError("dtheta " + std::to_string(dtheta) +
                         " too large: halving it changes QFI by more than 1%");
  }
  r.qfi1 = std::max(0.0, full);
  r.qfin_upper = static_cast<double>(n) * static_cast<double>(n) * r.qfi1;
  r.qcrb_variance = r.qfin_upper > 0.0 ? 1.0 / r.qfin_upper
                                       : std::numeric_limits<double>::infinity();
  return r;
}

std::string_view scenario_name(ScenarioLabel s) {
  switch (s) {
    case ScenarioLabel::constant_no_adaptivity:
      return "constant_no_adaptivity";
    case ScenarioLabel::decays_to_zero:
      return "decays_to_zero";
    case ScenarioLabel::plateau_positive:
      return "plateau_positive";
  }
  return "unknown";
}

ScenarioResult classify_scenario(const RelFidCurve& curve, double fcon, double tol) {
  const auto& s = curve.samples();
  if (s.size() < 8) throw ValidationError("classification needs at least 8 curve samples");
  ScenarioResult r;
  r.no_perfect_discrimination = s.front().value > tol;
  double max_dev = 0.0;
  for (const auto& p : s) max_dev = std::max(max_dev, std::abs(p.value - fcon));
  if (max_dev < tol) {
    r.label = ScenarioLabel::constant_no_adaptivity;
    return r;
  }
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    if (it->value < tol) {
      r.label = ScenarioLabel::decays_to_zero;
      r.f_threshold = it->f;
      return r;
    }
  }
  r.label = ScenarioLabel::plateau_positive;
  return r;
}

std::vector<double> log_grid(int n, double lo, double hi) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw ValidationError("log grid needs n >= 2, 0 < lo < hi");
  std::vector<double> g(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < n; ++i) g[i] = std::exp(a + (b - a) * i / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

std::vector<double> linear_grid(int n, double hi) {
  if (n < 1 || !(hi > 0.0)) throw ValidationError("linear grid needs n >= 1 and hi > 0");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = hi * (i + 1) / n;
  return g;
}

void write_curve_csv(std::ostream& os, const RelFidCurve& curve) {
  os << "f,value,source\n" << std::setprecision(10);
  for (const auto& s : curve.samples()) {
    os << s.f << ',' << s.value << ',' << curve_source_name(curve.source()) << '\n';
  }
}

void write_nuse_csv(std::ostream& os, const std::vector<NUseBound>& rows) {
  os << "N,F_N_lower,p_err_lower\n" << std::setprecision(10);
  for (const auto& r : rows) os << r.n << ',' << r.f_n_lower << ',' << r.p_err_lower << '\n';
}

}  // namespace relfid
