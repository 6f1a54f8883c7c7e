#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "relfid/analytic.hpp"
#include "relfid/channels.hpp"
#include "relfid/heuristic.hpp"

namespace relfid {

using analytic::CurveSample;

enum class CurveSource { analytic, heuristic, certified };
std::string_view curve_source_name(CurveSource s);

/// Sampled F_R,min(f) curve, optionally backed by an exact evaluator.
class RelFidCurve {
 public:
  /// Samples must have strictly increasing f in (0, 1] and values in [0, 1].
  RelFidCurve(std::vector<CurveSample> samples, CurveSource source);

  /// Samples `fn` on `grid` and keeps `fn` for exact evaluation between
  /// grid points.
  static RelFidCurve from_function(const std::vector<double>& grid,
                                   std::function<double(double)> fn,
                                   CurveSource source = CurveSource::analytic);

  const std::vector<CurveSample>& samples() const { return samples_; }
  CurveSource source() const { return source_; }

  /// Value usable as a lower bound at f: the exact evaluator if present,
  /// otherwise the sample at the largest grid point <= f. Below the first
  /// grid point the continuity bound from that point is used.
  double lower_at(double f) const;

 private:
  std::vector<CurveSample> samples_;
  CurveSource source_;
  std::function<double(double)> exact_;
};

/// Heuristic F_R,min samples on `grid` (strictly increasing in (0, 1]),
/// searched from the largest f down with warm starts. A witness found at a
/// larger f is feasible at every smaller f, so values are running minima.
RelFidCurve heuristic_curve(const ChannelPair& pair, const std::vector<double>& grid,
                            const SearchConfig& cfg);

/// (1/f) (1 - (sqrt(1 - f' F_R,min(f')) + sqrt(1 - f) - sqrt(1 - f'))^2), in [0, 1].
double continuity_relfid_lower(double f, double f_prime, double frmin_f_prime);

struct Envelope {
  /// Lower bound on F_R,min(f).
  double relfid = 0.0;
  /// Matching lower bound on the output fidelity at input fidelity f.
  double output_fidelity = 0.0;
};
Envelope adaptivity_envelope(double fcon, double f);

/// max(0, 1 - N^2 (1 - F_con)).
double nuse_quadratic_bound(double fcon, int n);

/// (1 - sqrt(1 - F^2)) / 2.
double perr_lower(double fidelity);

struct NUseBound {
  int n = 1;
  double f_n_lower = 0.0;
  double p_err_lower = 0.0;
};

/// F_1 = curve(1) = F_con, F_n = F_{n-1} * curve(F_{n-1}) for n = 1..N.
std::vector<NUseBound> nuse_recursion(const RelFidCurve& curve, int n);

/// (C_a, C_b) for two parameter values of a one-parameter family.
using FamilyGenerator = std::function<ChannelPair(double, double)>;

/// Generator for the built-in families; the parameter is p, theta,
/// the measure-rotate angle, or the damping rate respectively.
FamilyGenerator parametrized_family(Family f);

struct QfiResult {
  double qfi1 = 0.0;
  double qfin_upper = 0.0;
  /// 1 / qfin_upper (infinite when the QFI vanishes).
  double qcrb_variance = 0.0;
  double dtheta = 0.0;
};

/// QFI_1 = 8 (1 - F_con(theta, theta + dtheta)) / dtheta^2 and the N-use
/// bound N^2 QFI_1. Throws NumericalError if halving dtheta changes QFI_1 by
/// more than 1%.
QfiResult qfi_bounds(const FamilyGenerator& family, double theta, double dtheta, int n,
                     const SearchConfig& cfg);

/// 8 (1 - F) / dtheta^2.
double qfi_from_fidelity(double fidelity, double dtheta);

enum class ScenarioLabel { constant_no_adaptivity, decays_to_zero, plateau_positive };
std::string_view scenario_name(ScenarioLabel s);

struct ScenarioResult {
  ScenarioLabel label = ScenarioLabel::plateau_positive;
  /// Largest sampled f with value below tol (decays_to_zero only).
  std::optional<double> f_threshold;
  /// True when the curve stays above tol down to its smallest f, which rules
  /// out perfect discrimination with finitely many uses.
  bool no_perfect_discrimination = false;
};

ScenarioResult classify_scenario(const RelFidCurve& curve, double fcon, double tol = 1e-3);

/// n log-spaced points from lo to hi inclusive.
std::vector<double> log_grid(int n, double lo, double hi);
/// n evenly spaced points hi/n, 2 hi/n, ..., hi.
std::vector<double> linear_grid(int n, double hi = 1.0);

/// CSV with header f,value,source.
void write_curve_csv(std::ostream& os, const RelFidCurve& curve);
/// CSV with header N,F_N_lower,p_err_lower.
void write_nuse_csv(std::ostream& os, const std::vector<NUseBound>& rows);

}  // namespace relfid
