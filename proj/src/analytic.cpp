#include "relfid/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "relfid/errors.hpp"

namespace relfid::analytic {

namespace {

constexpr double kPi = std::numbers::pi;

void require_unit(const char* name, double v) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw ValidationError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

double pauli_relfid_min(double p, double f) {
  require_unit("p", p);
  require_unit("f", f);
  return std::sqrt(1.0 - p);
}

double unitary_relfid_min(double theta, double f) {
  require_unit("theta", theta);
  require_unit("f", f);
  if (f == 0.0) throw ValidationError("unitary_relfid_min is undefined at f = 0");
  const double angle = kPi * theta / 2.0 + std::acos(f);
  // Rounding of acos leaves a residue of order 1e-17 at the orthogonality point.
  if (angle >= kPi / 2.0 - 1e-12) return 0.0;
  return clamp01(std::cos(angle) / f);
}

double unitary_fcon(double theta) {
  require_unit("theta", theta);
  return clamp01(std::cos(kPi * theta / 2.0));
}

double unitary_fn_bound(double theta, int n) {
  require_unit("theta", theta);
  if (n < 1) throw ValidationError("number of uses must be positive");
  if (static_cast<double>(n) * theta >= 1.0) return 0.0;
  return clamp01(std::cos(n * kPi * theta / 2.0));
}

double eb_fcon(double delta_theta) {
  const double d = delta_theta;
  return clamp01(0.5 * std::sqrt(std::max(0.0, 2.0 + std::cos(2 * d) + std::cos(6 * d))));
}

double eb_relfid_min0(double delta_theta) {
  const double d = delta_theta;
  const double den = std::sqrt(2.0 + 2.0 * std::cos(2 * d) + std::cos(4 * d));
  return clamp01(std::abs(std::cos(d) + std::cos(3 * d)) / den);
}

double eb_fopt(double delta_theta) {
  const double d = delta_theta;
  const double s = std::abs(std::sin(d));
  const double den = s * std::sqrt(std::max(0.0, 4.0 + 2.0 * std::cos(2 * d) - 2.0 * std::cos(6 * d)));
  if (den == 0.0) return 0.0;
  return clamp01((1.0 - std::cos(2 * d) * std::cos(4 * d)) / den);
}

}  // namespace relfid::analytic
