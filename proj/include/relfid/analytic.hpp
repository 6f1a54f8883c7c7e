#pragma once

#include <vector>

namespace relfid::analytic {

/// One (input fidelity, value) sample of a relative-fidelity curve.
struct CurveSample {
  double f = 0.0;
  double value = 0.0;
};

/// Minimum relative fidelity of {id, Pauli-X with probability p}:
/// sqrt(1 - p), independent of the input fidelity.
double pauli_relfid_min(double p, double f);

/// Minimum relative fidelity of {id, X^theta} at input fidelity f:
/// max(0, cos(pi theta / 2 + arccos f) / f). Rejects f = 0.
double unitary_relfid_min(double theta, double f);

/// Minimum constant-input output fidelity of {id, X^theta}: cos(pi theta / 2).
double unitary_fcon(double theta);

/// N-use output fidelity lower bound cos(N pi theta / 2) for N < 1/theta,
/// zero otherwise.
double unitary_fn_bound(double theta, int n);

/// Measure-and-rotate pair at angles {0, dtheta}.
/// Constant-input minimum: 0.5 sqrt(2 + cos 2d + cos 6d).
double eb_fcon(double delta_theta);
/// f -> 0 limit of the minimum relative fidelity:
/// |cos d + cos 3d| / sqrt(2 + 2 cos 2d + cos 4d).
double eb_relfid_min0(double delta_theta);
/// Input fidelity of the pair that attains eb_relfid_min0; 0 at dtheta = 0.
double eb_fopt(double delta_theta);

/// Samples `fn(f)` on the given grid.
template <typename Fn>
std::vector<CurveSample> sample_curve(const std::vector<double>& grid, Fn&& fn) {
  std::vector<CurveSample> out;
  out.reserve(grid.size());
  for (double f : grid) out.push_back({f, fn(f)});
  return out;
}

}  // namespace relfid::analytic
