#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "relfid/quantum_core.hpp"

namespace relfid {

using Objective = std::function<double(const RealVector&)>;

struct LocalOptions {
  int max_iters = 400;
  /// Stop once two consecutive iterations improve by less than tol * (1 + |f|).
  double tol = 1e-12;
  /// Central-difference step for gradient estimates.
  double fd_step = 1e-6;
  /// Length of the first trial step.
  double step_init = 0.5;
};

struct LocalResult {
  RealVector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Central-difference gradient.
RealVector numeric_gradient(const Objective& f, const RealVector& x, double h);

/// Quasi-Newton (BFGS) descent with Armijo backtracking and finite-difference
/// gradients. Never returns a point worse than x0.
LocalResult bfgs_minimize(const Objective& f, RealVector x0, const LocalOptions& opts);

struct MultiStartResult {
  LocalResult best;
  /// Restart index that produced `best` (lowest index among ties).
  int best_restart = 0;
  /// Final value of every restart, in restart order.
  std::vector<double> values;
  /// True when at least two restarts ended within `agree_tol` of the best.
  bool agreed = false;
};

/// Runs `restarts` independent local searches from `init(rng)` where rng is
/// seeded from (seed, restart index). Restarts may run on worker threads; the
/// reduction (minimum value, then lowest restart index) does not depend on
/// scheduling. `extra_starts` are tried first and count as restarts.
MultiStartResult multistart_minimize(const Objective& f,
                                     const std::function<RealVector(std::mt19937_64&)>& init,
                                     int restarts, std::uint64_t seed, const LocalOptions& opts,
                                     double agree_tol,
                                     const std::vector<RealVector>& extra_starts = {});

/// Worker count: RELFID_THREADS if set and positive, else the hardware
/// concurrency, never more than `jobs`.
int worker_count(int jobs);

/// Calls fn(i) for i in [0, n) on up to worker_count(n) threads.
void parallel_for(int n, const std::function<void(int)>& fn);

std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream);

}  // namespace relfid
