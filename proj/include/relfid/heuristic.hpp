#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "relfid/analytic.hpp"
#include "relfid/channels.hpp"
#include "relfid/optimize.hpp"
#include "relfid/quantum_core.hpp"

namespace relfid {

struct SearchConfig {
  int restarts = 32;
  int max_iters = 400;
  std::uint64_t seed = 42;
  /// Length of the first step of each local search.
  double step_init = 0.5;
  /// A local search stops after two steps improving by less than
  /// local_tol * (1 + |value|).
  double local_tol = 1e-12;
  /// Restarts ending within `tol` of the best count as agreeing; also the
  /// minimum violation reported by the concavity search.
  double tol = 1e-6;
  /// Smallest input fidelity handed to the relative-fidelity ratio.
  double fidelity_floor = 1e-3;
  /// Idler dimension; -1 picks 1 for verified entanglement-breaking pairs and
  /// the input dimension otherwise.
  int idler_dim = -1;
};

struct StatePair {
  DensityMatrix s1;
  DensityMatrix s2;
};

enum class BoundKind { heuristic_upper, certified_lower, analytic };
std::string_view bound_kind_name(BoundKind k);

struct BoundValue {
  double value = 0.0;
  BoundKind kind = BoundKind::heuristic_upper;
  std::optional<StatePair> witness;
  /// Idler dimension the witness lives on (states have dim idler * d).
  int idler_dim = 1;
  /// False when fewer than two restarts agreed on the optimum.
  bool converged = true;
};

int resolve_idler_dim(const ChannelPair& pair, const SearchConfig& cfg);

/// Parametrization of pure pairs (psi1, psi2) in C^dim with |<psi1|psi2>| = c.
/// Coordinates are (x, y, t): psi1 = x / |x|, chi is the part of y orthogonal
/// to psi1, and psi2 = c psi1 + sqrt(1 - c^2) chi. With `exact` the overlap is
/// pinned to c = f and t is absent; otherwise c = f + (1 - f) sin^2 t covers
/// every overlap in [f, 1].
struct PairChart {
  int dim = 2;
  double f = 1.0;
  bool exact = false;

  int num_params() const { return 4 * dim + (exact ? 0 : 1); }
  double overlap(const RealVector& v) const;
  std::pair<ComplexVector, ComplexVector> states(const RealVector& v) const;
  RealVector encode(const ComplexVector& a, const ComplexVector& b) const;
  RealVector random_point(std::mt19937_64& rng) const;
};

/// Unit vector in C^n from 2n real coordinates (real parts, then imaginary).
ComplexVector unit_vector(const RealVector& x, Eigen::Index offset, Eigen::Index n);
RealVector real_coords(const ComplexVector& v);

/// Dominant eigenvector of a (near) rank-one state.
ComplexVector dominant_vector(const DensityMatrix& rho);

/// F_out(s1, s2) / F(s1, s2) for a witness on the given idler.
double relative_fidelity(const ChannelPair& pair, const StatePair& w, int idler_dim);

/// Heuristic (upper) bound on min_sigma F_out(sigma, sigma).
BoundValue fcon_min(const ChannelPair& pair, const SearchConfig& cfg);

/// Heuristic bound on F_R,min(f) = min F_out / F over pure pairs with F >= f.
/// `warm` witnesses (for example the F_con witness or a neighbouring grid
/// point) seed the first restarts.
BoundValue relfid_min(const ChannelPair& pair, double f, const SearchConfig& cfg,
                      const std::vector<StatePair>& warm = {});

/// Heuristic bound on min F_out over pure pairs with overlap exactly f.
BoundValue output_fidelity_min(const ChannelPair& pair, double f, const SearchConfig& cfg,
                               const std::vector<StatePair>& warm = {});

struct UnconstrainedEstimate {
  /// Extrapolated f -> 0 value; the witness is the pair found at the
  /// smallest grid point.
  BoundValue value;
  std::vector<analytic::CurveSample> grid;
  bool monotone = true;
};

/// F_R,min(0) from the grid f = 1e-1, 1e-2, 1e-3 with linear extrapolation
/// of the last two points.
UnconstrainedEstimate relfid_min_unconstrained(const ChannelPair& pair, const SearchConfig& cfg);

struct ConcavityWitness {
  StatePair a;
  StatePair b;
  double lambda = 0.0;
  /// lambda F_R(a) + (1 - lambda) F_R(b) - F_R(lambda a + (1 - lambda) b).
  double violation = 0.0;
};

/// F_R of a mixed pair on the bare system (no idler).
double system_relative_fidelity(const ChannelPair& pair, const StatePair& w);

/// Random search for a violation of concavity of F_R over state pairs.
/// Returns the largest violation found if it exceeds cfg.tol.
std::optional<ConcavityWitness> concavity_counterexample(const ChannelPair& pair,
                                                         const SearchConfig& cfg,
                                                         int samples = 100000);

}  // namespace relfid
