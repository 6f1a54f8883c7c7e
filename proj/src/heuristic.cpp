#include "relfid/heuristic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "relfid/errors.hpp"

namespace relfid {

namespace {

LocalOptions local_options(const SearchConfig& cfg) {
  LocalOptions o;
  o.max_iters = cfg.max_iters;
  o.step_init = cfg.step_init;
  o.tol = cfg.local_tol;
  return o;
}

void check_config(const SearchConfig& cfg) {
  if (cfg.restarts < 1 || cfg.max_iters < 1) {
    throw ValidationError("restarts and max_iters must be positive");
  }
  if (!(cfg.fidelity_floor > 0.0 && cfg.fidelity_floor < 1.0)) {
    throw ValidationError("fidelity floor must lie in (0, 1)");
  }
  if (!(cfg.tol >= 0.0) || !(cfg.step_init > 0.0)) {
    throw ValidationError("tol must be non-negative and step_init positive");
  }
}

StatePair pure_pair(const ComplexVector& a, const ComplexVector& b) {
  return {DensityMatrix::assume_valid(a * a.adjoint()), DensityMatrix::assume_valid(b * b.adjoint())};
}

RealVector gaussian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  RealVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

}  // namespace

std::string_view bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::heuristic_upper:
      return "heuristic_upper";
    case BoundKind::certified_lower:
      return "certified_lower";
    case BoundKind::analytic:
      return "analytic";
  }
  return "unknown";
}

int resolve_idler_dim(const ChannelPair& pair, const SearchConfig& cfg) {
  if (cfg.idler_dim >= 1) return cfg.idler_dim;
  return verified_entanglement_breaking(pair) ? 1 : pair.dim_in();
}

ComplexVector unit_vector(const RealVector& x, Eigen::Index offset, Eigen::Index n) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(x(offset + i), x(offset + n + i));
  const double norm = v.norm();
  if (!(norm > 1e-150)) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / norm;
}

RealVector real_coords(const ComplexVector& v) {
  RealVector x(2 * v.size());
  x.head(v.size()) = v.real();
  x.tail(v.size()) = v.imag();
  return x;
}

double PairChart::overlap(const RealVector& v) const {
  if (exact) return f;
  const double s = std::sin(v(4 * dim));
  return f + (1.0 - f) * s * s;
}

std::pair<ComplexVector, ComplexVector> PairChart::states(const RealVector& v) const {
  const ComplexVector a = unit_vector(v, 0, dim);
  ComplexVector y(dim);
  for (int i = 0; i < dim; ++i) y(i) = Complex(v(2 * dim + i), v(3 * dim + i));
  y -= a.dot(y) * a;
  double n = y.norm();
  if (!(n > 1e-12)) {
    // Degenerate direction: fall back to the basis vector least aligned with a.
    Eigen::Index k = 0;
    a.cwiseAbs().minCoeff(&k);
    y.setZero();
    y(k) = 1.0;
    y -= a.dot(y) * a;
    n = y.norm();
  }
  const ComplexVector chi = y / n;
  const double c = std::clamp(overlap(v), 0.0, 1.0);
  return {a, c * a + std::sqrt(std::max(0.0, 1.0 - c * c)) * chi};
}

RealVector PairChart::encode(const ComplexVector& a, const ComplexVector& b) const {
  RealVector v(num_params());
  v.head(2 * dim) = real_coords(a.normalized());
  v.segment(2 * dim, 2 * dim) = real_coords(b.normalized());
  if (!exact) {
    const double c = std::abs(a.normalized().dot(b.normalized()));
    const double s2 = f < 1.0 ? std::clamp((c - f) / (1.0 - f), 0.0, 1.0) : 1.0;
    v(4 * dim) = std::asin(std::sqrt(s2));
  }
  return v;
}

RealVector PairChart::random_point(std::mt19937_64& rng) const {
  RealVector v = gaussian(num_params(), rng);
  if (!exact) {
    std::uniform_real_distribution<double> u(0.0, std::numbers::pi);
    v(4 * dim) = u(rng);
  }
  return v;
}

ComplexVector dominant_vector(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.mat());
  return es.eigenvectors().col(rho.dim() - 1);
}

double relative_fidelity(const ChannelPair& pair, const StatePair& w, int idler_dim) {
  const double fin = fidelity(w.s1, w.s2);
  if (!(fin > 0.0)) throw NumericalError("relative fidelity undefined for orthogonal inputs");
  return output_fidelity(pair, w.s1, w.s2, idler_dim) / fin;
}

BoundValue fcon_min(const ChannelPair& pair, const SearchConfig& cfg) {
  check_config(cfg);
  const int idler = resolve_idler_dim(pair, cfg);
  const Eigen::Index n = static_cast<Eigen::Index>(idler) * pair.dim_in();
  const Objective obj = [&](const RealVector& x) {
    const ComplexVector psi = unit_vector(x, 0, n);
    return output_fidelity(pair, psi, psi, idler);
  };
  const auto ms = multistart_minimize(
      obj, [&](std::mt19937_64& rng) { return gaussian(2 * n, rng); }, cfg.restarts, cfg.seed,
      local_options(cfg), cfg.tol);
  const ComplexVector psi = unit_vector(ms.best.x, 0, n);
  BoundValue out;
  out.value = std::clamp(ms.best.value, 0.0, 1.0);
  out.witness = pure_pair(psi, psi);
  out.idler_dim = idler;
  out.converged = ms.agreed;
  return out;
}

namespace {

BoundValue pair_search(const ChannelPair& pair, double f, const SearchConfig& cfg,
                       const std::vector<StatePair>& warm, bool exact) {
  check_config(cfg);
  if (!std::isfinite(f) || f > 1.0) throw ValidationError("input fidelity must be at most 1");
  if (f < cfg.fidelity_floor * (1.0 - 1e-12)) {
    throw ValidationError("input fidelity " + std::to_string(f) + " is below the floor " +
                          std::to_string(cfg.fidelity_floor));
  }
  const int idler = resolve_idler_dim(pair, cfg);
  const PairChart chart{idler * pair.dim_in(), f, exact};
  const Objective obj = [&](const RealVector& v) {
    const auto [a, b] = chart.states(v);
    const double fout = output_fidelity(pair, a, b, idler);
    return exact ? fout : fout / chart.overlap(v);
  };
  std::vector<RealVector> starts;
  for (const auto& w : warm) {
    if (w.s1.dim() != chart.dim) continue;
    starts.push_back(chart.encode(dominant_vector(w.s1), dominant_vector(w.s2)));
  }
  const auto ms = multistart_minimize(
      obj, [&](std::mt19937_64& rng) { return chart.random_point(rng); },
      std::max(cfg.restarts, static_cast<int>(starts.size())), cfg.seed, local_options(cfg),
      cfg.tol, starts);
  const auto [a, b] = chart.states(ms.best.x);
  BoundValue out;
  out.value = std::clamp(ms.best.value, 0.0, 1.0);
  out.witness = pure_pair(a, b);
  out.idler_dim = idler;
  out.converged = ms.agreed;
  return out;
}

}  // namespace

BoundValue relfid_min(const ChannelPair& pair, double f, const SearchConfig& cfg,
                      const std::vector<StatePair>& warm) {
  if (!(f > 0.0)) throw ValidationError("relfid_min needs f > 0");
  return pair_search(pair, f, cfg, warm, false);
}

BoundValue output_fidelity_min(const ChannelPair& pair, double f, const SearchConfig& cfg,
                               const std::vector<StatePair>& warm) {
  if (!(f > 0.0) || f >= 1.0) throw ValidationError("exact-overlap search needs f in (0, 1)");
  return pair_search(pair, f, cfg, warm, true);
}

UnconstrainedEstimate relfid_min_unconstrained(const ChannelPair& pair, const SearchConfig& cfg) {
  const double grid[] = {1e-1, 1e-2, 1e-3};
  SearchConfig local = cfg;
  local.fidelity_floor = std::min(cfg.fidelity_floor, grid[2]);
  UnconstrainedEstimate out;
  std::vector<StatePair> warm;
  BoundValue last;
  bool all_converged = true;
  for (double f : grid) {
    last = relfid_min(pair, f, local, warm);
    all_converged = all_converged && last.converged;
    out.grid.push_back({f, last.value});
    warm.assign(1, *last.witness);
  }
  for (std::size_t i = 1; i < out.grid.size(); ++i) {
    if (out.grid[i].value > out.grid[i - 1].value + 1e-5) out.monotone = false;
  }
  const auto& p = out.grid[1];
  const auto& q = out.grid[2];
  const double slope = (p.value - q.value) / (p.f - q.f);
  out.value = last;
  out.value.value = std::clamp(q.value - slope * q.f, 0.0, 1.0);
  out.value.converged = all_converged && out.monotone;
  return out;
}

double system_relative_fidelity(const ChannelPair& pair, const StatePair& w) {
  return relative_fidelity(pair, w, 1);
}

std::optional<ConcavityWitness> concavity_counterexample(const ChannelPair& pair,
                                                         const SearchConfig& cfg, int samples) {
  check_config(cfg);
  const int d = pair.dim_in();
  std::mt19937_64 rng = seeded_rng(cfg.seed, 0xC0C0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> rank(1, d);
  auto draw = [&] { return random_density_matrix(d, rank(rng), rng); };

  std::optional<ConcavityWitness> best;
  for (int s = 0; s < samples; ++s) {
    const StatePair a{draw(), draw()};
    const StatePair b{draw(), draw()};
    const double lambda = unit(rng);
    const StatePair mix{
        DensityMatrix::assume_valid(lambda * a.s1.mat() + (1 - lambda) * b.s1.mat()),
        DensityMatrix::assume_valid(lambda * a.s2.mat() + (1 - lambda) * b.s2.mat())};
    const double fa = fidelity(a.s1, a.s2);
    const double fb = fidelity(b.s1, b.s2);
    const double fm = fidelity(mix.s1, mix.s2);
    if (std::min({fa, fb, fm}) < cfg.fidelity_floor) continue;
    const double ra = output_fidelity(pair, a.s1, a.s2, 1) / fa;
    const double rb = output_fidelity(pair, b.s1, b.s2, 1) / fb;
    const double rm = output_fidelity(pair, mix.s1, mix.s2, 1) / fm;
    const double violation = lambda * ra + (1 - lambda) * rb - rm;
    if (violation > cfg.tol && (!best || violation > best->violation)) {
      best = ConcavityWitness{a, b, lambda, violation};
    }
  }
  return best;
}

}  // namespace relfid
