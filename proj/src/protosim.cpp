#include "relfid/protosim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "relfid/errors.hpp"

namespace relfid {

namespace {

constexpr int kMaxRegister = 64;

int ipow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

struct Layout {
  int ancilla = 1;  // 2^a
  int system = 2;   // d
  int uses = 1;
  int probe = 2;    // ancilla * d, one product probe
  int reg = 2;      // ancilla * d^N
};

Layout layout_for(ProtocolKind kind, int uses, int ancilla_qubits, int d) {
  if (uses < 1) throw ValidationError("number of uses must be positive");
  if (ancilla_qubits < 0 || ancilla_qubits > 2) {
    throw ValidationError("ancilla qubits must be between 0 and 2");
  }
  if (d < 2) throw ValidationError("system dimension must be at least 2");
  Layout l;
  l.ancilla = ipow(2, ancilla_qubits);
  l.system = d;
  l.uses = uses;
  l.probe = l.ancilla * d;
  if (kind == ProtocolKind::product) {
    if (l.probe > kMaxRegister) throw ValidationError("probe dimension exceeds 64");
    l.reg = l.probe;
    return l;
  }
  double reg = l.ancilla;
  for (int i = 0; i < uses; ++i) reg *= d;
  if (reg > kMaxRegister) {
    throw ValidationError("protocol register of dimension " + std::to_string(static_cast<long>(reg)) +
                          " exceeds the limit of " + std::to_string(kMaxRegister));
  }
  l.reg = static_cast<int>(reg);
  return l;
}

ComplexVector vector_at(const RealVector& p, Eigen::Index offset, int n) {
  return unit_vector(p, offset, n);
}

// exp(i H) for H = sum x_k G_k over the traceless basis.
ComplexMatrix unitary_from(const RealVector& p, Eigen::Index offset,
                           const std::vector<ComplexMatrix>& basis, int n) {
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (std::size_t k = 0; k < basis.size(); ++k) {
    h += p(offset + static_cast<Eigen::Index>(k)) * basis[k];
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  ComplexVector phases(n);
  for (int i = 0; i < n; ++i) phases(i) = std::polar(1.0, es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// K acting on factor `factor` (0-based among the systems) of a register
// ancilla (x) d^N.
ComplexVector apply_on_system(const ComplexVector& v, const ComplexMatrix& k, const Layout& l,
                              int factor) {
  const int d = l.system;
  int right = 1;
  for (int i = factor + 1; i < l.uses; ++i) right *= d;
  const int left = l.reg / (d * right);
  ComplexVector out = ComplexVector::Zero(v.size());
  for (int a = 0; a < left; ++a) {
    for (int r = 0; r < right; ++r) {
      for (int s = 0; s < d; ++s) {
        Complex acc = 0.0;
        for (int t = 0; t < d; ++t) {
          const Complex kv = k(s, t);
          if (kv != 0.0) acc += kv * v((a * d + t) * right + r);
        }
        out((a * d + s) * right + r) = acc;
      }
    }
  }
  return out;
}

ComplexMatrix branch_columns(const ComplexVector& psi, const Channel& c, const Layout& l,
                             const std::vector<ComplexMatrix>& unitaries) {
  std::vector<ComplexVector> branches{psi};
  for (int use = 0; use < l.uses; ++use) {
    std::vector<ComplexVector> next;
    next.reserve(branches.size() * c.kraus().size());
    for (const auto& b : branches) {
      for (const auto& k : c.kraus()) {
        ComplexVector out = apply_on_system(b, k, l, use);
        if (use < static_cast<int>(unitaries.size())) out = unitaries[use] * out;
        if (out.squaredNorm() > 0.0) next.push_back(std::move(out));
      }
    }
    branches = std::move(next);
  }
  ComplexMatrix cols(l.reg, std::max<Eigen::Index>(1, static_cast<Eigen::Index>(branches.size())));
  cols.setZero();
  for (std::size_t i = 0; i < branches.size(); ++i) cols.col(static_cast<Eigen::Index>(i)) = branches[i];
  return cols;
}

void check_pair(const ChannelPair& pair) {
  if (pair.dim_in() != pair.dim_out()) {
    throw ValidationError("protocol simulation needs channels with equal input and output dimension");
  }
}

}  // namespace

std::string_view protocol_kind_name(ProtocolKind k) {
  switch (k) {
    case ProtocolKind::product:
      return "product";
    case ProtocolKind::parallel_entangled:
      return "parallel_entangled";
    case ProtocolKind::adaptive:
      return "adaptive";
  }
  return "unknown";
}

ProtocolKind protocol_kind_from_name(std::string_view name) {
  for (auto k : {ProtocolKind::product, ProtocolKind::parallel_entangled, ProtocolKind::adaptive}) {
    if (protocol_kind_name(k) == name) return k;
  }
  throw ValidationError("unknown protocol kind '" + std::string(name) + "'");
}

int protocol_param_count(ProtocolKind kind, int uses, int ancilla_qubits, int system_dim) {
  const Layout l = layout_for(kind, uses, ancilla_qubits, system_dim);
  switch (kind) {
    case ProtocolKind::product:
      return uses * 2 * l.probe;
    case ProtocolKind::parallel_entangled:
      return 2 * l.reg;
    case ProtocolKind::adaptive:
      return 2 * l.reg + (uses - 1) * (l.reg * l.reg - 1);
  }
  return 0;
}

double simulate(const ProtocolSpec& spec, const ChannelPair& pair) {
  check_pair(pair);
  const Layout l = layout_for(spec.kind, spec.uses, spec.ancilla_qubits, pair.dim_in());
  const int expected = protocol_param_count(spec.kind, spec.uses, spec.ancilla_qubits, pair.dim_in());
  if (spec.params.size() != expected) {
    throw ValidationError("protocol expects " + std::to_string(expected) + " parameters, got " +
                          std::to_string(spec.params.size()));
  }
  if (spec.kind == ProtocolKind::product) {
    double f = 1.0;
    for (int k = 0; k < spec.uses; ++k) {
      const ComplexVector psi = vector_at(spec.params, 2 * l.probe * k, l.probe);
      f *= output_fidelity(pair, psi, psi, l.ancilla);
    }
    return std::clamp(f, 0.0, 1.0);
  }
  const ComplexVector psi = vector_at(spec.params, 0, l.reg);
  std::vector<ComplexMatrix> unitaries;
  if (spec.kind == ProtocolKind::adaptive && spec.uses > 1) {
    const auto basis = traceless_hermitian_basis(l.reg);
    for (int k = 0; k + 1 < spec.uses; ++k) {
      const Eigen::Index offset = 2 * l.reg + static_cast<Eigen::Index>(k) * (l.reg * l.reg - 1);
      unitaries.push_back(unitary_from(spec.params, offset, basis, l.reg));
    }
  }
  const ComplexMatrix a1 = branch_columns(psi, pair.c1, l, unitaries);
  const ComplexMatrix a2 = branch_columns(psi, pair.c2, l, unitaries);
  return std::clamp(schatten1(a1.adjoint() * a2), 0.0, 1.0);
}

namespace {

ProtocolResult run_kind(ProtocolKind kind, int uses, const ChannelPair& pair, const SearchConfig& cfg,
                        int ancilla_qubits, const std::vector<RealVector>& warm) {
  ProtocolSpec spec{kind, uses, ancilla_qubits, {}};
  const int n = protocol_param_count(kind, uses, ancilla_qubits, pair.dim_in());
  const Objective obj = [&](const RealVector& x) {
    ProtocolSpec s{kind, uses, ancilla_qubits, x};
    return simulate(s, pair);
  };
  const int state_params = kind == ProtocolKind::product ? n : 2 * layout_for(kind, uses, ancilla_qubits, pair.dim_in()).reg;
  const auto init = [&](std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    RealVector x(n);
    for (int i = 0; i < n; ++i) x(i) = g(rng);
    // Start the interleaved unitaries near the identity.
    for (int i = state_params; i < n; ++i) x(i) *= 0.3;
    return x;
  };
  LocalOptions lo;
  lo.max_iters = cfg.max_iters;
  lo.step_init = cfg.step_init;
  const auto ms = multistart_minimize(obj, init, std::max(cfg.restarts, static_cast<int>(warm.size())),
                                      cfg.seed ^ (0x9E37ull * (static_cast<int>(kind) + 1) + uses),
                                      lo, cfg.tol, warm);
  spec.params = ms.best.x;
  return {std::clamp(ms.best.value, 0.0, 1.0), spec, ms.agreed};
}

}  // namespace

std::vector<ProtocolResult> optimize_hierarchy(int uses, const ChannelPair& pair,
                                               const SearchConfig& cfg, int ancilla_qubits) {
  check_pair(pair);
  if (uses < 1 || uses > 3) throw ValidationError("protocol optimization supports 1 <= N <= 3");
  const int d = pair.dim_in();
  std::vector<ProtocolResult> out;
  out.push_back(run_kind(ProtocolKind::product, uses, pair, cfg, ancilla_qubits, {}));

  std::vector<RealVector> warm;
  if (ancilla_qubits == 0) {
    // Tensor product of the product-protocol probes.
    const Layout l = layout_for(ProtocolKind::product, uses, 0, d);
    ComplexVector psi = ComplexVector::Ones(1);
    for (int k = 0; k < uses; ++k) {
      psi = tensor(psi, unit_vector(out[0].witness.params, 2 * l.probe * k, l.probe));
    }
    warm.push_back(real_coords(psi));
  }
  out.push_back(run_kind(ProtocolKind::parallel_entangled, uses, pair, cfg, ancilla_qubits, warm));

  const int n_adaptive = protocol_param_count(ProtocolKind::adaptive, uses, ancilla_qubits, d);
  RealVector start = RealVector::Zero(n_adaptive);
  start.head(out[1].witness.params.size()) = out[1].witness.params;
  out.push_back(run_kind(ProtocolKind::adaptive, uses, pair, cfg, ancilla_qubits, {start}));
  return out;
}

ProtocolResult optimize_protocol(ProtocolKind kind, int uses, const ChannelPair& pair,
                                 const SearchConfig& cfg, int ancilla_qubits) {
  if (kind == ProtocolKind::product) {
    check_pair(pair);
    if (uses < 1 || uses > 3) throw ValidationError("protocol optimization supports 1 <= N <= 3");
    return run_kind(kind, uses, pair, cfg, ancilla_qubits, {});
  }
  auto all = optimize_hierarchy(uses, pair, cfg, ancilla_qubits);
  return all[kind == ProtocolKind::parallel_entangled ? 1 : 2];
}

AchievabilityReport check_achievability(const ChannelPair& pair, int uses, const RelFidCurve& curve,
                                        const SearchConfig& cfg, double tol) {
  AchievabilityReport rep;
  const auto rec = nuse_recursion(curve, uses);
  const double fcon = curve.lower_at(1.0);
  for (int n = 1; n <= uses; ++n) {
    const auto results = optimize_hierarchy(n, pair, cfg);
    const double quad = nuse_quadratic_bound(fcon, n);
    for (const auto& r : results) {
      AchievabilityRow row{r.witness.kind, n, r.fidelity, rec[n - 1].f_n_lower, quad, true};
      row.ok = row.achieved >= row.recursion_bound - tol && row.recursion_bound >= quad - tol;
      rep.ok = rep.ok && row.ok;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

ProtocolSpec ghz_x_probe(int uses) {
  const int n = ipow(2, uses);
  ComplexVector plus = ComplexVector::Ones(1);
  ComplexVector minus = ComplexVector::Ones(1);
  ComplexVector p(2), m(2);
  p << 1.0, 1.0;
  m << 1.0, -1.0;
  for (int k = 0; k < uses; ++k) {
    plus = tensor(plus, ComplexVector(p / std::sqrt(2.0)));
    minus = tensor(minus, ComplexVector(m / std::sqrt(2.0)));
  }
  ComplexVector psi = (plus + minus) / std::sqrt(2.0);
  if (psi.norm() < 1e-12 || psi.size() != n) throw NumericalError("GHZ probe construction failed");
  return {ProtocolKind::parallel_entangled, uses, 0, real_coords(psi.normalized())};
}

}  // namespace relfid
