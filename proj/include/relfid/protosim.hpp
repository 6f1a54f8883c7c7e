#pragma once

#include <string_view>
#include <vector>

#include "relfid/bounds.hpp"
#include "relfid/channels.hpp"
#include "relfid/heuristic.hpp"

namespace relfid {

enum class ProtocolKind { product, parallel_entangled, adaptive };
std::string_view protocol_kind_name(ProtocolKind k);
ProtocolKind protocol_kind_from_name(std::string_view name);

/// Parametrized N-use protocol on qubit-or-qudit probes plus ancilla qubits.
///
/// Parameter layout (complex vectors stored as real parts then imaginary
/// parts, normalized on use):
///   product             N probe vectors of dimension 2^a d
///   parallel_entangled  one vector on ancilla (x) system^N
///   adaptive            the same vector, then N - 1 unitaries exp(i sum x_k G_k)
///                       on the whole register (traceless generator basis)
/// The ancilla is the leading factor; channel use k acts on system factor k.
/// In the adaptive kind unitary k is applied after use k.
struct ProtocolSpec {
  ProtocolKind kind = ProtocolKind::product;
  int uses = 1;
  int ancilla_qubits = 0;
  RealVector params;
};

int protocol_param_count(ProtocolKind kind, int uses, int ancilla_qubits, int system_dim);

/// Output fidelity after N uses of C1 versus N uses of C2. Registers are
/// limited to 64 dimensions.
double simulate(const ProtocolSpec& spec, const ChannelPair& pair);

struct ProtocolResult {
  double fidelity = 1.0;
  ProtocolSpec witness;
  bool converged = true;
};

/// Minimises simulate over the parameters (N <= 3). Adaptive runs are
/// warm-started from the parallel optimum and parallel runs from the product
/// optimum (when there is no ancilla), so the returned values respect the
/// inclusion product >= parallel >= adaptive.
ProtocolResult optimize_protocol(ProtocolKind kind, int uses, const ChannelPair& pair,
                                 const SearchConfig& cfg, int ancilla_qubits = 0);

/// All three kinds for one N, sharing warm starts.
std::vector<ProtocolResult> optimize_hierarchy(int uses, const ChannelPair& pair,
                                               const SearchConfig& cfg, int ancilla_qubits = 0);

struct AchievabilityRow {
  ProtocolKind kind = ProtocolKind::product;
  int uses = 1;
  double achieved = 1.0;
  double recursion_bound = 0.0;
  double quadratic_bound = 0.0;
  bool ok = true;
};

struct AchievabilityReport {
  std::vector<AchievabilityRow> rows;
  bool ok = true;
};

/// Optimizes every kind for n = 1..N and checks achieved >= recursion bound
/// >= quadratic bound (with slack `tol`). `curve` must be a lower-bound curve.
AchievabilityReport check_achievability(const ChannelPair& pair, int uses,
                                        const RelFidCurve& curve, const SearchConfig& cfg,
                                        double tol = 1e-6);

/// Register for the N-use GHZ-type probe (|+...+> + |-...->)/sqrt 2 on qubits,
/// as parallel_entangled parameters.
ProtocolSpec ghz_x_probe(int uses);

}  // namespace relfid
