#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relfid/quantum_core.hpp"

namespace relfid {

/// Trace-preserving completely positive map given by Kraus operators
/// (dim_out x dim_in). When acting on a composite state the channel touches
/// the trailing factor; idlers occupy the leading factors.
class Channel {
 public:
  /// Throws ValidationError if the set is empty, shapes disagree, or
  /// sum K^dag K deviates from the identity by more than `tp_tol`.
  explicit Channel(std::vector<ComplexMatrix> kraus, double tp_tol = 1e-9);

  static Channel identity(int dim);
  static Channel unitary(const ComplexMatrix& u);

  int dim_in() const { return static_cast<int>(kraus_.front().cols()); }
  int dim_out() const { return static_cast<int>(kraus_.front().rows()); }
  const std::vector<ComplexMatrix>& kraus() const { return kraus_; }

 private:
  std::vector<ComplexMatrix> kraus_;
};

/// The two hypotheses {C_1, C_2} of a discrimination problem.
struct ChannelPair {
  ChannelPair(Channel first, Channel second);

  Channel c1;
  Channel c2;

  int dim_in() const { return c1.dim_in(); }
  int dim_out() const { return c1.dim_out(); }
};

enum class Family { pauli_x, unitary_power_x, eb_measure_rotate, amplitude_damping, raw_kraus };

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);

/// Declarative description of a channel pair.
///
/// Parameters per family:
///   pauli_x            p in [0,1]            C1 = id, C2 = (1-p) id + p X.X
///   unitary_power_x    theta                 C1 = id, C2 = X^theta
///   eb_measure_rotate  delta_theta           measure-and-rotate at 0 and delta_theta
///   amplitude_damping  gamma1, gamma2 in [0,1]
///   raw_kraus          `kraus` (C2) and optional `reference` (C1, default id)
struct FamilySpec {
  Family family = Family::pauli_x;
  std::map<std::string, double> params;
  std::vector<ComplexMatrix> kraus;
  std::vector<ComplexMatrix> reference;

  double param(const std::string& name) const;
};

FamilySpec pauli_x_spec(double p);
FamilySpec unitary_power_x_spec(double theta);
FamilySpec eb_measure_rotate_spec(double delta_theta);
FamilySpec amplitude_damping_spec(double gamma1, double gamma2);

ChannelPair make_family(const FamilySpec& spec);

/// X^theta with principal eigenphases {0, pi theta} on the eigenbasis of X.
ComplexMatrix pauli_x_power(double theta);

/// Measure along |phi(theta)> = cos|0> + sin|1>, then conjugate the
/// post-measurement state by the rotation R(theta) as rho -> R^dag rho R.
Channel eb_measure_rotate_channel(double theta);

Channel amplitude_damping_channel(double gamma);

struct ChannelDiagnostics {
  /// Max-abs entry of sum K^dag K - I.
  double tp_residual = 0.0;
  /// Smallest eigenvalue of the Choi matrix (negative means not CP).
  double choi_min_eigenvalue = 0.0;
  bool trace_preserving = false;
  bool completely_positive = false;
};

/// Diagnostics for a raw Kraus set that may not form a valid channel.
ChannelDiagnostics diagnose(std::span<const ComplexMatrix> kraus, double tol = 1e-9);
ChannelDiagnostics validate(const Channel& c, double tol = 1e-9);

/// (I_idler (x) C)[rho]. `idler_dim` 0 is treated as 1 (no idler).
DensityMatrix apply(const Channel& c, const DensityMatrix& rho, int idler_dim = 1);

/// Columns (I (x) K_i)|psi>; the output state is cols * cols^dag.
ComplexMatrix kraus_columns(const Channel& c, const ComplexVector& psi, int idler_dim);

/// Normalized Choi state (I (x) C)[|Phi+><Phi+|], dimension dim_in * dim_out.
DensityMatrix choi(const Channel& c);

/// PPT test of the Choi state. For qubit-to-qubit (and qubit-qutrit) channels
/// this is equivalent to entanglement breaking; in larger dimensions PPT is
/// only necessary, so the function returns false there.
bool verified_entanglement_breaking(const Channel& c);
bool verified_entanglement_breaking(const ChannelPair& pair);

/// F((I (x) C1)[s1], (I (x) C2)[s2]).
double output_fidelity(const ChannelPair& pair, const DensityMatrix& s1, const DensityMatrix& s2,
                       int idler_dim);
/// Pure-input fast path: || A1^dag A2 ||_1 with A the Kraus column matrices.
double output_fidelity(const ChannelPair& pair, const ComplexVector& psi1,
                       const ComplexVector& psi2, int idler_dim);

}  // namespace relfid
