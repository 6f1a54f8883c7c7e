#include "relfid/channels.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "relfid/errors.hpp"

namespace relfid {

namespace {

ComplexMatrix kraus_sum(std::span<const ComplexMatrix> kraus) {
  ComplexMatrix s = ComplexMatrix::Zero(kraus.front().cols(), kraus.front().cols());
  for (const auto& k : kraus) s += k.adjoint() * k;
  return s;
}

void check_unit_interval(const char* name, double v) {
  if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
    throw ValidationError(std::string("parameter ") + name + " must lie in [0, 1], got " +
                          std::to_string(v));
  }
}

ComplexMatrix pauli_x() {
  ComplexMatrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return x;
}

}  // namespace

Channel::Channel(std::vector<ComplexMatrix> kraus, double tp_tol) : kraus_(std::move(kraus)) {
  if (kraus_.empty()) throw ValidationError("channel needs at least one Kraus operator");
  const auto rows = kraus_.front().rows();
  const auto cols = kraus_.front().cols();
  if (rows == 0 || cols == 0) throw ValidationError("Kraus operators must be non-empty");
  for (const auto& k : kraus_) {
    if (k.rows() != rows || k.cols() != cols) {
      throw ValidationError("Kraus operators must share one shape");
    }
    if (!k.allFinite()) throw ValidationError("Kraus operator has non-finite entries");
  }
  const double residual =
      (kraus_sum(kraus_) - ComplexMatrix::Identity(cols, cols)).cwiseAbs().maxCoeff();
  if (residual > tp_tol) {
    throw ValidationError("Kraus operators are not trace preserving (residual " +
                          std::to_string(residual) + ")");
  }
}

Channel Channel::identity(int dim) {
  if (dim <= 0) throw ValidationError("dimension must be positive");
  return Channel({ComplexMatrix::Identity(dim, dim)});
}

Channel Channel::unitary(const ComplexMatrix& u) { return Channel({u}); }

ChannelPair::ChannelPair(Channel first, Channel second)
    : c1(std::move(first)), c2(std::move(second)) {
  if (c1.dim_in() != c2.dim_in() || c1.dim_out() != c2.dim_out()) {
    throw ValidationError("channel pair must share input and output dimensions");
  }
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::pauli_x:
      return "pauli_x";
    case Family::unitary_power_x:
      return "unitary_power_x";
    case Family::eb_measure_rotate:
      return "eb_measure_rotate";
    case Family::amplitude_damping:
      return "amplitude_damping";
    case Family::raw_kraus:
      return "raw_kraus";
  }
  return "unknown";
}

Family family_from_name(std::string_view name) {
  for (Family f : {Family::pauli_x, Family::unitary_power_x, Family::eb_measure_rotate,
                   Family::amplitude_damping, Family::raw_kraus}) {
    if (family_name(f) == name) return f;
  }
  throw ValidationError("unknown channel family '" + std::string(name) + "'");
}

double FamilySpec::param(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) {
    throw ValidationError("family " + std::string(family_name(family)) +
                          " requires parameter '" + name + "'");
  }
  return it->second;
}

FamilySpec pauli_x_spec(double p) { return {Family::pauli_x, {{"p", p}}, {}, {}}; }
FamilySpec unitary_power_x_spec(double theta) {
  return {Family::unitary_power_x, {{"theta", theta}}, {}, {}};
}
FamilySpec eb_measure_rotate_spec(double delta_theta) {
  return {Family::eb_measure_rotate, {{"delta_theta", delta_theta}}, {}, {}};
}
FamilySpec amplitude_damping_spec(double gamma1, double gamma2) {
  return {Family::amplitude_damping, {{"gamma1", gamma1}, {"gamma2", gamma2}}, {}, {}};
}

ComplexMatrix pauli_x_power(double theta) {
  if (!std::isfinite(theta)) throw ValidationError("theta must be finite");
  ComplexVector plus(2), minus(2);
  plus << 1.0, 1.0;
  minus << 1.0, -1.0;
  plus /= std::sqrt(2.0);
  minus /= std::sqrt(2.0);
  const Complex phase = std::polar(1.0, std::numbers::pi * theta);
  return plus * plus.adjoint() + phase * (minus * minus.adjoint());
}

Channel eb_measure_rotate_channel(double theta) {
  if (!std::isfinite(theta)) throw ValidationError("angle must be finite");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  ComplexMatrix rot(2, 2);
  rot << c, s, -s, c;
  ComplexVector phi(2), perp(2);
  phi << c, s;
  perp << -s, c;
  const ComplexMatrix p0 = phi * phi.adjoint();
  const ComplexMatrix p1 = perp * perp.adjoint();
  return Channel({rot.adjoint() * p0, rot.adjoint() * p1});
}

Channel amplitude_damping_channel(double gamma) {
  check_unit_interval("gamma", gamma);
  ComplexMatrix k0 = ComplexMatrix::Zero(2, 2);
  ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return Channel({k0, k1});
}

ChannelPair make_family(const FamilySpec& spec) {
  switch (spec.family) {
    case Family::pauli_x: {
      const double p = spec.param("p");
      check_unit_interval("p", p);
      std::vector<ComplexMatrix> k;
      if (p < 1.0) k.push_back(std::sqrt(1.0 - p) * ComplexMatrix::Identity(2, 2));
      if (p > 0.0) k.push_back(std::sqrt(p) * pauli_x());
      return {Channel::identity(2), Channel(std::move(k))};
    }
    case Family::unitary_power_x:
      return {Channel::identity(2), Channel::unitary(pauli_x_power(spec.param("theta")))};
    case Family::eb_measure_rotate:
      return {eb_measure_rotate_channel(0.0),
              eb_measure_rotate_channel(spec.param("delta_theta"))};
    case Family::amplitude_damping:
      return {amplitude_damping_channel(spec.param("gamma1")),
              amplitude_damping_channel(spec.param("gamma2"))};
    case Family::raw_kraus: {
      if (spec.kraus.empty()) throw ValidationError("raw_kraus requires at least one matrix");
      Channel second(spec.kraus);
      Channel first = spec.reference.empty() ? Channel::identity(second.dim_in())
                                             : Channel(spec.reference);
      return {std::move(first), std::move(second)};
    }
  }
  throw ValidationError("unsupported family");
}

DensityMatrix choi(const Channel& c) {
  const int d = c.dim_in();
  ComplexVector phi = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) phi(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return apply(c, DensityMatrix::assume_valid(phi * phi.adjoint()), d);
}

ChannelDiagnostics diagnose(std::span<const ComplexMatrix> kraus, double tol) {
  ChannelDiagnostics out;
  if (kraus.empty()) return out;
  const auto din = kraus.front().cols();
  const auto dout = kraus.front().rows();
  out.tp_residual = (kraus_sum(kraus) - ComplexMatrix::Identity(din, din)).cwiseAbs().maxCoeff();
  out.trace_preserving = out.tp_residual <= tol;
  // Unnormalized Choi matrix sum_ij |i><j| (x) sum_k K|i><j|K^dag.
  ComplexMatrix ch = ComplexMatrix::Zero(din * dout, din * dout);
  for (Eigen::Index i = 0; i < din; ++i) {
    for (Eigen::Index j = 0; j < din; ++j) {
      ComplexMatrix block = ComplexMatrix::Zero(dout, dout);
      for (const auto& k : kraus) block += k.col(i) * k.col(j).adjoint();
      ch.block(i * dout, j * dout, dout, dout) = block;
    }
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (ch + ch.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  out.choi_min_eigenvalue = es.eigenvalues().minCoeff();
  out.completely_positive = out.choi_min_eigenvalue >= -tol;
  return out;
}

ChannelDiagnostics validate(const Channel& c, double tol) { return diagnose(c.kraus(), tol); }

DensityMatrix apply(const Channel& c, const DensityMatrix& rho, int idler_dim) {
  const int idl = std::max(idler_dim, 1);
  if (rho.dim() != idl * c.dim_in()) {
    throw ValidationError("apply: state dimension " + std::to_string(rho.dim()) +
                          " does not match idler " + std::to_string(idl) + " x channel input " +
                          std::to_string(c.dim_in()));
  }
  const ComplexMatrix id = ComplexMatrix::Identity(idl, idl);
  const int dout = idl * c.dim_out();
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  for (const auto& k : c.kraus()) {
    const ComplexMatrix big = idl == 1 ? k : tensor(id, k);
    out += big * rho.mat() * big.adjoint();
  }
  return DensityMatrix::assume_valid(out);
}

ComplexMatrix kraus_columns(const Channel& c, const ComplexVector& psi, int idler_dim) {
  const int idl = std::max(idler_dim, 1);
  const int din = c.dim_in();
  const int dout = c.dim_out();
  if (psi.size() != idl * din) {
    throw ValidationError("kraus_columns: state dimension does not match idler x channel input");
  }
  const auto& kraus = c.kraus();
  ComplexMatrix cols(idl * dout, static_cast<Eigen::Index>(kraus.size()));
  for (std::size_t k = 0; k < kraus.size(); ++k) {
    for (int i = 0; i < idl; ++i) {
      cols.col(static_cast<Eigen::Index>(k)).segment(i * dout, dout).noalias() =
          kraus[k] * psi.segment(i * din, din);
    }
  }
  return cols;
}

bool verified_entanglement_breaking(const Channel& c) {
  const int din = c.dim_in();
  const int dout = c.dim_out();
  if (din * dout > 6) return false;
  const std::array<int, 2> dims{din, dout};
  return is_ppt(choi(c), dims, 1);
}

bool verified_entanglement_breaking(const ChannelPair& pair) {
  return verified_entanglement_breaking(pair.c1) && verified_entanglement_breaking(pair.c2);
}

double output_fidelity(const ChannelPair& pair, const DensityMatrix& s1, const DensityMatrix& s2,
                       int idler_dim) {
  return fidelity(apply(pair.c1, s1, idler_dim), apply(pair.c2, s2, idler_dim));
}

double output_fidelity(const ChannelPair& pair, const ComplexVector& psi1,
                       const ComplexVector& psi2, int idler_dim) {
  const ComplexMatrix a1 = kraus_columns(pair.c1, psi1, idler_dim);
  const ComplexMatrix a2 = kraus_columns(pair.c2, psi2, idler_dim);
  return std::min(1.0, schatten1(a1.adjoint() * a2));
}

}  // namespace relfid
