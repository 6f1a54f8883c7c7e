#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace relfid {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Numerical slack used when validating states and optimizer output.
struct Tolerances {
  double herm = 1e-9;
  double psd = 1e-9;
  double trace = 1e-9;
  double norm = 1e-9;
  double opt = 1e-7;
};

class PureState;

/// Hermitian, positive semidefinite, unit-trace matrix.
///
/// The checked constructor symmetrizes its input (so tiny anti-Hermitian
/// rounding noise is discarded) and throws ValidationError when the input is
/// not a state within the given tolerances.
class DensityMatrix {
 public:
  explicit DensityMatrix(const ComplexMatrix& m, const Tolerances& tol = {});

  /// Wraps a matrix already known to be a state (channel outputs, mixtures
  /// of states). Only Hermitian symmetrization is applied.
  static DensityMatrix assume_valid(const ComplexMatrix& m);
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int dim);

  int dim() const { return static_cast<int>(mat_.rows()); }
  const ComplexMatrix& mat() const { return mat_; }

 private:
  DensityMatrix() = default;
  ComplexMatrix mat_;
};

/// Unit vector in C^dim.
class PureState {
 public:
  explicit PureState(const ComplexVector& amplitudes, const Tolerances& tol = {});

  /// Rescales a non-zero vector to unit norm.
  static PureState normalized(const ComplexVector& v);
  static PureState basis(int dim, int index);

  int dim() const { return static_cast<int>(amp_.size()); }
  const ComplexVector& amplitudes() const { return amp_; }
  DensityMatrix density() const { return DensityMatrix::from_pure(*this); }

 private:
  PureState() = default;
  ComplexVector amp_;
};

/// Uhlmann fidelity Tr sqrt(sqrt(a) b sqrt(a)), clamped to [0, 1].
double fidelity(const DensityMatrix& a, const DensityMatrix& b);
/// |<a|b>| for pure states.
double fidelity(const PureState& a, const PureState& b);

/// sqrt(2) * sqrt(1 - F(a, b)).
double bures_distance(const DensityMatrix& a, const DensityMatrix& b);

/// Sum of singular values. Throws on non-square input.
double trace_norm(const ComplexMatrix& m);

/// Trace norm of an arbitrary (possibly rectangular) matrix. Fast paths for
/// the 1xN and 2xN shapes that dominate the output-fidelity inner loop.
double schatten1(const ComplexMatrix& m);

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

/// Traces out every factor not listed in `keep`. Factor 0 is the most
/// significant (leftmost) one.
DensityMatrix partial_trace(const DensityMatrix& m, std::span<const int> dims,
                            std::span<const int> keep);

/// Partial transpose on the listed factor of a bipartite or multipartite state.
ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const int> dims,
                                int factor);

/// True when the partial transpose over `factor` has no eigenvalue below -tol.
bool is_ppt(const DensityMatrix& m, std::span<const int> dims, int factor,
            double tol = 1e-10);

/// PSD square root via Hermitian eigendecomposition, negative eigenvalues
/// clamped to zero.
ComplexMatrix sqrt_psd(const ComplexMatrix& m);

/// Standard purification sum_i sqrt(l_i) |i> (x) |e_i> on dim^2. Like every
/// composite state in this library the ancilla is the leading factor and the
/// system the trailing one.
PureState purify(const DensityMatrix& rho);

/// Purifications |a'>, |b'> (ancilla first, system second) whose overlap
/// |<a'|b'>| equals F(a, b): the polar construction a' = vec(sqrt a),
/// b' = vec(sqrt b V) with V the unitary from the SVD of sqrt(a) sqrt(b).
std::pair<PureState, PureState> optimal_purification_pair(const DensityMatrix& a,
                                                          const DensityMatrix& b);

struct IdlerCompression {
  /// State on (compressed idler, dim system_dim) (x) system.
  PureState state;
  /// Unitary on the original idler that rotates the Schmidt basis onto the
  /// leading basis vectors.
  ComplexMatrix idler_unitary;
  /// Schmidt coefficients across the idler|system cut, descending.
  RealVector schmidt;
};

/// Rotates the idler (leading factor) of psi so that its support sits in the
/// first `system_dim` basis states and drops the rest.
IdlerCompression schmidt_compress_idler(const PureState& psi, int system_dim);

struct CompressedPair {
  PureState first;
  PureState second;
  /// Weight of the second state that survived projection onto the compressed
  /// idler subspace; F(first, second) scales by sqrt(alpha).
  double alpha;
};

/// Applies the idler compression of `first` to both states and projects
/// `second` onto the retained idler subspace. The relative fidelity of the
/// pair through any channels acting on the system factor is unchanged.
CompressedPair compress_idler_pair(const PureState& first, const PureState& second,
                                   int system_dim);

/// Orthonormal (Hilbert-Schmidt) basis of traceless Hermitian n x n matrices:
/// generalized Gell-Mann matrices scaled to unit norm. n^2 - 1 elements.
std::vector<ComplexMatrix> traceless_hermitian_basis(int n);

PureState random_pure_state(int dim, std::mt19937_64& rng);
/// Random state of the given rank from the induced (Ginibre) measure.
DensityMatrix random_density_matrix(int dim, int rank, std::mt19937_64& rng);

}  // namespace relfid
