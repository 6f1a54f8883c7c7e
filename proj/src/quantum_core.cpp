#include "relfid/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "relfid/errors.hpp"

namespace relfid {

namespace {

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

int product(std::span<const int> dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

// Mixed-radix digits of `index` for the factor sizes `dims`, factor 0 leading.
void digits_of(int index, std::span<const int> dims, std::vector<int>& out) {
  out.resize(dims.size());
  for (int f = static_cast<int>(dims.size()) - 1; f >= 0; --f) {
    out[f] = index % dims[f];
    index /= dims[f];
  }
}

void check_factorization(int total, std::span<const int> dims) {
  if (dims.empty()) throw ValidationError("empty factor list");
  for (int d : dims) {
    if (d <= 0) throw ValidationError("factor dimensions must be positive");
  }
  if (product(dims) != total) {
    throw ValidationError("factor dimensions multiply to " + std::to_string(product(dims)) +
                          ", matrix has dimension " + std::to_string(total));
  }
}

}  // namespace

DensityMatrix::DensityMatrix(const ComplexMatrix& m, const Tolerances& tol) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw ValidationError("density matrix must be square and non-empty");
  }
  if (!m.allFinite()) throw ValidationError("density matrix has non-finite entries");
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol.herm) {
    throw ValidationError("matrix is not Hermitian (max |m - m^dag| = " + std::to_string(asym) +
                          ")");
  }
  mat_ = hermitian_part(m);
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw ValidationError("density matrix trace is " + std::to_string(tr));
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(mat_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -tol.psd) {
    throw ValidationError("density matrix has negative eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
  }
}

DensityMatrix DensityMatrix::assume_valid(const ComplexMatrix& m) {
  DensityMatrix out;
  out.mat_ = hermitian_part(m);
  return out;
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  DensityMatrix out;
  out.mat_ = psi.amplitudes() * psi.amplitudes().adjoint();
  return out;
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim <= 0) throw ValidationError("dimension must be positive");
  DensityMatrix out;
  out.mat_ = ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim);
  return out;
}

PureState::PureState(const ComplexVector& amplitudes, const Tolerances& tol) {
  if (amplitudes.size() == 0) throw ValidationError("pure state must be non-empty");
  if (!amplitudes.allFinite()) throw ValidationError("pure state has non-finite amplitudes");
  if (std::abs(amplitudes.norm() - 1.0) > tol.norm) {
    throw ValidationError("pure state norm is " + std::to_string(amplitudes.norm()));
  }
  amp_ = amplitudes;
}

PureState PureState::normalized(const ComplexVector& v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ValidationError("cannot normalize zero vector");
  PureState out;
  out.amp_ = v / n;
  return out;
}

PureState PureState::basis(int dim, int index) {
  if (dim <= 0 || index < 0 || index >= dim) throw ValidationError("basis index out of range");
  PureState out;
  out.amp_ = ComplexVector::Zero(dim);
  out.amp_(index) = 1.0;
  return out;
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(m));
  RealVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

// Factor m = L L^dag with L = V sqrt(diag(l)) restricted to eigenvalues above
// the rounding floor. Dropping the noise eigenvalues keeps their square roots
// (order 1e-8) out of the fidelity.
ComplexMatrix psd_factor(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  const RealVector& l = es.eigenvalues();
  const double floor = 32.0 * std::numeric_limits<double>::epsilon() *
                       static_cast<double>(m.rows()) * std::max(1.0, l.cwiseAbs().maxCoeff());
  int keep = 0;
  for (Eigen::Index i = 0; i < l.size(); ++i) keep += l(i) > floor ? 1 : 0;
  ComplexMatrix out(m.rows(), std::max(keep, 1));
  if (keep == 0) {
    out.setZero();
    return out;
  }
  int col = 0;
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    if (l(i) > floor) out.col(col++) = es.eigenvectors().col(i) * std::sqrt(l(i));
  }
  return out;
}

}  // namespace

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("fidelity: dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
  }
  // F = || L_a^dag L_b ||_1 for any factorizations a = L_a L_a^dag, b = L_b L_b^dag.
  const ComplexMatrix la = psd_factor(a.mat());
  const ComplexMatrix lb = psd_factor(b.mat());
  return std::clamp(schatten1(la.adjoint() * lb), 0.0, 1.0);
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw ValidationError("fidelity: dimension mismatch");
  return std::clamp(std::abs(a.amplitudes().dot(b.amplitudes())), 0.0, 1.0);
}

double bures_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return std::sqrt(2.0) * std::sqrt(std::max(0.0, 1.0 - fidelity(a, b)));
}

double trace_norm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("trace_norm: matrix must be square");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

double schatten1(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  if (m.rows() == 2 && m.cols() == 2) {
    // s1 + s2 = sqrt(s1^2 + s2^2 + 2 s1 s2) and s1 s2 = |det m|.
    const double det = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
    return std::sqrt(m.squaredNorm() + 2.0 * det);
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues().sum();
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& m, std::span<const int> dims,
                            std::span<const int> keep) {
  check_factorization(m.dim(), dims);
  const int nf = static_cast<int>(dims.size());
  std::vector<bool> kept(nf, false);
  for (int k : keep) {
    if (k < 0 || k >= nf) throw ValidationError("partial_trace: keep index out of range");
    kept[k] = true;
  }
  int out_dim = 1;
  for (int f = 0; f < nf; ++f) {
    if (kept[f]) out_dim *= dims[f];
  }
  const int n = m.dim();
  std::vector<int> reduced(n), traced(n);
  std::vector<int> digits;
  for (int i = 0; i < n; ++i) {
    digits_of(i, dims, digits);
    int r = 0, t = 0;
    for (int f = 0; f < nf; ++f) {
      if (kept[f]) {
        r = r * dims[f] + digits[f];
      } else {
        t = t * dims[f] + digits[f];
      }
    }
    reduced[i] = r;
    traced[i] = t;
  }
  ComplexMatrix out = ComplexMatrix::Zero(out_dim, out_dim);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (traced[i] == traced[j]) out(reduced[i], reduced[j]) += m.mat()(i, j);
    }
  }
  return DensityMatrix::assume_valid(out);
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const int> dims, int factor) {
  if (m.rows() != m.cols()) throw ValidationError("partial_transpose: matrix must be square");
  check_factorization(static_cast<int>(m.rows()), dims);
  if (factor < 0 || factor >= static_cast<int>(dims.size())) {
    throw ValidationError("partial_transpose: factor out of range");
  }
  int stride = 1;
  for (int f = static_cast<int>(dims.size()) - 1; f > factor; --f) stride *= dims[f];
  const int n = static_cast<int>(m.rows());
  ComplexMatrix out(n, n);
  for (int i = 0; i < n; ++i) {
    const int di = (i / stride) % dims[factor];
    for (int j = 0; j < n; ++j) {
      const int dj = (j / stride) % dims[factor];
      const int ii = i + (dj - di) * stride;
      const int jj = j + (di - dj) * stride;
      out(ii, jj) = m(i, j);
    }
  }
  return out;
}

bool is_ppt(const DensityMatrix& m, std::span<const int> dims, int factor, double tol) {
  const ComplexMatrix pt = hermitian_part(partial_transpose(m.mat(), dims, factor));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(pt, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

namespace {

// Amplitudes of sum_{s,i} a(s, i) |i>_anc |s>_sys.
ComplexVector vec_ancilla_first(const ComplexMatrix& a) {
  const Eigen::Index d = a.rows();
  const Eigen::Index k = a.cols();
  ComplexVector out(d * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index s = 0; s < d; ++s) out(i * d + s) = a(s, i);
  }
  return out;
}

}  // namespace

PureState purify(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.mat());
  RealVector roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  // Columns sqrt(l_i) |e_i> paired with ancilla basis |i>.
  ComplexMatrix cols = es.eigenvectors() * roots.asDiagonal();
  return PureState::normalized(vec_ancilla_first(cols));
}

std::pair<PureState, PureState> optimal_purification_pair(const DensityMatrix& a,
                                                          const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw ValidationError("optimal_purification_pair: dimension mismatch");
  const ComplexMatrix sa = sqrt_psd(a.mat());
  const ComplexMatrix sb = sqrt_psd(b.mat());
  Eigen::JacobiSVD<ComplexMatrix> svd(sa * sb, Eigen::ComputeFullU | Eigen::ComputeFullV);
  // Tr(sa sb V) = sum of singular values for V = Y X^dag, sa sb = X S Y^dag.
  const ComplexMatrix v = svd.matrixV() * svd.matrixU().adjoint();
  return {PureState::normalized(vec_ancilla_first(sa)),
          PureState::normalized(vec_ancilla_first(sb * v))};
}

namespace {

// Amplitude matrix psi(i, s) for idler index i and system index s.
ComplexMatrix amplitude_matrix(const ComplexVector& psi, int system_dim) {
  const Eigen::Index idler = psi.size() / system_dim;
  ComplexMatrix m(idler, system_dim);
  for (Eigen::Index i = 0; i < idler; ++i) {
    for (int s = 0; s < system_dim; ++s) m(i, s) = psi(i * system_dim + s);
  }
  return m;
}

ComplexVector flatten(const ComplexMatrix& m) {
  ComplexVector out(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index s = 0; s < m.cols(); ++s) out(i * m.cols() + s) = m(i, s);
  }
  return out;
}

struct IdlerRotation {
  ComplexMatrix unitary;  // idler x idler
  RealVector schmidt;
};

IdlerRotation schmidt_rotation(const ComplexVector& psi, int system_dim) {
  if (system_dim <= 0 || psi.size() % system_dim != 0) {
    throw ValidationError("state dimension " + std::to_string(psi.size()) +
                          " is not divisible by system dimension " +
                          std::to_string(system_dim));
  }
  const ComplexMatrix m = amplitude_matrix(psi, system_dim);
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU);
  return {svd.matrixU().adjoint(), svd.singularValues()};
}

// Keeps the first `rows` idler rows, zero-padding when the idler is smaller.
ComplexMatrix leading_rows(const ComplexMatrix& m, int rows) {
  ComplexMatrix out = ComplexMatrix::Zero(rows, m.cols());
  const Eigen::Index keep = std::min<Eigen::Index>(rows, m.rows());
  out.topRows(keep) = m.topRows(keep);
  return out;
}

}  // namespace

IdlerCompression schmidt_compress_idler(const PureState& psi, int system_dim) {
  const IdlerRotation rot = schmidt_rotation(psi.amplitudes(), system_dim);
  const ComplexMatrix rotated = rot.unitary * amplitude_matrix(psi.amplitudes(), system_dim);
  return {PureState::normalized(flatten(leading_rows(rotated, system_dim))), rot.unitary,
          rot.schmidt};
}

CompressedPair compress_idler_pair(const PureState& first, const PureState& second,
                                   int system_dim) {
  if (first.dim() != second.dim()) throw ValidationError("compress_idler_pair: dimension mismatch");
  const IdlerRotation rot = schmidt_rotation(first.amplitudes(), system_dim);
  const ComplexMatrix r1 = rot.unitary * amplitude_matrix(first.amplitudes(), system_dim);
  const ComplexMatrix r2 = rot.unitary * amplitude_matrix(second.amplitudes(), system_dim);
  const ComplexVector kept = flatten(leading_rows(r2, system_dim));
  const double alpha = kept.squaredNorm();
  if (!(alpha > 0.0)) {
    throw ValidationError("compress_idler_pair: second state is orthogonal to the retained idler");
  }
  return {PureState::normalized(flatten(leading_rows(r1, system_dim))),
          PureState::normalized(kept), alpha};
}

std::vector<ComplexMatrix> traceless_hermitian_basis(int n) {
  if (n <= 0) throw ValidationError("basis dimension must be positive");
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n * n - 1));
  const double r = 1.0 / std::sqrt(2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      ComplexMatrix s = ComplexMatrix::Zero(n, n);
      s(j, k) = r;
      s(k, j) = r;
      basis.push_back(s);
      ComplexMatrix a = ComplexMatrix::Zero(n, n);
      a(j, k) = Complex(0.0, -r);
      a(k, j) = Complex(0.0, r);
      basis.push_back(a);
    }
  }
  for (int l = 1; l < n; ++l) {
    ComplexMatrix d = ComplexMatrix::Zero(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(l) * (l + 1));
    for (int j = 0; j < l; ++j) d(j, j) = scale;
    d(l, l) = -static_cast<double>(l) * scale;
    basis.push_back(d);
  }
  return basis;
}

PureState random_pure_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(g(rng), g(rng));
  return PureState::normalized(v);
}

DensityMatrix random_density_matrix(int dim, int rank, std::mt19937_64& rng) {
  if (rank <= 0 || rank > dim) throw ValidationError("rank must lie in [1, dim]");
  std::normal_distribution<double> g;
  ComplexMatrix a(dim, rank);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < rank; ++j) a(i, j) = Complex(g(rng), g(rng));
  }
  ComplexMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::assume_valid(rho);
}

}  // namespace relfid
