#pragma once

#include <cmath>
#include <random>

#include "relfid/quantum_core.hpp"

namespace relfid::testing {

inline ComplexVector ket(std::initializer_list<Complex> amps) {
  ComplexVector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (auto a : amps) v(i++) = a;
  return v;
}

inline DensityMatrix proj(const ComplexVector& v) {
  return DensityMatrix::from_pure(PureState::normalized(v));
}

// Independent fidelity oracle: F = sum of sqrt of eigenvalues of sqrt(a) b sqrt(a),
// with sqrt(a) taken from a full eigendecomposition rather than the library routine.
inline double fidelity_oracle(const ComplexMatrix& a, const ComplexMatrix& b) {
  Eigen::ComplexEigenSolver<ComplexMatrix> ea(a);
  ComplexMatrix d = ComplexMatrix::Zero(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) d(i, i) = std::sqrt(std::max(0.0, ea.eigenvalues()(i).real()));
  const ComplexMatrix v = ea.eigenvectors();
  const ComplexMatrix sa = v * d * v.inverse();
  Eigen::ComplexEigenSolver<ComplexMatrix> em(sa * b * sa);
  double f = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) f += std::sqrt(std::max(0.0, em.eigenvalues()(i).real()));
  return f;
}

}  // namespace relfid::testing
