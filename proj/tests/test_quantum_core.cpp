#include <cmath>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "relfid/errors.hpp"
#include "relfid/quantum_core.hpp"

using namespace relfid;
using relfid::testing::ket;
using relfid::testing::proj;

namespace {

const DensityMatrix zero = proj(ket({1.0, 0.0}));
const DensityMatrix one = proj(ket({0.0, 1.0}));
const DensityMatrix plus = proj(ket({1.0, 1.0}));

RealVector schmidt_coefficients(const ComplexVector& psi, int system_dim) {
  const int idler = static_cast<int>(psi.size()) / system_dim;
  ComplexMatrix m(idler, system_dim);
  for (int i = 0; i < idler; ++i)
    for (int s = 0; s < system_dim; ++s) m(i, s) = psi(i * system_dim + s);
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
}

}  // namespace

TEST_CASE("fidelity examples") {
  CHECK(fidelity(zero, zero) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fidelity(zero, one) == doctest::Approx(0.0));
  const auto mixed = DensityMatrix::maximally_mixed(2);
  CHECK(fidelity(mixed, zero) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(testing::fidelity_oracle(mixed.mat(), zero.mat()) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("bures distance examples") {
  CHECK(bures_distance(plus, plus) == doctest::Approx(0.0));
  CHECK(bures_distance(zero, one) == doctest::Approx(std::sqrt(2.0)));
  CHECK(bures_distance(DensityMatrix::maximally_mixed(2), zero) ==
        doctest::Approx(std::sqrt(2.0) * std::sqrt(1.0 - 1.0 / std::sqrt(2.0))));
}

TEST_CASE("trace norm examples") {
  CHECK(trace_norm(ComplexMatrix::Zero(3, 3)) == doctest::Approx(0.0));
  CHECK(trace_norm(zero.mat() - one.mat()) == doctest::Approx(2.0));
  CHECK(trace_norm(zero.mat() - plus.mat()) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(trace_norm(ComplexMatrix::Zero(2, 3)), ValidationError);
}

TEST_CASE("schatten1 fast paths agree with SVD") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int rows : {1, 2, 3}) {
    for (int cols : {1, 2, 5}) {
      ComplexMatrix m(rows, cols);
      for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(g(rng), g(rng));
      const double svd = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues().sum();
      CHECK(schatten1(m) == doctest::Approx(svd).epsilon(1e-12));
    }
  }
}

TEST_CASE("tensor and partial trace") {
  CHECK(tensor(ComplexMatrix(ComplexMatrix::Identity(2, 2)), ComplexMatrix(ComplexMatrix::Identity(2, 2)))
            .isApprox(ComplexMatrix::Identity(4, 4)));
  const DensityMatrix bell = proj(ket({1.0, 0.0, 0.0, 1.0}));
  const std::vector<int> dims{2, 2};
  const std::vector<int> keep0{0};
  CHECK(partial_trace(bell, dims, keep0).mat().isApprox(0.5 * ComplexMatrix::Identity(2, 2)));

  std::mt19937_64 rng(11);
  const auto rho = random_density_matrix(2, 2, rng);
  const auto sigma = random_density_matrix(3, 3, rng);
  const auto prod = DensityMatrix::assume_valid(tensor(rho.mat(), sigma.mat()));
  const std::vector<int> dims23{2, 3};
  const std::vector<int> keep1{1};
  CHECK(partial_trace(prod, dims23, keep0).mat().isApprox(rho.mat(), 1e-12));
  CHECK(partial_trace(prod, dims23, keep1).mat().isApprox(sigma.mat(), 1e-12));
  CHECK_THROWS_AS(partial_trace(prod, dims, keep0), ValidationError);
}

TEST_CASE("density matrix validation") {
  ComplexMatrix bad = zero.mat();
  bad(0, 0) = 1.1;
  CHECK_THROWS_AS(DensityMatrix{bad}, ValidationError);
  ComplexMatrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityMatrix{neg}, ValidationError);
  ComplexMatrix nonherm = zero.mat();
  nonherm(0, 1) = 0.3;
  CHECK_THROWS_AS(DensityMatrix{nonherm}, ValidationError);
  CHECK_THROWS_AS(PureState(ket({1.0, 1.0})), ValidationError);
  CHECK_THROWS_AS(fidelity(zero, DensityMatrix::maximally_mixed(3)), ValidationError);
}

TEST_CASE("purification") {
  // Up to an ancilla unitary the purification of |0><0| is |k>|0>.
  const auto p = purify(zero);
  double weight_on_zero = 0.0;
  for (int k = 0; k < 2; ++k) weight_on_zero += std::norm(p.amplitudes()(2 * k));
  CHECK(weight_on_zero == doctest::Approx(1.0));
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto rho = random_density_matrix(3, 1 + trial % 3, rng);
    const auto psi = purify(rho);
    const std::vector<int> dims{3, 3};
    const std::vector<int> keep{1};
    CHECK((partial_trace(psi.density(), dims, keep).mat() - rho.mat()).norm() < 1e-10);
  }
  {
    const auto mixed = DensityMatrix::maximally_mixed(2);
    auto [a, b] = optimal_purification_pair(mixed, mixed);
    CHECK(fidelity(a, b) == doctest::Approx(1.0));
    auto [c, d] = optimal_purification_pair(mixed, zero);
    CHECK(fidelity(c, d) == doctest::Approx(1.0 / std::sqrt(2.0)));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_density_matrix(3, 1 + trial % 3, rng);
    const auto b = random_density_matrix(3, 1 + (trial / 3) % 3, rng);
    auto [pa, pb] = optimal_purification_pair(a, b);
    CHECK(std::abs(fidelity(pa, pb) - fidelity(a, b)) < 1e-7);
    const std::vector<int> dims{3, 3};
    const std::vector<int> keep{1};
    CHECK((partial_trace(pa.density(), dims, keep).mat() - a.mat()).norm() < 1e-9);
    CHECK((partial_trace(pb.density(), dims, keep).mat() - b.mat()).norm() < 1e-9);
  }
}

TEST_CASE("schmidt idler compression") {
  std::mt19937_64 rng(21);
  // Product state with an 8-dimensional idler.
  const auto junk = random_pure_state(8, rng);
  const ComplexVector prod = tensor(junk.amplitudes(), ket({1.0, 0.0}));
  const auto c = schmidt_compress_idler(PureState(prod), 2);
  CHECK(c.state.dim() == 4);
  CHECK(std::abs(c.state.amplitudes()(0)) == doctest::Approx(1.0));

  const PureState bell(ket({1.0, 0.0, 0.0, 1.0}) / std::sqrt(2.0));
  const auto cb = schmidt_compress_idler(bell, 2);
  CHECK(cb.state.dim() == 4);
  CHECK(cb.schmidt(0) == doctest::Approx(1.0 / std::sqrt(2.0)));

  // Two-qubit system with a three-qubit idler.
  const auto big = random_pure_state(32, rng);
  const auto cr = schmidt_compress_idler(big, 4);
  CHECK(cr.state.dim() == 16);
  const RealVector before = schmidt_coefficients(big.amplitudes(), 4);
  const RealVector after = schmidt_coefficients(cr.state.amplitudes(), 4);
  CHECK((before - after).norm() < 1e-10);

  CHECK_THROWS_AS(schmidt_compress_idler(random_pure_state(6, rng), 4), ValidationError);
}

TEST_CASE("compressed pair keeps fidelity up to sqrt(alpha)") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_pure_state(16, rng);
    const auto b = random_pure_state(16, rng);
    const auto cp = compress_idler_pair(a, b, 2);
    CHECK(cp.first.dim() == 4);
    CHECK(std::sqrt(cp.alpha) * fidelity(cp.first, cp.second) <= fidelity(a, b) + 1e-10);
    CHECK(cp.alpha <= 1.0 + 1e-12);
  }
}

TEST_CASE("traceless hermitian basis is orthonormal") {
  for (int n : {2, 3, 4}) {
    const auto basis = traceless_hermitian_basis(n);
    REQUIRE(basis.size() == static_cast<std::size_t>(n * n - 1));
    for (std::size_t i = 0; i < basis.size(); ++i) {
      CHECK(std::abs(basis[i].trace()) < 1e-12);
      CHECK((basis[i] - basis[i].adjoint()).norm() < 1e-12);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        const double ip = (basis[i].adjoint() * basis[j]).trace().real();
        CHECK(ip == doctest::Approx(i == j ? 1.0 : 0.0));
      }
    }
  }
}

TEST_CASE("fidelity properties on random states") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    const auto a = random_density_matrix(d, 1 + trial % d, rng);
    const auto b = random_density_matrix(d, 1 + (trial / 2) % d, rng);
    const double fab = fidelity(a, b);
    CHECK(fab >= 0.0);
    CHECK(fab <= 1.0);
    CHECK(fab == doctest::Approx(fidelity(b, a)).epsilon(1e-8));
    CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(fab == doctest::Approx(testing::fidelity_oracle(a.mat(), b.mat())).epsilon(1e-6));

    const double half = 0.5 * trace_norm(a.mat() - b.mat());
    CHECK(1.0 - fab <= half + 1e-9);
    CHECK(half <= std::sqrt(std::max(0.0, 1.0 - fab * fab)) + 1e-9);

    // Full-rank factors keep the sqrt of tiny eigenvalues out of the 1e-10 comparison.
    const auto a2 = random_density_matrix(d, d, rng);
    const auto b2 = random_density_matrix(d, d, rng);
    const auto c = random_density_matrix(2, 2, rng);
    const auto e = random_density_matrix(2, 2, rng);
    const double fprod = fidelity(DensityMatrix::assume_valid(tensor(a2.mat(), c.mat())),
                                  DensityMatrix::assume_valid(tensor(b2.mat(), e.mat())));
    CHECK(std::abs(fprod - fidelity(a2, b2) * fidelity(c, e)) < 1e-10);
  }
}

TEST_CASE("partial transpose detects entanglement") {
  const DensityMatrix bell = proj(ket({1.0, 0.0, 0.0, 1.0}));
  const std::vector<int> dims{2, 2};
  CHECK_FALSE(is_ppt(bell, dims, 1));
  CHECK(is_ppt(DensityMatrix::maximally_mixed(4), dims, 1));
  CHECK(is_ppt(DensityMatrix::assume_valid(tensor(zero.mat(), plus.mat())), dims, 0));
}
