#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "relfid/bounds.hpp"
#include "relfid/errors.hpp"
#include "relfid/protosim.hpp"

using namespace relfid;

namespace {

constexpr double pi = std::numbers::pi;

SearchConfig quick() {
  SearchConfig cfg;
  cfg.restarts = 4;
  cfg.max_iters = 300;
  return cfg;
}

RealVector basis_coords(int dim, int index) {
  RealVector x = RealVector::Zero(2 * dim);
  x(index) = 1.0;
  return x;
}

}  // namespace

TEST_CASE("parameter layout") {
  CHECK(protocol_param_count(ProtocolKind::product, 2, 0, 2) == 8);
  CHECK(protocol_param_count(ProtocolKind::parallel_entangled, 2, 1, 2) == 16);
  CHECK(protocol_param_count(ProtocolKind::adaptive, 2, 0, 2) == 8 + 15);
  CHECK_THROWS_AS(protocol_param_count(ProtocolKind::parallel_entangled, 6, 1, 2), ValidationError);
  CHECK_THROWS_AS(protocol_param_count(ProtocolKind::product, 2, 3, 2), ValidationError);
  CHECK(protocol_kind_from_name("adaptive") == ProtocolKind::adaptive);
  CHECK_THROWS_AS(protocol_kind_from_name("serial"), ValidationError);
}

TEST_CASE("product probes in |0> under pauli noise") {
  const auto pair = make_family(pauli_x_spec(0.2));
  RealVector x(8);
  x << basis_coords(2, 0), basis_coords(2, 0);
  const double f = simulate({ProtocolKind::product, 2, 0, x}, pair);
  CHECK(f == doctest::Approx(0.8).epsilon(1e-12));
  CHECK_THROWS_AS(simulate({ProtocolKind::product, 2, 0, RealVector::Zero(3)}, pair), ValidationError);
}

TEST_CASE("adaptive with identity unitaries equals parallel") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  const auto pair = make_family(amplitude_damping_spec(0.2, 0.6));
  RealVector prep(8);
  for (int i = 0; i < 8; ++i) prep(i) = g(rng);
  RealVector ad = RealVector::Zero(protocol_param_count(ProtocolKind::adaptive, 2, 0, 2));
  ad.head(8) = prep;
  CHECK(simulate({ProtocolKind::adaptive, 2, 0, ad}, pair) ==
        doctest::Approx(simulate({ProtocolKind::parallel_entangled, 2, 0, prep}, pair)).epsilon(1e-12));
}

TEST_CASE("unused ancilla qubits change nothing") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const auto pair = make_family(eb_measure_rotate_spec(pi / 6));
  for (int trial = 0; trial < 10; ++trial) {
    RealVector x(8);
    for (int i = 0; i < 8; ++i) x(i) = g(rng);
    // Ancilla leads: |0>_a (x) psi occupies the first half of the register.
    RealVector y = RealVector::Zero(16);
    y.segment(0, 4) = x.segment(0, 4);
    y.segment(8, 4) = x.segment(4, 4);
    CHECK(simulate({ProtocolKind::parallel_entangled, 2, 1, y}, pair) ==
          doctest::Approx(simulate({ProtocolKind::parallel_entangled, 2, 0, x}, pair)).epsilon(1e-10));
  }
}

TEST_CASE("GHZ-style probe discriminates the unitary pair perfectly at N = 1/theta") {
  const auto pair = make_family(unitary_power_x_spec(0.2));
  CHECK(simulate(ghz_x_probe(5), pair) < 1e-12);
  CHECK(simulate(ghz_x_probe(2), pair) == doctest::Approx(std::cos(0.2 * pi)).epsilon(1e-12));
}

TEST_CASE("optimized hierarchy") {
  const auto cfg = quick();
  const auto pauli = optimize_hierarchy(2, make_family(pauli_x_spec(0.0975)), cfg, 0);
  for (const auto& r : pauli) CHECK(r.fidelity == doctest::Approx(0.9025).epsilon(1e-4));
  const auto uni = optimize_protocol(ProtocolKind::parallel_entangled, 2, make_family(unitary_power_x_spec(0.2)), cfg);
  CHECK(uni.fidelity == doctest::Approx(std::cos(0.2 * pi)).epsilon(1e-4));
  const auto eb = optimize_hierarchy(2, make_family(eb_measure_rotate_spec(pi / 6)), cfg, 0);
  CHECK(eb[2].fidelity <= eb[1].fidelity + 1e-6);
  CHECK(eb[1].fidelity <= eb[0].fidelity + 1e-6);
  CHECK(simulate(eb[2].witness, make_family(eb_measure_rotate_spec(pi / 6))) ==
        doctest::Approx(eb[2].fidelity).epsilon(1e-12));
  CHECK_THROWS_AS(optimize_protocol(ProtocolKind::product, 4, make_family(pauli_x_spec(0.1)), cfg), ValidationError);
}

TEST_CASE("identical channels are never discriminated") {
  const auto grid = log_grid(8, 1e-3, 1.0);
  const auto one = RelFidCurve::from_function(grid, [](double) { return 1.0; });
  const auto rep = check_achievability(make_family(pauli_x_spec(0.0)), 2, one, quick());
  CHECK(rep.ok);
  for (const auto& row : rep.rows) CHECK(row.achieved == doctest::Approx(1.0));
}
