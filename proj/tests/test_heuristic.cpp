#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "relfid/channels.hpp"
#include "relfid/errors.hpp"
#include "relfid/heuristic.hpp"

using namespace relfid;
using relfid::testing::fidelity_oracle;

namespace {

constexpr double pi = std::numbers::pi;

SearchConfig quick() {
  SearchConfig cfg;
  cfg.restarts = 8;
  return cfg;
}

// F_out / F for a witness, recomputed through apply() and the eigen-based oracle.
double witness_ratio(const ChannelPair& pair, const StatePair& w, int idler) {
  const auto o1 = apply(pair.c1, w.s1, idler);
  const auto o2 = apply(pair.c2, w.s2, idler);
  return fidelity_oracle(o1.mat(), o2.mat()) / fidelity_oracle(w.s1.mat(), w.s2.mat());
}

}  // namespace

TEST_CASE("pair chart keeps the overlap") {
  std::mt19937_64 rng(11);
  for (double f : {0.1, 0.5, 0.93}) {
    PairChart exact{4, f, true};
    PairChart loose{4, f, false};
    for (int i = 0; i < 50; ++i) {
      auto x = exact.random_point(rng);
      auto [a, b] = exact.states(x);
      CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(std::abs(a.dot(b)) == doctest::Approx(f).epsilon(1e-10));
      auto y = loose.random_point(rng);
      auto [c, d] = loose.states(y);
      CHECK(std::abs(c.dot(d)) >= f - 1e-12);
      CHECK(std::abs(c.dot(d)) == doctest::Approx(loose.overlap(y)).epsilon(1e-10));
    }
    // encode is a right inverse of states.
    auto x = exact.random_point(rng);
    auto [a, b] = exact.states(x);
    auto [a2, b2] = exact.states(exact.encode(a, b));
    CHECK(std::abs(a.dot(a2)) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(b.dot(b2)) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("pauli F_con and F_R,min are constant") {
  const auto pair = make_family(pauli_x_spec(0.0975));
  const auto fc = fcon_min(pair, quick());
  CHECK(fc.value == doctest::Approx(std::sqrt(1 - 0.0975)).epsilon(1e-6));
  for (double f : {0.1, 0.9}) {
    const auto r = relfid_min(pair, f, quick());
    CHECK(r.value == doctest::Approx(0.95).epsilon(1e-6));
    REQUIRE(r.witness);
    CHECK(witness_ratio(pair, *r.witness, r.idler_dim) == doctest::Approx(r.value).epsilon(1e-8));
    CHECK(fidelity(r.witness->s1, r.witness->s2) >= f - 1e-9);
  }
}

TEST_CASE("unitary F_R,min follows the phase argument") {
  const auto pair = make_family(unitary_power_x_spec(0.2));
  for (double f : {0.25, 0.5, 0.75, 1.0}) {
    const double expect = std::max(0.0, std::cos(0.1 * pi + std::acos(f)) / f);
    CHECK(relfid_min(pair, f, quick()).value == doctest::Approx(expect).epsilon(1e-6));
  }
}

TEST_CASE("EB values without idler") {
  const double d = pi / 6;
  const auto pair = make_family(eb_measure_rotate_spec(d));
  CHECK(resolve_idler_dim(pair, SearchConfig{}) == 1);
  CHECK(fcon_min(pair, quick()).value ==
        doctest::Approx(0.5 * std::sqrt(2 + std::cos(2 * d) + std::cos(6 * d))).epsilon(1e-6));
  const double expect0 = std::abs(std::cos(d) + std::cos(3 * d)) /
                         std::sqrt(2 + 2 * std::cos(2 * d) + std::cos(4 * d));
  CHECK(relfid_min(pair, 1e-3, quick()).value == doctest::Approx(expect0).epsilon(1e-3));
}

TEST_CASE("exact-overlap minimum dominates the inequality form") {
  const auto pair = make_family(amplitude_damping_spec(0.2, 0.6));
  const auto cfg = quick();
  for (double f : {0.3, 0.7}) {
    const double at = output_fidelity_min(pair, f, cfg).value / f;
    const double ge = relfid_min(pair, f, cfg).value;
    CHECK(ge <= at + 1e-6);
  }
}

TEST_CASE("identical channels give 1") {
  const auto pair = make_family(pauli_x_spec(0.0));
  CHECK(fcon_min(pair, quick()).value == doctest::Approx(1.0));
  CHECK(relfid_min(pair, 0.4, quick()).value == doctest::Approx(1.0));
}

TEST_CASE("argument validation") {
  const auto pair = make_family(pauli_x_spec(0.1));
  CHECK_THROWS_AS(relfid_min(pair, 1e-4, quick()), ValidationError);
  CHECK_THROWS_AS(relfid_min(pair, 1.2, quick()), ValidationError);
  CHECK_THROWS_AS(output_fidelity_min(pair, 1.0, quick()), ValidationError);
}

TEST_CASE("search is deterministic for a seed") {
  const auto pair = make_family(amplitude_damping_spec(0.2, 0.6));
  const auto a = relfid_min(pair, 0.5, quick());
  const auto b = relfid_min(pair, 0.5, quick());
  CHECK(a.value == b.value);
}

TEST_CASE("unconstrained extrapolation for EB") {
  const auto pair = make_family(eb_measure_rotate_spec(0.3));
  const auto e = relfid_min_unconstrained(pair, quick());
  CHECK(e.grid.size() == 3);
  CHECK(e.monotone);
  const double expect = std::abs(std::cos(0.3) + std::cos(0.9)) /
                        std::sqrt(2 + 2 * std::cos(0.6) + std::cos(1.2));
  CHECK(e.value.value == doctest::Approx(expect).epsilon(1e-2));
}

TEST_CASE("concavity witness re-evaluates") {
  const auto pair = make_family(amplitude_damping_spec(0.2, 0.6));
  auto w = concavity_counterexample(pair, quick(), 5000);
  REQUIRE(w);
  const double l = w->lambda;
  const DensityMatrix m1 = DensityMatrix::assume_valid(l * w->a.s1.mat() + (1 - l) * w->b.s1.mat());
  const DensityMatrix m2 = DensityMatrix::assume_valid(l * w->a.s2.mat() + (1 - l) * w->b.s2.mat());
  const double again = l * system_relative_fidelity(pair, w->a) + (1 - l) * system_relative_fidelity(pair, w->b) -
                       system_relative_fidelity(pair, {m1, m2});
  CHECK(again == doctest::Approx(w->violation).epsilon(1e-9));
  CHECK(again > 1e-6);
}
