#include <cmath>
#include <numbers>

#include "doctest.h"
#include "relfid/analytic.hpp"
#include "relfid/errors.hpp"

using namespace relfid;
using namespace relfid::analytic;

constexpr double pi = std::numbers::pi;

TEST_CASE("pauli oracle") {
  CHECK(pauli_relfid_min(0.0975, 0.3) == doctest::Approx(0.95));
  CHECK(pauli_relfid_min(0.0, 0.7) == 1.0);
  CHECK(pauli_relfid_min(1.0, 0.7) == 0.0);
  CHECK_THROWS_AS(pauli_relfid_min(1.2, 0.5), ValidationError);
}

TEST_CASE("unitary oracle") {
  CHECK(unitary_relfid_min(0.2, 1.0) == doctest::Approx(0.951056516).epsilon(1e-9));
  // Independent evaluation by angle addition: cos(a+b) = cos a cos b - sin a sin b.
  const double f = 0.8;
  const double expect = (std::cos(0.1 * pi) * f - std::sin(0.1 * pi) * std::sqrt(1 - f * f)) / f;
  CHECK(unitary_relfid_min(0.2, 0.8) == doctest::Approx(expect).epsilon(1e-12));
  CHECK(unitary_relfid_min(0.2, 0.8) == doctest::Approx(0.7193).epsilon(1e-4));
  CHECK(unitary_relfid_min(0.2, 0.3) == 0.0);
  CHECK(unitary_relfid_min(0.2, std::sin(0.1 * pi) + 1e-6) > 0.0);
  CHECK_THROWS_AS(unitary_relfid_min(0.2, 0.0), ValidationError);
  CHECK(unitary_fcon(0.2) == doctest::Approx(unitary_relfid_min(0.2, 1.0)));
}

TEST_CASE("unitary N-use bound") {
  CHECK(unitary_fn_bound(0.2, 1) == doctest::Approx(0.951056516));
  CHECK(unitary_fn_bound(0.2, 2) == doctest::Approx(0.809016994));
  CHECK(unitary_fn_bound(0.2, 5) == 0.0);
  for (double theta : {0.05, 0.13, 0.2, 0.3}) {
    double prev = unitary_fn_bound(theta, 1);
    for (int n = 2; n * theta < 1.0; ++n) {
      const double next = prev * unitary_relfid_min(theta, prev);
      CHECK(std::abs(next - unitary_fn_bound(theta, n)) < 1e-10);
      prev = next;
    }
  }
}

TEST_CASE("measure-rotate oracles") {
  CHECK(eb_relfid_min0(0.01) == doctest::Approx(2.0 / std::sqrt(5.0)).epsilon(1e-3));
  CHECK(eb_fcon(pi / 6) == doctest::Approx(0.5 * std::sqrt(1.5)).epsilon(1e-12));
  CHECK(eb_relfid_min0(pi / 6) == doctest::Approx(std::sqrt(0.3)).epsilon(1e-12));
  CHECK(eb_fopt(0.0) == 0.0);
  for (int x = 0; x < 4; ++x) {
    const double angle = (1 + 2 * x) * pi / 8;
    CHECK(std::abs(eb_relfid_min0(angle) - eb_fcon(angle)) < 1e-9);
  }
}

TEST_CASE("oracle range and monotonicity properties") {
  for (int i = 0; i <= 400; ++i) {
    const double d = -2.0 + 4.0 * i / 400.0;
    CHECK(eb_fcon(d) >= 0.0);
    CHECK(eb_fcon(d) <= 1.0);
    CHECK(eb_relfid_min0(d) >= 0.0);
    CHECK(eb_relfid_min0(d) <= eb_fcon(d) + 1e-12);
    CHECK(eb_fopt(d) >= 0.0);
    CHECK(eb_fopt(d) <= 1.0);
  }
  for (double theta : {0.0, 0.1, 0.2, 0.5, 1.0}) {
    double prev = 2.0;
    for (int i = 1000; i >= 1; --i) {
      const double v = unitary_relfid_min(theta, i / 1000.0);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
  for (int i = 0; i <= 10; ++i) {
    CHECK(pauli_relfid_min(0.3, i / 10.0) == pauli_relfid_min(0.3, 0.5));
  }
}
