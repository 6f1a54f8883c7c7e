#include <cmath>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "relfid/certify.hpp"
#include "relfid/errors.hpp"
#include "synthetic_problem.hpp"

using namespace relfid;

TEST_CASE("outer vertex of axis planes") {
  std::vector<Hyperplane> planes;
  for (int i = 0; i < 3; ++i) {
    RealVector n = RealVector::Zero(3);
    n(i) = 1.0;
    planes.push_back({n, double(i + 1)});
  }
  const auto r = outer_vertex(planes);
  CHECK_FALSE(r.singular);
  CHECK(r.point(0) == doctest::Approx(1.0));
  CHECK(r.point(1) == doctest::Approx(2.0));
  CHECK(r.point(2) == doctest::Approx(3.0));
  CHECK(r.residual < 1e-12);

  // A repeated plane is consistent: the perturbation retry finds a point on all planes.
  planes[2] = planes[1];
  const auto rep = outer_vertex(planes);
  CHECK_FALSE(rep.singular);
  CHECK(rep.residual < 1e-6);

  planes[2].normal.setZero();
  CHECK(outer_vertex(planes).singular);
}

TEST_CASE("trace-norm cost") {
  CHECK(cost_from_trace_norms(0.0, 0.0) == 0.0);
  // delta = 0.1 + 0.2.
  CHECK(cost_from_trace_norms(0.01, 0.04) == doctest::Approx(2 * 0.3 - 0.09));
  CHECK(cost_from_trace_norms(1.0, 1.0) == 1.0);
  const DensityMatrix a = DensityMatrix::from_pure(PureState::basis(2, 0));
  const StatePair p{a, a};
  CHECK(delta_cost(p, a.mat(), a.mat()) == 0.0);
}

TEST_CASE("synthetic concave quadratic converges") {
  auto prob = testing::unit_simplex_problem();
  CertifyOptions o;
  o.budget = 50;
  const auto r = run_certification(prob, o);
  CHECK(r.lower == doctest::Approx(prob.true_min()).epsilon(1e-6));
  CHECK(r.upper == doctest::Approx(prob.true_min()).epsilon(1e-6));
  CHECK(r.trace.back().iteration <= 50);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].lower >= r.trace[i - 1].lower);
    CHECK(r.trace[i].upper <= r.trace[i - 1].upper);
  }
}

TEST_CASE("EB no-idler initial polytope") {
  const auto pair = make_family(eb_measure_rotate_spec(std::numbers::pi / 6));
  CHECK(resolve_certify_idler(pair, -1) == 1);
  CertifyOptions o;
  const auto st = init_polytope(pair, 0.5, o);
  CHECK(st.points.size() == 7);
  for (const auto& p : st.points) {
    REQUIRE(p.pair);
    CHECK(fidelity(p.pair->s1, p.pair->s2) == doctest::Approx(0.5).epsilon(1e-9));
  }
  CHECK(st.lower_bound <= st.upper_bound);
}

TEST_CASE("EB certification sandwiches the heuristic") {
  const auto pair = make_family(eb_measure_rotate_spec(std::numbers::pi / 6));
  CertifyOptions o;
  o.budget = 8;
  const auto r = certify_lower_bound(pair, 0.5, o);
  SearchConfig cfg;
  cfg.idler_dim = 1;
  const double h = output_fidelity_min(pair, 0.5, cfg).value;
  CHECK(r.lower <= h + 1e-9);
  CHECK(h <= r.upper + 1e-9);
  for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].lower >= r.trace[i - 1].lower);
  REQUIRE(r.upper_witness);
  CHECK(fidelity(r.upper_witness->s1, r.upper_witness->s2) == doctest::Approx(0.5).epsilon(1e-8));

  std::ostringstream os;
  write_trace_json(os, r, 0.5);
  const auto j = nlohmann::json::parse(os.str());
  CHECK(j["trace"].size() == r.trace.size());
}

TEST_CASE("support oracle bounds a known point") {
  const auto pair = make_family(eb_measure_rotate_spec(std::numbers::pi / 6));
  ComplexMatrix z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  CertifyOptions o;
  const auto r = linear_max_oracle(pair, z, z, 0.5, o);
  // Tr[Z a] + Tr[Z b] <= 2, reached only by a = b = |0>, which overlap 1 != 0.5.
  CHECK(r.mu <= 2.0 + 1e-9);
  CHECK(r.mu > 1.0);
  CHECK_THROWS_AS(certify_lower_bound(pair, 1.5, o), ValidationError);
}
