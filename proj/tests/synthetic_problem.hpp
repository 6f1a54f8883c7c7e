#pragma once

#include <vector>

#include "relfid/certify.hpp"

namespace relfid::testing {

// Concave quadratic g(x) = -|x - c|^2 over the simplex spanned by `verts`,
// with an exact support oracle (best vertex) and the cost r (2 |v - c| + r).
class SimplexQuadratic : public CertifyProblem {
 public:
  SimplexQuadratic(std::vector<RealVector> verts, RealVector c) : verts_(std::move(verts)), c_(std::move(c)) {}

  int dimension() const override { return static_cast<int>(c_.size()); }

  std::vector<CandidatePoint> initial_points() override {
    // Facet centroids: affinely independent and strictly inside the body.
    std::vector<CandidatePoint> out;
    const int n = static_cast<int>(verts_.size());
    for (int skip = 0; skip < n; ++skip) {
      RealVector x = RealVector::Zero(dimension());
      for (int i = 0; i < n; ++i) {
        if (i != skip) x += verts_[i];
      }
      out.push_back({x / (n - 1), 0.0, std::nullopt});
    }
    return out;
  }

  double value(const CandidatePoint& p) override { return -(p.x - c_).squaredNorm(); }

  OracleResult linear_max(const RealVector& normal, const std::vector<const CandidatePoint*>&,
                          std::uint64_t) const override {
    std::size_t best = 0;
    for (std::size_t i = 1; i < verts_.size(); ++i) {
      if (normal.dot(verts_[i]) > normal.dot(verts_[best])) best = i;
    }
    return {normal.dot(verts_[best]), {verts_[best], 0.0, std::nullopt}, true};
  }

  double cost(const RealVector& vertex, const RealVector& outer) override {
    const double r = (outer - vertex).norm();
    return r * (2.0 * (vertex - c_).norm() + r);
  }

  double true_min() const {
    double m = 0.0;
    for (const auto& v : verts_) m = std::min(m, -(v - c_).squaredNorm());
    return m;
  }

 private:
  std::vector<RealVector> verts_;
  RealVector c_;
};

inline SimplexQuadratic unit_simplex_problem() {
  std::vector<RealVector> v(4, RealVector::Zero(3));
  v[1](0) = 1.0;
  v[2](1) = 1.0;
  v[3](2) = 1.0;
  RealVector c(3);
  c << 0.2, 0.3, 0.1;
  return SimplexQuadratic(v, c);
}

}  // namespace relfid::testing
