#pragma once

#include <map>
#include <vector>

#include "relfid/quantum_core.hpp"

namespace relfid {

/// Simplicial facet of a full-dimensional convex hull: outward unit normal n
/// and offset b with n.x = b on the facet and n.x < b inside.
struct HullFacet {
  std::vector<int> vertices;  // sorted point ids, D of them
  RealVector normal;
  double offset = 0.0;
};

/// Incremental (beneath-beyond) convex hull in R^D. Points are identified by
/// the caller's ids. A point lying on a facet's supporting plane counts as
/// seeing that facet, so vertices that stop being extreme are dropped.
class ConvexHull {
 public:
  explicit ConvexHull(int dim, double eps = 1e-10);

  /// Starts the hull from D + 1 affinely independent points. Throws
  /// NumericalError when the simplex is degenerate.
  void init(const std::vector<int>& ids, const std::vector<RealVector>& points);

  /// Largest n.x - b over facets (positive means outside).
  double outside_distance(const RealVector& x) const;

  /// Adds a point if it lies strictly outside (beyond eps). Returns false and
  /// leaves the hull unchanged otherwise.
  bool add(int id, const RealVector& x);

  int dim() const { return dim_; }
  const std::vector<HullFacet>& facets() const { return facets_; }
  /// Ids of points that are currently vertices, ascending.
  std::vector<int> vertices() const;
  const RealVector& point(int id) const { return points_.at(id); }

  /// neighbors()[f][k] is the facet sharing with facet f the ridge that omits
  /// facets()[f].vertices[k].
  const std::vector<std::vector<int>>& neighbors() const;

 private:
  HullFacet make_facet(std::vector<int> verts) const;

  int dim_;
  double eps_;
  std::map<int, RealVector> points_;
  RealVector interior_;
  std::vector<HullFacet> facets_;
  mutable std::vector<std::vector<int>> neighbors_;
  mutable bool neighbors_valid_ = false;
};

}  // namespace relfid
