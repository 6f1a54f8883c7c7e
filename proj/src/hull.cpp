#include "relfid/hull.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include <Eigen/QR>

#include "relfid/errors.hpp"

namespace relfid {

ConvexHull::ConvexHull(int dim, double eps) : dim_(dim), eps_(eps) {
  if (dim < 1) throw ValidationError("hull dimension must be positive");
}

HullFacet ConvexHull::make_facet(std::vector<int> verts) const {
  std::sort(verts.begin(), verts.end());
  HullFacet f;
  const RealVector& p0 = points_.at(verts[0]);
  RealVector n;
  if (dim_ == 1) {
    n = RealVector::Ones(1);
  } else {
    RealMatrix edges(dim_, dim_ - 1);
    for (int i = 1; i < dim_; ++i) edges.col(i - 1) = points_.at(verts[i]) - p0;
    Eigen::HouseholderQR<RealMatrix> qr(edges);
    const RealMatrix q = qr.householderQ();
    n = q.col(dim_ - 1);
  }
  double b = n.dot(p0);
  if (n.dot(interior_) > b) {
    n = -n;
    b = -b;
  }
  f.vertices = std::move(verts);
  f.normal = std::move(n);
  f.offset = b;
  return f;
}

void ConvexHull::init(const std::vector<int>& ids, const std::vector<RealVector>& points) {
  if (static_cast<int>(ids.size()) != dim_ + 1 || points.size() != ids.size()) {
    throw ValidationError("hull initialisation needs D + 1 points");
  }
  points_.clear();
  facets_.clear();
  interior_ = RealVector::Zero(dim_);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (points[i].size() != dim_) throw ValidationError("hull point has wrong dimension");
    points_[ids[i]] = points[i];
    interior_ += points[i];
  }
  interior_ /= static_cast<double>(ids.size());

  RealMatrix diffs(dim_, dim_);
  for (int i = 1; i <= dim_; ++i) diffs.col(i - 1) = points[i] - points[0];
  Eigen::JacobiSVD<RealMatrix> svd(diffs);
  const auto& sv = svd.singularValues();
  if (!(sv(dim_ - 1) > 1e-9 * std::max(1.0, sv(0)))) {
    throw NumericalError("initial simplex is degenerate (smallest singular value " +
                         std::to_string(sv(dim_ - 1)) + ")");
  }
  for (int skip = 0; skip <= dim_; ++skip) {
    std::vector<int> verts;
    for (int i = 0; i <= dim_; ++i) {
      if (i != skip) verts.push_back(ids[i]);
    }
    facets_.push_back(make_facet(std::move(verts)));
  }
  neighbors_valid_ = false;
}

double ConvexHull::outside_distance(const RealVector& x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& f : facets_) best = std::max(best, f.normal.dot(x) - f.offset);
  return best;
}

bool ConvexHull::add(int id, const RealVector& x) {
  if (points_.count(id)) throw ValidationError("duplicate hull point id");
  std::vector<char> visible(facets_.size(), 0);
  bool strictly_outside = false;
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    const double d = facets_[i].normal.dot(x) - facets_[i].offset;
    if (d > eps_) strictly_outside = true;
    if (d > -eps_) visible[i] = 1;
  }
  if (!strictly_outside) return false;

  // Horizon ridges appear in exactly one visible facet.
  std::map<std::vector<int>, int> ridge_count;
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    if (!visible[i]) continue;
    const auto& v = facets_[i].vertices;
    for (int k = 0; k < dim_; ++k) {
      std::vector<int> ridge;
      ridge.reserve(dim_ - 1);
      for (int j = 0; j < dim_; ++j) {
        if (j != k) ridge.push_back(v[j]);
      }
      ++ridge_count[ridge];
    }
  }
  points_[id] = x;
  std::vector<HullFacet> next;
  next.reserve(facets_.size());
  for (std::size_t i = 0; i < facets_.size(); ++i) {
    if (!visible[i]) next.push_back(std::move(facets_[i]));
  }
  for (const auto& [ridge, count] : ridge_count) {
    if (count != 1) continue;
    std::vector<int> verts = ridge;
    verts.push_back(id);
    next.push_back(make_facet(std::move(verts)));
  }
  facets_ = std::move(next);
  neighbors_valid_ = false;

  // Forget points that no longer support any facet.
  std::set<int> used;
  for (const auto& f : facets_) used.insert(f.vertices.begin(), f.vertices.end());
  for (auto it = points_.begin(); it != points_.end();) {
    it = used.count(it->first) ? std::next(it) : points_.erase(it);
  }
  return true;
}

std::vector<int> ConvexHull::vertices() const {
  std::vector<int> out;
  out.reserve(points_.size());
  for (const auto& [id, p] : points_) out.push_back(id);
  return out;
}

const std::vector<std::vector<int>>& ConvexHull::neighbors() const {
  if (neighbors_valid_) return neighbors_;
  neighbors_.assign(facets_.size(), std::vector<int>(dim_, -1));
  std::map<std::vector<int>, std::pair<int, int>> first_seen;
  for (int i = 0; i < static_cast<int>(facets_.size()); ++i) {
    const auto& v = facets_[i].vertices;
    for (int k = 0; k < dim_; ++k) {
      std::vector<int> ridge;
      ridge.reserve(dim_ - 1);
      for (int j = 0; j < dim_; ++j) {
        if (j != k) ridge.push_back(v[j]);
      }
      auto [it, inserted] = first_seen.emplace(std::move(ridge), std::make_pair(i, k));
      if (!inserted) {
        neighbors_[i][k] = it->second.first;
        neighbors_[it->second.first][it->second.second] = i;
      }
    }
  }
  neighbors_valid_ = true;
  return neighbors_;
}

}  // namespace relfid
