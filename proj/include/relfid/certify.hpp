#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "relfid/channels.hpp"
#include "relfid/heuristic.hpp"
#include "relfid/hull.hpp"

namespace relfid {

/// A feasible point of the convex body being searched, in chart coordinates.
struct CandidatePoint {
  RealVector x;
  /// Objective value; filled in when the point joins the polytope.
  double value = 0.0;
  /// The state pair behind x, for channel problems.
  std::optional<StatePair> pair;
};

struct OracleResult {
  /// Achieved max of normal . x over the body.
  double mu = 0.0;
  CandidatePoint argmax;
  /// False when the restarts of an approximate oracle disagreed.
  bool agreed = true;
};

/// Minimisation of a concave objective over a convex body S, seen through
/// its support oracle and a continuity cost.
class CertifyProblem {
 public:
  virtual ~CertifyProblem() = default;
  virtual int dimension() const = 0;
  /// D + 1 affinely independent points of S.
  virtual std::vector<CandidatePoint> initial_points() = 0;
  virtual double value(const CandidatePoint& p) = 0;
  /// Maximises normal . x over S. `facet_points` are known points on the
  /// facet with this normal, usable as warm starts; `stream` seeds any
  /// randomness. Must be safe to call concurrently.
  virtual OracleResult linear_max(const RealVector& normal,
                                  const std::vector<const CandidatePoint*>& facet_points,
                                  std::uint64_t stream) const = 0;
  /// Distance used by the update rule; Euclidean by default.
  virtual double distance(const RealVector& a, const RealVector& b) const { return (a - b).norm(); }
  /// Upper bound on |value(s) - value(vertex)| for points s no farther from
  /// `vertex` than the outer vertex.
  virtual double cost(const RealVector& vertex, const RealVector& outer) = 0;
};

struct Hyperplane {
  RealVector normal;
  double offset = 0.0;
};

struct OuterVertexResult {
  RealVector point;
  /// max_i |normal_i . point - offset_i|.
  double residual = 0.0;
  /// The system stayed singular after one perturbation retry.
  bool singular = false;
};

/// Intersection of D hyperplanes in R^D. A singular system is retried once
/// with normals perturbed by 1e-10.
OuterVertexResult outer_vertex(const std::vector<Hyperplane>& planes);

/// c = 2 delta - delta^2 with delta = sqrt(norm_a) + sqrt(norm_b) capped at 1.
double cost_from_trace_norms(double norm_a, double norm_b);

/// Cost between a state pair and a (Hermitian, unit-trace) matrix pair.
double delta_cost(const StatePair& p, const ComplexMatrix& a_outer, const ComplexMatrix& b_outer);

struct Face {
  std::vector<int> vertex_ids;
  RealVector normal;
  double offset = 0.0;
  double mu = 0.0;
  /// Support point returned by the oracle for this normal.
  CandidatePoint tangent;
};

struct PolytopeState {
  std::vector<CandidatePoint> points;
  std::vector<int> hull_vertices;
  std::vector<Face> faces;
  /// Cost c_i per hull vertex (same order as hull_vertices).
  std::vector<double> costs;
  double lower_bound = 0.0;
  double upper_bound = 1.0;
  int iteration = 0;
};

struct TraceEntry {
  int iteration = 0;
  double lower = 0.0;
  double upper = 0.0;
  int n_points = 0;
  int n_faces = 0;
};

struct CertifyOptions {
  /// Number of points added after the initial simplex.
  int budget = 200;
  /// Stop once upper - lower falls below this.
  double gap_tol = 1e-6;
  std::uint64_t seed = 42;
  /// Random restarts of the support oracle (in addition to warm starts).
  int oracle_restarts = 6;
  /// Idler dimension; -1 selects 1 for verified entanglement-breaking pairs
  /// and 2d otherwise (states of dimension 2 d^2).
  int idler_dim = -1;
};

struct CertifyResult {
  double lower = 0.0;
  double upper = 1.0;
  /// Argmin point of the upper bound.
  std::optional<StatePair> upper_witness;
  std::vector<TraceEntry> trace;
  bool budget_exhausted = false;
  /// Support-oracle calls whose restarts disagreed.
  int oracle_disagreements = 0;
  /// Outer vertices whose linear system stayed singular (costed at 1).
  int singular_vertices = 0;
  PolytopeState final_state;
};

/// The polytope loop: hull of known points, tangent planes, outer vertices,
/// costs, lower = max over iterations of min_i (value_i - c_i),
/// upper = min value seen.
CertifyResult run_certification(CertifyProblem& problem, const CertifyOptions& opts);

/// Channel problem: minimise F_out over the hull of pure pairs (M = idler * d
/// dimensional) with overlap exactly f. Coordinates of a pair are the
/// coefficients of both states in an orthonormal traceless Hermitian basis,
/// D = 2 (M^2 - 1).
class OutputFidelityProblem : public CertifyProblem {
 public:
  OutputFidelityProblem(ChannelPair pair, double f, int idler_dim, std::uint64_t seed,
                        int oracle_restarts);

  int dimension() const override { return 2 * (m_ * m_ - 1); }
  int state_dim() const { return m_; }
  int idler_dim() const { return idler_; }
  double f() const { return f_; }

  std::vector<CandidatePoint> initial_points() override;
  double value(const CandidatePoint& p) override;
  OracleResult linear_max(const RealVector& normal,
                          const std::vector<const CandidatePoint*>& facet_points,
                          std::uint64_t stream) const override;
  double cost(const RealVector& vertex, const RealVector& outer) override;
  double distance(const RealVector& a, const RealVector& b) const override;

  CandidatePoint from_states(const ComplexVector& a, const ComplexVector& b) const;
  RealVector coords(const ComplexMatrix& rho) const;
  /// I/M + sum x_a G_a.
  ComplexMatrix matrix(const RealVector& x, Eigen::Index offset) const;

 private:
  double trace_norm_of_coords(const RealVector& dx, Eigen::Index offset) const;

  ChannelPair pair_;
  double f_;
  int idler_;
  int m_;
  std::uint64_t seed_;
  int oracle_restarts_;
  std::vector<ComplexMatrix> basis_;
};

int resolve_certify_idler(const ChannelPair& pair, int requested);

/// D + 1 seeded pure pairs with overlap f, hull and bounds of the initial simplex.
PolytopeState init_polytope(const ChannelPair& pair, double f, const CertifyOptions& opts);

/// Support oracle for the channel problem with a normal given as two
/// traceless Hermitian matrices.
OracleResult linear_max_oracle(const ChannelPair& pair, const ComplexMatrix& n1,
                               const ComplexMatrix& n2, double f, const CertifyOptions& opts);

/// Certified lower and achieved upper bounds on F_out,min(f); divide by f
/// for the relative fidelity.
CertifyResult certify_lower_bound(const ChannelPair& pair, double f, const CertifyOptions& opts);

/// JSON: {"lower":..., "upper":..., "trace":[{"iteration","lower","upper","n_points"}...]}.
void write_trace_json(std::ostream& os, const CertifyResult& r, double f);

}  // namespace relfid
