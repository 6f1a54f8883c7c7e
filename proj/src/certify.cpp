#include "relfid/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "json.hpp"
#include "relfid/errors.hpp"
#include "relfid/optimize.hpp"

namespace relfid {

OuterVertexResult outer_vertex(const std::vector<Hyperplane>& planes) {
  const int d = static_cast<int>(planes.size());
  OuterVertexResult out;
  if (d == 0) {
    out.singular = true;
    return out;
  }
  RealMatrix a(d, d);
  RealVector b(d);
  for (int i = 0; i < d; ++i) {
    if (planes[i].normal.size() != d) throw ValidationError("outer_vertex needs D planes in R^D");
    a.row(i) = planes[i].normal.transpose();
    b(i) = planes[i].offset;
  }
  auto solve = [&](const RealMatrix& m, RealVector& x) {
    Eigen::PartialPivLU<RealMatrix> lu(m);
    if (!(lu.rcond() > 1e-12)) return false;
    x = lu.solve(b);
    return x.allFinite();
  };
  RealVector x;
  bool ok = solve(a, x);
  if (!ok) {
    RealMatrix perturbed = a;
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) perturbed(i, j) += 1e-10 * std::sin(1.0 + 7.0 * i + 3.0 * j);
    }
    ok = solve(perturbed, x);
  }
  if (!ok) {
    out.singular = true;
    return out;
  }
  out.point = x;
  out.residual = (a * x - b).cwiseAbs().maxCoeff();
  // The perturbed system can be solvable while the original is inconsistent.
  if (out.residual > 1e-6 * (1.0 + b.cwiseAbs().maxCoeff())) out.singular = true;
  return out;
}

double cost_from_trace_norms(double norm_a, double norm_b) {
  if (!(norm_a >= 0.0) || !(norm_b >= 0.0)) throw ValidationError("trace norms must be non-negative");
  const double delta = std::min(1.0, std::sqrt(norm_a) + std::sqrt(norm_b));
  return 2.0 * delta - delta * delta;
}

double delta_cost(const StatePair& p, const ComplexMatrix& a_outer, const ComplexMatrix& b_outer) {
  if (a_outer.rows() != p.s1.dim() || b_outer.rows() != p.s2.dim()) {
    throw ValidationError("delta_cost: dimension mismatch");
  }
  return cost_from_trace_norms(trace_norm(p.s1.mat() - a_outer), trace_norm(p.s2.mat() - b_outer));
}

namespace {

std::uint64_t facet_stream(const std::vector<int>& verts) {
  std::uint64_t h = 1469598103934665603ull;
  for (int v : verts) {
    h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

CertifyResult run_certification(CertifyProblem& problem, const CertifyOptions& opts) {
  if (opts.budget < 0) throw ValidationError("budget must be non-negative");
  const int dim = problem.dimension();
  CertifyResult res;
  std::vector<CandidatePoint> points = problem.initial_points();
  if (static_cast<int>(points.size()) != dim + 1) {
    throw ValidationError("problem must supply D + 1 initial points");
  }
  std::vector<int> ids(points.size());
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<RealVector> xs;
  for (auto& p : points) {
    p.value = problem.value(p);
    xs.push_back(p.x);
  }
  ConvexHull hull(dim);
  hull.init(ids, xs);

  int best_point = 0;
  for (int i = 0; i < static_cast<int>(points.size()); ++i) {
    if (points[i].value < points[best_point].value) best_point = i;
  }
  double lower = -std::numeric_limits<double>::infinity();
  std::map<std::vector<int>, OracleResult> tangents;

  PolytopeState state;
  for (int iter = 0;; ++iter) {
    const auto& facets = hull.facets();
    const auto& nb = hull.neighbors();
    const int nf = static_cast<int>(facets.size());

    // Support points for new facets.
    std::vector<int> missing;
    for (int i = 0; i < nf; ++i) {
      if (!tangents.count(facets[i].vertices)) missing.push_back(i);
    }
    std::vector<OracleResult> found(missing.size());
    parallel_for(static_cast<int>(missing.size()), [&](int j) {
      const auto& fc = facets[missing[j]];
      std::vector<const CandidatePoint*> on_facet;
      for (int v : fc.vertices) on_facet.push_back(&points[v]);
      found[j] = problem.linear_max(fc.normal, on_facet, opts.seed ^ facet_stream(fc.vertices));
    });
    for (std::size_t j = 0; j < missing.size(); ++j) {
      const auto& fc = facets[missing[j]];
      OracleResult r = std::move(found[j]);
      if (!r.agreed) ++res.oracle_disagreements;
      if (r.mu < fc.offset) {
        // The facet's own vertices are feasible, so the support value is at
        // least the offset; an oracle that falls short is overruled.
        if (r.mu < fc.offset - 1e-9) ++res.oracle_disagreements;
        r.mu = fc.offset;
        r.argmax = points[fc.vertices.front()];
      }
      tangents.emplace(fc.vertices, std::move(r));
    }

    // Outer vertices and per-vertex costs.
    std::map<int, std::pair<double, std::pair<int, int>>> vertex_cost;
    for (int v : hull.vertices()) vertex_cost[v] = {0.0, {-1, -1}};
    int singular = 0;
    std::vector<Hyperplane> planes(dim);
    for (int i = 0; i < nf; ++i) {
      for (int k = 0; k < dim; ++k) {
        double c = 1.0;
        bool have_planes = true;
        planes[0] = {facets[i].normal, tangents.at(facets[i].vertices).mu};
        int slot = 1;
        for (int j = 0; j < dim && have_planes; ++j) {
          if (j == k) continue;
          const int n = nb[i][j];
          if (n < 0) {
            have_planes = false;
            break;
          }
          planes[slot++] = {facets[n].normal, tangents.at(facets[n].vertices).mu};
        }
        const int v = facets[i].vertices[k];
        if (have_planes) {
          const auto ov = outer_vertex(planes);
          if (ov.singular) {
            ++singular;
          } else {
            c = std::min(1.0, problem.cost(points[v].x, ov.point));
          }
        } else {
          ++singular;
        }
        auto& slot_cost = vertex_cost[v];
        if (slot_cost.second.first < 0 || c > slot_cost.first) slot_cost = {c, {i, k}};
      }
    }
    res.singular_vertices = std::max(res.singular_vertices, singular);

    int argmin = -1;
    double iter_lower = std::numeric_limits<double>::infinity();
    for (const auto& [v, vc] : vertex_cost) {
      const double l = points[v].value - vc.first;
      if (l < iter_lower) {
        iter_lower = l;
        argmin = v;
      }
    }
    lower = std::max(lower, iter_lower);
    const double upper = points[best_point].value;
    res.trace.push_back({iter, lower, upper, static_cast<int>(points.size()), nf});

    const bool closed = upper - lower < opts.gap_tol;
    const bool out_of_budget = iter >= opts.budget;
    if (closed || out_of_budget) {
      res.budget_exhausted = out_of_budget && !closed;
      state.iteration = iter;
      state.costs.clear();
      state.hull_vertices = hull.vertices();
      for (int v : state.hull_vertices) state.costs.push_back(vertex_cost.at(v).first);
      break;
    }

    // Update rule: tangent points of the planes meeting at the argmin
    // vertex's outer vertex, farthest first.
    const auto [fi, fk] = vertex_cost.at(argmin).second;
    std::vector<int> candidates{fi};
    for (int j = 0; j < dim; ++j) {
      if (j != fk && nb[fi][j] >= 0) candidates.push_back(nb[fi][j]);
    }
    std::vector<std::pair<double, int>> order;
    for (int c : candidates) {
      const auto& t = tangents.at(facets[c].vertices);
      order.push_back({-problem.distance(t.argmax.x, points[argmin].x), c});
    }
    std::sort(order.begin(), order.end());
    std::vector<std::pair<double, int>> fallback;
    for (int i = 0; i < nf; ++i) {
      fallback.push_back({-(tangents.at(facets[i].vertices).mu - facets[i].offset), i});
    }
    std::sort(fallback.begin(), fallback.end());
    order.insert(order.end(), fallback.begin(), fallback.end());

    bool added = false;
    for (const auto& [key, c] : order) {
      const CandidatePoint& cand = tangents.at(facets[c].vertices).argmax;
      const int id = static_cast<int>(points.size());
      if (hull.add(id, cand.x)) {
        points.push_back(cand);
        points.back().value = problem.value(points.back());
        if (points.back().value < points[best_point].value) best_point = id;
        added = true;
        break;
      }
    }
    if (!added) {
      // Every support point is already inside the polytope: R equals S up
      // to oracle accuracy.
      state.iteration = iter;
      state.hull_vertices = hull.vertices();
      for (int v : state.hull_vertices) state.costs.push_back(vertex_cost.at(v).first);
      break;
    }
  }

  res.lower = lower;
  res.upper = points[best_point].value;
  res.upper_witness = points[best_point].pair;
  state.lower_bound = res.lower;
  state.upper_bound = res.upper;
  for (const auto& fc : hull.facets()) {
    const auto& t = tangents.at(fc.vertices);
    state.faces.push_back({fc.vertices, fc.normal, fc.offset, t.mu, t.argmax});
  }
  state.points = std::move(points);
  res.final_state = std::move(state);
  return res;
}

int resolve_certify_idler(const ChannelPair& pair, int requested) {
  if (requested >= 1) return requested;
  return verified_entanglement_breaking(pair) ? 1 : 2 * pair.dim_in();
}

OutputFidelityProblem::OutputFidelityProblem(ChannelPair pair, double f, int idler_dim,
                                             std::uint64_t seed, int oracle_restarts)
    : pair_(std::move(pair)),
      f_(f),
      idler_(idler_dim),
      m_(idler_dim * pair_.dim_in()),
      seed_(seed),
      oracle_restarts_(oracle_restarts),
      basis_(traceless_hermitian_basis(idler_dim * pair_.dim_in())) {
  if (!(f > 0.0 && f < 1.0)) throw ValidationError("certification needs f in (0, 1)");
  if (idler_dim < 1) throw ValidationError("idler dimension must be positive");
  if (oracle_restarts < 0) throw ValidationError("oracle restarts must be non-negative");
}

RealVector OutputFidelityProblem::coords(const ComplexMatrix& rho) const {
  RealVector x(basis_.size());
  for (std::size_t a = 0; a < basis_.size(); ++a) {
    x(static_cast<Eigen::Index>(a)) = (basis_[a] * rho).trace().real();
  }
  return x;
}

ComplexMatrix OutputFidelityProblem::matrix(const RealVector& x, Eigen::Index offset) const {
  ComplexMatrix m = ComplexMatrix::Identity(m_, m_) / static_cast<double>(m_);
  for (std::size_t a = 0; a < basis_.size(); ++a) {
    m += x(offset + static_cast<Eigen::Index>(a)) * basis_[a];
  }
  return m;
}

CandidatePoint OutputFidelityProblem::from_states(const ComplexVector& a,
                                                  const ComplexVector& b) const {
  CandidatePoint p;
  const ComplexMatrix ra = a * a.adjoint();
  const ComplexMatrix rb = b * b.adjoint();
  const Eigen::Index half = static_cast<Eigen::Index>(basis_.size());
  p.x.resize(2 * half);
  p.x.head(half) = coords(ra);
  p.x.tail(half) = coords(rb);
  p.pair = StatePair{DensityMatrix::assume_valid(ra), DensityMatrix::assume_valid(rb)};
  return p;
}

std::vector<CandidatePoint> OutputFidelityProblem::initial_points() {
  const int dim = dimension();
  const PairChart chart{m_, f_, true};
  auto rng = seeded_rng(seed_, 0x1A17);
  std::vector<CandidatePoint> chosen;
  RealMatrix diffs(dim, 0);
  for (int attempt = 0; attempt < 200 * (dim + 1) && static_cast<int>(chosen.size()) <= dim;
       ++attempt) {
    const auto [a, b] = chart.states(chart.random_point(rng));
    CandidatePoint p = from_states(a, b);
    if (chosen.empty()) {
      chosen.push_back(std::move(p));
      continue;
    }
    RealMatrix trial(dim, diffs.cols() + 1);
    trial << diffs, p.x - chosen.front().x;
    Eigen::JacobiSVD<RealMatrix> svd(trial);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > 1e-6 * std::max(1.0, sv(0))) {
      diffs = std::move(trial);
      chosen.push_back(std::move(p));
    }
  }
  if (static_cast<int>(chosen.size()) != dim + 1) {
    throw NumericalError("could not find D + 1 affinely independent initial points");
  }
  return chosen;
}

double OutputFidelityProblem::value(const CandidatePoint& p) {
  if (!p.pair) throw ValidationError("candidate point carries no state pair");
  return output_fidelity(pair_, dominant_vector(p.pair->s1), dominant_vector(p.pair->s2), idler_);
}

OracleResult OutputFidelityProblem::linear_max(
    const RealVector& normal, const std::vector<const CandidatePoint*>& facet_points,
    std::uint64_t stream) const {
  const Eigen::Index half = static_cast<Eigen::Index>(basis_.size());
  ComplexMatrix n1 = ComplexMatrix::Zero(m_, m_);
  ComplexMatrix n2 = ComplexMatrix::Zero(m_, m_);
  for (Eigen::Index a = 0; a < half; ++a) {
    n1 += normal(a) * basis_[a];
    n2 += normal(half + a) * basis_[a];
  }
  const PairChart chart{m_, f_, true};
  const Objective obj = [&](const RealVector& v) {
    const auto [a, b] = chart.states(v);
    return -((a.adjoint() * n1 * a)(0, 0).real() + (b.adjoint() * n2 * b)(0, 0).real());
  };
  std::vector<RealVector> starts;
  {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> e1(n1), e2(n2);
    starts.push_back(chart.encode(e1.eigenvectors().col(m_ - 1), e2.eigenvectors().col(m_ - 1)));
  }
  for (std::size_t i = 0; i < facet_points.size() && i < 2; ++i) {
    const auto& pr = facet_points[i]->pair;
    if (pr) starts.push_back(chart.encode(dominant_vector(pr->s1), dominant_vector(pr->s2)));
  }
  LocalOptions lo;
  lo.max_iters = 300;
  const auto ms = multistart_minimize(
      obj, [&](std::mt19937_64& rng) { return chart.random_point(rng); },
      static_cast<int>(starts.size()) + oracle_restarts_, seed_ ^ stream, lo, 1e-7, starts);
  const auto [a, b] = chart.states(ms.best.x);
  OracleResult r;
  r.argmax = from_states(a, b);
  r.mu = normal.dot(r.argmax.x);
  r.agreed = ms.agreed;
  return r;
}

double OutputFidelityProblem::trace_norm_of_coords(const RealVector& dx, Eigen::Index offset) const {
  const Eigen::Index half = static_cast<Eigen::Index>(basis_.size());
  if (m_ == 2) return std::sqrt(2.0) * dx.segment(offset, half).norm();
  ComplexMatrix m = ComplexMatrix::Zero(m_, m_);
  for (Eigen::Index a = 0; a < half; ++a) m += dx(offset + a) * basis_[a];
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

double OutputFidelityProblem::cost(const RealVector& vertex, const RealVector& outer) {
  const RealVector dx = outer - vertex;
  const Eigen::Index half = static_cast<Eigen::Index>(basis_.size());
  return cost_from_trace_norms(trace_norm_of_coords(dx, 0), trace_norm_of_coords(dx, half));
}

double OutputFidelityProblem::distance(const RealVector& a, const RealVector& b) const {
  const RealVector dx = a - b;
  const Eigen::Index half = static_cast<Eigen::Index>(basis_.size());
  return trace_norm_of_coords(dx, 0) + trace_norm_of_coords(dx, half);
}

PolytopeState init_polytope(const ChannelPair& pair, double f, const CertifyOptions& opts) {
  CertifyOptions o = opts;
  o.budget = 0;
  OutputFidelityProblem problem(pair, f, resolve_certify_idler(pair, opts.idler_dim), opts.seed,
                                opts.oracle_restarts);
  return run_certification(problem, o).final_state;
}

OracleResult linear_max_oracle(const ChannelPair& pair, const ComplexMatrix& n1,
                               const ComplexMatrix& n2, double f, const CertifyOptions& opts) {
  const int m = static_cast<int>(n1.rows());
  if (n1.cols() != m || n2.rows() != m || n2.cols() != m || m % pair.dim_in() != 0) {
    throw ValidationError("normal matrices must be square with dimension idler * d");
  }
  OutputFidelityProblem problem(pair, f, m / pair.dim_in(), opts.seed, opts.oracle_restarts);
  const Eigen::Index half = m * m - 1;
  RealVector normal(2 * half);
  normal.head(half) = problem.coords(n1);
  normal.tail(half) = problem.coords(n2);
  return problem.linear_max(normal, {}, 0);
}

CertifyResult certify_lower_bound(const ChannelPair& pair, double f, const CertifyOptions& opts) {
  OutputFidelityProblem problem(pair, f, resolve_certify_idler(pair, opts.idler_dim), opts.seed,
                                opts.oracle_restarts);
  return run_certification(problem, opts);
}

void write_trace_json(std::ostream& os, const CertifyResult& r, double f) {
  nlohmann::json j;
  j["f"] = f;
  j["output_fidelity"] = {{"lower", r.lower}, {"upper", r.upper}};
  j["relative_fidelity"] = {{"lower", r.lower / f}, {"upper", r.upper / f}};
  j["budget_exhausted"] = r.budget_exhausted;
  j["oracle_disagreements"] = r.oracle_disagreements;
  j["singular_vertices"] = r.singular_vertices;
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : r.trace) {
    trace.push_back({{"iteration", t.iteration},
                     {"lower", t.lower},
                     {"upper", t.upper},
                     {"n_points", t.n_points},
                     {"n_faces", t.n_faces}});
  }
  j["trace"] = std::move(trace);
  os << j.dump(2) << '\n';
}

}  // namespace relfid
