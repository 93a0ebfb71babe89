#pragma once

// Max-min point separation. The candidate edge set is either the spherical
// Delaunay triangulation (d = 2, Möbius invariant) or grown by a
// sample-and-verify loop: solve on the current edges plus random pairs,
// then add every pair of the transformed configuration closer than the
// achieved separation, until no such pair is missing.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <random>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mobius/errors.hpp"
#include "mobius/geometry.hpp"
#include "mobius/objectives.hpp"
#include "mobius/predicates.hpp"
#include "mobius/solver.hpp"

namespace mobius {

using IndexPair = std::pair<std::size_t, std::size_t>;

struct PointSet {
  std::vector<Vec> points;
  Setting setting = Setting::Sphere;

  PointSet() = default;
  PointSet(std::vector<Vec> pts, Setting s) : points(std::move(pts)), setting(s) { validate(); }

  std::size_t size() const { return points.size(); }
  /// d: the points lie on S^d (ambient d+1) or in B^d.
  Eigen::Index dim() const {
    if (points.empty()) return 0;
    return setting == Setting::Sphere ? points[0].size() - 1 : points[0].size();
  }
  /// Dimension of the viewpoint space.
  Eigen::Index viewpoint_dim() const { return setting == Setting::Sphere ? dim() + 1 : dim(); }

  void validate() const {
    if (points.empty()) return;
    const Eigen::Index m = points[0].size();
    for (std::size_t i = 0; i < points.size(); ++i) {
      const Vec& p = points[i];
      if (p.size() != m) throw Error(ErrorKind::Validation, "point " + std::to_string(i) + " has wrong dimension");
      if (!p.allFinite()) throw Error(ErrorKind::Validation, "point " + std::to_string(i) + " is not finite");
      if (setting == Setting::Sphere && std::abs(p.norm() - 1.0) > 1e-9) {
        throw Error(ErrorKind::Validation, "point " + std::to_string(i) + " is not on the unit sphere");
      }
      if (setting == Setting::Ball && !(p.squaredNorm() < 1.0)) {
        throw Error(ErrorKind::Validation, "point " + std::to_string(i) + " is not inside the unit ball");
      }
    }
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    const auto less = [&](std::size_t a, std::size_t b) {
      return std::lexicographical_compare(points[a].data(), points[a].data() + m, points[b].data(),
                                          points[b].data() + m);
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t k = 1; k < order.size(); ++k) {
      if (points[order[k]] == points[order[k - 1]]) {
        throw Error(ErrorKind::Validation, "points " + std::to_string(order[k - 1]) + " and " +
                                               std::to_string(order[k]) + " coincide");
      }
    }
  }
};

enum class Provenance { Delaunay, Sampled, Verified };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Delaunay: return "delaunay";
    case Provenance::Sampled: return "sampled";
    case Provenance::Verified: return "verified";
  }
  return "unknown";
}

struct CandidateGraph {
  std::vector<IndexPair> edges;  // i < j, sorted
  Provenance provenance = Provenance::Delaunay;
};

// ---------------------------------------------------------------------------
// 3D convex hull, randomized incremental with conflict lists.

using Triangle = std::array<std::size_t, 3>;

namespace detail {

class Hull3 {
 public:
  explicit Hull3(const std::vector<Eigen::Vector3d>& pts, std::uint64_t seed) : pts_(pts) {
    const std::size_t n = pts_.size();
    if (n < 4) throw Error(ErrorKind::DegenerateHull, "hull needs at least 4 points");
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order_.begin(), order_.end(), rng);
    start();
    for (std::size_t k = 4; k < n; ++k) insert(order_[k]);
  }

  std::vector<Triangle> triangles() const {
    std::vector<Triangle> out;
    for (const Face& f : faces_)
      if (f.alive) out.push_back(f.v);
    return out;
  }

 private:
  struct Face {
    Triangle v{};
    std::array<std::size_t, 3> nb{};  // neighbor across edge (v[i], v[i+1])
    std::vector<std::size_t> conflicts;
    bool alive = true;
  };

  int orient(const Triangle& t, std::size_t p) const {
    return predicates::orient3d(pts_[t[0]].data(), pts_[t[1]].data(), pts_[t[2]].data(), pts_[p].data());
  }

  bool sees(std::size_t f, std::size_t p) const { return orient(faces_[f].v, p) > 0; }

  void start() {
    // First four affinely independent points (in insertion order) become the
    // initial simplex; they are swapped to the front of the order.
    const std::size_t n = order_.size();
    std::size_t i1 = 1;
    while (i1 < n && pts_[order_[i1]] == pts_[order_[0]]) ++i1;
    if (i1 == n) throw Error(ErrorKind::DegenerateHull, "all points coincide");
    std::swap(order_[1], order_[i1]);
    const Eigen::Vector3d a = pts_[order_[0]], b = pts_[order_[1]];
    std::size_t i2 = n;
    double best = 0.0;
    for (std::size_t k = 2; k < n; ++k) {
      const double c = (b - a).cross(pts_[order_[k]] - a).norm();
      if (c > best) {
        best = c;
        i2 = k;
      }
    }
    if (i2 == n) throw Error(ErrorKind::DegenerateHull, "all points are collinear");
    std::swap(order_[2], order_[i2]);
    std::size_t i3 = n;
    int s = 0;
    for (std::size_t k = 3; k < n && i3 == n; ++k) {
      s = predicates::orient3d(pts_[order_[0]].data(), pts_[order_[1]].data(), pts_[order_[2]].data(),
                               pts_[order_[k]].data());
      if (s != 0) i3 = k;
    }
    if (i3 == n) throw Error(ErrorKind::DegenerateHull, "all points are coplanar");
    std::swap(order_[3], order_[i3]);

    std::size_t p0 = order_[0], p1 = order_[1], p2 = order_[2], p3 = order_[3];
    // Orient so that p3 is on the negative side of (p0, p1, p2).
    if (s > 0) std::swap(p1, p2);
    const Triangle tri[4] = {{p0, p1, p2}, {p0, p3, p1}, {p1, p3, p2}, {p2, p3, p0}};
    for (const Triangle& t : tri) {
      Face f;
      f.v = t;
      faces_.push_back(f);
    }
    link_all();
    point_conflicts_.assign(order_.size(), {});
    inserted_.assign(order_.size(), 0);
    stamp_.assign(order_.size(), static_cast<std::size_t>(-1));
    for (std::size_t k = 0; k < 4; ++k) inserted_[order_[k]] = 1;
    for (std::size_t k = 4; k < order_.size(); ++k) {
      const std::size_t p = order_[k];
      for (std::size_t f = 0; f < 4; ++f)
        if (sees(f, p)) add_conflict(f, p);
    }
  }

  void link_all() {
    std::unordered_map<std::uint64_t, std::size_t> edge;
    auto key = [](std::size_t a, std::size_t b) { return (static_cast<std::uint64_t>(a) << 32) | b; };
    for (std::size_t f = 0; f < faces_.size(); ++f)
      for (int i = 0; i < 3; ++i) edge[key(faces_[f].v[i], faces_[f].v[(i + 1) % 3])] = f;
    for (std::size_t f = 0; f < faces_.size(); ++f)
      for (int i = 0; i < 3; ++i) faces_[f].nb[i] = edge.at(key(faces_[f].v[(i + 1) % 3], faces_[f].v[i]));
  }

  void add_conflict(std::size_t f, std::size_t p) {
    faces_[f].conflicts.push_back(p);
    point_conflicts_[p].push_back(f);
  }

  void insert(std::size_t p) {
    std::vector<std::size_t> visible;
    for (std::size_t f : point_conflicts_[p])
      if (faces_[f].alive) visible.push_back(f);
    point_conflicts_[p].clear();
    point_conflicts_[p].shrink_to_fit();
    if (visible.empty()) return;  // inside or on the hull: not a vertex
    for (std::size_t f : visible) faces_[f].alive = false;

    // Horizon: edges of visible faces whose neighbor stays.
    struct HorizonEdge {
      std::size_t a, b, inside, outside;
    };
    std::vector<HorizonEdge> horizon;
    for (std::size_t f : visible) {
      for (int i = 0; i < 3; ++i) {
        const std::size_t g = faces_[f].nb[i];
        if (faces_[g].alive) horizon.push_back({faces_[f].v[i], faces_[f].v[(i + 1) % 3], f, g});
      }
    }

    std::unordered_map<std::size_t, std::size_t> starts_at, ends_at;
    for (const HorizonEdge& e : horizon) {
      Face nf;
      nf.v = {e.a, e.b, p};
      const std::size_t id = faces_.size();
      nf.nb[0] = e.outside;
      faces_.push_back(std::move(nf));
      Face& g = faces_[e.outside];
      for (int i = 0; i < 3; ++i)
        if (g.v[i] == e.b && g.v[(i + 1) % 3] == e.a) g.nb[i] = id;
      starts_at[e.a] = id;
      ends_at[e.b] = id;

      // Candidates: points conflicting with either face adjacent to the edge.
      for (const std::size_t* list_face : {&e.inside, &e.outside}) {
        for (std::size_t q : faces_[*list_face].conflicts) {
          if (q == p || inserted_[q] || stamp_[q] == id) continue;
          stamp_[q] = id;
          if (sees(id, q)) add_conflict(id, q);
        }
      }
    }
    for (const HorizonEdge& e : horizon) {
      const std::size_t id = starts_at.at(e.a);
      faces_[id].nb[1] = starts_at.at(e.b);  // edge (b, p) borders the face starting at b
      faces_[id].nb[2] = ends_at.at(e.a);    // edge (p, a) borders the face ending at a
    }
    inserted_[p] = 1;
    for (std::size_t f : visible) {
      faces_[f].conflicts.clear();
      faces_[f].conflicts.shrink_to_fit();
    }
  }

  const std::vector<Eigen::Vector3d>& pts_;
  std::vector<std::size_t> order_;
  std::vector<Face> faces_;
  std::vector<std::vector<std::size_t>> point_conflicts_;
  std::vector<char> inserted_;
  std::vector<std::size_t> stamp_;  // last new face a point was tested against
};

}  // namespace detail

/// Oriented triangles (outward, counterclockwise from outside) of the convex
/// hull of points in R^3. Points interior to the hull do not appear.
inline std::vector<Triangle> convex_hull_3d(const std::vector<Eigen::Vector3d>& pts, std::uint64_t seed = 0) {
  return detail::Hull3(pts, seed).triangles();
}

inline std::vector<IndexPair> triangle_edges(const std::vector<Triangle>& tris) {
  std::vector<IndexPair> out;
  for (const Triangle& t : tris)
    for (int i = 0; i < 3; ++i) {
      const std::size_t a = t[i], b = t[(i + 1) % 3];
      out.emplace_back(std::min(a, b), std::max(a, b));
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Spherical Delaunay triangulation edges of points on S^2 (their convex
/// hull edges).
inline CandidateGraph delaunay_sphere(const PointSet& ps) {
  if (ps.setting != Setting::Sphere || ps.dim() != 2) {
    throw Error(ErrorKind::UnsupportedDimension, "delaunay_sphere needs points on S^2");
  }
  std::vector<Eigen::Vector3d> pts;
  pts.reserve(ps.size());
  for (const Vec& p : ps.points) pts.emplace_back(p[0], p[1], p[2]);
  const std::vector<Triangle> tris = convex_hull_3d(pts);
  std::vector<char> used(ps.size(), 0);
  for (const Triangle& t : tris)
    for (std::size_t v : t) used[v] = 1;
  if (std::count(used.begin(), used.end(), 0) > 0) {
    throw Error(ErrorKind::DegenerateHull, "a point is not a hull vertex (points not on the sphere)");
  }
  return {triangle_edges(tris), Provenance::Delaunay};
}

// ---------------------------------------------------------------------------
// Close pairs.

namespace detail {

inline double separation(const Vec& a, const Vec& b, Setting s) {
  const double chord = (a - b).norm();
  if (s == Setting::Ball) return chord;
  return 2.0 * std::asin(std::min(1.0, chord / 2.0));
}

struct CellHash {
  std::size_t operator()(const std::vector<std::int64_t>& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::int64_t x : k) {
      h ^= static_cast<std::uint64_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

/// All unordered pairs {i < j} at distance < delta: arc length on the unit
/// sphere (sphere setting) or Euclidean distance (ball setting). Sorted.
inline std::vector<IndexPair> close_pairs(std::span<const Vec> points, double delta, Setting setting) {
  if (!(delta > 0.0)) throw Error(ErrorKind::Validation, "close_pairs needs delta > 0");
  std::vector<IndexPair> out;
  const std::size_t n = points.size();
  if (n < 2) return out;
  double cell = delta;
  if (setting == Setting::Sphere) {
    if (delta >= std::numbers::pi) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (detail::separation(points[i], points[j], setting) < delta) out.emplace_back(i, j);
      return out;
    }
    cell = 2.0 * std::sin(delta / 2.0);
  }
  cell *= 1.0 + 1e-9;
  const Eigen::Index m = points[0].size();
  std::unordered_map<std::vector<std::int64_t>, std::vector<std::size_t>, detail::CellHash> grid;
  std::vector<std::vector<std::int64_t>> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::int64_t> k(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) k[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(std::floor(points[i][j] / cell));
    grid[k].push_back(i);
    keys[i] = std::move(k);
  }
  std::vector<std::int64_t> probe(static_cast<std::size_t>(m));
  std::vector<int> off(static_cast<std::size_t>(m), -1);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(off.begin(), off.end(), -1);
    while (true) {
      for (std::size_t j = 0; j < probe.size(); ++j) probe[j] = keys[i][j] + off[j];
      const auto it = grid.find(probe);
      if (it != grid.end()) {
        for (std::size_t k : it->second)
          if (k > i && detail::separation(points[i], points[k], setting) < delta) out.emplace_back(i, k);
      }
      std::size_t j = 0;
      while (j < off.size() && ++off[j] == 2) off[j++] = -1;
      if (j == off.size()) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Max-min separation.

inline SizeTerm separation_term(const PointSet& ps, const IndexPair& e) {
  const Vec& u = ps.points[e.first];
  const Vec& v = ps.points[e.second];
  const long src = static_cast<long>(e.first * ps.size() + e.second);
  return ps.setting == Setting::Sphere ? sphere_edge_term(u, v, src) : ball_edge_term(u, v, src);
}

/// Optimum of the edge objective over a fixed edge set.
inline Solution solve_edges(const PointSet& ps, std::span<const IndexPair> edges, const SolverConfig& config) {
  std::vector<SizeTerm> terms;
  terms.reserve(edges.size());
  for (const IndexPair& e : edges) terms.push_back(separation_term(ps, e));
  return minimize_max(std::span<const SizeTerm>(terms), ps.viewpoint_dim(), config);
}

inline std::vector<IndexPair> complete_graph(std::size_t n) {
  std::vector<IndexPair> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(i, j);
  return out;
}

/// Points moved by the recentering map of viewpoint x.
inline std::vector<Vec> transformed_points(const PointSet& ps, const KleinPoint& x) {
  const MobiusMap m = recenter_map(x, ps.setting);
  std::vector<Vec> out;
  out.reserve(ps.size());
  for (const Vec& p : ps.points) out.push_back(apply_point(m, p));
  return out;
}

struct SeparationResult {
  Solution solution;
  /// min separation of the transformed points, = -solution.t_star
  double separation = 0.0;
  int rounds = 0;
  CandidateGraph graph;  // final verified edge set (without the last sample)
};

struct SeparationConfig {
  SolverConfig solver;
  std::size_t samples_per_point = 3;
  int max_rounds = 32;
  /// Seed the candidate set with Delaunay edges when d = 2.
  bool delaunay_seed = true;
};

/// Max-min separation over all pairs via the sample-and-verify loop.
inline SeparationResult maxmin_separation(const PointSet& ps, const SeparationConfig& config = {}) {
  const std::size_t n = ps.size();
  if (n < 2) throw Error(ErrorKind::Validation, "max-min separation needs at least 2 points");
  std::vector<IndexPair> graph;
  if (config.delaunay_seed && ps.dim() == 2 && n >= 4) {
    if (ps.setting == Setting::Sphere) {
      graph = delaunay_sphere(ps).edges;
    } else {
      std::vector<Vec> lifted;
      for (const Vec& p : ps.points) lifted.push_back(inverse_stereographic(p));
      graph = delaunay_sphere(PointSet(std::move(lifted), Setting::Sphere)).edges;
    }
  }
  std::mt19937_64 rng(config.solver.rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  SeparationResult out;
  for (int round = 1; round <= config.max_rounds; ++round) {
    std::vector<IndexPair> candidates = graph;
    if (n == 2) {
      candidates.emplace_back(0, 1);
    } else {
      for (std::size_t k = 0; k < config.samples_per_point * n; ++k) {
        const std::size_t i = pick(rng);
        std::size_t j = pick(rng);
        while (j == i) j = pick(rng);
        candidates.emplace_back(std::min(i, j), std::max(i, j));
      }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    const Solution sol = solve_edges(ps, candidates, config.solver);
    const double delta = -sol.t_star;
    const std::vector<Vec> moved = transformed_points(ps, sol.x_star);
    const std::vector<IndexPair> close = close_pairs(moved, delta, ps.setting);
    std::vector<IndexPair> missing;
    std::set_difference(close.begin(), close.end(), candidates.begin(), candidates.end(), std::back_inserter(missing));

    std::vector<IndexPair> merged;
    std::set_union(graph.begin(), graph.end(), close.begin(), close.end(), std::back_inserter(merged));
    graph = std::move(merged);
    if (missing.empty()) {
      out.solution = sol;
      out.separation = delta;
      out.rounds = round;
      out.graph = {graph, Provenance::Verified};
      return out;
    }
  }
  throw Error(ErrorKind::NonConvergence, "sample-and-verify loop did not settle within the round limit");
}

}  // namespace mobius
