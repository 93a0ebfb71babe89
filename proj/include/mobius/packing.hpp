#pragma once

// Coin graphs. Planar graphs come as rotation systems (counterclockwise
// neighbor order per vertex). A maximal planar graph is packed by angle-sum
// iteration with one face as the fixed outer triple, laid out by tangency,
// lifted to S^2, and optionally normalized by maximizing the minimum cap
// radius over Möbius transformations.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mobius/errors.hpp"
#include "mobius/geometry.hpp"
#include "mobius/objectives.hpp"
#include "mobius/solver.hpp"

namespace mobius {

class EmbeddedGraph {
 public:
  EmbeddedGraph() = default;
  explicit EmbeddedGraph(std::vector<std::vector<std::size_t>> rotation) : rotation_(std::move(rotation)) {
    validate();
    trace_faces();
  }

  /// Rotation system of a triangulated sphere given by consistently
  /// oriented triangles.
  static EmbeddedGraph from_triangles(std::size_t n, std::span<const std::array<std::size_t, 3>> tris) {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> wedges(n);
    for (const auto& t : tris)
      for (int i = 0; i < 3; ++i) wedges[t[i]].emplace_back(t[(i + 1) % 3], t[(i + 2) % 3]);
    std::vector<std::vector<std::size_t>> rot(n);
    for (std::size_t v = 0; v < n; ++v) {
      const auto& w = wedges[v];
      if (w.empty()) throw Error(ErrorKind::Validation, "vertex " + std::to_string(v) + " is in no triangle");
      std::size_t cur = w[0].first;
      for (std::size_t k = 0; k < w.size(); ++k) {
        rot[v].push_back(cur);
        const auto it = std::find_if(w.begin(), w.end(), [&](const auto& p) { return p.first == cur; });
        if (it == w.end()) throw Error(ErrorKind::NonPlanarInput, "triangles do not close up around a vertex");
        cur = it->second;
      }
      if (cur != rot[v][0]) throw Error(ErrorKind::NonPlanarInput, "triangles do not close up around a vertex");
    }
    return EmbeddedGraph(std::move(rot));
  }

  std::size_t vertex_count() const { return rotation_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::vector<std::size_t>>& rotation() const { return rotation_; }
  const std::vector<std::vector<std::size_t>>& faces() const { return faces_; }
  /// Undirected edges, i < j, sorted.
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }

  bool is_triangulation() const {
    return std::all_of(faces_.begin(), faces_.end(), [](const auto& f) { return f.size() == 3; });
  }

  /// Position of u in the rotation of v.
  std::size_t index_of(std::size_t v, std::size_t u) const {
    const auto& r = rotation_[v];
    const auto it = std::find(r.begin(), r.end(), u);
    return static_cast<std::size_t>(it - r.begin());
  }

  /// Third vertex of the face to the left of the directed edge u -> v.
  std::size_t left_of(std::size_t u, std::size_t v) const {
    const auto& r = rotation_[v];
    const std::size_t i = index_of(v, u);
    return r[(i + r.size() - 1) % r.size()];
  }

 private:
  void validate() const {
    const std::size_t n = rotation_.size();
    if (n == 0) throw Error(ErrorKind::Validation, "graph has no vertices");
    for (std::size_t v = 0; v < n; ++v) {
      const auto& r = rotation_[v];
      for (std::size_t k = 0; k < r.size(); ++k) {
        const std::size_t u = r[k];
        const std::string where = "rotation of vertex " + std::to_string(v);
        if (u >= n) throw Error(ErrorKind::Validation, where + ": neighbor index out of range");
        if (u == v) throw Error(ErrorKind::Validation, where + ": self-loop");
        if (std::count(r.begin(), r.end(), u) != 1) throw Error(ErrorKind::Validation, where + ": repeated neighbor");
        const auto& ru = rotation_[u];
        if (std::find(ru.begin(), ru.end(), v) == ru.end()) {
          throw Error(ErrorKind::Validation, where + ": edge to " + std::to_string(u) + " is not symmetric");
        }
      }
    }
    // Connectivity.
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u : rotation_[v])
        if (!seen[u]) seen[u] = 1, stack.push_back(u);
    }
    if (std::count(seen.begin(), seen.end(), 0) > 0) throw Error(ErrorKind::Validation, "graph is not connected");
  }

  void trace_faces() {
    const std::size_t n = rotation_.size();
    std::vector<std::vector<char>> used(n);
    for (std::size_t v = 0; v < n; ++v) used[v].assign(rotation_[v].size(), 0);
    for (std::size_t v = 0; v < n; ++v)
      for (std::size_t u : rotation_[v])
        if (v < u) edges_.emplace_back(v, u);
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t k = 0; k < rotation_[u].size(); ++k) {
        if (used[u][k]) continue;
        std::vector<std::size_t> face;
        std::size_t a = u, b = rotation_[u][k];
        while (!used[a][index_of(a, b)]) {
          used[a][index_of(a, b)] = 1;
          face.push_back(a);
          const std::size_t c = left_of(a, b);
          a = b;
          b = c;
        }
        faces_.push_back(std::move(face));
      }
    }
    const long euler = static_cast<long>(n) - static_cast<long>(edges_.size()) + static_cast<long>(faces_.size());
    if (edges_.empty()) faces_.assign(1, {0});
    if (!edges_.empty() && euler != 2) {
      throw Error(ErrorKind::NonPlanarInput,
                  "rotation system is not a planar embedding (V - E + F = " + std::to_string(euler) + ")");
    }
  }

  std::vector<std::vector<std::size_t>> rotation_;
  std::vector<std::vector<std::size_t>> faces_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
};

struct Augmented {
  EmbeddedGraph graph;
  /// added[v] is true for the vertices inserted into faces
  std::vector<bool> added;
};

/// Insert one vertex into every face, adjacent to all of the face's vertices.
inline Augmented augment(const EmbeddedGraph& g) {
  for (std::size_t f = 0; f < g.faces().size(); ++f) {
    auto verts = g.faces()[f];
    std::sort(verts.begin(), verts.end());
    if (std::adjacent_find(verts.begin(), verts.end()) != verts.end() || verts.size() < 2) {
      throw Error(ErrorKind::Validation, "face " + std::to_string(f) + " is not bounded by a simple cycle");
    }
  }
  auto rot = g.rotation();
  const std::size_t n = g.vertex_count();
  Augmented out;
  out.added.assign(n, false);
  for (const auto& face : g.faces()) {
    const std::size_t c = rot.size();
    rot.emplace_back(face.begin(), face.end());
    out.added.push_back(true);
    const std::size_t k = face.size();
    for (std::size_t i = 0; i < k; ++i) {
      // The corner at face[i] lies just after face[i+1] in face[i]'s rotation.
      const std::size_t v = face[i], next = face[(i + 1) % k];
      auto& r = rot[v];
      const auto pos = std::find(r.begin(), r.end(), next);
      r.insert(pos + 1, c);
    }
  }
  out.graph = EmbeddedGraph(std::move(rot));
  return out;
}

// ---------------------------------------------------------------------------

struct PackingConfig {
  double angle_tol = 1e-13;
  long max_sweeps = 200000;
  /// Maximize the minimum cap radius over Möbius maps after lifting.
  bool normalize = true;
  std::size_t outer_face = 0;
  SolverConfig solver;
};

struct Packing {
  std::vector<InversiveVector> circles;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  Setting setting = Setting::Sphere;
  long sweeps = 0;
  double angle_residual = 0.0;
  /// max over edges of |<v_i, v_j> + 1|
  double tangency_residual = 0.0;
  /// per-sweep total angle-sum error, sum over interior vertices
  std::vector<double> residual_history;
};

namespace detail {

inline double corner_angle(double r, double a, double b) {
  return 2.0 * std::asin(std::sqrt(std::min(1.0, (a * b) / ((r + a) * (r + b)))));
}

struct AngleState {
  const EmbeddedGraph& g;
  const std::vector<char>& boundary;
  std::vector<double>& radius;

  double angle_sum(std::size_t v) const {
    const auto& r = g.rotation()[v];
    double s = 0;
    for (std::size_t k = 0; k < r.size(); ++k) s += corner_angle(radius[v], radius[r[k]], radius[r[(k + 1) % r.size()]]);
    return s;
  }

  double max_error() const {
    double e = 0.0;
    for (std::size_t v = 0; v < radius.size(); ++v)
      if (!boundary[v]) e = std::max(e, std::abs(angle_sum(v) - 2.0 * std::numbers::pi));
    return e;
  }

  double total_error() const {
    double e = 0.0;
    for (std::size_t v = 0; v < radius.size(); ++v)
      if (!boundary[v]) e += std::abs(angle_sum(v) - 2.0 * std::numbers::pi);
    return e;
  }
};

inline double tangency_residual(std::span<const InversiveVector> circles,
                                std::span<const std::pair<std::size_t, std::size_t>> edges) {
  double worst = 0.0;
  for (const auto& [i, j] : edges) {
    const double dot = lorentz_dot(normalized_sphere(circles[i]).coords(), normalized_sphere(circles[j]).coords());
    worst = std::max(worst, std::abs(dot + 1.0));
  }
  return worst;
}

}  // namespace detail

/// Planar (Euclidean) packing of a maximal planar graph: the outer face's
/// three circles are equal and mutually tangent; interior radii make every
/// interior angle sum 2 pi. Normalized so the circle through the three outer
/// tangency points is the unit circle.
inline Packing pack_planar(const EmbeddedGraph& g, const PackingConfig& config = {}) {
  const std::size_t n = g.vertex_count();
  if (n < 4) throw Error(ErrorKind::Validation, "packing needs at least 4 vertices");
  if (!g.is_triangulation()) throw Error(ErrorKind::Validation, "packing needs a maximal planar graph (all faces triangles)");
  if (config.outer_face >= g.faces().size()) throw Error(ErrorKind::Validation, "outer face index out of range");
  const auto& outer = g.faces()[config.outer_face];
  std::vector<char> boundary(n, 0);
  for (std::size_t v : outer) boundary[v] = 1;

  std::vector<double> radius(n, 1.0);
  detail::AngleState state{g, boundary, radius};
  Packing out;
  out.setting = Setting::Ball;
  out.edges = g.edges();
  double err = state.max_error();
  out.residual_history.push_back(state.total_error());
  long sweep = 0;
  while (err > config.angle_tol && sweep < config.max_sweeps) {
    for (std::size_t v = 0; v < n; ++v) {
      if (boundary[v]) continue;
      const double k = static_cast<double>(g.rotation()[v].size());
      const double theta = state.angle_sum(v);
      const double beta = std::sin(theta / (2.0 * k));
      const double delta = std::sin(std::numbers::pi / k);
      const double rhat = radius[v] * beta / (1.0 - beta);
      radius[v] = rhat * (1.0 - delta) / delta;
    }
    ++sweep;
    err = state.max_error();
    out.residual_history.push_back(state.total_error());
  }
  out.sweeps = sweep;
  out.angle_residual = err;
  if (err > config.angle_tol) {
    throw Error(ErrorKind::NonConvergence, "angle sums did not converge: residual " + std::to_string(err));
  }

  // Layout by tangency. Outer triple clockwise so interior faces come out
  // counterclockwise.
  std::vector<Eigen::Vector2d> center(n);
  std::vector<char> placed(n, 0);
  const std::size_t a = outer[0], b = outer[1], c = outer[2];
  const double ra = radius[a], rb = radius[b], rc = radius[c];
  center[a] = {0, 0};
  center[b] = {ra + rb, 0};
  const double alpha = detail::corner_angle(ra, rb, rc);
  center[c] = (ra + rc) * Eigen::Vector2d(std::cos(-alpha), std::sin(-alpha));
  placed[a] = placed[b] = placed[c] = 1;
  std::deque<std::pair<std::size_t, std::size_t>> queue{{b, a}, {c, b}, {a, c}};
  while (!queue.empty()) {
    const auto [u, v] = queue.front();
    queue.pop_front();
    const std::size_t w = g.left_of(u, v);
    if (placed[w]) continue;
    const double ang = detail::corner_angle(radius[u], radius[v], radius[w]);
    const Eigen::Vector2d dir = (center[v] - center[u]).normalized();
    const Eigen::Vector2d rot(dir[0] * std::cos(ang) - dir[1] * std::sin(ang), dir[0] * std::sin(ang) + dir[1] * std::cos(ang));
    center[w] = center[u] + (radius[u] + radius[w]) * rot;
    placed[w] = 1;
    queue.emplace_back(u, w);
    queue.emplace_back(w, v);
  }
  if (std::count(placed.begin(), placed.end(), 0) > 0) throw Error(ErrorKind::Validation, "layout did not reach every vertex");

  // Incircle of the outer centers = circle through the outer tangency points.
  const double la = (center[b] - center[c]).norm(), lb = (center[a] - center[c]).norm(), lc = (center[a] - center[b]).norm();
  const Eigen::Vector2d incenter = (la * center[a] + lb * center[b] + lc * center[c]) / (la + lb + lc);
  const double s = 0.5 * (la + lb + lc);
  const double inradius = std::sqrt((s - la) * (s - lb) * (s - lc) / s);
  for (std::size_t v = 0; v < n; ++v) {
    const Vec cv = (center[v] - incenter) / inradius;
    out.circles.push_back(InversiveVector::ball_sphere(cv, radius[v] / inradius));
  }
  out.tangency_residual = detail::tangency_residual(out.circles, out.edges);
  return out;
}

/// Caps on S^2 whose tangency graph is g. Lifted from the planar packing by
/// inverse stereographic projection, then (optionally) moved by the Möbius
/// map maximizing the minimum cap radius.
inline Packing pack(const EmbeddedGraph& g, const PackingConfig& config = {}) {
  Packing out = pack_planar(g, config);
  out.setting = Setting::Sphere;
  for (InversiveVector& c : out.circles) c = lift_to_sphere(c);
  if (config.normalize) {
    std::vector<SizeTerm> terms;
    for (std::size_t i = 0; i < out.circles.size(); ++i) terms.push_back(cap_radius_term(out.circles[i], 1.0, static_cast<long>(i)));
    const Solution sol = minimize_max(std::span<const SizeTerm>(terms), 3, config.solver);
    const MobiusMap m = recenter_map(sol.x_star, Setting::Sphere);
    for (InversiveVector& c : out.circles) c = apply_sphere(m, c);
  }
  out.tangency_residual = detail::tangency_residual(out.circles, out.edges);
  return out;
}

}  // namespace mobius
