#pragma once

// Scene -> optimal viewpoint, dispatched on the objective selector.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "mobius/accel.hpp"
#include "mobius/objectives.hpp"
#include "mobius/pipeline/scene.hpp"
#include "mobius/solver.hpp"

namespace mobius::pipeline {

struct RunConfig {
  SolverConfig solver;
  std::size_t samples_per_point = 3;
  int max_rounds = 32;
};

/// Objective terms of the scene, without orientation barriers. Separation
/// scenes get the complete graph.
inline std::vector<SizeTerm> objective_terms(const Scene& s) {
  std::vector<SizeTerm> terms;
  const auto edge_term = [&](std::size_t a, std::size_t b, long src) {
    return s.setting == Setting::Ball ? ball_edge_term(s.points[a], s.points[b], src)
                                      : sphere_edge_term(s.points[a], s.points[b], src);
  };
  switch (s.objective) {
    case Objective::Radius:
      for (std::size_t i = 0; i < s.spheres.size(); ++i) {
        const long src = static_cast<long>(i);
        terms.push_back(s.setting == Setting::Ball ? ball_sphere_radius_term(s.sphere_vector(i), s.weight(i), src)
                                                   : cap_radius_term(s.sphere_vector(i), s.weight(i), src));
      }
      break;
    case Objective::KleinDiameter:
    case Objective::KleinWidth: {
      const KleinMeasure m = s.objective == Objective::KleinDiameter ? KleinMeasure::Diameter : KleinMeasure::Width;
      for (std::size_t i = 0; i < s.spheres.size(); ++i)
        terms.push_back(klein_disk_size_term(s.sphere_vector(i), m, s.weight(i), static_cast<long>(i)));
      break;
    }
    case Objective::Edge:
      for (std::size_t e = 0; e < s.edges.size(); ++e) terms.push_back(edge_term(s.edges[e].first, s.edges[e].second, static_cast<long>(e)));
      break;
    case Objective::Separation:
      for (const auto& [a, b] : complete_graph(s.points.size())) terms.push_back(edge_term(a, b, -1));
      break;
    case Objective::Size:
      for (std::size_t i = 0; i < s.points.size(); ++i) terms.push_back(point_size_term(s.points[i], s.weight(i), static_cast<long>(i)));
      break;
  }
  return terms;
}

/// One barrier per orientation face, oriented so the identity viewpoint is feasible.
inline std::vector<SizeTerm> orientation_terms(const Scene& s) {
  std::vector<SizeTerm> out;
  const KleinPoint origin(Vec::Zero(s.viewpoint_dim()));
  for (std::size_t f = 0; f < s.orientation_faces.size(); ++f) {
    std::vector<Vec> pts;
    for (std::size_t v : s.orientation_faces[f]) pts.push_back(s.points[v]);
    out.push_back(orientation_barrier_term(pts, s.setting, origin, static_cast<long>(f)));
  }
  return out;
}

/// max_i f_i at viewpoint x over the scene's objective terms (the value
/// Result::t_star reports).
inline double evaluate(const Scene& s, const KleinPoint& x) {
  const std::vector<SizeTerm> terms = objective_terms(s);
  return evaluate_max(std::span<const SizeTerm>(terms), Viewframe(x.coords));
}

/// The scene's objects seen from viewpoint x.
inline Scene transform_scene(const Scene& s, const KleinPoint& x) {
  const MobiusMap m = recenter_map(x, s.setting);
  Scene out = s;
  for (std::size_t i = 0; i < s.spheres.size(); ++i) {
    const InversiveVector v = apply_sphere(m, s.sphere_vector(i));
    if (s.setting == Setting::Ball) {
      const CenterRadius cr = euclidean_center_radius(v);
      out.spheres[i] = {cr.center, cr.radius};
    } else {
      const PoleAngle pa = cap_pole_angle(v);
      out.spheres[i] = {pa.pole, pa.angle};
    }
  }
  for (std::size_t i = 0; i < s.points.size(); ++i) out.points[i] = apply_point(m, s.points[i]);
  return out;
}

namespace detail {

inline double active_tol(double t) { return 1e-9 + 1e-7 * std::abs(t); }

inline Result finish(const Scene& s, const Solution& sol, const RunConfig& cfg) {
  Result r;
  r.objective = s.objective;
  r.setting = s.setting;
  r.viewpoint = sol.x_star;
  r.t_star = sol.t_star;
  r.transformed = transform_scene(s, sol.x_star);
  r.backend = cfg.solver.backend;
  r.iterations = sol.iterations;
  r.converged = sol.converged;
  r.seed = cfg.solver.rng_seed;
  return r;
}

}  // namespace detail

inline Result run(const Scene& scene, const RunConfig& config = {}) {
  scene.validate();
  const Eigen::Index n = scene.viewpoint_dim();
  const std::vector<SizeTerm> barriers = orientation_terms(scene);

  if (scene.objective == Objective::Separation && barriers.empty()) {
    SeparationConfig sc;
    sc.solver = config.solver;
    sc.samples_per_point = config.samples_per_point;
    sc.max_rounds = config.max_rounds;
    const PointSet ps(scene.points, scene.setting);
    const SeparationResult sep = maxmin_separation(ps, sc);
    Result r = detail::finish(scene, sep.solution, config);
    r.rounds = sep.rounds;
    // Per point: distance to its nearest neighbor among the verified pairs,
    // which contain every pair at the optimal separation.
    const std::vector<Vec> moved = transformed_points(ps, sep.solution.x_star);
    std::vector<double> nearest(ps.size(), std::numeric_limits<double>::infinity());
    for (const auto& [a, b] : sep.graph.edges) {
      const double d = mobius::detail::separation(moved[a], moved[b], ps.setting);
      nearest[a] = std::min(nearest[a], d);
      nearest[b] = std::min(nearest[b], d);
    }
    for (std::size_t i = 0; i < ps.size(); ++i) {
      r.objects.push_back({"separation", static_cast<long>(i), nearest[i],
                           nearest[i] <= sep.separation + detail::active_tol(sep.separation)});
    }
    return r;
  }

  std::vector<SizeTerm> terms = objective_terms(scene);
  const std::size_t objective_count = terms.size();
  terms.insert(terms.end(), barriers.begin(), barriers.end());
  const Solution sol = minimize_max(std::span<const SizeTerm>(terms), n, config.solver);
  if (sol.t_star >= kBarrier) throw Error(ErrorKind::InfeasibleConstraint, "orientation constraints cannot all hold");

  Result r = detail::finish(scene, sol, config);
  const Viewframe f(sol.x_star.coords);
  for (std::size_t i = 0; i < objective_count; ++i) {
    const double v = terms[i].value(f);
    r.objects.push_back({to_string(terms[i].family), terms[i].source, -v, v >= sol.t_star - detail::active_tol(sol.t_star)});
  }
  return r;
}

}  // namespace mobius::pipeline
