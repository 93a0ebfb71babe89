#pragma once

// Coin graph of a planar graph: augment if needed, pack, drop the added
// circles, and recenter for the largest minimum cap radius.

#include <string>
#include <vector>

#include "mobius/packing.hpp"
#include "mobius/pipeline/run.hpp"
#include "mobius/pipeline/scene.hpp"

namespace mobius::pipeline {

inline EmbeddedGraph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rotation") || !j["rotation"].is_array()) {
    throw Error(ErrorKind::Validation, "graph document needs a rotation array");
  }
  std::vector<std::vector<std::size_t>> rot;
  for (std::size_t v = 0; v < j["rotation"].size(); ++v) {
    const json& r = j["rotation"][v];
    const std::string at = "rotation[" + std::to_string(v) + "]";
    if (!r.is_array()) throw Error(ErrorKind::Validation, at + ": expected an array");
    std::vector<std::size_t> nb;
    for (const json& u : r) {
      if (!u.is_number_integer() || u.get<long long>() < 0) throw Error(ErrorKind::Validation, at + ": expected vertex indices");
      nb.push_back(u.get<std::size_t>());
    }
    rot.push_back(std::move(nb));
  }
  if (j.contains("vertices") && !(j["vertices"].is_number_integer() && j["vertices"].get<std::size_t>() == rot.size())) {
    throw Error(ErrorKind::Validation, "vertices does not match the rotation array");
  }
  return EmbeddedGraph(std::move(rot));
}

inline json to_json(const EmbeddedGraph& g) {
  return {{"vertices", g.vertex_count()}, {"rotation", g.rotation()}};
}

struct CoinGraph {
  /// Sphere scene: caps as spheres, their poles as points, graph edges
  /// between the poles; radius objective.
  Scene scene;
  long sweeps = 0;
  double angle_residual = 0.0;
  double tangency_residual = 0.0;
  std::size_t added_vertices = 0;
  /// Recentering optimum (min cap radius), when normalized.
  double min_radius = 0.0;
};

inline CoinGraph coin_graph(const EmbeddedGraph& g, const PackingConfig& config = {}, const RunConfig& run_config = {}) {
  const bool maximal = g.vertex_count() >= 4 && g.is_triangulation();
  Augmented aug;
  if (maximal) {
    aug.graph = g;
    aug.added.assign(g.vertex_count(), false);
  } else {
    aug = augment(g);
  }
  PackingConfig pc = config;
  pc.normalize = false;
  const Packing p = pack(aug.graph, pc);

  CoinGraph out;
  out.sweeps = p.sweeps;
  out.angle_residual = p.angle_residual;
  out.added_vertices = aug.graph.vertex_count() - g.vertex_count();
  Scene& s = out.scene;
  s.dimension = 2;
  s.setting = Setting::Sphere;
  s.objective = Objective::Radius;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const PoleAngle pa = cap_pole_angle(p.circles[v]);
    s.spheres.push_back({pa.pole, pa.angle});
    s.points.push_back(pa.pole);
  }
  s.edges = g.edges();
  if (config.normalize) {
    const Result r = run(s, run_config);
    s = r.transformed;
    out.min_radius = r.min_size();
  }
  std::vector<InversiveVector> caps;
  for (std::size_t v = 0; v < s.spheres.size(); ++v) caps.push_back(s.sphere_vector(v));
  out.tangency_residual = mobius::detail::tangency_residual(caps, s.edges);
  return out;
}

inline json to_json(const CoinGraph& c) {
  json j = to_json(c.scene);
  j["packing"] = {{"sweeps", c.sweeps},
                  {"angle_residual", c.angle_residual},
                  {"tangency_residual", c.tangency_residual},
                  {"added_vertices", c.added_vertices},
                  {"min_radius", c.min_radius}};
  return j;
}

}  // namespace mobius::pipeline
