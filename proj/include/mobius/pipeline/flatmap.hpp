#pragma once

// Flat mapping of a pre-packed triangulated surface: choose the Möbius map
// maximizing min r_i / w_i, with w_i from the surface's edge lengths.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <span>
#include <string>
#include <vector>

#include "mobius/pipeline/run.hpp"
#include "mobius/pipeline/scene.hpp"

namespace mobius::pipeline {

/// Mean length of the edges incident to each vertex, divided by the largest
/// such mean (so uniform edge lengths give all-ones weights).
inline std::vector<double> incident_edge_weights(std::span<const Eigen::Vector3d> positions,
                                                 std::span<const Face> triangles) {
  const std::size_t n = positions.size();
  std::vector<IndexPair> edges;
  for (std::size_t t = 0; t < triangles.size(); ++t)
    for (int k = 0; k < 3; ++k) {
      const std::size_t a = triangles[t][k], b = triangles[t][(k + 1) % 3];
      if (a >= n || b >= n) throw Error(ErrorKind::Validation, "triangles[" + std::to_string(t) + "]: vertex index out of range");
      if (a == b) throw Error(ErrorKind::Validation, "triangles[" + std::to_string(t) + "]: repeated vertex");
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<double> total(n, 0.0);
  std::vector<std::size_t> degree(n, 0);
  for (const auto& [a, b] : edges) {
    const double len = (positions[a] - positions[b]).norm();
    total[a] += len, total[b] += len;
    ++degree[a], ++degree[b];
  }
  std::vector<double> w(n);
  double top = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    if (degree[v] == 0) throw Error(ErrorKind::Validation, "vertex " + std::to_string(v) + " is in no triangle");
    w[v] = total[v] / static_cast<double>(degree[v]);
    top = std::max(top, w[v]);
  }
  if (!(top > 0)) throw Error(ErrorKind::Validation, "surface has zero-length edges only");
  for (double& x : w) {
    x /= top;
    if (!(x > 0)) throw Error(ErrorKind::Validation, "surface has a vertex whose incident edges all have zero length");
  }
  return w;
}

struct FlatmapInput {
  /// Packed circles, one per surface vertex.
  Scene scene;
  std::vector<Face> triangles;
  /// Original surface coordinates; used for weights when the scene has none.
  std::vector<Eigen::Vector3d> positions;
};

inline FlatmapInput flatmap_input_from_json(const json& j) {
  json scene_part = j;
  scene_part["objective"] = "radius";
  scene_part.erase("triangles");
  scene_part.erase("positions");
  FlatmapInput in;
  in.scene = scene_from_json(scene_part);
  if (!j.contains("triangles") || !j["triangles"].is_array()) throw Error(ErrorKind::Validation, "flatmap input needs triangles");
  for (std::size_t t = 0; t < j["triangles"].size(); ++t)
    in.triangles.push_back(indices_from_json<3>(j["triangles"][t], "triangles[" + std::to_string(t) + "]"));
  if (j.contains("positions")) {
    for (std::size_t i = 0; i < j["positions"].size(); ++i) {
      const Vec p = vec_from_json(j["positions"][i], "positions[" + std::to_string(i) + "]");
      if (p.size() != 3) throw Error(ErrorKind::Validation, "positions[" + std::to_string(i) + "]: expected 3 coordinates");
      in.positions.emplace_back(p[0], p[1], p[2]);
    }
  }
  return in;
}

struct FlatmapResult {
  Result result;
  std::vector<Face> triangles;
};

inline FlatmapResult flatmap(const FlatmapInput& in, const RunConfig& config = {}) {
  Scene s = in.scene;
  s.objective = Objective::Radius;
  const std::size_t n = s.spheres.size();
  for (std::size_t t = 0; t < in.triangles.size(); ++t)
    for (std::size_t v : in.triangles[t])
      if (v >= n) throw Error(ErrorKind::Validation, "triangles[" + std::to_string(t) + "]: circle index out of range");
  if (s.weights.empty() && !in.positions.empty()) {
    if (in.positions.size() != n) throw Error(ErrorKind::Validation, "positions: expected one per circle");
    s.weights = incident_edge_weights(in.positions, in.triangles);
  }
  return {run(s, config), in.triangles};
}

inline json to_json(const FlatmapResult& r) {
  json j = to_json(r.result);
  json tris = json::array();
  for (const Face& t : r.triangles) tris.push_back({t[0], t[1], t[2]});
  j["triangles"] = tris;
  return j;
}

}  // namespace mobius::pipeline
