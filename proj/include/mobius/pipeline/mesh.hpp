#pragma once

// Structured polar mesh on the disk, sized by the marked points' desired
// element sizes as seen from the optimal viewpoint, and pulled back to the
// input disk by the inverse map.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "mobius/pipeline/run.hpp"
#include "mobius/pipeline/scene.hpp"

namespace mobius::pipeline {

struct MeshConfig {
  std::size_t max_elements = 4'000'000;
};

struct StructuredMesh {
  KleinPoint viewpoint;
  /// min s'_i at the viewpoint
  double element_size = 0.0;
  std::size_t rings = 0;
  std::size_t sectors = 0;
  /// Template nodes in the transformed disk.
  std::vector<Vec> template_nodes;
  /// The same nodes pulled back to the input disk.
  std::vector<Vec> nodes;
  /// Counterclockwise node indices. The central fan uses quads whose first
  /// corner is the center node.
  std::vector<std::array<std::size_t, 4>> quads;
  /// Smallest corner Jacobian (cross product of the two incident sides) over
  /// all quads of the pulled-back mesh.
  double min_jacobian = 0.0;

  std::size_t element_count() const { return quads.size(); }
};

namespace detail {

inline double corner_jacobian(const Vec& prev, const Vec& at, const Vec& next) {
  const Vec a = next - at, b = prev - at;
  return a[0] * b[1] - a[1] * b[0];
}

inline double min_corner_jacobian(const std::vector<Vec>& nodes, const std::vector<std::array<std::size_t, 4>>& quads) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& q : quads)
    for (int k = 0; k < 4; ++k)
      worst = std::min(worst, corner_jacobian(nodes[q[(k + 3) % 4]], nodes[q[k]], nodes[q[(k + 1) % 4]]));
  return worst;
}

}  // namespace detail

/// Mesh for the marks seen from a given viewpoint. Rings are spaced 1/rings
/// <= h and sectors are ceil(2 pi / h) rounded up to even, h = min s'_i.
inline StructuredMesh mesh_at(const Scene& scene, const KleinPoint& viewpoint, const MeshConfig& config = {}) {
  if (scene.setting != Setting::Ball || scene.dimension != 2) {
    throw Error(ErrorKind::UnsupportedDimension, "mesh needs a ball-setting scene in dimension 2");
  }
  Scene marks = scene;
  marks.objective = Objective::Size;
  marks.validate();

  StructuredMesh m;
  m.viewpoint = viewpoint;
  m.element_size = -evaluate(marks, viewpoint);
  const double h = m.element_size;
  if (!(h > 0)) throw Error(ErrorKind::Validation, "element size must be positive");
  const double rings = std::ceil(1.0 / h);
  double sectors = std::max(6.0, std::ceil(2.0 * std::numbers::pi / h));
  if (std::fmod(sectors, 2.0) != 0.0) sectors += 1.0;
  const double count = sectors / 2 + (rings - 1) * sectors;
  if (count > static_cast<double>(config.max_elements)) {
    throw Error(ErrorKind::Validation, "mesh would have " + std::to_string(static_cast<long long>(count)) +
                                           " elements (limit " + std::to_string(config.max_elements) + ")");
  }
  m.rings = static_cast<std::size_t>(rings);
  m.sectors = static_cast<std::size_t>(sectors);
  const std::size_t R = m.rings, S = m.sectors;

  m.template_nodes.push_back(Vec::Zero(2));
  for (std::size_t k = 1; k <= R; ++k)
    for (std::size_t j = 0; j < S; ++j) {
      const double rho = static_cast<double>(k) / static_cast<double>(R);
      const double phi = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(S);
      Vec p(2);
      p << rho * std::cos(phi), rho * std::sin(phi);
      m.template_nodes.push_back(p);
    }
  const auto node = [S](std::size_t k, std::size_t j) { return 1 + (k - 1) * S + j % S; };
  for (std::size_t j = 0; j < S; j += 2) m.quads.push_back({0, node(1, j), node(1, j + 1), node(1, j + 2)});
  for (std::size_t k = 1; k < R; ++k)
    for (std::size_t j = 0; j < S; ++j) m.quads.push_back({node(k, j), node(k + 1, j), node(k + 1, j + 1), node(k, j + 1)});

  const MobiusMap back = recenter_map(viewpoint, Setting::Ball).inverse();
  m.nodes.reserve(m.template_nodes.size());
  for (const Vec& p : m.template_nodes) m.nodes.push_back(apply_point(back, p));
  m.min_jacobian = detail::min_corner_jacobian(m.nodes, m.quads);
  return m;
}

/// Mesh at the viewpoint maximizing min s'_i.
inline StructuredMesh mesh(const Scene& scene, const RunConfig& run_config = {}, const MeshConfig& config = {}) {
  Scene marks = scene;
  marks.objective = Objective::Size;
  if (marks.setting != Setting::Ball || marks.dimension != 2) {
    throw Error(ErrorKind::UnsupportedDimension, "mesh needs a ball-setting scene in dimension 2");
  }
  const Result r = run(marks, run_config);
  return mesh_at(marks, r.viewpoint, config);
}

inline json to_json(const StructuredMesh& m) {
  json j;
  j["schema"] = kSchema;
  json nodes = json::array(), tmpl = json::array(), quads = json::array();
  for (const Vec& p : m.nodes) nodes.push_back(to_json(p));
  for (const Vec& p : m.template_nodes) tmpl.push_back(to_json(p));
  for (const auto& q : m.quads) quads.push_back({q[0], q[1], q[2], q[3]});
  j["nodes"] = nodes;
  j["quads"] = quads;
  j["template_nodes"] = tmpl;
  j["rings"] = m.rings;
  j["sectors"] = m.sectors;
  j["element_size"] = m.element_size;
  j["viewpoint"] = {{"klein", to_json(m.viewpoint.coords)}, {"poincare", to_json(klein_to_poincare(m.viewpoint).coords)}};
  j["min_jacobian"] = m.min_jacobian;
  return j;
}

inline StructuredMesh mesh_from_json(const json& j) {
  check_schema(j);
  if (!j.contains("nodes") || !j.contains("quads")) throw Error(ErrorKind::Validation, "mesh document needs nodes and quads");
  StructuredMesh m;
  for (std::size_t i = 0; i < j["nodes"].size(); ++i) {
    m.nodes.push_back(vec_from_json(j["nodes"][i], "nodes[" + std::to_string(i) + "]"));
    if (m.nodes.back().size() != 2) throw Error(ErrorKind::UnsupportedDimension, "mesh nodes must be 2D");
  }
  for (std::size_t i = 0; i < j["quads"].size(); ++i) {
    const auto q = indices_from_json<4>(j["quads"][i], "quads[" + std::to_string(i) + "]");
    for (std::size_t v : q)
      if (v >= m.nodes.size()) throw Error(ErrorKind::Validation, "quads[" + std::to_string(i) + "]: node index out of range");
    m.quads.push_back(q);
  }
  return m;
}

}  // namespace mobius::pipeline
