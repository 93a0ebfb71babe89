#pragma once

// Viewer bundle: the scene, its optimal viewpoint and per-object sizes in
// one JSON document that a static page can load.

#include "mobius/pipeline/scene.hpp"

namespace mobius::pipeline {

inline constexpr const char* kBundleKind = "mobius-viewer-bundle";

inline json export_viewer_bundle(const Scene& scene, const Result& result) {
  json j;
  j["schema"] = kSchema;
  j["kind"] = kBundleKind;
  j["scene"] = to_json(scene);
  j["objective"] = to_string(result.objective);
  j["optimum"] = {{"klein", to_json(result.viewpoint.coords)},
                  {"poincare", to_json(result.poincare().coords)},
                  {"t_star", result.t_star},
                  {"min_size", result.min_size()}};
  json objs = json::array();
  for (const ObjectInfo& o : result.objects)
    objs.push_back({{"kind", o.kind}, {"index", o.index}, {"size", o.size}, {"active", o.active}});
  j["objects"] = objs;
  j["diagnostics"] = {{"backend", to_string(result.backend)}, {"iterations", result.iterations},
                      {"converged", result.converged}, {"rounds", result.rounds}, {"seed", result.seed}};
  return j;
}

inline Scene bundle_scene(const json& bundle) {
  check_schema(bundle);
  if (!bundle.contains("kind") || bundle["kind"] != kBundleKind) throw Error(ErrorKind::Validation, "not a viewer bundle");
  if (!bundle.contains("scene")) throw Error(ErrorKind::Validation, "bundle has no scene");
  return scene_from_json(bundle["scene"]);
}

}  // namespace mobius::pipeline
