#pragma once

// Scene and Result documents and their JSON form (schema 1).

#include <Eigen/Dense>
#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <algorithm>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "mobius/accel.hpp"
#include "mobius/errors.hpp"
#include "mobius/geometry.hpp"
#include "mobius/solver.hpp"

namespace mobius::pipeline {

using json = nlohmann::json;

inline constexpr int kSchema = 1;

enum class Objective { Radius, Edge, Separation, Size, KleinDiameter, KleinWidth };

inline const char* to_string(Objective o) {
  switch (o) {
    case Objective::Radius: return "radius";
    case Objective::Edge: return "edge";
    case Objective::Separation: return "separation";
    case Objective::Size: return "size";
    case Objective::KleinDiameter: return "klein-diameter";
    case Objective::KleinWidth: return "klein-width";
  }
  return "radius";
}

inline Objective objective_from_string(const std::string& s) {
  for (Objective o : {Objective::Radius, Objective::Edge, Objective::Separation, Objective::Size,
                      Objective::KleinDiameter, Objective::KleinWidth})
    if (s == to_string(o)) return o;
  throw Error(ErrorKind::Validation, "unknown objective \"" + s + "\"");
}


/// Ball setting: Euclidean center and radius. Sphere setting: unit pole and
/// angular radius.
struct SceneSphere {
  Vec center;
  double radius = 0.0;
  bool operator==(const SceneSphere& o) const {
    return radius == o.radius && center.size() == o.center.size() && center == o.center;
  }
};

using Face = std::array<std::size_t, 3>;

struct Scene {
  Eigen::Index dimension = 2;
  Setting setting = Setting::Ball;
  std::vector<SceneSphere> spheres;
  std::vector<Vec> points;
  /// Per-sphere weights (radius, klein-*) or per-point marked sizes (size).
  std::vector<double> weights;
  std::vector<IndexPair> edges;
  std::vector<Face> orientation_faces;
  Objective objective = Objective::Radius;

  bool operator==(const Scene& o) const {
    const auto same = [](const std::vector<Vec>& a, const std::vector<Vec>& b) {
      return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                        [](const Vec& x, const Vec& y) { return x.size() == y.size() && x == y; });
    };
    return dimension == o.dimension && setting == o.setting && spheres == o.spheres && same(points, o.points) &&
           weights == o.weights && edges == o.edges && orientation_faces == o.orientation_faces &&
           objective == o.objective;
  }

  /// Coordinates per point: d (ball) or d+1 (sphere).
  Eigen::Index ambient_dim() const { return setting == Setting::Ball ? dimension : dimension + 1; }
  Eigen::Index viewpoint_dim() const { return setting == Setting::Ball ? dimension : dimension + 1; }

  InversiveVector sphere_vector(std::size_t i) const {
    const SceneSphere& s = spheres[i];
    return setting == Setting::Ball ? InversiveVector::ball_sphere(s.center, s.radius)
                                    : InversiveVector::cap(s.center, s.radius);
  }

  double weight(std::size_t i) const { return weights.empty() ? 1.0 : weights[i]; }

  void validate() const {
    if (dimension < 1) throw Error(ErrorKind::Validation, "dimension must be at least 1");
    const Eigen::Index m = ambient_dim();
    for (std::size_t i = 0; i < spheres.size(); ++i) {
      const std::string at = "spheres[" + std::to_string(i) + "]";
      const SceneSphere& s = spheres[i];
      if (s.center.size() != m) throw Error(ErrorKind::Validation, at + ": expected " + std::to_string(m) + " coordinates");
      if (!s.center.allFinite() || !std::isfinite(s.radius)) throw Error(ErrorKind::Validation, at + ": non-finite value");
      if (setting == Setting::Ball) {
        if (!(s.radius > 0)) throw Error(ErrorKind::Validation, at + ": radius must be positive");
        if (s.center.norm() + s.radius > 1.0 + 1e-12) throw Error(ErrorKind::NonBallImage, at + ": sphere leaves the unit ball");
      } else {
        if (std::abs(s.center.norm() - 1.0) > 1e-9) throw Error(ErrorKind::Validation, at + ": pole must be a unit vector");
        if (!(s.radius > 0 && s.radius < std::numbers::pi)) throw Error(ErrorKind::Validation, at + ": angle must lie in (0, pi)");
      }
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::string at = "points[" + std::to_string(i) + "]";
      const Vec& p = points[i];
      if (p.size() != m) throw Error(ErrorKind::Validation, at + ": expected " + std::to_string(m) + " coordinates");
      if (!p.allFinite()) throw Error(ErrorKind::Validation, at + ": non-finite value");
      if (setting == Setting::Ball && !(p.squaredNorm() < 1.0)) throw Error(ErrorKind::Validation, at + ": outside the open unit ball");
      if (setting == Setting::Sphere && std::abs(p.norm() - 1.0) > 1e-9) throw Error(ErrorKind::Validation, at + ": not on the unit sphere");
    }
    const bool per_point = objective == Objective::Size;
    const std::size_t expected = per_point ? points.size() : spheres.size();
    if (!weights.empty() && weights.size() != expected) {
      throw Error(ErrorKind::Validation, "weights: expected " + std::to_string(expected) + " entries (one per " +
                                             (per_point ? "point" : "sphere") + ")");
    }
    for (std::size_t i = 0; i < weights.size(); ++i)
      if (!(weights[i] > 0 && std::isfinite(weights[i])))
        throw Error(ErrorKind::Validation, "weights[" + std::to_string(i) + "]: must be positive");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto [a, b] = edges[i];
      const std::string at = "edges[" + std::to_string(i) + "]";
      if (a >= points.size() || b >= points.size()) throw Error(ErrorKind::Validation, at + ": point index out of range");
      if (a == b) throw Error(ErrorKind::DegenerateEdge, at + ": endpoints coincide");
    }
    for (std::size_t i = 0; i < orientation_faces.size(); ++i)
      for (std::size_t v : orientation_faces[i])
        if (v >= points.size())
          throw Error(ErrorKind::Validation, "orientation_faces[" + std::to_string(i) + "]: point index out of range");

    switch (objective) {
      case Objective::Radius:
        if (spheres.empty()) throw Error(ErrorKind::Validation, "radius objective needs spheres");
        break;
      case Objective::KleinDiameter:
      case Objective::KleinWidth:
        if (setting != Setting::Ball) throw Error(ErrorKind::Validation, "klein objectives need the ball setting");
        if (spheres.empty()) throw Error(ErrorKind::Validation, "klein objectives need spheres");
        break;
      case Objective::Edge:
        if (edges.empty()) throw Error(ErrorKind::Validation, "edge objective needs edges");
        break;
      case Objective::Separation:
        if (points.size() < 2) throw Error(ErrorKind::Validation, "separation objective needs at least 2 points");
        break;
      case Objective::Size:
        if (setting != Setting::Ball) throw Error(ErrorKind::Validation, "size objective needs the ball setting");
        if (points.empty()) throw Error(ErrorKind::Validation, "size objective needs marked points");
        break;
    }
  }
};

// ---------------------------------------------------------------------------
// JSON helpers

inline json to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline Vec vec_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) throw Error(ErrorKind::Validation, where + ": expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorKind::Validation, where + ": expected an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline double number_from_json(const json& j, const std::string& where) {
  if (!j.is_number()) throw Error(ErrorKind::Validation, where + ": expected a number");
  return j.get<double>();
}

template <std::size_t N>
std::array<std::size_t, N> indices_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != N) throw Error(ErrorKind::Validation, where + ": expected " + std::to_string(N) + " indices");
  std::array<std::size_t, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!j[i].is_number_integer() || j[i].get<long long>() < 0) throw Error(ErrorKind::Validation, where + ": expected non-negative integers");
    out[i] = j[i].get<std::size_t>();
  }
  return out;
}

inline json spheres_to_json(const std::vector<SceneSphere>& spheres, Setting setting) {
  json a = json::array();
  for (const SceneSphere& s : spheres) {
    if (setting == Setting::Ball) {
      a.push_back({{"center", to_json(s.center)}, {"radius", s.radius}});
    } else {
      a.push_back({{"pole", to_json(s.center)}, {"angle", s.radius}});
    }
  }
  return a;
}

inline json to_json(const Scene& s) {
  json j;
  j["schema"] = kSchema;
  j["dimension"] = s.dimension;
  j["setting"] = to_string(s.setting);
  j["objective"] = to_string(s.objective);
  j["spheres"] = spheres_to_json(s.spheres, s.setting);
  json pts = json::array();
  for (const Vec& p : s.points) pts.push_back(to_json(p));
  j["points"] = pts;
  if (!s.weights.empty()) j["weights"] = s.weights;
  json edges = json::array();
  for (const auto& [a, b] : s.edges) edges.push_back({a, b});
  j["edges"] = edges;
  if (!s.orientation_faces.empty()) {
    json faces = json::array();
    for (const Face& f : s.orientation_faces) faces.push_back({f[0], f[1], f[2]});
    j["orientation_faces"] = faces;
  }
  return j;
}

inline void check_schema(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::Validation, "document must be a JSON object");
  if (j.contains("schema") && !(j["schema"].is_number_integer() && j["schema"].get<int>() == kSchema)) {
    throw Error(ErrorKind::Validation, "unsupported schema version (expected " + std::to_string(kSchema) + ")");
  }
}

/// Parse and validate. Sphere entries may use either "center"/"radius" or
/// "pole"/"angle"; the meaning follows the scene's setting.
inline Scene scene_from_json(const json& j) {
  check_schema(j);
  Scene s;
  if (j.contains("dimension")) {
    if (!j["dimension"].is_number_integer()) throw Error(ErrorKind::Validation, "dimension: expected an integer");
    s.dimension = j["dimension"].get<Eigen::Index>();
  }
  if (j.contains("setting")) {
    const std::string v = j["setting"].is_string() ? j["setting"].get<std::string>() : "";
    if (v == "ball") s.setting = Setting::Ball;
    else if (v == "sphere") s.setting = Setting::Sphere;
    else throw Error(ErrorKind::Validation, "setting: expected \"ball\" or \"sphere\"");
  }
  if (j.contains("objective")) {
    if (!j["objective"].is_string()) throw Error(ErrorKind::Validation, "objective: expected a string");
    s.objective = objective_from_string(j["objective"].get<std::string>());
  }
  if (j.contains("spheres")) {
    const json& a = j["spheres"];
    if (!a.is_array()) throw Error(ErrorKind::Validation, "spheres: expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string at = "spheres[" + std::to_string(i) + "]";
      const json& e = a[i];
      if (!e.is_object()) throw Error(ErrorKind::Validation, at + ": expected an object");
      const char* ck = e.contains("pole") ? "pole" : "center";
      const char* rk = e.contains("angle") ? "angle" : "radius";
      if (!e.contains(ck) || !e.contains(rk)) throw Error(ErrorKind::Validation, at + ": needs center/radius or pole/angle");
      s.spheres.push_back({vec_from_json(e[ck], at + "." + ck), number_from_json(e[rk], at + "." + rk)});
    }
  }
  if (j.contains("points")) {
    const json& a = j["points"];
    if (!a.is_array()) throw Error(ErrorKind::Validation, "points: expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) s.points.push_back(vec_from_json(a[i], "points[" + std::to_string(i) + "]"));
  }
  if (j.contains("weights")) {
    const json& a = j["weights"];
    if (!a.is_array()) throw Error(ErrorKind::Validation, "weights: expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) s.weights.push_back(number_from_json(a[i], "weights[" + std::to_string(i) + "]"));
  }
  if (j.contains("edges")) {
    const json& a = j["edges"];
    if (!a.is_array()) throw Error(ErrorKind::Validation, "edges: expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const auto e = indices_from_json<2>(a[i], "edges[" + std::to_string(i) + "]");
      s.edges.emplace_back(e[0], e[1]);
    }
  }
  if (j.contains("orientation_faces")) {
    const json& a = j["orientation_faces"];
    if (!a.is_array()) throw Error(ErrorKind::Validation, "orientation_faces: expected an array");
    for (std::size_t i = 0; i < a.size(); ++i)
      s.orientation_faces.push_back(indices_from_json<3>(a[i], "orientation_faces[" + std::to_string(i) + "]"));
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------

/// Size of one objective term at the optimum.
struct ObjectInfo {
  std::string kind;  // term family
  long index = -1;   // sphere, point, or edge index in the scene
  double size = 0.0;
  bool active = false;
};

struct Result {
  Objective objective = Objective::Radius;
  Setting setting = Setting::Ball;
  KleinPoint viewpoint;
  double t_star = 0.0;
  /// The scene's objects after the optimal recentering.
  Scene transformed;
  std::vector<ObjectInfo> objects;
  Backend backend = Backend::Local;
  long iterations = 0;
  bool converged = true;
  int rounds = 0;  // separation only
  std::uint64_t seed = 0;

  double min_size() const { return -t_star; }
  BallPoint poincare() const { return klein_to_poincare(viewpoint); }
};

inline const char* to_string(Backend b) { return b == Backend::Local ? "local" : "glp"; }

inline json to_json(const Result& r) {
  json j;
  j["schema"] = kSchema;
  j["objective"] = to_string(r.objective);
  j["setting"] = to_string(r.setting);
  j["viewpoint"] = {{"klein", to_json(r.viewpoint.coords)}, {"poincare", to_json(r.poincare().coords)}};
  j["t_star"] = r.t_star;
  j["min_size"] = r.min_size();
  j["transformed"] = to_json(r.transformed);
  json objs = json::array();
  for (const ObjectInfo& o : r.objects)
    objs.push_back({{"kind", o.kind}, {"index", o.index}, {"size", o.size}, {"active", o.active}});
  j["objects"] = objs;
  j["diagnostics"] = {{"backend", to_string(r.backend)}, {"iterations", r.iterations},
                      {"converged", r.converged}, {"rounds", r.rounds}};
  j["seed"] = r.seed;
  return j;
}

}  // namespace mobius::pipeline
