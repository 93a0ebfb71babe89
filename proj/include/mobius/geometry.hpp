#pragma once

// Inversive (Lorentz) coordinates for spheres, caps and points, Möbius maps
// acting on them, and the Poincaré / Klein ball models of hyperbolic space.
//
// Coordinate layout for a vector of length d+2:
//   Ball setting (spheres in E^d inside the unit ball):
//     [0, d)  spatial, [d] extra spacelike axis, [d+1] timelike.
//   Sphere setting (caps on S^d):
//     [0, d]  spatial (ambient R^{d+1}), [d+1] timelike.
// The Lorentz form is Q(v) = sum of spacelike squares minus timelike square.
// Spheres and caps have Q = 1, points have Q = 0. The unit sphere in the ball
// setting is -e_d; unit-ball-preserving maps fix it.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "mobius/errors.hpp"

namespace mobius {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class Setting { Ball, Sphere };

inline const char* to_string(Setting s) { return s == Setting::Ball ? "ball" : "sphere"; }

inline constexpr double kLorentzTol = 1e-9;

/// Lorentz bilinear form; the last coordinate is timelike.
inline double lorentz_dot(const Vec& a, const Vec& b) {
  const Eigen::Index n = a.size() - 1;
  return a.head(n).dot(b.head(n)) - a[n] * b[n];
}

inline double lorentz_norm2(const Vec& a) { return lorentz_dot(a, a); }

/// Index of the timelike coordinate for a vector of `size` entries.
inline Eigen::Index time_index(Eigen::Index size) { return size - 1; }

// ---------------------------------------------------------------------------
// Points of hyperbolic space in the two ball models.

namespace detail {
inline void require_inside_ball(const Vec& x, const char* what) {
  if (!(x.squaredNorm() < 1.0)) {
    throw Error(ErrorKind::Validation, std::string(what) + " must lie strictly inside the unit ball");
  }
}
}  // namespace detail

/// Point of the Poincaré ball model.
struct BallPoint {
  Vec coords;

  BallPoint() = default;
  explicit BallPoint(Vec x) : coords(std::move(x)) { detail::require_inside_ball(coords, "BallPoint"); }

  Eigen::Index dim() const { return coords.size(); }
  static BallPoint origin(Eigen::Index n) { return BallPoint(Vec::Zero(n)); }
};

/// Point of the Klein (projective) ball model.
struct KleinPoint {
  Vec coords;

  KleinPoint() = default;
  explicit KleinPoint(Vec x) : coords(std::move(x)) { detail::require_inside_ball(coords, "KleinPoint"); }

  Eigen::Index dim() const { return coords.size(); }
  static KleinPoint origin(Eigen::Index n) { return KleinPoint(Vec::Zero(n)); }
};

inline KleinPoint poincare_to_klein(const BallPoint& p) {
  return KleinPoint(2.0 * p.coords / (1.0 + p.coords.squaredNorm()));
}

inline BallPoint klein_to_poincare(const KleinPoint& k) {
  return BallPoint(k.coords / (1.0 + std::sqrt(1.0 - k.coords.squaredNorm())));
}

/// Unit timelike vector (hyperboloid model) of a Poincaré point.
inline Vec hyperboloid_point(const BallPoint& p) {
  const double r2 = p.coords.squaredNorm();
  Vec u(p.dim() + 1);
  u.head(p.dim()) = 2.0 * p.coords / (1.0 - r2);
  u[p.dim()] = (1.0 + r2) / (1.0 - r2);
  return u;
}

/// Unit timelike vector (hyperboloid model) of a Klein point.
inline Vec hyperboloid_point(const KleinPoint& k) {
  const double w = std::sqrt(1.0 - k.coords.squaredNorm());
  Vec u(k.dim() + 1);
  u.head(k.dim()) = k.coords / w;
  u[k.dim()] = 1.0 / w;
  return u;
}

/// Klein coordinates of a future timelike vector (any positive scale).
inline KleinPoint klein_from_hyperboloid(const Vec& u) {
  const Eigen::Index n = u.size() - 1;
  return KleinPoint(u.head(n) / u[n]);
}

inline double hyperbolic_distance(const BallPoint& p, const BallPoint& q) {
  const double num = 2.0 * (p.coords - q.coords).squaredNorm();
  const double den = (1.0 - p.coords.squaredNorm()) * (1.0 - q.coords.squaredNorm());
  return std::acosh(1.0 + num / den);
}

// ---------------------------------------------------------------------------
// Inversive vectors.

struct CenterRadius {
  Vec center;
  double radius = 0.0;
};

struct PoleAngle {
  Vec pole;
  double angle = 0.0;
};

class InversiveVector {
 public:
  InversiveVector() = default;
  InversiveVector(Vec coords, Setting setting) : coords_(std::move(coords)), setting_(setting) {
    if (coords_.size() < 3) throw Error(ErrorKind::UnsupportedDimension, "inversive vector needs d >= 1");
  }

  /// Sphere with Euclidean center c and radius r > 0 (ball setting).
  static InversiveVector ball_sphere(const Vec& c, double r) {
    if (!(r > 0.0)) throw Error(ErrorKind::Validation, "sphere radius must be positive");
    const Eigen::Index d = c.size();
    const double a = c.squaredNorm() - r * r;
    Vec v(d + 2);
    v.head(d) = c / r;
    v[d] = (a - 1.0) / (2.0 * r);
    v[d + 1] = (a + 1.0) / (2.0 * r);
    return {std::move(v), Setting::Ball};
  }

  /// Null vector of a point p of E^d (ball setting), scaled so v_t - v_e = 1.
  static InversiveVector ball_point(const Vec& p) {
    const Eigen::Index d = p.size();
    const double p2 = p.squaredNorm();
    Vec v(d + 2);
    v.head(d) = p;
    v[d] = (p2 - 1.0) / 2.0;
    v[d + 1] = (p2 + 1.0) / 2.0;
    return {std::move(v), Setting::Ball};
  }

  static InversiveVector unit_sphere(Eigen::Index d) {
    Vec v = Vec::Zero(d + 2);
    v[d] = -1.0;
    return {std::move(v), Setting::Ball};
  }

  /// Cap on S^d with unit pole n and angular radius theta in (0, pi).
  static InversiveVector cap(const Vec& pole, double theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi)) throw Error(ErrorKind::Validation, "cap angle must lie in (0, pi)");
    const double norm = pole.norm();
    if (!(norm > 0.0)) throw Error(ErrorKind::Validation, "cap pole must be nonzero");
    const Eigen::Index m = pole.size();
    Vec v(m + 1);
    v.head(m) = pole / (norm * std::sin(theta));
    v[m] = std::cos(theta) / std::sin(theta);
    return {std::move(v), Setting::Sphere};
  }

  /// Null vector of a point of S^d, scaled so v_t = 1.
  static InversiveVector sphere_point(const Vec& n) {
    const double norm = n.norm();
    if (!(norm > 0.0)) throw Error(ErrorKind::Validation, "sphere point must be nonzero");
    const Eigen::Index m = n.size();
    Vec v(m + 1);
    v.head(m) = n / norm;
    v[m] = 1.0;
    return {std::move(v), Setting::Sphere};
  }

  const Vec& coords() const { return coords_; }
  Setting setting() const { return setting_; }
  /// d: dimension of the Euclidean space (ball) or of the sphere S^d.
  Eigen::Index dim() const { return coords_.size() - 2; }
  double q() const { return lorentz_norm2(coords_); }
  double time() const { return coords_[coords_.size() - 1]; }
  /// Extra spacelike coordinate (ball setting only).
  double extra() const { return coords_[coords_.size() - 2]; }

 private:
  Vec coords_;
  Setting setting_ = Setting::Ball;
};

/// Rescale a spacelike vector to Q = 1.
inline InversiveVector normalized_sphere(const InversiveVector& s) {
  const double q = s.q();
  if (!(q > 0.0)) throw Error(ErrorKind::Validation, "sphere vector must be spacelike");
  return {s.coords() / std::sqrt(q), s.setting()};
}

/// (center, radius) view of a ball-setting sphere.
inline CenterRadius euclidean_center_radius(const InversiveVector& s) {
  if (s.setting() != Setting::Ball) throw Error(ErrorKind::Validation, "center/radius view needs ball setting");
  const double denom = s.time() - s.extra();
  if (!(denom > 0.0)) {
    throw Error(ErrorKind::NonBallImage, "sphere does not bound a Euclidean ball (hyperplane or inverted image)");
  }
  CenterRadius out;
  out.radius = 1.0 / denom;
  out.center = out.radius * s.coords().head(s.dim());
  return out;
}

/// Angular radius of a cap on S^d, in (0, pi).
inline double cap_angular_radius(const InversiveVector& s) {
  if (s.setting() != Setting::Sphere) throw Error(ErrorKind::Validation, "angular radius needs sphere setting");
  return std::atan2(1.0, s.time());
}

inline PoleAngle cap_pole_angle(const InversiveVector& s) {
  PoleAngle out;
  out.angle = cap_angular_radius(s);
  out.pole = s.coords().head(s.dim() + 1).normalized();
  return out;
}

/// Decode a null vector into a point. Ball: p = v_s / (v_t - v_e).
/// Sphere: n = v_s / v_t.
inline Vec decode_point(const InversiveVector& v) {
  const Eigen::Index d = v.dim();
  if (v.setting() == Setting::Ball) {
    const double denom = v.time() - v.extra();
    if (!(std::abs(denom) > 1e-13 * v.coords().norm())) throw Error(ErrorKind::DecodeFailure, "point maps to infinity");
    return v.coords().head(d) / denom;
  }
  if (!(v.time() > 0.0)) throw Error(ErrorKind::DecodeFailure, "point vector is not future-pointing");
  Vec n = v.coords().head(d + 1) / v.time();
  return n / n.norm();
}

// ---------------------------------------------------------------------------
// Möbius maps.

class MobiusMap {
 public:
  MobiusMap() = default;
  MobiusMap(Mat matrix, Setting setting) : matrix_(std::move(matrix)), setting_(setting) {}

  static MobiusMap identity(Eigen::Index d, Setting setting) { return {Mat::Identity(d + 2, d + 2), setting}; }

  /// Rotation about the model center; `rotation` is orthogonal of size d
  /// (ball) or d+1 (sphere).
  static MobiusMap rotation(const Mat& rotation, Setting setting) {
    const Eigen::Index m = rotation.rows();
    const Eigen::Index size = setting == Setting::Ball ? m + 2 : m + 1;
    Mat out = Mat::Identity(size, size);
    out.topLeftCorner(m, m) = rotation;
    return {std::move(out), setting};
  }

  const Mat& matrix() const { return matrix_; }
  Setting setting() const { return setting_; }
  Eigen::Index dim() const { return matrix_.rows() - 2; }

  MobiusMap operator*(const MobiusMap& rhs) const { return {matrix_ * rhs.matrix_, setting_}; }

  /// Lorentz inverse: eta * M^T * eta.
  MobiusMap inverse() const {
    const Eigen::Index n = matrix_.rows();
    Mat inv = matrix_.transpose();
    inv.row(n - 1) *= -1.0;
    inv.col(n - 1) *= -1.0;
    return {std::move(inv), setting_};
  }

 private:
  Mat matrix_;
  Setting setting_ = Setting::Ball;
};

/// Lorentz boost of R^{n,1} taking the unit timelike vector u to e_t.
inline Mat boost_to_origin(const Vec& u) {
  const Eigen::Index n = u.size() - 1;
  const Vec s = -u.head(n);
  const double gamma = u[n];
  Mat out(n + 1, n + 1);
  out.topLeftCorner(n, n) = Mat::Identity(n, n) + s * s.transpose() / (1.0 + gamma);
  out.topRightCorner(n, 1) = s;
  out.bottomLeftCorner(1, n) = s.transpose();
  out(n, n) = gamma;
  return out;
}

namespace detail {
inline MobiusMap embed_viewpoint_boost(const Mat& boost, Setting setting) {
  const Eigen::Index n = boost.rows() - 1;
  if (setting == Setting::Sphere) return {boost, Setting::Sphere};
  // Ball setting: the extra axis (index n) is fixed, the time axis moves to n+1.
  Mat out = Mat::Identity(n + 2, n + 2);
  out.topLeftCorner(n, n) = boost.topLeftCorner(n, n);
  out.block(0, n + 1, n, 1) = boost.topRightCorner(n, 1);
  out.block(n + 1, 0, 1, n) = boost.bottomLeftCorner(1, n);
  out(n + 1, n + 1) = boost(n, n);
  return {std::move(out), Setting::Ball};
}
}  // namespace detail

/// Pure hyperbolic translation taking the viewpoint `a` to the model center.
/// Ball setting: a in B^d. Sphere setting S^d: a in B^{d+1}.
inline MobiusMap recenter_map(const BallPoint& a, Setting setting) {
  return detail::embed_viewpoint_boost(boost_to_origin(hyperboloid_point(a)), setting);
}

inline MobiusMap recenter_map(const KleinPoint& a, Setting setting) {
  return detail::embed_viewpoint_boost(boost_to_origin(hyperboloid_point(a)), setting);
}

/// Viewpoint-space part of a map: the block acting on spatial + time axes.
inline Mat viewpoint_block(const MobiusMap& m) {
  if (m.setting() == Setting::Sphere) return m.matrix();
  const Eigen::Index n = m.dim();
  Mat out(n + 1, n + 1);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < n; ++i) idx.push_back(i);
  idx.push_back(n + 1);
  for (Eigen::Index r = 0; r <= n; ++r)
    for (Eigen::Index c = 0; c <= n; ++c) out(r, c) = m.matrix()(idx[r], idx[c]);
  return out;
}

/// Image of a viewpoint (hyperbolic point) under a ball-preserving map.
inline KleinPoint apply_viewpoint(const MobiusMap& m, const KleinPoint& z) {
  return klein_from_hyperboloid(viewpoint_block(m) * hyperboloid_point(z));
}

inline InversiveVector apply_vector(const MobiusMap& m, const InversiveVector& v) {
  return {m.matrix() * v.coords(), v.setting()};
}

/// Image of a point: a point of the closed ball (ball setting) or a point
/// of S^d (sphere setting).
inline Vec apply_point(const MobiusMap& m, const Vec& p) {
  const InversiveVector v =
      m.setting() == Setting::Ball ? InversiveVector::ball_point(p) : InversiveVector::sphere_point(p);
  return decode_point(apply_vector(m, v));
}

/// Image of a sphere or cap, renormalized to Q = 1.
inline InversiveVector apply_sphere(const MobiusMap& m, const InversiveVector& s) {
  return normalized_sphere(apply_vector(m, s));
}

/// Length scaling at x of the ball map taking a to the origin.
inline double conformal_factor(const BallPoint& a, const Vec& x) {
  const double a2 = a.coords.squaredNorm();
  return (1.0 - a2) / (1.0 - 2.0 * a.coords.dot(x) + a2 * x.squaredNorm());
}

/// Stereographic projection from the north pole of S^d onto E^d.
inline Vec stereographic(const Vec& n) {
  const Eigen::Index d = n.size() - 1;
  return n.head(d) / (1.0 - n[d]);
}

inline Vec inverse_stereographic(const Vec& p) {
  const Eigen::Index d = p.size();
  const double p2 = p.squaredNorm();
  Vec n(d + 1);
  n.head(d) = 2.0 * p / (1.0 + p2);
  n[d] = (p2 - 1.0) / (p2 + 1.0);
  return n;
}

/// Reinterpret a ball-setting vector of E^d as the sphere-setting vector of
/// its inverse stereographic image on S^d (the two layouts coincide).
inline InversiveVector lift_to_sphere(const InversiveVector& v) {
  if (v.setting() != Setting::Ball) throw Error(ErrorKind::Validation, "lift_to_sphere needs a ball-setting vector");
  return {v.coords(), Setting::Sphere};
}

}  // namespace mobius
