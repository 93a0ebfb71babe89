#pragma once

// Size terms: for each object, the size of its image after recentering at a
// viewpoint. The solver minimizes max(-size), i.e. maximizes the minimum
// size. Every family reduces to a few Lorentz products -<U, a> between the
// viewpoint's hyperboloid vector U and fixed vectors of the object, which
// gives closed-form values and gradients.
//
// Viewpoint space: B^d for the ball setting, B^{d+1} for caps and points on
// S^d.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "mobius/errors.hpp"
#include "mobius/geometry.hpp"
#include "mobius/solver.hpp"

namespace mobius {

enum class Family {
  BallRadius,
  CapRadius,
  SphereArc,
  BallEdge,
  PointSize,
  KleinDiameter,
  KleinWidth,
  OrientationBarrier,
};

inline const char* to_string(Family f) {
  switch (f) {
    case Family::BallRadius: return "ball-radius";
    case Family::CapRadius: return "cap-radius";
    case Family::SphereArc: return "sphere-arc";
    case Family::BallEdge: return "ball-edge";
    case Family::PointSize: return "point-size";
    case Family::KleinDiameter: return "klein-diameter";
    case Family::KleinWidth: return "klein-width";
    case Family::OrientationBarrier: return "orientation-barrier";
  }
  return "unknown";
}

enum class KleinMeasure { Diameter, Width };

struct SizeTerm {
  Family family = Family::BallRadius;
  Vec a;               // viewpoint-space vector of the object (or first endpoint)
  Vec b;               // second endpoint (edge families)
  double a_extra = 0;  // extra coordinates, ball setting
  double b_extra = 0;
  double pair = 0;     // -<u, v> for edge families
  double scale = 1;    // size multiplier (1/weight, or the marked size)
  double side = 1;     // barrier orientation
  long source = -1;

  Eigen::Index dim() const { return a.size() - 1; }

  /// Size of the object's image seen from the viewpoint (before negation).
  double natural_size(const Viewframe& f) const {
    switch (family) {
      case Family::BallRadius:
      case Family::PointSize:
        return scale / (f.recentered_time(a) - a_extra);
      case Family::CapRadius:
        return scale * std::atan2(1.0, std::abs(f.recentered_time(a)));
      case Family::SphereArc: {
        const double q = pair / (2.0 * f.recentered_time(a) * f.recentered_time(b));
        return scale * 2.0 * std::asin(std::sqrt(std::min(1.0, q)));
      }
      case Family::BallEdge: {
        const double du = f.recentered_time(a) - a_extra;
        const double dv = f.recentered_time(b) - b_extra;
        return scale * std::sqrt(2.0 * pair / (du * dv));
      }
      case Family::KleinDiameter: {
        const double c = f.recentered_time(a);
        return scale * 2.0 / std::sqrt(1.0 + c * c);
      }
      case Family::KleinWidth: {
        const double c = f.recentered_time(a);
        return scale * -2.0 * a_extra / (1.0 + c * c);
      }
      case Family::OrientationBarrier:
        return feasible(f) ? 1.0 : 0.0;
    }
    return 0.0;
  }

  double natural_size(const KleinPoint& z) const { return natural_size(Viewframe(z.coords)); }

  double value(const Viewframe& f) const {
    if (family == Family::OrientationBarrier) return feasible(f) ? -kBarrier : kBarrier;
    return -natural_size(f);
  }

  Vec cut(const Viewframe& f) const {
    const Eigen::Index n = f.dim();
    switch (family) {
      case Family::BallRadius:
      case Family::PointSize: {
        const double c = f.recentered_time(a);
        const double den = c - a_extra;
        return (scale / (den * den)) * f.recentered_time_gradient(a, c);
      }
      case Family::CapRadius: {
        const double c = f.recentered_time(a);
        if (c == 0.0) return Vec::Zero(n);
        const double sgn = c > 0.0 ? 1.0 : -1.0;
        return (scale * sgn / (1.0 + c * c)) * f.recentered_time_gradient(a, c);
      }
      case Family::SphereArc: {
        const double cu = f.recentered_time(a);
        const double cv = f.recentered_time(b);
        const double q = pair / (2.0 * cu * cv);
        if (q >= 1.0) return Vec::Zero(n);
        const double k = scale * std::sqrt(q / (1.0 - q));
        return k * (f.recentered_time_gradient(a, cu) / cu + f.recentered_time_gradient(b, cv) / cv);
      }
      case Family::BallEdge: {
        const double cu = f.recentered_time(a);
        const double cv = f.recentered_time(b);
        const double du = cu - a_extra;
        const double dv = cv - b_extra;
        const double size = scale * std::sqrt(2.0 * pair / (du * dv));
        return (0.5 * size) * (f.recentered_time_gradient(a, cu) / du + f.recentered_time_gradient(b, cv) / dv);
      }
      case Family::KleinDiameter: {
        const double c = f.recentered_time(a);
        return (2.0 * scale * c * std::pow(1.0 + c * c, -1.5)) * f.recentered_time_gradient(a, c);
      }
      case Family::KleinWidth: {
        const double c = f.recentered_time(a);
        const double den = 1.0 + c * c;
        return (-4.0 * scale * a_extra * c / (den * den)) * f.recentered_time_gradient(a, c);
      }
      case Family::OrientationBarrier:
        if (feasible(f)) return Vec::Zero(n);
        return -side * a.head(n);
    }
    return Vec::Zero(n);
  }

 private:
  bool feasible(const Viewframe& f) const {
    const Eigen::Index n = f.dim();
    return side * (f.klein().dot(a.head(n)) - a[n]) >= 0.0;
  }
};

static_assert(QuasiconvexTerm<SizeTerm>);

namespace detail {

/// Spatial + time part of a ball-setting vector (the viewpoint-space part).
inline Vec viewpoint_part(const InversiveVector& v) {
  const Eigen::Index d = v.dim();
  Vec out(d + 1);
  out.head(d) = v.coords().head(d);
  out[d] = v.time();
  return out;
}

inline void require_setting(const InversiveVector& v, Setting s, const char* what) {
  if (v.setting() != s) throw Error(ErrorKind::Validation, std::string(what) + ": wrong setting");
}

inline void require_positive(double w, const char* what) {
  if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorKind::Validation, std::string(what) + " must be positive");
}

}  // namespace detail

/// Euclidean radius of the image of a sphere inside the closed unit ball,
/// divided by `weight`.
inline SizeTerm ball_sphere_radius_term(const InversiveVector& s, double weight = 1.0, long source = -1) {
  detail::require_setting(s, Setting::Ball, "ball_sphere_radius_term");
  detail::require_positive(weight, "weight");
  const CenterRadius cr = euclidean_center_radius(s);
  if (cr.center.norm() + cr.radius > 1.0 + 1e-12) {
    throw Error(ErrorKind::NonBallImage, "sphere is not contained in the closed unit ball");
  }
  const InversiveVector v = normalized_sphere(s);
  SizeTerm t;
  t.family = Family::BallRadius;
  t.a = detail::viewpoint_part(v);
  t.a_extra = v.extra();
  t.scale = 1.0 / weight;
  t.source = source;
  return t;
}

/// Spherical radius min(theta, pi - theta) of the image of a cap on S^d.
inline SizeTerm cap_radius_term(const InversiveVector& s, double weight = 1.0, long source = -1) {
  detail::require_setting(s, Setting::Sphere, "cap_radius_term");
  detail::require_positive(weight, "weight");
  SizeTerm t;
  t.family = Family::CapRadius;
  t.a = normalized_sphere(s).coords();
  t.scale = 1.0 / weight;
  t.source = source;
  return t;
}

/// Arc length between the images of two points of S^d.
inline SizeTerm sphere_edge_term(const Vec& u, const Vec& v, long source = -1) {
  const InversiveVector pu = InversiveVector::sphere_point(u);
  const InversiveVector pv = InversiveVector::sphere_point(v);
  const double pair = -lorentz_dot(pu.coords(), pv.coords());
  if (!(pair > 1e-15)) throw Error(ErrorKind::DegenerateEdge, "edge endpoints coincide");
  SizeTerm t;
  t.family = Family::SphereArc;
  t.a = pu.coords();
  t.b = pv.coords();
  t.pair = pair;
  t.source = source;
  return t;
}

/// Euclidean distance between the images of two points of the open ball.
inline SizeTerm ball_edge_term(const Vec& u, const Vec& v, long source = -1) {
  if (!(u.squaredNorm() < 1.0 && v.squaredNorm() < 1.0)) {
    throw Error(ErrorKind::Validation, "edge endpoints must lie inside the unit ball");
  }
  const InversiveVector pu = InversiveVector::ball_point(u);
  const InversiveVector pv = InversiveVector::ball_point(v);
  const double pair = 0.5 * (u - v).squaredNorm();
  if (!(pair > 0.0)) throw Error(ErrorKind::DegenerateEdge, "edge endpoints coincide");
  SizeTerm t;
  t.family = Family::BallEdge;
  t.a = detail::viewpoint_part(pu);
  t.b = detail::viewpoint_part(pv);
  t.a_extra = pu.extra();
  t.b_extra = pv.extra();
  t.pair = pair;
  t.source = source;
  return t;
}

/// Marked element size s at p, scaled by the conformal factor of the
/// recentering map at p.
inline SizeTerm point_size_term(const Vec& p, double size, long source = -1) {
  if (!(p.squaredNorm() < 1.0)) throw Error(ErrorKind::Validation, "marked point must lie inside the unit ball");
  detail::require_positive(size, "marked size");
  const InversiveVector pv = InversiveVector::ball_point(p);
  SizeTerm t;
  t.family = Family::PointSize;
  t.a = detail::viewpoint_part(pv);
  t.a_extra = pv.extra();
  t.scale = size;
  t.source = source;
  return t;
}

/// Major (Diameter) or minor (Width) axis of the Klein-model ellipse of a
/// hyperbolic sphere. With c = -<U, v_st> and e = v_e for the unit Lorentz
/// vector v of the sphere: diameter = 2 / sqrt(1 + c^2), width = -2 e / (1 + c^2).
inline SizeTerm klein_disk_size_term(const InversiveVector& s, KleinMeasure measure, double weight = 1.0,
                                     long source = -1) {
  detail::require_setting(s, Setting::Ball, "klein_disk_size_term");
  detail::require_positive(weight, "weight");
  const CenterRadius cr = euclidean_center_radius(s);
  if (!(cr.center.norm() + cr.radius < 1.0)) {
    throw Error(ErrorKind::NonBallImage, "Klein size needs a sphere strictly inside the unit ball");
  }
  const InversiveVector v = normalized_sphere(s);
  SizeTerm t;
  t.family = measure == KleinMeasure::Diameter ? Family::KleinDiameter : Family::KleinWidth;
  t.a = detail::viewpoint_part(v);
  t.a_extra = v.extra();
  t.scale = 1.0 / weight;
  t.source = source;
  return t;
}

/// Lorentz vector h with <h, x> = det[x; rows] for the n rows of `rows`
/// (each of length n+1).
inline Vec lorentz_dual(const Mat& rows) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index m = rows.cols();
  if (m != n + 1) throw Error(ErrorKind::Validation, "lorentz_dual needs n vectors of length n+1");
  Vec h(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Mat minor(n, n);
    for (Eigen::Index c = 0, k = 0; c < m; ++c) {
      if (c == i) continue;
      minor.col(k++) = rows.col(c);
    }
    const double cof = ((i % 2) ? -1.0 : 1.0) * minor.determinant();
    h[i] = cof;
  }
  h[m - 1] = -h[m - 1];
  return h;
}

/// Constraint term keeping the viewpoint in the closed hyperbolic halfspace,
/// bounded by the hyperplane through the given points, that contains the
/// reference viewpoint. Sphere setting S^d: d+1 points of the sphere (the
/// hyperplane is the one whose ideal boundary passes through them). Ball
/// setting E^d: d interior points (the geodesic hyperplane through them).
inline SizeTerm orientation_barrier_term(std::span<const Vec> points, Setting setting, const KleinPoint& reference,
                                         long source = -1) {
  if (points.empty()) throw Error(ErrorKind::DegenerateFace, "no face points");
  const Eigen::Index dim = points[0].size();
  // Points live in R^{d+1} on S^d or in R^d for the ball; either way that is
  // the viewpoint dimension.
  const Eigen::Index n = dim;
  if (static_cast<Eigen::Index>(points.size()) != n) {
    throw Error(ErrorKind::UnsupportedDimension, "orientation constraint needs exactly as many points as the viewpoint dimension");
  }
  if (reference.dim() != n) throw Error(ErrorKind::Validation, "reference viewpoint has wrong dimension");
  Mat rows(n, n + 1);
  double scale = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec& p = points[static_cast<std::size_t>(i)];
    if (p.size() != dim) throw Error(ErrorKind::Validation, "face points differ in dimension");
    Vec row(n + 1);
    if (setting == Setting::Sphere) {
      row = InversiveVector::sphere_point(p).coords();
    } else {
      if (!(p.squaredNorm() < 1.0)) throw Error(ErrorKind::Validation, "face points must lie inside the ball");
      row = detail::viewpoint_part(InversiveVector::ball_point(p));
    }
    scale *= row.norm();
    rows.row(i) = row.transpose();
  }
  Vec h = lorentz_dual(rows);
  const double q = lorentz_norm2(h);
  if (!(q > 1e-24 * scale * scale)) throw Error(ErrorKind::DegenerateFace, "face points do not span a hyperplane");
  h /= std::sqrt(q);
  SizeTerm t;
  t.family = Family::OrientationBarrier;
  t.a = h;
  const double at_ref = reference.coords.dot(h.head(n)) - h[n];
  t.side = at_ref < 0.0 ? -1.0 : 1.0;
  t.source = source;
  return t;
}

}  // namespace mobius
