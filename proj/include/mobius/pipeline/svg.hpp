#pragma once

// SVG rendering of 2D content. The unit disk is drawn with radius 480
// centered in a 1000 x 1000 viewport, y pointing up. Sphere-setting scenes
// (S^2) are shown by stereographic projection from the north pole, so the
// equator is the unit circle.

#include <cmath>
#include <complex>
#include <cstdio>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include "mobius/pipeline/mesh.hpp"
#include "mobius/pipeline/scene.hpp"

namespace mobius::pipeline {

namespace svg {

inline constexpr double kSize = 1000.0;
inline constexpr double kScale = 480.0;

inline std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  std::string s(buf);
  if (s == "-0.0000") s = "0.0000";
  return s;
}

inline double px(double x) { return kSize / 2 + kScale * x; }
inline double py(double y) { return kSize / 2 - kScale * y; }

struct Planar {
  std::complex<double> center;
  double radius = 0;
  bool exterior = false;  // the cap is the outside of this circle
};

/// Planar picture of a scene circle; nullopt when it projects to a line.
inline std::optional<Planar> planar_circle(const Scene& s, std::size_t i) {
  if (s.setting == Setting::Ball) return Planar{{s.spheres[i].center[0], s.spheres[i].center[1]}, s.spheres[i].radius, false};
  // Sphere-setting coordinates read as a ball-setting vector are the
  // stereographic image: 1/r = v_t - v_e.
  const Vec v = s.sphere_vector(i).coords();
  const double inv_r = v[3] - v[2];
  if (std::abs(inv_r) < 1e-12 * v.norm()) return std::nullopt;
  const double r = 1.0 / inv_r;
  return Planar{{v[0] * r, v[1] * r}, std::abs(r), r < 0};
}

inline std::optional<std::complex<double>> planar_point(const Scene& s, const Vec& p) {
  if (s.setting == Setting::Ball) return std::complex<double>(p[0], p[1]);
  if (1.0 - p[2] < 1e-12) return std::nullopt;
  const Vec q = stereographic(p);
  return std::complex<double>(q[0], q[1]);
}

/// Third point fixing the circle that carries the edge: the inversion of u
/// in the unit circle (hyperbolic geodesic) or the image of -u (great circle).
inline std::optional<std::complex<double>> carrier_point(const Scene& s, const Vec& u) {
  if (s.setting == Setting::Ball) {
    const double u2 = u.squaredNorm();
    if (u2 < 1e-24) return std::nullopt;
    return std::complex<double>(u[0] / u2, u[1] / u2);
  }
  return planar_point(s, -u);
}

inline std::string segment(std::complex<double> a, std::complex<double> b) {
  return "M " + num(px(a.real())) + " " + num(py(a.imag())) + " L " + num(px(b.real())) + " " + num(py(b.imag()));
}

/// Arc from a to b on the circle through a, b, w that avoids w; a straight
/// segment when the three are (nearly) collinear or w is missing.
inline std::string arc(std::complex<double> a, std::complex<double> b, std::optional<std::complex<double>> w) {
  if (!w) return segment(a, b);
  const std::complex<double> ba = b - a, wa = *w - a;
  const double det = 2.0 * (ba.real() * wa.imag() - ba.imag() * wa.real());
  const double scale = std::abs(ba) * std::abs(wa) * std::max(std::abs(ba), std::abs(wa));
  if (std::abs(det) < 1e-9 * scale || std::abs(wa) > 1e9 * std::abs(ba)) return segment(a, b);
  // Center relative to a.
  const double bb = std::norm(ba), ww = std::norm(wa);
  const std::complex<double> c(( wa.imag() * bb - ba.imag() * ww) / det, (ba.real() * ww - wa.real() * bb) / det);
  const double r = std::abs(c);
  const std::complex<double> center = a + c;
  const auto angle = [&](std::complex<double> z) { return std::arg(z - center); };
  const double two_pi = 2.0 * std::numbers::pi;
  const auto ccw = [&](double from, double to) { return std::fmod(std::fmod(to - from, two_pi) + two_pi, two_pi); };
  const double span_b = ccw(angle(a), angle(b));
  const bool w_on_ccw = ccw(angle(a), angle(*w)) < span_b;
  const double span = w_on_ccw ? two_pi - span_b : span_b;
  // SVG's y axis points down: a counterclockwise turn in the picture is sweep 0.
  const int sweep = w_on_ccw ? 1 : 0;
  const int large = span > std::numbers::pi ? 1 : 0;
  return "M " + num(px(a.real())) + " " + num(py(a.imag())) + " A " + num(kScale * r) + " " + num(kScale * r) + " 0 " +
         std::to_string(large) + " " + std::to_string(sweep) + " " + num(px(b.real())) + " " + num(py(b.imag()));
}

inline std::string header() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" viewBox=\"0 0 1000 1000\">\n"
         "<circle class=\"boundary\" cx=\"500.0000\" cy=\"500.0000\" r=\"480.0000\" fill=\"none\" stroke=\"#000000\"/>\n";
}

}  // namespace svg

inline std::string render_svg(const Scene& s) {
  if (s.dimension != 2) throw Error(ErrorKind::UnsupportedDimension, "rendering needs 2D content");
  std::ostringstream out;
  out << svg::header();
  for (std::size_t i = 0; i < s.spheres.size(); ++i) {
    const auto c = svg::planar_circle(s, i);
    if (!c) continue;
    out << "<circle class=\"" << (c->exterior ? "sphere exterior" : "sphere") << "\" cx=\"" << svg::num(svg::px(c->center.real()))
        << "\" cy=\"" << svg::num(svg::py(c->center.imag())) << "\" r=\"" << svg::num(svg::kScale * c->radius)
        << "\" fill=\"none\" stroke=\"#1f5fa8\"/>\n";
  }
  for (const auto& [i, j] : s.edges) {
    const auto a = svg::planar_point(s, s.points[i]), b = svg::planar_point(s, s.points[j]);
    if (!a || !b) continue;
    out << "<path class=\"edge\" d=\"" << svg::arc(*a, *b, svg::carrier_point(s, s.points[i]))
        << "\" fill=\"none\" stroke=\"#555555\"/>\n";
  }
  for (const Vec& p : s.points) {
    const auto a = svg::planar_point(s, p);
    if (!a) continue;
    out << "<circle class=\"point\" cx=\"" << svg::num(svg::px(a->real())) << "\" cy=\"" << svg::num(svg::py(a->imag()))
        << "\" r=\"3.0000\" fill=\"#000000\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

inline std::string render_svg(const Result& r) { return render_svg(r.transformed); }

/// Quads of the pulled-back mesh as polygons.
inline std::string render_svg(const StructuredMesh& m) {
  std::ostringstream out;
  out << svg::header();
  for (const auto& q : m.quads) {
    out << "<polygon class=\"element\" points=\"";
    for (int k = 0; k < 4; ++k) {
      const Vec& p = m.nodes[q[k]];
      if (p.size() != 2) throw Error(ErrorKind::UnsupportedDimension, "rendering needs 2D content");
      out << (k ? " " : "") << svg::num(svg::px(p[0])) << "," << svg::num(svg::py(p[1]));
    }
    out << "\" fill=\"none\" stroke=\"#555555\" stroke-width=\"0.5\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace mobius::pipeline
