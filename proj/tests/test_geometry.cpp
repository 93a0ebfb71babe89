#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mobius/geometry.hpp"
#include "support/oracles.hpp"

using namespace mobius;

namespace {

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

MobiusMap random_ball_map(Eigen::Index d, std::mt19937_64& rng) {
  const BallPoint a(oracle::random_in_ball(d, 0.95, rng));
  return MobiusMap::rotation(oracle::random_rotation(d, rng), Setting::Ball) * recenter_map(a, Setting::Ball);
}

MobiusMap random_sphere_map(Eigen::Index d, std::mt19937_64& rng) {
  const BallPoint a(oracle::random_in_ball(d + 1, 0.95, rng));
  return MobiusMap::rotation(oracle::random_rotation(d + 1, rng), Setting::Sphere) *
         recenter_map(a, Setting::Sphere);
}

}  // namespace

TEST(Models, PoincareToKleinExamples) {
  EXPECT_NEAR(poincare_to_klein(BallPoint(v2(0, 0))).coords.norm(), 0.0, 1e-15);
  const Vec k1 = poincare_to_klein(BallPoint(v2(0.5, 0))).coords;
  EXPECT_NEAR(k1[0], 0.8, 1e-15);
  EXPECT_NEAR(k1[1], 0.0, 1e-15);
  const Vec k2 = poincare_to_klein(BallPoint(v2(0, 0.6))).coords;
  EXPECT_NEAR(k2[1], 1.2 / 1.36, 1e-15);  // 0.88235...
  const Vec p = klein_to_poincare(KleinPoint(v2(0.8, 0))).coords;
  EXPECT_NEAR(p[0], 0.5, 1e-15);
}

TEST(Models, KleinGeodesicsAreStraight) {
  // Poincaré geodesic through the origin-avoiding pair: the circle orthogonal
  // to the unit circle through p and q. Its Klein image must be collinear.
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec p = oracle::random_in_ball(2, 0.9, rng);
    const Vec q = oracle::random_in_ball(2, 0.9, rng);
    // Points on the geodesic: images of the diameter through 0 and phi_p(q).
    const Vec qq = oracle::phi(p, q);
    const Vec dir = qq.normalized();
    const Vec kp = poincare_to_klein(BallPoint(p)).coords;
    const Vec kq = poincare_to_klein(BallPoint(q)).coords;
    for (double t : {-0.7, -0.2, 0.3, 0.8}) {
      // phi_{-p} maps the diameter back onto the geodesic through p and q.
      const Vec x = oracle::phi(-p, t * dir);
      const Vec kx = poincare_to_klein(BallPoint(x)).coords;
      const Vec e1 = kq - kp, e2 = kx - kp;
      EXPECT_NEAR(e1[0] * e2[1] - e1[1] * e2[0], 0.0, 1e-12);
    }
  }
}

TEST(Models, RoundTripProperty) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Index n = 2 + i % 3;
    const KleinPoint k(oracle::random_in_ball(n, 0.999, rng));
    const KleinPoint back = poincare_to_klein(klein_to_poincare(k));
    EXPECT_LE((back.coords - k.coords).norm(), 1e-12);
  }
}

TEST(Models, ConversionsPreserveDistance) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    const BallPoint p(oracle::random_in_ball(3, 0.95, rng));
    const BallPoint q(oracle::random_in_ball(3, 0.95, rng));
    const Vec up = hyperboloid_point(poincare_to_klein(p));
    const Vec uq = hyperboloid_point(poincare_to_klein(q));
    const double via_klein = std::acosh(std::max(1.0, -lorentz_dot(up, uq)));
    EXPECT_NEAR(via_klein, hyperbolic_distance(p, q), 1e-8);
  }
}

TEST(Distance, Examples) {
  EXPECT_EQ(hyperbolic_distance(BallPoint(v2(0, 0)), BallPoint(v2(0, 0))), 0.0);
  EXPECT_NEAR(hyperbolic_distance(BallPoint(v2(0, 0)), BallPoint(v2(0.5, 0))), std::log(3.0), 1e-12);
  EXPECT_NEAR(std::log(3.0), 2.0 * std::atanh(0.5), 1e-15);
}

TEST(Distance, TriangleInequalityAndSymmetry) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const BallPoint a(oracle::random_in_ball(2, 0.99, rng));
    const BallPoint b(oracle::random_in_ball(2, 0.99, rng));
    const BallPoint c(oracle::random_in_ball(2, 0.99, rng));
    EXPECT_NEAR(hyperbolic_distance(a, b), hyperbolic_distance(b, a), 1e-12);
    EXPECT_LE(hyperbolic_distance(a, c), hyperbolic_distance(a, b) + hyperbolic_distance(b, c) + 1e-9);
  }
}

TEST(Distance, InvariantUnderRecentering) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const BallPoint a(oracle::random_in_ball(2, 0.9, rng));
    const BallPoint p(oracle::random_in_ball(2, 0.9, rng));
    const BallPoint q(oracle::random_in_ball(2, 0.9, rng));
    const MobiusMap m = recenter_map(a, Setting::Ball);
    const BallPoint mp(apply_point(m, p.coords));
    const BallPoint mq(apply_point(m, q.coords));
    const double before = hyperbolic_distance(p, q);
    EXPECT_NEAR(hyperbolic_distance(mp, mq), before, 1e-9 * std::max(1.0, before));
  }
}

TEST(Recenter, Examples) {
  const MobiusMap id = recenter_map(BallPoint(v2(0, 0)), Setting::Ball);
  EXPECT_LE((id.matrix() - Mat::Identity(4, 4)).norm(), 1e-15);

  const MobiusMap m = recenter_map(BallPoint(v2(0.5, 0)), Setting::Ball);
  EXPECT_LE(apply_point(m, v2(0.5, 0)).norm(), 1e-10);
  const Vec img = apply_point(m, v2(-0.5, 0));
  const Vec expected = oracle::phi(v2(0.5, 0), v2(-0.5, 0));
  EXPECT_NEAR(expected[0], -0.8, 1e-15);
  EXPECT_NEAR(img[0], -0.8, 1e-12);
  EXPECT_NEAR(img[1], 0.0, 1e-12);
}

TEST(Recenter, MatchesExplicitBallFormula) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Index d = 2 + i % 2;
    const Vec a = oracle::random_in_ball(d, 0.95, rng);
    const Vec x = oracle::random_in_ball(d, 1.0, rng);
    const MobiusMap m = recenter_map(BallPoint(a), Setting::Ball);
    EXPECT_LE((apply_point(m, x) - oracle::phi(a, x)).norm(), 1e-9);
    EXPECT_LE(apply_point(m, a).norm(), 1e-10);
    // Unit-sphere vector is fixed.
    const Vec unit = InversiveVector::unit_sphere(d).coords();
    EXPECT_LE((m.matrix() * unit - unit).norm(), 1e-12);
  }
}

TEST(ApplyPoint, CompositionLaw) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 300; ++i) {
    const MobiusMap m1 = random_ball_map(2, rng), m2 = random_ball_map(2, rng);
    const Vec p = oracle::random_in_ball(2, 0.9, rng);
    EXPECT_LE((apply_point(m2, apply_point(m1, p)) - apply_point(m2 * m1, p)).norm(), 1e-9);

    const MobiusMap s1 = random_sphere_map(2, rng), s2 = random_sphere_map(2, rng);
    const Vec n = oracle::random_unit(3, rng);
    EXPECT_LE((apply_point(s2, apply_point(s1, n)) - apply_point(s2 * s1, n)).norm(), 1e-9);
  }
}

TEST(ApplyPoint, SphereBoostMatchesStereographicDilation) {
  // Viewpoint (0,0,1/2) on the north axis has rapidity ln 3. Recentering
  // there is a translation toward the south pole of length ln 3, i.e. the
  // planar dilation w -> w / 3 in stereographic coordinates.
  const MobiusMap m = recenter_map(BallPoint(v3(0, 0, 0.5)), Setting::Sphere);
  const Vec p = v3(1, 0, 0);
  const Vec expected = oracle::from_plane(oracle::to_plane(p) / 3.0);
  const Vec got = apply_point(m, p);
  EXPECT_LE((got - expected).norm(), 1e-12);
  EXPECT_NEAR(got[0], 0.6, 1e-12);
  EXPECT_NEAR(got[2], -0.8, 1e-12);

  std::mt19937_64 rng(31);
  for (int i = 0; i < 200; ++i) {
    const Vec n = oracle::random_unit(3, rng);
    if (n[2] > 0.999) continue;
    EXPECT_LE((apply_point(m, n) - oracle::from_plane(oracle::to_plane(n) / 3.0)).norm(), 1e-10);
  }
}

TEST(ApplyPoint, DecodeFailureAtInfinity) {
  // A point outside the closed ball whose image is infinity: x = a / |a|^2.
  const MobiusMap m = recenter_map(BallPoint(v2(0.5, 0)), Setting::Ball);
  try {
    apply_point(m, v2(2.0, 0.0));
    FAIL() << "expected DecodeFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DecodeFailure);
  }
}

TEST(ApplySphere, Examples) {
  const InversiveVector s = InversiveVector::ball_sphere(v2(0, 0), 0.5);
  const InversiveVector id = apply_sphere(MobiusMap::identity(2, Setting::Ball), s);
  EXPECT_LE((id.coords() - s.coords()).norm(), 1e-15);

  std::mt19937_64 rng(37);
  const InversiveVector unit = InversiveVector::unit_sphere(2);
  for (int i = 0; i < 20; ++i) {
    const InversiveVector img = apply_sphere(random_ball_map(2, rng), unit);
    EXPECT_LE((img.coords() - unit.coords()).norm(), 1e-10);
  }

  // Circle c=0, r=0.5 under recentering at (0.5, 0): map 8 boundary points
  // with the explicit formula and fit a circle.
  const Vec a = v2(0.5, 0);
  std::vector<Vec> mapped;
  for (const Vec& p : oracle::circle_points(v2(0, 0), 0.5, 8)) mapped.push_back(oracle::phi(a, p));
  const oracle::FitSphere fit = oracle::fit_sphere(mapped);
  EXPECT_NEAR(fit.center[0], -0.4, 1e-12);
  EXPECT_NEAR(fit.radius, 0.4, 1e-12);

  const CenterRadius cr = euclidean_center_radius(apply_sphere(recenter_map(BallPoint(a), Setting::Ball), s));
  EXPECT_NEAR(cr.center[0], fit.center[0], 1e-12);
  EXPECT_NEAR(cr.center[1], fit.center[1], 1e-12);
  EXPECT_NEAR(cr.radius, fit.radius, 1e-12);
}

TEST(CenterRadius, EncodingRoundTrip) {
  const CenterRadius unit = euclidean_center_radius(InversiveVector::unit_sphere(3));
  EXPECT_NEAR(unit.radius, 1.0, 1e-15);
  EXPECT_NEAR(unit.center.norm(), 0.0, 1e-15);

  const InversiveVector s = InversiveVector::ball_sphere(v2(0.2, 0.1), 0.3);
  EXPECT_NEAR(s.q(), 1.0, 1e-12);
  const CenterRadius cr = euclidean_center_radius(s);
  EXPECT_NEAR(cr.center[0], 0.2, 1e-12);
  EXPECT_NEAR(cr.center[1], 0.1, 1e-12);
  EXPECT_NEAR(cr.radius, 0.3, 1e-12);
  const InversiveVector again = InversiveVector::ball_sphere(cr.center, cr.radius);
  EXPECT_LE((again.coords() - s.coords()).norm(), 1e-10);
}

TEST(CenterRadius, NonBallImage) {
  // Circle crossing the unit circle whose interior contains the pole
  // a / |a|^2 of the recentering map: its image is an inverted circle.
  const InversiveVector s = InversiveVector::ball_sphere(v2(0.9, 0), 0.5);
  const InversiveVector img = apply_sphere(recenter_map(BallPoint(v2(0.75, 0)), Setting::Ball), s);
  try {
    euclidean_center_radius(img);
    FAIL() << "expected NonBallImage";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonBallImage);
  }
}

TEST(Caps, AngularRadius) {
  const InversiveVector great = InversiveVector::cap(v3(0, 0, 1), std::numbers::pi / 2);
  EXPECT_NEAR(great.time(), 0.0, 1e-15);
  EXPECT_NEAR(cap_angular_radius(great), std::numbers::pi / 2, 1e-15);

  const InversiveVector c = InversiveVector::cap(v3(0.3, -0.2, 0.9), std::numbers::pi / 3);
  const PoleAngle pa = cap_pole_angle(c);
  EXPECT_NEAR(pa.angle, std::numbers::pi / 3, 1e-12);
  EXPECT_LE((InversiveVector::cap(pa.pole, pa.angle).coords() - c.coords()).norm(), 1e-12);
}

TEST(Caps, BoostTowardPoleGrowsCap) {
  // Sample the cap boundary, move it with the stereographic dilation, and
  // measure the new angular radius about the pole.
  const Vec north = v3(0, 0, 1);
  const double theta = std::numbers::pi / 3;
  for (double a : {0.1, 0.3, 0.5, 0.8}) {
    const double rapidity = 2.0 * std::atanh(a);
    const InversiveVector img =
        apply_sphere(recenter_map(BallPoint(v3(0, 0, a)), Setting::Sphere), InversiveVector::cap(north, theta));
    // Oracle: boundary point at polar angle theta; dilation by exp(-rapidity).
    Vec p(3);
    p << std::sin(theta), 0.0, std::cos(theta);
    const Vec moved = oracle::from_plane(oracle::to_plane(p) * std::exp(-rapidity));
    const double expected = std::acos(moved.dot(north));
    EXPECT_NEAR(cap_angular_radius(img), expected, 1e-12);
    EXPECT_GT(cap_angular_radius(img), theta);
  }
}

TEST(ConformalFactor, Examples) {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 20; ++i) {
    EXPECT_NEAR(conformal_factor(BallPoint(v2(0, 0)), oracle::random_in_ball(2, 1.0, rng)), 1.0, 1e-15);
  }
  EXPECT_NEAR(conformal_factor(BallPoint(v2(0.5, 0)), v2(0.5, 0)), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(conformal_factor(BallPoint(v2(0.5, 0)), v2(0, 0)), 0.75, 1e-15);
}

TEST(ConformalFactor, MatchesFiniteDifferences) {
  std::mt19937_64 rng(43);
  const double h = 1e-5;
  for (int i = 0; i < 1000; ++i) {
    const BallPoint a(oracle::random_in_ball(2, 0.9, rng));
    const Vec x = oracle::random_in_ball(2, 0.9, rng);
    const MobiusMap m = recenter_map(a, Setting::Ball);
    const Vec e = oracle::random_unit(2, rng);
    const double fd = (apply_point(m, x + h * e) - apply_point(m, x - h * e)).norm() / (2 * h);
    const double lambda = conformal_factor(a, x);
    EXPECT_NEAR(fd / lambda, 1.0, 1e-5);
  }
}

TEST(Lorentz, FormPreservedAndIncidence) {
  std::mt19937_64 rng(47);
  for (int i = 0; i < 10000; ++i) {
    const bool ball = i % 2 == 0;
    const Eigen::Index d = 2 + (i / 2) % 2;
    const MobiusMap m = ball ? random_ball_map(d, rng) : random_sphere_map(d, rng);
    InversiveVector s;
    if (ball) {
      const Vec c = oracle::random_in_ball(d, 0.6, rng);
      s = InversiveVector::ball_sphere(c, oracle::uniform(rng, 0.01, 0.39));
    } else {
      s = InversiveVector::cap(oracle::random_unit(d + 1, rng), oracle::uniform(rng, 0.05, 3.0));
    }
    const Vec image = m.matrix() * s.coords();
    EXPECT_NEAR(lorentz_norm2(image), 1.0, 1e-9);
    if (i < 2000) {
      // A boundary point of s maps onto the image sphere.
      Vec p;
      if (ball) {
        const CenterRadius cr = euclidean_center_radius(s);
        p = cr.center + cr.radius * oracle::random_unit(d, rng);
      } else {
        const PoleAngle pa = cap_pole_angle(s);
        Vec t = oracle::random_unit(d + 1, rng);
        t = (t - t.dot(pa.pole) * pa.pole).normalized();
        p = std::cos(pa.angle) * pa.pole + std::sin(pa.angle) * t;
      }
      const Vec q = apply_point(m, p);
      const InversiveVector img = apply_sphere(m, s);
      const InversiveVector qv = ball ? InversiveVector::ball_point(q) : InversiveVector::sphere_point(q);
      EXPECT_NEAR(lorentz_dot(qv.coords(), img.coords()), 0.0, 1e-8);
    }
  }
}

TEST(Lorentz, InverseAndOrientation) {
  std::mt19937_64 rng(53);
  for (int i = 0; i < 100; ++i) {
    const MobiusMap m = random_sphere_map(3, rng);
    EXPECT_LE(((m * m.inverse()).matrix() - Mat::Identity(5, 5)).norm(), 1e-9);
    const Vec n = oracle::random_unit(4, rng);
    const Vec img = m.matrix() * InversiveVector::sphere_point(n).coords();
    EXPECT_GT(img[4], 0.0);
  }
}

TEST(Lift, PlanarVectorsReadAsSphereVectors) {
  const Vec p = v2(0.3, -0.4);
  const InversiveVector lifted = lift_to_sphere(InversiveVector::ball_point(p));
  EXPECT_LE((decode_point(lifted) - inverse_stereographic(p)).norm(), 1e-15);
  const PoleAngle eq = cap_pole_angle(lift_to_sphere(InversiveVector::unit_sphere(2)));
  EXPECT_NEAR(eq.angle, std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(eq.pole[2], -1.0, 1e-15);
}
