#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mobius/accel.hpp"
#include "mobius/packing.hpp"
#include "support/oracles.hpp"

using namespace mobius;

namespace {

constexpr double kPi = std::numbers::pi;

EmbeddedGraph k4() { return EmbeddedGraph({{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}}); }

EmbeddedGraph octahedron() {
  // Vertices +x, -x, +y, -y, +z, -z; counterclockwise seen from outside.
  return EmbeddedGraph({{2, 4, 3, 5}, {2, 5, 3, 4}, {0, 5, 1, 4}, {0, 4, 1, 5}, {0, 2, 1, 3}, {0, 3, 1, 2}});
}

EmbeddedGraph random_triangulation(std::size_t n, std::mt19937_64& rng) {
  std::vector<Eigen::Vector3d> pts;
  for (std::size_t i = 0; i < n; ++i) pts.emplace_back(oracle::random_unit(3, rng));
  const auto tris = convex_hull_3d(pts);
  return EmbeddedGraph::from_triangles(n, tris);
}

void expect_valid_packing(const EmbeddedGraph& g, const Packing& p) {
  EXPECT_LE(p.tangency_residual, 1e-6);
  std::vector<std::vector<char>> adj(g.vertex_count(), std::vector<char>(g.vertex_count(), 0));
  for (const auto& [i, j] : g.edges()) adj[i][j] = adj[j][i] = 1;
  for (std::size_t i = 0; i < g.vertex_count(); ++i)
    for (std::size_t j = i + 1; j < g.vertex_count(); ++j) {
      const double dot = lorentz_dot(p.circles[i].coords(), p.circles[j].coords());
      if (adj[i][j]) {
        EXPECT_NEAR(dot, -1.0, 1e-6);
      } else {
        EXPECT_LT(dot, -1.0 - 1e-9);  // disjoint
      }
    }
}

}  // namespace

TEST(Graph, FacesAndEuler) {
  const EmbeddedGraph g = k4();
  EXPECT_EQ(g.edge_count(), 6u);
  EXPECT_EQ(g.faces().size(), 4u);
  EXPECT_TRUE(g.is_triangulation());
  EXPECT_EQ(octahedron().faces().size(), 8u);
}

TEST(Graph, RejectsNonPlanarRotations) {
  // K4 with one vertex's rotation reversed changes the face count.
  try {
    EmbeddedGraph({{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 2, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPlanarInput);
  }
  // K5 has no planar rotation system.
  try {
    EmbeddedGraph({{1, 2, 3, 4}, {0, 2, 3, 4}, {0, 1, 3, 4}, {0, 1, 2, 4}, {0, 1, 2, 3}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonPlanarInput);
  }
  try {
    EmbeddedGraph({{1}, {}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
  }
}

TEST(Augment, Triangle) {
  const EmbeddedGraph k3({{1, 2}, {2, 0}, {0, 1}});
  EXPECT_EQ(k3.faces().size(), 2u);
  const Augmented a = augment(k3);
  EXPECT_EQ(a.graph.vertex_count(), 5u);
  EXPECT_EQ(a.graph.edge_count(), 3u + 6u);
  EXPECT_TRUE(a.graph.is_triangulation());
  EXPECT_EQ(std::count(a.added.begin(), a.added.end(), true), 2);
}

TEST(Augment, SquareBecomesOctahedron) {
  const EmbeddedGraph c4({{1, 3}, {2, 0}, {3, 1}, {0, 2}});
  const Augmented a = augment(c4);
  EXPECT_EQ(a.graph.vertex_count(), 6u);
  EXPECT_EQ(a.graph.edge_count(), 12u);
  EXPECT_EQ(a.graph.faces().size(), 8u);
  EXPECT_TRUE(a.graph.is_triangulation());
  // The only 4-regular triangulation on six vertices is the octahedron.
  for (const auto& r : a.graph.rotation()) EXPECT_EQ(r.size(), 4u);
}

TEST(Augment, MaximalGraphGetsOneVertexPerFace) {
  const Augmented a = augment(k4());
  EXPECT_EQ(a.graph.vertex_count(), 8u);
  EXPECT_EQ(a.graph.edge_count(), 6u + 12u);
  EXPECT_TRUE(a.graph.is_triangulation());
}

TEST(Pack, Tetrahedron) {
  const Packing p = pack(k4());
  const double expected = std::acos(-1.0 / 3.0) / 2.0;
  EXPECT_NEAR(expected * 180 / kPi, 54.7356, 1e-4);
  for (const InversiveVector& c : p.circles) EXPECT_NEAR(cap_angular_radius(c), expected, 1e-8);
  expect_valid_packing(k4(), p);
}

TEST(Pack, Octahedron) {
  const Packing p = pack(octahedron());
  for (const InversiveVector& c : p.circles) EXPECT_NEAR(cap_angular_radius(c), kPi / 4, 1e-8);
  expect_valid_packing(octahedron(), p);
  // Poles form an orthonormal frame up to sign.
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i + 1; j < 6; ++j) {
      const double d = cap_pole_angle(p.circles[i]).pole.dot(cap_pole_angle(p.circles[j]).pole);
      EXPECT_TRUE(std::abs(d) < 1e-7 || std::abs(d + 1) < 1e-7) << d;
    }
}

TEST(Pack, PlanarCentersAreTangent) {
  const Packing p = pack_planar(octahedron());
  for (const auto& [i, j] : p.edges) {
    const CenterRadius a = euclidean_center_radius(p.circles[i]), b = euclidean_center_radius(p.circles[j]);
    EXPECT_NEAR((a.center - b.center).norm(), a.radius + b.radius, 1e-9);
  }
}

TEST(Pack, RandomTriangulations) {
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 5; ++trial) {
    const EmbeddedGraph g = random_triangulation(30 + 10 * trial, rng);
    PackingConfig cfg;
    cfg.normalize = trial % 2 == 0;
    const Packing p = pack(g, cfg);
    expect_valid_packing(g, p);
    // Total angle-sum error never increases from one sweep to the next
    // (up to roundoff once it is near machine precision).
    for (std::size_t k = 1; k < p.residual_history.size(); ++k)
      EXPECT_LE(p.residual_history[k], p.residual_history[k - 1] * (1 + 1e-9) + 1e-12) << k;
  }
}

TEST(Pack, AugmentThenPackKeepsSymmetry) {
  // Octahedron from the square: the four square vertices are equivalent
  // under the symmetry group, and so are the two face vertices.
  const Augmented a = augment(EmbeddedGraph({{1, 3}, {2, 0}, {3, 1}, {0, 2}}));
  const Packing p = pack(a.graph);
  for (std::size_t v = 1; v < 6; ++v)
    EXPECT_NEAR(cap_angular_radius(p.circles[v]), cap_angular_radius(p.circles[0]), 1e-6);
}

TEST(Pack, ErrorsOnNonTriangulation) {
  try {
    pack(EmbeddedGraph({{1, 3}, {2, 0}, {3, 1}, {0, 2}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
  }
  PackingConfig cfg;
  cfg.max_sweeps = 1;
  try {
    pack(octahedron(), cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonConvergence);
  }
}
