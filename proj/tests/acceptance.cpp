// Acceptance run: one PASS/FAIL line per criterion. Tolerances and budgets
// are fixed here; the exit status is nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "mobius/mobius.hpp"
#include "support/instances.hpp"
#include "support/oracles.hpp"

using namespace mobius;
using namespace mobius::pipeline;

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("AC%d %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

// ---------------------------------------------------------------------------

SizeTerm random_term(Family f, std::mt19937_64& rng) {
  switch (f) {
    case Family::BallRadius: return ball_sphere_radius_term(gen::circle(rng, 0.85));
    case Family::CapRadius:
      return cap_radius_term(InversiveVector::cap(oracle::random_unit(3, rng), oracle::uniform(rng, 0.05, kPi - 0.05)));
    case Family::SphereArc: return sphere_edge_term(oracle::random_unit(3, rng), oracle::random_unit(3, rng));
    case Family::BallEdge:
      return ball_edge_term(oracle::random_in_ball(2, 0.95, rng), oracle::random_in_ball(2, 0.95, rng));
    case Family::PointSize:
      return point_size_term(oracle::random_in_ball(2, 0.95, rng), oracle::uniform(rng, 0.1, 2.0));
    case Family::KleinDiameter: return klein_disk_size_term(gen::circle(rng, 0.85), KleinMeasure::Diameter);
    case Family::KleinWidth: return klein_disk_size_term(gen::circle(rng, 0.85), KleinMeasure::Width);
    default: break;
  }
  throw std::logic_error("no generator");
}

// Every measurement family (the radius and edge families each come in a
// ball and a sphere variant). Instances hold 1 to 5 terms, so the check
// covers maxima of terms as well as single terms.
void quasiconvexity() {
  const Family families[] = {Family::BallRadius, Family::CapRadius,     Family::SphereArc, Family::BallEdge,
                             Family::PointSize,  Family::KleinDiameter, Family::KleinWidth};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  int bad = 0, trials = 0;
  double worst = -kBarrier;
  for (Family f : families) {
    const Eigen::Index n = f == Family::CapRadius || f == Family::SphereArc ? 3 : 2;
    for (int i = 0; i < 1000; ++i, ++trials) {
      std::vector<SizeTerm> terms;
      const int count = 1 + static_cast<int>(rng() % 5);
      for (int k = 0; k < count; ++k) terms.push_back(random_term(f, rng));
      const Vec a = oracle::random_in_ball(n, 0.99, rng), b = oracle::random_in_ball(n, 0.99, rng);
      const auto fmax = [&](const Vec& x) { return evaluate_max(std::span<const SizeTerm>(terms), Viewframe(x)); };
      const double excess = fmax(0.5 * (a + b)) - std::max(fmax(a), fmax(b));
      worst = std::max(worst, excess);
      if (!(excess <= 1e-9)) ++bad;
    }
  }
  const double t = seconds_since(t0);
  report(1, bad == 0 && t < 30.0,
         fmt("quasiconvexity: %d families x 1000 trials, %d violations, worst excess %.3g (tol 1e-9), %.2fs (limit 30s)",
             static_cast<int>(std::size(families)), bad, worst, t));
}

// ---------------------------------------------------------------------------

Scene random_scene(Objective obj, std::mt19937_64& rng) {
  Scene s;
  s.objective = obj;
  const std::size_t n = 3 + rng() % 18;  // 3..20 objects
  switch (obj) {
    case Objective::Radius:
    case Objective::KleinDiameter:
    case Objective::KleinWidth:
      for (std::size_t i = 0; i < n; ++i) {
        const CenterRadius cr = euclidean_center_radius(gen::circle(rng, 0.85));
        s.spheres.push_back({cr.center, cr.radius});
      }
      break;
    case Objective::Edge: {
      const std::size_t pts = 3 + rng() % 10;
      for (std::size_t i = 0; i < pts; ++i) s.points.push_back(oracle::random_in_ball(2, 0.9, rng));
      while (s.edges.size() < n) {
        const std::size_t i = rng() % pts, j = rng() % pts;
        if (i != j) s.edges.emplace_back(i, j);
      }
      break;
    }
    case Objective::Separation:
      for (std::size_t i = 0; i < n; ++i) s.points.push_back(oracle::random_in_ball(2, 0.9, rng));
      break;
    case Objective::Size:
      for (std::size_t i = 0; i < n; ++i) {
        s.points.push_back(oracle::random_in_ball(2, 0.9, rng));
        s.weights.push_back(oracle::uniform(rng, 0.05, 0.3));
      }
      break;
  }
  return s;
}

// Brute-force optimum: 400 x 400 grid of the Klein disk, then zoomed
// 81 x 81 grids. The dense zoom is needed to follow narrow valleys along the
// kink where two terms tie.
double grid_oracle(const std::vector<SizeTerm>& terms) {
  std::size_t hot = 0;  // last term that decided a cutoff, tried first
  const auto f = [&](const Vec& x, double bound) {
    const Viewframe frame(x);
    double m = terms[hot].value(frame);
    if (m >= bound) return m;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      m = std::max(m, terms[i].value(frame));
      if (m >= bound) {
        hot = i;
        return m;
      }
    }
    return m;
  };
  return oracle::grid_minimize_bounded(f, 2, 1.0 - 1e-7, 400, 60, 81, 4.0).value;
}

void global_optimality() {
  const Objective objectives[] = {Objective::Radius, Objective::Edge,          Objective::Separation,
                                  Objective::Size,   Objective::KleinDiameter, Objective::KleinWidth};
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2002);
  int bad = 0, total = 0;
  double worst = 0.0, above = -kBarrier;
  std::string worst_obj = to_string(objectives[0]);
  for (Objective obj : objectives) {
    for (int i = 0; i < 50; ++i, ++total) {
      const Scene s = random_scene(obj, rng);
      const Result r = run(s);
      const double expect = grid_oracle(objective_terms(s));
      const double gap = std::abs(r.t_star - expect);
      if (gap > worst) worst = gap, worst_obj = to_string(obj);
      above = std::max(above, r.t_star - expect);
      if (!(gap <= 1e-4)) ++bad;
    }
  }
  const double t = seconds_since(t0);
  report(2, bad == 0 && t < 60.0,
         fmt("global optimality: %d instances over 6 objectives, %d off by > 1e-4, worst gap %.3g (%s), max solver excess "
             "over oracle %.3g, %.2fs (limit 60s)",
             total, bad, worst, worst_obj.c_str(), above, t));
}

// ---------------------------------------------------------------------------

std::vector<Vec> sphere_points(std::size_t n, Eigen::Index ambient, std::mt19937_64& rng) {
  std::vector<Vec> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(oracle::random_unit(ambient, rng));
  return out;
}

void delaunay_equivalence() {
  std::mt19937_64 rng(3003);
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const PointSet ps(sphere_points(4 + rng() % 97, 3, rng), Setting::Sphere);
    const Solution del = solve_edges(ps, delaunay_sphere(ps).edges, SolverConfig{});
    const Solution all = solve_edges(ps, complete_graph(ps.size()), SolverConfig{});
    const double gap = std::abs(del.t_star - all.t_star);
    worst = std::max(worst, gap);
    if (!(gap <= 1e-9)) ++bad;
  }
  report(3, bad == 0, fmt("Delaunay equivalence: 50 sets on S^2 (n <= 100), %d off by > 1e-9, worst gap %.3g", bad, worst));
}

void sampling_equivalence() {
  std::mt19937_64 rng(4004);
  int bad = 0, max_rounds = 0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const PointSet ps(sphere_points(20 + rng() % 181, 4, rng), Setting::Sphere);
    SeparationConfig cfg;
    cfg.solver.rng_seed = static_cast<std::uint64_t>(i);
    const SeparationResult r = maxmin_separation(ps, cfg);
    SolverConfig glp;
    glp.backend = Backend::Glp;
    const Solution all = solve_edges(ps, complete_graph(ps.size()), glp);
    const double gap = std::abs(r.solution.t_star - all.t_star);
    worst = std::max(worst, gap);
    max_rounds = std::max(max_rounds, r.rounds);
    if (!(gap <= 1e-9) || r.rounds > 8) ++bad;
  }
  report(4, bad == 0,
         fmt("sampling loop: 20 sets on S^3 (n <= 200), %d failing, worst gap %.3g (tol 1e-9), max rounds %d (limit 8)", bad,
             worst, max_rounds));
}

// ---------------------------------------------------------------------------

void octahedral_equivariance() {
  std::mt19937_64 rng(5005);
  const std::vector<Vec> axes = {v3(1, 0, 0), v3(-1, 0, 0), v3(0, 1, 0), v3(0, -1, 0), v3(0, 0, 1), v3(0, 0, -1)};
  int bad = 0;
  double worst_radius = 0.0, worst_view = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const MobiusMap m = MobiusMap::rotation(oracle::random_rotation(3, rng), Setting::Sphere) *
                        recenter_map(BallPoint(oracle::random_in_ball(3, 0.8, rng)), Setting::Sphere);
    std::vector<SizeTerm> terms;
    std::vector<InversiveVector> distorted;
    for (std::size_t i = 0; i < axes.size(); ++i) {
      distorted.push_back(apply_sphere(m, InversiveVector::cap(axes[i], kPi / 4)));
      terms.push_back(cap_radius_term(distorted.back(), 1.0, static_cast<long>(i)));
    }
    const Solution sol = minimize_max(std::span<const SizeTerm>(terms), 3, SolverConfig{});
    const MobiusMap view = recenter_map(sol.x_star, Setting::Sphere);
    for (const InversiveVector& c : distorted)
      worst_radius = std::max(worst_radius, std::abs(cap_angular_radius(apply_sphere(view, c)) - kPi / 4));
    const KleinPoint expected = apply_viewpoint(m, KleinPoint(Vec::Zero(3)));
    const double dv = (sol.x_star.coords - expected.coords).norm();
    worst_view = std::max(worst_view, dv);
  }
  bad = worst_radius <= 1e-6 && worst_view <= 1e-5 ? 0 : 1;
  report(5, bad == 0,
         fmt("octahedral equivariance: 10 random maps, worst radius error %.3g rad (tol 1e-6), worst viewpoint error %.3g "
             "(tol 1e-5)",
             worst_radius, worst_view));
}

// ---------------------------------------------------------------------------

void linear_scaling() {
  SolverConfig cfg;
  cfg.backend = Backend::Glp;
  const auto timed = [&](std::size_t n, std::uint64_t seed, double* slowest) {
    std::mt19937_64 rng(seed);
    const auto terms = gen::circles(n, rng);
    cfg.rng_seed = seed;
    const auto t0 = Clock::now();
    const Solution sol = minimize_max(std::span<const SizeTerm>(terms), 2, cfg);
    const double t = seconds_since(t0);
    *slowest = std::max(*slowest, t);
    return sol.converged ? t : 1e9;
  };
  double slow_small = 0.0, slow_large = 0.0;
  timed(20000, 6000, &slow_small);  // warm-up
  slow_small = 0.0;
  double small = 0.0, large = 0.0;
  for (std::uint64_t k = 0; k < 5; ++k) {
    small += timed(100000, 6001 + k, &slow_small);
    large += timed(200000, 6101 + k, &slow_large);
  }
  const double ratio = large / small;
  report(6, ratio <= 2.5 && slow_small < 10.0 && slow_large < 10.0,
         fmt("linear scaling (Glp, radius terms, 5 runs each): time(2e5)/time(1e5) = %.2f (limit 2.5), slowest runs %.2fs / "
             "%.2fs (limit 10s)",
             ratio, slow_small, slow_large));
}

// ---------------------------------------------------------------------------

void lorentz_core() {
  std::mt19937_64 rng(7007);
  double worst_q = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const bool ball = i % 2 == 0;
    const Eigen::Index d = 2 + (i / 2) % 2;
    MobiusMap m;
    InversiveVector s;
    if (ball) {
      m = MobiusMap::rotation(oracle::random_rotation(d, rng), Setting::Ball) *
          recenter_map(BallPoint(oracle::random_in_ball(d, 0.95, rng)), Setting::Ball);
      s = InversiveVector::ball_sphere(oracle::random_in_ball(d, 0.6, rng), oracle::uniform(rng, 0.01, 0.39));
    } else {
      m = MobiusMap::rotation(oracle::random_rotation(d + 1, rng), Setting::Sphere) *
          recenter_map(BallPoint(oracle::random_in_ball(d + 1, 0.95, rng)), Setting::Sphere);
      s = InversiveVector::cap(oracle::random_unit(d + 1, rng), oracle::uniform(rng, 0.05, 3.0));
    }
    worst_q = std::max(worst_q, std::abs(lorentz_norm2(apply_vector(m, s).coords()) - 1.0));
  }
  double worst_cf = 0.0;
  const double h = 1e-5;
  for (int i = 0; i < 1000; ++i) {
    const BallPoint a(oracle::random_in_ball(2, 0.9, rng));
    const Vec x = oracle::random_in_ball(2, 0.9, rng);
    const MobiusMap m = recenter_map(a, Setting::Ball);
    const Vec e = oracle::random_unit(2, rng);
    const double fd = (apply_point(m, x + h * e) - apply_point(m, x - h * e)).norm() / (2 * h);
    worst_cf = std::max(worst_cf, std::abs(fd / conformal_factor(a, x) - 1.0));
  }
  report(7, worst_q <= 1e-9 && worst_cf <= 1e-5,
         fmt("Lorentz core: 10^4 pairs, worst |Q - 1| %.3g (tol 1e-9); conformal factor worst relative error %.3g (tol 1e-5)",
             worst_q, worst_cf));
}

// ---------------------------------------------------------------------------

void mesh_driver() {
  std::mt19937_64 rng(8008);
  Scene s;
  for (int i = 0; i < 10; ++i) {
    Vec p = oracle::random_in_ball(2, 0.35, rng);
    p[0] += 0.5;
    s.points.push_back(p);
    s.weights.push_back(oracle::uniform(rng, 0.02, 0.08));
  }
  const StructuredMesh opt = mesh(s);
  const StructuredMesh id = mesh_at(s, KleinPoint(Vec::Zero(2)));
  const bool pass = opt.element_size >= id.element_size && opt.element_count() <= id.element_count() &&
                    opt.min_jacobian > 0.0 && id.min_jacobian > 0.0;
  report(8, pass,
         fmt("mesh driver: min s' %.4g at optimum vs %.4g at identity; elements %zu vs %zu; min Jacobian %.3g / %.3g", opt.element_size,
             id.element_size, opt.element_count(), id.element_count(), opt.min_jacobian, id.min_jacobian));
}

// ---------------------------------------------------------------------------

EmbeddedGraph platonic(std::size_t n, const std::vector<Face>& faces) { return EmbeddedGraph::from_triangles(n, faces); }

void packing_radii() {
  const EmbeddedGraph tetra = platonic(4, {{0, 1, 2}, {0, 2, 3}, {0, 3, 1}, {1, 3, 2}});
  const EmbeddedGraph octa =
      platonic(6, {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}});
  const auto check = [](const EmbeddedGraph& g, double expected, double* worst, double* tangency) {
    const Packing p = pack(g);
    for (const InversiveVector& c : p.circles) *worst = std::max(*worst, std::abs(cap_angular_radius(c) - expected));
    *tangency = std::max(*tangency, p.tangency_residual);
  };
  double worst_t = 0.0, worst_o = 0.0, tangency = 0.0;
  const double tetra_angle = std::acos(1.0 / std::sqrt(3.0));
  check(tetra, tetra_angle, &worst_t, &tangency);
  check(octa, kPi / 4, &worst_o, &tangency);
  const double deg = 180.0 / kPi;
  report(9, worst_t * deg <= 1e-4 && worst_o * deg <= 1e-4 && tangency <= 1e-6,
         fmt("packing: tetrahedral %.6f deg (error %.2g), octahedral 45 deg (error %.2g), tolerance 1e-4 deg; tangency %.3g "
             "(tol 1e-6)",
             tetra_angle * deg, worst_t * deg, worst_o * deg, tangency));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria = {quasiconvexity,          global_optimality, delaunay_equivalence,
                                                       sampling_equivalence,   octahedral_equivariance, linear_scaling,
                                                       lorentz_core,           mesh_driver,       packing_radii};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%s: %d of %zu criteria failed\n", failures ? "FAIL" : "PASS", failures, criteria.size());
  return failures ? 1 : 0;
}
