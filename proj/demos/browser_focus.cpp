// Where should a hyperbolic browser put its initial focus? Compare the
// Poincare focus (largest smallest display region) with the two Klein
// variants on a lopsided tree of display regions.

#include <cstdio>

#include "mobius/mobius.hpp"

using namespace mobius;
using namespace mobius::pipeline;

int main() {
  Scene s;
  const double regions[][3] = {{0.0, 0.0, 0.25},  {0.55, 0.1, 0.15},  {0.7, -0.3, 0.08}, {0.82, 0.25, 0.05},
                               {0.6, 0.55, 0.06}, {-0.6, 0.2, 0.12}, {0.88, -0.05, 0.03}};
  for (const auto& r : regions) {
    Vec c(2);
    c << r[0], r[1];
    s.spheres.push_back({c, r[2]});
    s.points.push_back(c);
  }
  const std::size_t parent[] = {0, 0, 1, 1, 1, 0, 1};
  for (std::size_t i = 1; i < s.points.size(); ++i) s.edges.emplace_back(parent[i], i);

  std::printf("%-15s %10s %10s %12s\n", "objective", "focus x", "focus y", "min size");
  std::printf("%-15s %10.5f %10.5f %12.6f\n", "identity", 0.0, 0.0, -evaluate(s, KleinPoint(Vec::Zero(2))));
  for (Objective o : {Objective::Radius, Objective::KleinDiameter, Objective::KleinWidth, Objective::Edge}) {
    s.objective = o;
    const Result r = run(s);
    const Vec p = r.poincare().coords;
    std::printf("%-15s %10.5f %10.5f %12.6f\n", to_string(o), p[0], p[1], r.min_size());
  }
  s.objective = Objective::Radius;
  std::fputs(render_svg(run(s)).c_str(), stderr);
}
