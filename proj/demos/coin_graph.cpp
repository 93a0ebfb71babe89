// Coin graph of a planar graph given as a rotation system: the square
// with one diagonal (two triangles) is augmented, packed on the sphere and
// recentered so the smallest coin is as large as possible.

#include <cstdio>
#include <numbers>

#include "mobius/mobius.hpp"

using namespace mobius;
using namespace mobius::pipeline;

int main() {
  const EmbeddedGraph g({{1, 2, 3}, {2, 0}, {3, 0, 1}, {0, 2}});
  const CoinGraph c = coin_graph(g);
  std::printf("added %zu face vertices, %ld sweeps, tangency residual %.2e\n", c.added_vertices, c.sweeps,
              c.tangency_residual);
  for (std::size_t v = 0; v < c.scene.spheres.size(); ++v) {
    const SceneSphere& s = c.scene.spheres[v];
    std::printf("vertex %zu: pole (% .4f, % .4f, % .4f)  angular radius %.4f deg\n", v, s.center[0], s.center[1],
                s.center[2], s.radius * 180 / std::numbers::pi);
  }
  std::printf("min radius after recentering: %.4f deg\n", c.min_radius * 180 / std::numbers::pi);
}
