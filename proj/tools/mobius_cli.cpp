#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "mobius/mobius.hpp"

using namespace mobius;
using namespace mobius::pipeline;

namespace {

struct Common {
  std::string input;
  std::string output = "-";
  std::string backend = "local";
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::optional<long> max_iters;

  RunConfig run_config() const {
    RunConfig c;
    c.solver.backend = backend == "glp" ? Backend::Glp : Backend::Local;
    if (tol) c.solver.tol_x = *tol;
    c.solver.rng_seed = seed;
    if (max_iters) c.solver.max_iters = *max_iters;
    return c;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--input", c.input, "input JSON file ('-' for stdin)")->required();
  sub->add_option("--output", c.output, "output file ('-' for stdout)");
  sub->add_option("--backend", c.backend, "solver backend")->check(CLI::IsMember({"local", "glp"}));
  sub->add_option("--tol", c.tol, "viewpoint tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--max-iters", c.max_iters, "solver iteration limit")->check(CLI::PositiveNumber);
}

json read_json(const std::string& path) {
  std::stringstream text;
  if (path == "-") {
    text << std::cin.rdbuf();
  } else {
    std::ifstream f(path);
    if (!f) throw Error(ErrorKind::Validation, "cannot open " + path);
    text << f.rdbuf();
  }
  try {
    return json::parse(text.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Validation, std::string("malformed JSON: ") + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Validation, "cannot write " + path);
  f << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

Result optimize(const Common& c, std::optional<Objective> objective) {
  json j = read_json(c.input);
  if (objective) j["objective"] = to_string(*objective);
  return run(scene_from_json(j), c.run_config());
}

std::string render_document(const json& j) {
  if (j.contains("quads")) return render_svg(mesh_from_json(j));
  if (j.contains("kind") && j["kind"] == kBundleKind) {
    const KleinPoint x(vec_from_json(j["optimum"]["klein"], "optimum.klein"));
    return render_svg(transform_scene(bundle_scene(j), x));
  }
  if (j.contains("transformed")) return render_svg(scene_from_json(j["transformed"]));
  return render_svg(scene_from_json(j));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal Möbius transformations: viewpoints maximizing the minimum size of transformed objects"};
  app.require_subcommand(1);

  Common common;

  auto* radii = app.add_subcommand("optimize-radii", "maximize the minimum (weighted) sphere or cap radius");
  auto* edges = app.add_subcommand("optimize-edges", "maximize the minimum length of the scene's edges");
  auto* points = app.add_subcommand("optimize-points", "maximize the minimum separation over all point pairs");
  auto* focus = app.add_subcommand("focus", "hyperbolic browser focus for display regions (ball, d = 2)");
  std::string measure;
  focus->add_option("--measure", measure, "radius | klein-diameter | klein-width (default: the scene's objective)")
      ->check(CLI::IsMember({"radius", "klein-diameter", "klein-width", "edge", "separation"}));
  auto* mesh_cmd = app.add_subcommand("mesh", "structured polar mesh sized by marked points");
  MeshConfig mesh_config;
  mesh_cmd->add_option("--max-elements", mesh_config.max_elements, "refuse larger meshes");
  auto* flat = app.add_subcommand("flatmap", "weighted radius optimization of a packed triangulated surface");
  auto* pack_cmd = app.add_subcommand("pack", "coin graph of a planar graph (rotation-system JSON)");
  PackingConfig pack_config;
  bool no_normalize = false;
  pack_cmd->add_flag("--no-normalize", no_normalize, "skip the min-radius recentering");
  pack_cmd->add_option("--outer-face", pack_config.outer_face, "face index used as the outer triangle");
  pack_cmd->add_option("--angle-tol", pack_config.angle_tol, "angle-sum tolerance")->check(CLI::PositiveNumber);
  pack_cmd->add_option("--max-sweeps", pack_config.max_sweeps, "sweep limit")->check(CLI::PositiveNumber);
  auto* render = app.add_subcommand("render", "SVG of a scene, result, coin graph, bundle, or mesh");
  auto* bundle = app.add_subcommand("export-viewer", "viewer bundle of a scene and its optimum");
  std::string result_path;
  bundle->add_option("--result", result_path, "existing result JSON (default: solve the scene)");

  for (CLI::App* sub : {radii, edges, points, focus, mesh_cmd, flat, pack_cmd, render, bundle}) add_common(sub, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (radii->parsed()) {
      write_json(common.output, to_json(optimize(common, Objective::Radius)));
    } else if (edges->parsed()) {
      write_json(common.output, to_json(optimize(common, Objective::Edge)));
    } else if (points->parsed()) {
      write_json(common.output, to_json(optimize(common, Objective::Separation)));
    } else if (focus->parsed()) {
      json j = read_json(common.input);
      if (!measure.empty()) j["objective"] = measure;
      const Scene s = scene_from_json(j);
      if (s.setting != Setting::Ball || s.dimension != 2) {
        throw Error(ErrorKind::UnsupportedDimension, "focus needs a ball-setting scene in dimension 2");
      }
      write_json(common.output, to_json(run(s, common.run_config())));
    } else if (mesh_cmd->parsed()) {
      json j = read_json(common.input);
      j["objective"] = "size";
      write_json(common.output, to_json(mesh(scene_from_json(j), common.run_config(), mesh_config)));
    } else if (flat->parsed()) {
      write_json(common.output, to_json(flatmap(flatmap_input_from_json(read_json(common.input)), common.run_config())));
    } else if (pack_cmd->parsed()) {
      pack_config.normalize = !no_normalize;
      pack_config.solver = common.run_config().solver;
      const EmbeddedGraph g = graph_from_json(read_json(common.input));
      write_json(common.output, to_json(coin_graph(g, pack_config, common.run_config())));
    } else if (render->parsed()) {
      write_text(common.output, render_document(read_json(common.input)));
    } else if (bundle->parsed()) {
      const json j = read_json(common.input);
      const Scene s = scene_from_json(j);
      Result r;
      if (result_path.empty()) {
        r = run(s, common.run_config());
      } else {
        // Rebuild the result from its document: viewpoint plus a fresh
        // evaluation of the per-object sizes.
        const json rj = read_json(result_path);
        if (!rj.contains("viewpoint")) throw Error(ErrorKind::Validation, "result has no viewpoint");
        r.viewpoint = KleinPoint(vec_from_json(rj["viewpoint"]["klein"], "viewpoint.klein"));
        r.objective = s.objective;
        r.setting = s.setting;
        r.t_star = evaluate(s, r.viewpoint);
        r.transformed = transform_scene(s, r.viewpoint);
        const std::vector<SizeTerm> terms = objective_terms(s);
        const Viewframe f(r.viewpoint.coords);
        for (const SizeTerm& t : terms) {
          const double v = t.value(f);
          r.objects.push_back({to_string(t.family), t.source, -v, v >= r.t_star - pipeline::detail::active_tol(r.t_star)});
        }
      }
      write_json(common.output, export_viewer_bundle(s, r));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
