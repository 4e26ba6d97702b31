#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

#include "sfst/base_manifold.hpp"
#include "sfst/error.hpp"
#include "sfst/io.hpp"
#include "sfst/sampling.hpp"
#include "sfst/scene.hpp"

using nlohmann::json;
using namespace sfst;

namespace {

struct Options {
  std::string scene;
  std::string out_dir = ".";
  std::optional<double> step;
  std::optional<int> resolution;
  std::optional<unsigned> seed;
  std::optional<double> tolerance;

  std::string point, tangent, velocity, source, at, p, q;
  double s_max = 1.0;
  double radius = 1.0;
  int directions = 64;
  int chords = 10000;
  bool backward = false;
  bool closed = false;
  bool base = false;
};

Scene load(const Options& o) {
  Scene s = load_scene_file(o.scene);
  if (o.step) s.step = *o.step;
  if (o.resolution) s.resolution = *o.resolution;
  if (o.seed) s.seed = *o.seed;
  if (o.tolerance) s.class_tol = *o.tolerance;
  return s;
}

Vec need_vector(const std::string& text, const char* flag) {
  if (text.empty()) throw Error(ErrorCode::InvalidArgument, std::string("missing ") + flag);
  return parse_vector(text);
}

Vec need_point(const Scene& s, const std::string& text, const char* flag) {
  const Vec x = need_vector(text, flag);
  if (x.size() != s.spacetime.dim()) throw Error(ErrorCode::InvalidArgument, std::string(flag) + " has the wrong dimension");
  return x;
}

Tangent need_tangent(const Scene& s, const std::string& text) {
  const Vec w = need_vector(text, "--tangent");
  if (w.size() != s.spacetime.dim() + 1) throw Error(ErrorCode::InvalidArgument, "--tangent needs tau followed by v");
  return {w[0], w.tail(w.size() - 1)};
}

Event need_event(const Scene& s, const std::string& text, const char* flag) {
  const Vec e = need_vector(text, flag);
  if (e.size() != s.spacetime.dim() + 1) throw Error(ErrorCode::InvalidArgument, std::string(flag) + " needs t followed by x");
  return {e[0], e.tail(e.size() - 1)};
}

std::ofstream open_out(const Options& o, const std::string& name) {
  std::filesystem::create_directories(o.out_dir);
  const auto path = std::filesystem::path(o.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  return out;
}

void emit(const Options& o, const std::string& name, json j) {
  json doc{{"version", 1}};
  doc.update(j);
  const std::string text = doc.dump(2);
  std::cout << text << '\n';
  open_out(o, name) << text << '\n';
}

int cmd_classify(const Options& o) {
  const Scene s = load(o);
  const Vec x = need_point(s, o.point.empty() ? std::string() : o.point, "--point");
  const Tangent w = need_tangent(s, o.tangent);
  emit(o, "classify.json", to_json(classify(s.spacetime, x, w, s.class_tol)));
  return 0;
}

int cmd_geodesic(const Options& o) {
  const Scene s = load(o);
  const Vec x = need_point(s, o.point, "--point");
  Trajectory traj;
  if (o.base) {
    const Vec v = need_point(s, o.velocity, "--velocity");
    traj = integrate_base_geodesic(s.spacetime.base().optical(), x, v, o.s_max, s.step);
  } else {
    traj = integrate_spacetime_geodesic(s.spacetime, {0.0, x}, need_tangent(s, o.tangent), o.s_max, s.step);
  }
  auto csv = open_out(o, "geodesic.csv");
  write_trajectory_csv(csv, traj);
  const char* stop = traj.stop == StopReason::Completed ? "completed"
                     : traj.stop == StopReason::ChartExit ? "chart_exit" : "mask_entry";
  emit(o, "geodesic.json",
       {{"samples", traj.samples.size()},
        {"stop", stop},
        {"lagrangian_drift", traj.max_lagrangian_drift()},
        {"k_drift", traj.max_k_drift()},
        {"max_residual", traj.max_residual()}});
  return 0;
}

int cmd_lightcone(const Options& o) {
  const Scene s = load(o);
  const Vec x = o.point.empty() ? s.spacetime.base().chart().center() : need_point(s, o.point, "--point");
  auto csv = open_out(o, "lightcone.csv");
  csv << "angle_index";
  for (int i = 1; i <= s.spacetime.dim(); ++i) csv << ",v" << i;
  csv << ",tau,critical_region\n";
  int idx = 0;
  for (const Vec& v : unit_directions(s.spacetime.dim(), o.directions)) {
    try {
      const auto cone = cone_boundary(s.spacetime, x, {v});
      csv << idx;
      for (Eigen::Index i = 0; i < v.size(); ++i) csv << ',' << format_double(v[i]);
      csv << ',' << format_double(cone[0].tau) << ',' << (cone[0].critical_region ? 1 : 0) << '\n';
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoFutureRoot) throw;
    }
    ++idx;
  }
  emit(o, "lightcone.json", {{"convexity", to_json(cone_convexity_check(s.spacetime, x, o.chords, s.seed))}});
  return 0;
}

int cmd_dist(const Options& o) {
  const Scene s = load(o);
  const Vec src = need_point(s, o.source, "--source");
  auto grid = optical_grid(s.spacetime, s.resolution, s.stencil_radius);
  const DistanceField d = distance_field(grid, src, o.backward ? Direction::Backward : Direction::Forward);
  auto csv = open_out(o, "dist.csv");
  write_distance_csv(csv, d);
  json j{{"direction", o.backward ? "backward" : "forward"},
         {"source_node", vec_json(grid->point(d.source()))},
         {"stencil_error_bound", grid->stencil_error_bound(src)}};
  if (!o.at.empty()) {
    const Vec at = need_point(s, o.at, "--at");
    j["at"] = vec_json(grid->point(grid->nearest_node(at)));
    j["value"] = d.at(at);
  }
  emit(o, "dist.json", j);
  return 0;
}

int cmd_ball(const Options& o) {
  const Scene s = load(o);
  const Vec center = need_point(s, o.source.empty() ? o.point : o.source, "--source");
  auto grid = optical_grid(s.spacetime, s.resolution, s.stencil_radius);
  const auto dir = o.backward ? Direction::Backward : Direction::Forward;
  const auto nodes = ball(grid, center, o.radius, dir, o.closed);
  const DistanceField d = distance_field(grid, center, dir);
  auto csv = open_out(o, "ball.csv");
  csv << "x1,x2,value\n";
  for (int k : nodes) {
    const Vec p = grid->point(k);
    csv << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(d.at_node(k)) << '\n';
  }
  emit(o, "ball.json", {{"nodes", nodes.size()}, {"radius", o.radius}, {"closed", o.closed},
                        {"direction", o.backward ? "backward" : "forward"}});
  return 0;
}

int cmd_chrono(const Options& o) {
  const Scene s = load(o);
  const Event p = need_event(s, o.p, "--p"), q = need_event(s, o.q, "--q");
  auto grid = optical_grid(s.spacetime, s.resolution, s.stencil_radius);
  emit(o, "chrono.json", to_json(chrono_related(grid, p, q)));
  return 0;
}

json guarded(const std::function<json()>& f) {
  try {
    return f();
  } catch (const Error& e) {
    return {{"error", e.what()}};
  }
}

int cmd_ladder(const Options& o) {
  const Scene s = load(o);
  const auto& st = s.spacetime;
  const Chart& chart = st.base().chart();
  auto grid = std::shared_ptr<const Grid>();
  json report;
  report["simplicity"] = guarded([&] {
    if (!grid) grid = optical_grid(st, s.resolution, s.stencil_radius);
    return to_json(causal_simplicity_probe(st, grid, s.ladder.pairs, s.seed));
  });
  report["hyperbolicity"] = guarded([&] {
    if (!grid) grid = optical_grid(st, s.resolution, s.stencil_radius);
    const Vec x = s.ladder.x.value_or(chart.center());
    const Vec y = s.ladder.y.value_or(chart.center());
    return to_json(global_hyperbolicity_probe(grid, x, y, s.ladder.r, s.ladder.s));
  });
  report["completeness"] = guarded([&] {
    const double budget = s.ladder.budget > 0.0 ? s.ladder.budget : 2.0 * chart.diameter();
    return to_json(completeness_probe(st.base().optical(), s.ladder.model, s.ladder.rays, budget, 2e-3));
  });
  if (s.cauchy_f) {
    report["cauchy_graph"] = guarded([&] {
      const double alpha = s.cauchy_alpha.value_or(
          reversibility_constant(st.base().optical().norm_at(chart.center()), 720));
      json j = to_json(cauchy_graph_check(st, *s.cauchy_f, alpha));
      j["alpha"] = alpha;
      return j;
    });
  }
  emit(o, "ladder.json", report);
  return 0;
}

int cmd_invariants(const Options& o) {
  const Scene s = load(o);
  const auto& st = s.spacetime;
  const FinslerField& f = st.base();
  const Chart& chart = f.chart();
  std::mt19937_64 rng(s.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0), wide(-2.0, 2.0);
  auto random_point = [&] {
    for (;;) {
      Vec x(st.dim());
      for (int i = 0; i < st.dim(); ++i) x[i] = chart.lo[i] + unit(rng) * (chart.hi[i] - chart.lo[i]);
      if (!f.mask().contains(x)) return x;
    }
  };
  auto random_vec = [&] {
    Vec v(st.dim());
    do {
      for (int i = 0; i < st.dim(); ++i) v[i] = wide(rng);
    } while (v.norm() < 1e-3);
    return v;
  };
  json checks = json::array();
  auto add = [&](const std::string& name, bool pass, double value) {
    checks.push_back({{"name", name}, {"pass", pass}, {"value", value}});
  };
  if (f.is_finsler_function()) {
    double euler = 0.0, contraction = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec x = random_point(), v = random_vec();
      const double f2 = f.norm_sq(x, v);
      euler = std::max(euler, std::abs(f.momentum(x, v).dot(v) - 2.0 * f2) / (2.0 * f2));
      contraction = std::max(contraction, std::abs(v.dot(f.tensor(x, v) * v) - f2) / f2);
    }
    add("euler_identity", euler < 1e-6, euler);
    add("tensor_contraction", contraction < 1e-6, contraction);
    double lt = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec x = random_point();
      const Tangent w{wide(rng), random_vec()};
      Vec full(st.dim() + 1);
      full << w.tau, w.v;
      const double l = eval_L(st, x, w);
      lt = std::max(lt, std::abs(full.dot(spacetime_tensor(st, x, w) * full) - l) / std::max(1.0, std::abs(l)));
    }
    add("spacetime_tensor_contraction", lt < 1e-8, lt);
  }
  int inconsistent = 0;
  for (int i = 0; i < 1000; ++i) {
    const Vec x = random_point();
    const Tangent w{wide(rng), random_vec()};
    const CausalClass c = classify(st, x, w, s.class_tol);
    if (c.kind == CausalKind::Timelike && !(c.lagrangian < 0.0)) ++inconsistent;
    if (c.kind == CausalKind::Spacelike && !(c.lagrangian > 0.0)) ++inconsistent;
  }
  add("classification_consistency", inconsistent == 0, inconsistent);
  if (st.mode() == SpacetimeMode::Static && f.is_finsler_function()) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Vec x = random_point(), v1 = random_vec(), v2 = random_vec();
      const double t1 = f.norm(x, v1) / std::sqrt(f.lambda(x)) * (1.0 + unit(rng));
      const double t2 = f.norm(x, v2) / std::sqrt(f.lambda(x)) * (1.0 + unit(rng));
      worst = std::min(worst, reverse_cs_gap(st, x, {t1, v1}, {t2, v2}, s.class_tol));
    }
    add("reverse_cauchy_schwarz", worst >= -1e-9, worst);
  }
  {
    const auto conv = cone_convexity_check(st, chart.center(), 1000, s.seed);
    add("cone_convexity_at_center", conv.convex, conv.worst_violation);
  }
  if (st.dim() == 2 && st.mode() == SpacetimeMode::Static) {
    auto grid = optical_grid(st, std::min(s.resolution, 60), s.stencil_radius);
    Vec src = chart.center();
    if (f.mask().contains(src)) src = chart.lo + 0.25 * (chart.hi - chart.lo);
    const DistanceField d = distance_field(grid, src, Direction::Forward);
    double worst = 0.0;
    for (int k = 0; k < grid->node_count(); ++k)
      for (const Edge& e : grid->out_edges(k))
        if (std::isfinite(d.at_node(k))) worst = std::max(worst, d.at_node(e.to) - d.at_node(k) - e.weight);
    add("distance_edge_triangle", worst <= 1e-12, worst);
  }
  bool all = true;
  for (const auto& c : checks) all = all && c["pass"].get<bool>();
  emit(o, "invariants.json", {{"checks", checks}, {"all_pass", all}});
  return 0;
}

int cmd_conic(const Options& o) {
  const Scene s = load(o);
  const Vec x = o.point.empty() ? s.spacetime.base().chart().center() : need_point(s, o.point, "--point");
  auto csv = open_out(o, "conic.csv");
  csv << "angle_index";
  for (int i = 1; i <= s.spacetime.dim(); ++i) csv << ",v" << i;
  csv << ",f_o,f_o_l,radicand,critical_region\n";
  int idx = 0, defined = 0;
  for (const Vec& v : unit_directions(s.spacetime.dim(), o.directions)) {
    const ConicMetrics cm = conic_metrics(s.spacetime, x, v);
    csv << idx++;
    for (Eigen::Index i = 0; i < v.size(); ++i) csv << ',' << format_double(v[i]);
    csv << ',' << (cm.f_o ? format_double(*cm.f_o) : "") << ',' << (cm.f_o_l ? format_double(*cm.f_o_l) : "")
        << ',' << format_double(cm.radicand) << ',' << (cm.critical_region ? 1 : 0) << '\n';
    if (cm.f_o) ++defined;
  }
  json j{{"directions", o.directions}, {"f_o_defined", defined}, {"lambda", s.spacetime.lambda(x)}};
  if (s.spacetime.mode() == SpacetimeMode::Sstk) j["omega_norm"] = omega_norm(s.spacetime, x);
  emit(o, "conic.json", j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Standard static Finsler spacetimes: classification, geodesics, cones, distances, causal ladder"};
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--scene", o.scene, "scene file")->required();
    sub->add_option("--out-dir", o.out_dir, "directory for CSV/JSON outputs");
    sub->add_option("--step", o.step, "integration step");
    sub->add_option("--resolution", o.resolution, "grid cells per axis");
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--tolerance", o.tolerance, "classification tolerance");
  };
  std::map<std::string, std::function<int(const Options&)>> handlers{
      {"classify", cmd_classify}, {"geodesic", cmd_geodesic}, {"lightcone", cmd_lightcone},
      {"dist", cmd_dist},         {"ball", cmd_ball},         {"chrono", cmd_chrono},
      {"ladder", cmd_ladder},     {"invariants", cmd_invariants}, {"conic", cmd_conic}};

  auto* classify_cmd = app.add_subcommand("classify", "causal class of a tangent vector");
  common(classify_cmd);
  classify_cmd->add_option("--point", o.point, "base point x1,...,xn")->required();
  classify_cmd->add_option("--tangent", o.tangent, "tau,v1,...,vn")->required();

  auto* geo = app.add_subcommand("geodesic", "integrate a geodesic to CSV");
  common(geo);
  geo->add_option("--point", o.point, "start x")->required();
  geo->add_option("--tangent", o.tangent, "initial tau,v (spacetime geodesic)");
  geo->add_option("--velocity", o.velocity, "initial v (optical base geodesic, with --base)");
  geo->add_flag("--base", o.base, "integrate the optical base geodesic");
  geo->add_option("--s-max", o.s_max, "parameter span");

  auto* cone = app.add_subcommand("lightcone", "light-cone boundary samples and convexity check");
  common(cone);
  cone->add_option("--point", o.point, "base point (default chart center)");
  cone->add_option("--directions", o.directions, "boundary samples");
  cone->add_option("--chords", o.chords, "convexity chords");

  auto* dist = app.add_subcommand("dist", "grid distance field to CSV");
  common(dist);
  dist->add_option("--source", o.source, "source point")->required();
  dist->add_option("--at", o.at, "report the value at this point");
  dist->add_flag("--backward", o.backward, "distance to the source instead of from it");

  auto* ball_cmd = app.add_subcommand("ball", "forward/backward ball nodes to CSV");
  common(ball_cmd);
  ball_cmd->add_option("--source", o.source, "center")->required();
  ball_cmd->add_option("--radius", o.radius, "radius");
  ball_cmd->add_flag("--backward", o.backward, "backward ball");
  ball_cmd->add_flag("--closed", o.closed, "closed ball (radius plus half a cell)");

  auto* chrono = app.add_subcommand("chrono", "chronological/causal relation of two events");
  common(chrono);
  chrono->add_option("--p", o.p, "event t,x1,...,xn")->required();
  chrono->add_option("--q", o.q, "event t,x1,...,xn")->required();

  auto* ladder = app.add_subcommand("ladder", "causal-ladder probes");
  common(ladder);
  auto* inv = app.add_subcommand("invariants", "property suite on the scene");
  common(inv);
  auto* conic = app.add_subcommand("conic", "SSTK conic metrics sweep");
  common(conic);
  conic->add_option("--point", o.point, "base point (default chart center)");
  conic->add_option("--directions", o.directions, "direction samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  try {
    return handlers.at(name)(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_numerical_fault(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
