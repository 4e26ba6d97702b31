#include "sfst/io.hpp"

#include <cstdio>
#include <ostream>

namespace sfst {

using nlohmann::json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json tangent_json(const Tangent& w) { return {{"tau", w.tau}, {"v", vec_json(w.v)}}; }

json to_json(const CausalClass& c) {
  return {{"kind", std::string(to_string(c.kind))},
          {"orientation", std::string(to_string(c.orientation))},
          {"lagrangian", c.lagrangian}};
}

json to_json(const ConvexityReport& r) {
  json j{{"convex", r.convex}, {"chords_tested", r.chords_tested}, {"worst_violation", r.worst_violation}};
  if (r.witness) {
    j["witness"] = {{"a", tangent_json(r.witness->a)},
                    {"b", tangent_json(r.witness->b)},
                    {"midpoint", tangent_json(r.witness->midpoint)},
                    {"midpoint_boundary_tau", r.witness->midpoint_boundary}};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

json to_json(const ChronoResult& r) {
  return {{"chronological", r.chronological},
          {"causal_assuming_simplicity", r.causal_assuming_simplicity},
          {"margin", r.margin},
          {"distance", r.distance},
          {"grid_tol", r.grid_tol}};
}

json to_json(const SimplicityReport& r) {
  json failures = json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"x", vec_json(f.x)},
                        {"y", vec_json(f.y)},
                        {"shooting_length", f.shooting_length ? json(*f.shooting_length) : json(nullptr)},
                        {"grid_distance", f.grid_distance},
                        {"gap", f.shooting_length ? json(f.gap) : json(nullptr)},
                        {"tolerance", f.tolerance}});
  }
  return {{"all_minimizers_found", r.all_minimizers_found},
          {"pairs", r.pairs},
          {"worst_relative_gap", r.worst_relative_gap},
          {"failures", failures}};
}

json to_json(const HyperbolicityReport& r) {
  return {{"compact_proxy", r.compact_proxy},
          {"boundary_contact", r.boundary_contact},
          {"intersection_nodes", r.intersection_nodes},
          {"contact_point", r.contact_point ? vec_json(*r.contact_point) : json(nullptr)}};
}

json to_json(const CompletenessReport& r) {
  json rays = json::array();
  for (const auto& ray : r.escaping_rays) {
    rays.push_back({{"origin", vec_json(ray.origin)},
                    {"direction", vec_json(ray.direction)},
                    {"forward", ray.forward},
                    {"length", ray.length}});
  }
  return {{"forward_complete_proxy", r.forward_complete_proxy},
          {"backward_complete_proxy", r.backward_complete_proxy},
          {"inconclusive_rays", r.inconclusive_rays},
          {"escaping_rays", rays}};
}

json to_json(const CauchyGraphReport& r) {
  json v = json::array();
  for (const auto& w : r.violations) {
    v.push_back({{"x", vec_json(w.x)}, {"v", vec_json(w.v)}, {"condition", w.condition}, {"value", w.value}});
  }
  return {{"future_spacelike", r.future_spacelike}, {"spacelike", r.spacelike}, {"violations", v}};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const Eigen::Index n = traj.samples.empty() ? 0 : traj.samples.front().event.x.size();
  out << "s,t";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x" << i;
  out << ",tau";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",v" << i;
  out << ",L,k,residual\n";
  for (const auto& s : traj.samples) {
    out << format_double(s.s) << ',' << format_double(s.event.t);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(s.event.x[i]);
    out << ',' << format_double(s.tangent.tau);
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(s.tangent.v[i]);
    out << ',' << format_double(s.lagrangian) << ',' << format_double(s.k) << ',' << format_double(s.residual) << '\n';
  }
}

void write_distance_csv(std::ostream& out, const DistanceField& field) {
  out << "x1,x2,value\n";
  const Grid& g = field.grid();
  for (int k = 0; k < g.node_count(); ++k) {
    const Vec p = g.point(k);
    out << format_double(p[0]) << ',' << format_double(p[1]) << ',' << format_double(field.at_node(k)) << '\n';
  }
}

}  // namespace sfst
