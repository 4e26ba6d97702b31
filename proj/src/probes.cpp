#include <algorithm>
#include <random>

#include "sfst/causality.hpp"
#include "sfst/error.hpp"
#include "sfst/sampling.hpp"

namespace sfst {

SimplicityReport causal_simplicity_probe(const StaticSpacetime& st, std::shared_ptr<const Grid> grid,
                                         int pair_samples, unsigned seed, double step) {
  if (pair_samples < 1) throw Error(ErrorCode::InvalidArgument, "pair_samples must be >= 1");
  std::mt19937_64 rng(seed);
  const int lo = grid->cells() / 10, hi = grid->cells() - grid->cells() / 10;
  std::uniform_int_distribution<int> pick(lo, hi);
  auto random_node = [&] {
    for (;;) {
      const int k = grid->index(pick(rng), pick(rng));
      if (!grid->masked(k)) return k;
    }
  };
  const FinslerField optical = st.base().optical();
  ChronoOracle oracle(grid);
  SimplicityReport report;
  while (report.pairs < pair_samples) {
    const int a = random_node(), b = random_node();
    if (a == b) continue;
    ++report.pairs;
    const Vec x = grid->point(a), y = grid->point(b);
    const double d = oracle.forward_from(x).at_node(b);
    ShootingProblem problem{x, y, 1e-6 * std::max(1.0, (y - x).norm()), 60, step};
    const auto shot = shoot_to_target(optical, problem);
    const double tol = std::max(0.02 * d, 4.0 * grid->half_cell_length(x));
    const double gap = shot ? d - shot->length : std::numeric_limits<double>::infinity();
    if (shot) report.worst_relative_gap = std::max(report.worst_relative_gap, std::abs(gap) / d);
    if (!shot || std::abs(gap) > tol) {
      report.all_minimizers_found = false;
      report.failures.push_back({x, y, shot ? std::optional<double>(shot->length) : std::nullopt, d, gap, tol});
    }
  }
  return report;
}

HyperbolicityReport global_hyperbolicity_probe(std::shared_ptr<const Grid> grid, const Vec& x, const Vec& y,
                                               double r, double s) {
  if (!(r > 0.0) || !(s > 0.0)) throw Error(ErrorCode::InvalidArgument, "radii must be positive");
  const DistanceField fwd = distance_field(grid, x, Direction::Forward);
  const DistanceField bwd = distance_field(grid, y, Direction::Backward);
  const double rr = r + grid->half_cell_length(x), ss = s + grid->half_cell_length(y);
  const Chart& chart = grid->field().chart();
  const int m = grid->nodes_per_axis();
  HyperbolicityReport out;
  for (int k = 0; k < grid->node_count(); ++k) {
    if (!(fwd.at_node(k) <= rr && bwd.at_node(k) <= ss)) continue;
    ++out.intersection_nodes;
    const Vec p = grid->point(k);
    bool contact = chart.boundary_distance(p) <= chart.margin;
    const auto [i, j] = grid->coords(k);
    for (int dj = -1; dj <= 1 && !contact; ++dj)
      for (int di = -1; di <= 1 && !contact; ++di) {
        const int ni = i + di, nj = j + dj;
        if (ni >= 0 && nj >= 0 && ni < m && nj < m && grid->masked(grid->index(ni, nj))) contact = true;
      }
    if (contact && !out.boundary_contact) {
      out.boundary_contact = true;
      out.contact_point = p;
    }
  }
  out.compact_proxy = !out.boundary_contact;
  return out;
}

CompletenessReport completeness_probe(const FinslerField& field, ChartModel model, int ray_samples,
                                      double length_budget, double step) {
  const Chart& chart = field.chart();
  if (!(length_budget > chart.diameter())) {
    throw Error(ErrorCode::InvalidArgument, "length_budget must exceed the chart diameter");
  }
  if (model == ChartModel::WholePlane && !field.mask().empty()) {
    throw Error(ErrorCode::InvalidArgument, "whole-plane model cannot carry a mask");
  }
  if (model == ChartModel::Masked && field.mask().empty()) {
    throw Error(ErrorCode::InvalidArgument, "masked model needs a mask");
  }
  const int n = field.dim();
  std::vector<Vec> origins;
  const int total = 1 << n;
  for (int code = 0; code < total; ++code) {
    Vec o(n);
    for (int i = 0; i < n; ++i) {
      const double frac = (code >> i) & 1 ? 0.75 : 0.25;
      o[i] = chart.lo[i] + frac * (chart.hi[i] - chart.lo[i]);
    }
    if (!field.mask().contains(o)) origins.push_back(o);
  }
  const std::vector<Vec> dirs = unit_directions(n, ray_samples);
  CompletenessReport out;
  for (bool forward : {true, false}) {
    const FinslerField f = forward ? field : field.reversed();
    for (const Vec& o : origins)
      for (const Vec& d : dirs) {
        RayRecord rec{o, d, forward, 0.0, RayOutcome::BudgetExhausted};
        try {
          const Trajectory t = integrate_base_geodesic(f, o, d / f.norm(o, d), length_budget, step);
          rec.length = t.samples.back().s;
          if (t.stop == StopReason::ChartExit) rec.outcome = RayOutcome::ChartExit;
          if (t.stop == StopReason::MaskEntry) rec.outcome = RayOutcome::EnteredMask;
        } catch (const Error& e) {
          if (!is_numerical_fault(e.code())) throw;
          ++out.inconclusive_rays;
          continue;
        }
        if (rec.outcome == RayOutcome::ChartExit) {
          ++out.inconclusive_rays;
        } else if (rec.outcome == RayOutcome::EnteredMask && rec.length < length_budget) {
          (forward ? out.forward_complete_proxy : out.backward_complete_proxy) = false;
          out.escaping_rays.push_back(rec);
        }
      }
  }
  return out;
}

CauchyGraphReport cauchy_graph_check(const StaticSpacetime& st, const ScalarField& f, double alpha,
                                     int samples_per_axis, int angles) {
  if (!(alpha >= 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must be >= 1");
  if (st.mode() != SpacetimeMode::Static) throw Error(ErrorCode::InvalidArgument, "cauchy_graph_check needs static mode");
  const FinslerField& base = st.base();
  const FinslerField optical = base.optical();
  CauchyGraphReport out;
  const std::vector<Vec> dirs = unit_directions(base.dim(), angles);
  for (const Vec& x : chart_samples(base.chart(), samples_per_axis)) {
    if (base.mask().contains(x)) continue;
    const Vec df = f.gradient(x);
    const double lam = base.lambda(x);
    for (const Vec& v : dirs) {
      const double dfv = df.dot(v);
      const double future = optical.norm(x, v) - dfv;
      if (!(future > 0.0)) {
        out.future_spacelike = false;
        out.violations.push_back({x, v, "future_spacelike", future});
      }
      const double spacelike = base.norm_sq(x, v) - lam * dfv * dfv / (alpha * alpha);
      if (!(spacelike > 0.0)) {
        out.spacelike = false;
        out.violations.push_back({x, v, "spacelike", spacelike});
      }
    }
  }
  out.spacelike = out.spacelike && out.future_spacelike;
  std::stable_sort(out.violations.begin(), out.violations.end(),
                   [](const GraphViolation& a, const GraphViolation& b) { return a.value < b.value; });
  if (out.violations.size() > 32) out.violations.resize(32);
  return out;
}

}  // namespace sfst
