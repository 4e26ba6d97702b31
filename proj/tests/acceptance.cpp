// End-to-end acceptance checks. Each criterion prints one line and is timed;
// the process exits nonzero if any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sfst/base_manifold.hpp"
#include "sfst/causality.hpp"
#include "sfst/error.hpp"
#include "sfst/geodesics.hpp"
#include "sfst/minkowski.hpp"
#include "sfst/spacetime.hpp"

using namespace sfst;

namespace {

constexpr double kPi = std::numbers::pi;

Vec v2(double a, double b) { return Vec{{a, b}}; }
Chart square(double r) { return Chart::make(v2(-r, -r), v2(r, r), 0.05); }
Mat eye2() { return Mat::Identity(2, 2); }

ScalarField one_plus_x1sq() { return ScalarField::polynomial({{1.0, {0, 0}}, {1.0, {2, 0}}}); }

FinslerField field(const NormSpec& n, double r = 2, ScalarField lambda = ScalarField::constant(1.0)) {
  return FinslerField(square(r), NormField::constant(n), std::move(lambda));
}
StaticSpacetime st_of(FinslerField f) { return StaticSpacetime::make_static(std::move(f)); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

struct Criterion {
  int number;
  const char* name;
  double time_limit;
  std::function<void(Outcome&)> body;
};

// Randers F^2 evaluated from its definition; the oracle tensor is half of its
// central second-difference Hessian.
double randers_f2(const Mat& a, const Vec& b, const Vec& v) {
  const double f = std::sqrt(v.dot(a * v)) + b.dot(v);
  return f * f;
}

Mat oracle_tensor(const Mat& a, const Vec& b, const Vec& v) {
  const double h = 1e-4 * v.norm();
  const int n = static_cast<int>(v.size());
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec pp = v, pm = v, mp = v, mm = v;
      pp[i] += h, pp[j] += h;
      pm[i] += h, pm[j] -= h;
      mp[i] -= h, mp[j] += h;
      mm[i] -= h, mm[j] -= h;
      g(i, j) = 0.5 * (randers_f2(a, b, pp) - randers_f2(a, b, pm) - randers_f2(a, b, mp) + randers_f2(a, b, mm)) /
                (4 * h * h);
    }
  return g;
}

struct RandomRanders {
  Mat a;
  Vec b;
};

RandomRanders random_randers(std::mt19937_64& rng, double max_b = 0.9) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, max_b);
  Mat m(2, 2);
  m << g(rng), g(rng), g(rng), g(rng);
  RandomRanders r{m * m.transpose() + 0.3 * eye2(), v2(g(rng), g(rng))};
  r.b *= u(rng) / std::sqrt(r.b.dot(r.a.ldlt().solve(r.b)));
  return r;
}

void fundamental_tensor_criterion(Outcome& out) {
  Mat a(2, 2);
  a << 2.0, 0.3, 0.3, 1.0;
  const NormSpec q = NormSpec::quadratic(a);
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> xs(-1.5, 1.5);
  bool exact = true;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Vec v = v2(g(rng), g(rng));
    exact = exact && fundamental_tensor(q, v).g == a;
    const RandomRanders r = random_randers(rng);
    const FinslerField f = field(NormSpec::randers(r.a, r.b));
    const Vec x = v2(xs(rng), xs(rng));
    worst = std::max(worst, (f.tensor(x, v) - oracle_tensor(r.a, r.b, v)).cwiseAbs().maxCoeff());
  }
  out.detail << "quadratic exact=" << exact << ", randers max entry error " << worst;
  out.require(exact, "quadratic tensor equals A");
  out.require(worst < 1e-6, "randers tensor vs finite differences");
}

void cartan_criterion(Outcome& out) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  double regular = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Vec v = v2(g(rng), g(rng));
    const RandomRanders r = random_randers(rng);
    regular = std::max(regular, cartan_symmetry_residual(NormSpec::randers(r.a, r.b), v));
    regular = std::max(regular, cartan_symmetry_residual(NormSpec::quadratic(r.a), v));
  }
  double figure = 0.0;
  for (int k = 0; k < 64; ++k) {
    const double t = 2 * kPi * k / 64;
    figure = std::max(figure, cartan_symmetry_residual(NormSpec::figure_one(), v2(std::cos(t), std::sin(t))));
  }
  out.detail << "quadratic/randers max residual " << regular << ", figure-one max residual " << figure;
  out.require(regular < 1e-4, "symmetric Cartan tensor for quadratic/randers");
  out.require(figure > 0.1, "figure-one discriminated");
}

void reversibility_criterion(Outcome& out) {
  for (double b : {0.2, 0.5}) {
    const NormSpec n = NormSpec::randers(eye2(), v2(b, 0));
    double dense = 1.0;
    for (int k = 0; k < 100000; ++k) {
      const double t = 2 * kPi * k / 100000;
      const Vec v = v2(std::cos(t), std::sin(t));
      dense = std::max(dense, (1 + b * v[0]) / (1 - b * v[0]));
    }
    const double alpha = reversibility_constant(n, 64);
    const double closed = (1 + b) / (1 - b);
    out.detail << "b=" << b << ": alpha " << alpha << " (closed form " << closed << ", dense grid " << dense << ") ";
    out.require(std::abs(alpha - closed) < 1e-3, "alpha vs closed form");
    out.require(std::abs(alpha - dense) < 1e-3, "alpha vs dense grid");
  }
}

double drift_for(const StaticSpacetime& st, const Tangent& w, double step, bool k_drift) {
  const Trajectory t = integrate_spacetime_geodesic(st, {0, v2(0, 0)}, w, 1.0, step);
  return k_drift ? t.max_k_drift() : t.max_lagrangian_drift();
}

void conservation_criterion(Outcome& out) {
  const auto st = st_of(field(NormSpec::quadratic(eye2()), 3, one_plus_x1sq()));
  const Trajectory t = integrate_spacetime_geodesic(st, {0, v2(0, 0)}, {1, v2(1, 0)}, 1.0, 1e-3);
  out.detail << "drift k " << t.max_k_drift() << ", L " << t.max_lagrangian_drift();
  out.require(t.max_k_drift() < 1e-6 && t.max_lagrangian_drift() < 1e-6, "drift < 1e-6");
  // Observed order from step halving, using only pairs whose finer drift is
  // above the double-precision floor of the monitored quantities.
  constexpr double kFloor = 1e-13;
  const std::vector<double> steps{2e-3, 1e-3, 5e-4};
  double min_order = 1e300;
  int pairs = 0;
  for (const Tangent& w : {Tangent{1, v2(1, 0)}, Tangent{2, v2(1, 0.5)}})
    for (bool k : {true, false}) {
      std::vector<double> d;
      for (double h : steps) d.push_back(drift_for(st, w, h, k));
      for (size_t i = 0; i + 1 < d.size(); ++i) {
        if (d[i + 1] < kFloor) continue;
        ++pairs;
        min_order = std::min(min_order, std::log2(d[i] / d[i + 1]));
      }
    }
  out.detail << ", observed order " << min_order << " over " << pairs << " step pairs";
  out.require(pairs > 0, "at least one step pair above roundoff");
  out.require(min_order >= 3.5, "order >= 3.5");
}

void static_line_criterion(Outcome& out) {
  const auto st = st_of(field(NormSpec::quadratic(eye2()), 3, one_plus_x1sq()));
  const Trajectory t = integrate_spacetime_geodesic(st, {0, v2(0, 0)}, {1, v2(0, 0)}, 1.0, 1e-3);
  bool vertical = true;
  for (const auto& s : t.samples) vertical = vertical && s.event.x == v2(0, 0);
  out.detail << "EL residual " << t.max_residual() << ", vertical=" << vertical;
  out.require(vertical, "curve stays at x0");
  out.require(t.max_residual() < 1e-10, "residual < 1e-10");
}

void fermat_criterion(Outcome& out) {
  const auto st = st_of(field(NormSpec::quadratic(eye2()), 3, one_plus_x1sq()));
  const FinslerField opt = st.base().optical();
  double worst_distance = 0.0, worst_residual = 0.0;
  for (const auto& [x0, v0] : {std::pair{v2(-0.5, 0.2), v2(1, 0.3)}, std::pair{v2(0.4, -0.3), v2(-0.2, 1)},
                               std::pair{v2(0.0, 0.0), v2(0.7, -0.7)}}) {
    const Trajectory light = integrate_spacetime_geodesic(st, {0, x0}, {opt.norm(x0, v0), v0}, 1.0, 1e-3);
    const auto pts = light.points();
    const Vec u0 = v0 / opt.norm(x0, v0);
    const Trajectory og = integrate_base_geodesic(opt, x0, u0, curve_length(opt, pts), 1e-3);
    worst_distance = std::max(worst_distance, hausdorff_distance(pts, og.points()));
    const Trajectory lifted = affine_reparametrize(st, fermat_lift(st, og, 0.0));
    worst_residual = std::max(worst_residual, lifted.max_residual());
  }
  out.detail << "projection vs optical sup-distance " << worst_distance << ", lifted EL residual " << worst_residual;
  out.require(worst_distance < 1e-4, "sup-distance < 1e-4");
  out.require(worst_residual < 1e-5, "lift residual < 1e-5");
}

void reverse_cs_criterion(Outcome& out) {
  const auto st = st_of(field(NormSpec::randers(eye2(), v2(0.3, -0.2)), 2, one_plus_x1sq()));
  const FinslerField opt = st.base().optical();
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0, 1), xs(-1.5, 1.5);
  auto future_causal = [&](const Vec& x) {
    const Vec v = v2(g(rng), g(rng));
    const double boundary = opt.norm(x, v);
    return Tangent{u(rng) < 0.3 ? boundary : boundary * (1 + 2 * u(rng)), v};
  };
  double min_gap = 1e300;
  int proportional = 0, near_zero_nonproportional = 0;
  for (int i = 0; i < 10000; ++i) {
    const Vec x = v2(xs(rng), xs(rng));
    const Tangent a = future_causal(x);
    const Tangent b = i % 10 == 0 ? Tangent{a.tau * 1.7, a.v * 1.7} : future_causal(x);
    const double gap = reverse_cs_gap(st, x, a, b);
    min_gap = std::min(min_gap, gap);
    Vec wa(3), wb(3);
    wa << a.tau, a.v;
    wb << b.tau, b.v;
    const double cos_angle = std::clamp(wa.dot(wb) / (wa.norm() * wb.norm()), -1.0, 1.0);
    const bool parallel = std::acos(cos_angle) < 1e-4;
    if (i % 10 == 0) ++proportional;
    if (gap < 1e-6 && !parallel) ++near_zero_nonproportional;
  }
  out.detail << "min gap " << min_gap << " over 10000 pairs (" << proportional
             << " proportional), near-zero gaps on non-proportional pairs: " << near_zero_nonproportional;
  out.require(min_gap >= -1e-9, "gap >= -1e-9");
  out.require(near_zero_nonproportional == 0, "equality only for proportional pairs");
}

void convexity_criterion(Outcome& out) {
  const std::vector<std::pair<const char*, StaticSpacetime>> scenes{
      {"flat", st_of(field(NormSpec::quadratic(eye2())))},
      {"randers", st_of(field(NormSpec::randers(eye2(), v2(0.5, 0))))},
      {"lambda", st_of(field(NormSpec::quadratic(eye2()), 3, one_plus_x1sq()))},
  };
  for (const auto& [name, st] : scenes) {
    const ConvexityReport r = cone_convexity_check(st, v2(0.5, -0.3), 10000);
    out.detail << name << " convex=" << r.convex << " ";
    out.require(r.convex && r.chords_tested == 10000, std::string(name) + " convex on 10^4 chords");
  }
  const auto fig = st_of(field(NormSpec::figure_one()));
  const ConvexityReport r = cone_convexity_check(fig, v2(0, 0), 10000);
  out.require(!r.convex && r.witness.has_value(), "figure-one nonconvex with witness");
  const double tau = std::sqrt(1.09) * std::exp(-0.18 / 1.09);
  const auto ca = classify(fig, v2(0, 0), {tau, v2(1, 0.3)});
  const auto cb = classify(fig, v2(0, 0), {tau, v2(1, -0.3)});
  const auto cm = classify(fig, v2(0, 0), {tau, v2(1, 0)});
  const double boundary = cone_boundary(fig, v2(0, 0), {v2(1, 0)})[0].tau;
  out.detail << "figure-one convex=" << r.convex << ", figure chord midpoint tau " << tau << " vs boundary " << boundary;
  out.require(ca.kind == CausalKind::Lightlike && cb.kind == CausalKind::Lightlike, "figure chord endpoints lightlike");
  out.require(cm.kind == CausalKind::Spacelike && std::abs(boundary - 1.0) < 1e-12, "figure chord midpoint spacelike");
}

void distance_criterion(Outcome& out) {
  struct Case {
    const char* name;
    FinslerField f;
    Vec target;
    double exact;
    Direction dir;
  };
  const std::vector<Case> cases{
      {"euclid", field(NormSpec::quadratic(eye2())), v2(1, 0), 1.0, Direction::Forward},
      {"euclid-diag", field(NormSpec::quadratic(eye2())), v2(1, 1), std::sqrt(2.0), Direction::Forward},
      {"randers-fwd", field(NormSpec::randers(eye2(), v2(0.5, 0))), v2(1, 0), 1.5, Direction::Forward},
      {"randers-bwd", field(NormSpec::randers(eye2(), v2(0.5, 0))), v2(1, 0), 0.5, Direction::Backward},
  };
  for (const auto& c : cases) {
    const auto g200 = std::make_shared<const Grid>(c.f, 200, 2);
    const auto g100 = std::make_shared<const Grid>(c.f, 100, 2);
    const double e200 = std::abs(distance_field(g200, v2(0, 0), c.dir).at(c.target) - c.exact) / c.exact;
    const double e100 = std::abs(distance_field(g100, v2(0, 0), c.dir).at(c.target) - c.exact) / c.exact;
    out.detail << c.name << " rel err " << e200 << " (100 cells: " << e100 << ") ";
    out.require(g200->stencil().size() == 16, "16-offset stencil");
    out.require(e200 < 0.02, std::string(c.name) + " within 2%");
    // Stencil-aligned targets are exact on both grids up to quadrature; then
    // "decreases" means "does not increase beyond roundoff".
    out.require(e200 <= e100 + 1e-12, std::string(c.name) + " refinement does not increase error");
  }
  // Along the x1-axis of the optical field of 1 + x1^2 the minimizer is the
  // axis itself, d = asinh(1); the grid error is pure edge quadrature.
  const FinslerField opt = optical_field(field(NormSpec::quadratic(eye2()), 2, one_plus_x1sq()));
  double prev = 1e300;
  for (int cells : {100, 200}) {
    const auto g = std::make_shared<const Grid>(opt, cells, 2);
    const double err = std::abs(distance_field(g, v2(0, 0), Direction::Forward).at(v2(1, 0)) - std::asinh(1.0));
    out.detail << "curved axis error at " << cells << " cells " << err << " ";
    out.require(err < 0.02 * std::asinh(1.0), "curved axis within 2%");
    out.require(err < prev, "curved axis error decreases under refinement");
    prev = err;
  }
}

void chronology_criterion(Outcome& out) {
  const auto flat = st_of(field(NormSpec::quadratic(eye2())));
  ChronoOracle oracle(optical_grid(flat, 200));
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> xs(-1.8, 1.8), ts(-1.0, 3.0);
  // The grid verdict is conservative: chronological means margin > grid_tol.
  // Sound on every pair; complete once the exact margin clears 2 grid_tol.
  int unsound = 0, missed = 0, decided = 0;
  for (int i = 0; i < 1000; ++i) {
    const Event p{0, v2(xs(rng), xs(rng))};
    const Event q{ts(rng), v2(xs(rng), xs(rng))};
    const ChronoResult r = oracle.related(p, q);
    const double exact_margin = q.t - p.t - (q.x - p.x).norm();
    if (r.chronological && exact_margin <= 0) ++unsound;
    if (exact_margin > 2 * r.grid_tol) {
      ++decided;
      if (!r.chronological) ++missed;
    } else if (exact_margin < -r.grid_tol) {
      ++decided;
      if (r.chronological || r.causal_assuming_simplicity) ++missed;
    }
  }
  out.detail << "flat: " << unsound << " unsound verdicts over 1000 pairs, " << missed << " mismatches over "
             << decided << " pairs outside the tolerance band; ";
  out.require(unsound == 0, "chronological implies |x| < t");
  out.require(missed == 0, "membership matches |x| < t outside the band");
  out.require(decided > 900, "most pairs decided");
  const auto rg = optical_grid(st_of(field(NormSpec::randers(eye2(), v2(0.5, 0)))), 200);
  const ChronoResult a = chrono_related(rg, {0, v2(0, 0)}, {1, v2(1, 0)});
  const ChronoResult b = chrono_related(rg, {0, v2(0, 0)}, {1, v2(-1, 0)});
  out.detail << "randers distances " << a.distance << " / " << b.distance;
  out.require(std::abs(a.distance - 1.5) < 0.03 && std::abs(b.distance - 0.5) < 0.01, "randers 1.5 vs 0.5");
  out.require(!a.chronological && b.chronological, "randers asymmetric chronology");
}

void simplicity_criterion(Outcome& out) {
  const auto st = st_of(field(NormSpec::quadratic(eye2()), 3, one_plus_x1sq()));
  const SimplicityReport r = causal_simplicity_probe(st, optical_grid(st, 200, 3), 20, 42);
  out.detail << r.pairs << " pairs, worst relative gap " << r.worst_relative_gap << ", failures " << r.failures.size();
  out.require(r.pairs == 20, "20 pairs");
  out.require(r.all_minimizers_found, "all minimizers found");
}

void conic_criterion(Outcome& out) {
  const auto st = StaticSpacetime::make_sstk(
      FinslerField(square(1), NormField::constant(NormSpec::quadratic(eye2())), ScalarField::constant(-1.0), {},
                   LambdaPolicy::AnySign),
      {ScalarField::constant(-2.0), ScalarField::constant(0.0)});
  const ConicMetrics ex = conic_metrics(st, v2(0, 0), v2(1, 0));
  const double e1 = std::abs(*ex.f_o - (2 - std::sqrt(3.0))), e2 = std::abs(*ex.f_o_l - (2 + std::sqrt(3.0)));
  out.detail << "example errors " << e1 << ", " << e2;
  out.require(e1 < 1e-12 && e2 < 1e-12, "(2-sqrt3, 2+sqrt3)");
  // The cone omega(v) < 0, -|v|^2 + 4 v1^2 >= 0 is |angle| <= 60 degrees.
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ang(-kPi / 3, kPi / 3), len(0.1, 3.0);
  int ordering_failures = 0, equality_failures = 0, boundary_samples = 0;
  for (int i = 0; i < 10000; ++i) {
    const double t = i % 20 == 0 ? (i % 40 == 0 ? kPi / 3 : -kPi / 3) : ang(rng);
    const Vec v = len(rng) * v2(std::cos(t), std::sin(t));
    const ConicMetrics m = conic_metrics(st, v2(0, 0), v);
    if (!m.f_o || !m.f_o_l) {
      ++ordering_failures;
      continue;
    }
    const double scale = std::max(1.0, *m.f_o_l);
    if (*m.f_o > *m.f_o_l + 1e-12 * scale) ++ordering_failures;
    const bool equal = *m.f_o_l - *m.f_o <= 1e-12 * scale;
    if (m.radicand < 1e-10) ++boundary_samples;
    // F_o_l - F_o = 2 sqrt(radicand) / |Lambda|, so equality within roundoff
    // is expected exactly when the radicand is below roundoff as well.
    if (m.radicand >= 1e-10 && equal) ++equality_failures;
    if (m.radicand < 1e-10 && *m.f_o_l - *m.f_o > 2 * std::sqrt(1e-10) + 1e-12 * scale) ++equality_failures;
  }
  out.detail << ", ordering failures " << ordering_failures << ", equality failures " << equality_failures << " ("
             << boundary_samples << " samples with radicand < 1e-10)";
  out.require(ordering_failures == 0, "F_o <= F_o_l");
  out.require(equality_failures == 0, "equality iff radicand < 1e-10");
  out.require(boundary_samples > 0, "boundary covered");
}

void cauchy_criterion(Outcome& out) {
  const auto flat = st_of(field(NormSpec::quadratic(eye2())));
  const auto a = cauchy_graph_check(flat, ScalarField::polynomial({{0.9, {1, 0}}}), 1.0);
  const auto b = cauchy_graph_check(flat, ScalarField::polynomial({{1.1, {1, 0}}}), 1.0);
  const auto randers = st_of(field(NormSpec::randers(eye2(), v2(0.5, 0))));
  const auto c = cauchy_graph_check(randers, ScalarField::polynomial({{0.9, {1, 0}}}), 3.0);
  out.detail << "0.9x1: " << a.future_spacelike << "/" << a.spacelike << ", 1.1x1: " << b.future_spacelike;
  out.require(a.future_spacelike && a.spacelike, "0.9 x1 both true");
  const bool witness = !b.violations.empty() && (b.violations.front().v - v2(1, 0)).norm() < 1e-12;
  out.detail << (witness ? " witness (1,0)" : " no (1,0) witness") << ", randers: " << c.future_spacelike << "/"
             << c.spacelike;
  out.require(!b.future_spacelike && witness, "1.1 x1 fails at (1,0)");
  out.require(c.future_spacelike && c.spacelike, "randers both true");
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Fundamental tensor correctness", 5, fundamental_tensor_criterion},
      {2, "Cartan symmetry", 5, cartan_criterion},
      {3, "Reversibility", 2, reversibility_criterion},
      {4, "Conservation", 10, conservation_criterion},
      {5, "Static-line theorem", 1, static_line_criterion},
      {6, "Fermat equivalence", 10, fermat_criterion},
      {7, "Reverse Cauchy-Schwarz", 5, reverse_cs_criterion},
      {8, "Cone convexity", 5, convexity_criterion},
      {9, "Distance accuracy", 30, distance_criterion},
      {10, "Chronology", 30, chronology_criterion},
      {11, "Causal simplicity probe", 60, simplicity_criterion},
      {12, "SSTK conic metrics", 5, conic_criterion},
      {13, "Cauchy graph checks", 5, cauchy_criterion},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.body(out);
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(secs < c.time_limit, "runtime limit");
    std::printf("[%s] %d. %s (%.2f s / limit %.0f s): %s\n", out.pass ? "PASS" : "FAIL", c.number, c.name, secs,
                c.time_limit, out.detail.str().c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
