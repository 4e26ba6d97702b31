#include "sfst/spacetime.hpp"

#include <cmath>
#include <random>

#include "sfst/error.hpp"
#include "sfst/sampling.hpp"

namespace sfst {

StaticSpacetime StaticSpacetime::make_static(FinslerField base) {
  return StaticSpacetime(std::move(base), SpacetimeMode::Static, {});
}

StaticSpacetime StaticSpacetime::make_sstk(FinslerField base, std::vector<ScalarField> omega,
                                           int samples_per_axis) {
  if (omega.size() != static_cast<size_t>(base.dim())) {
    throw Error(ErrorCode::InvalidArgument, "omega needs one component per base dimension");
  }
  StaticSpacetime st(std::move(base), SpacetimeMode::Sstk, std::move(omega));
  for (const Vec& x : chart_samples(st.base().chart(), samples_per_axis)) {
    if (st.base().mask().contains(x)) continue;
    const double margin = st.lambda(x) + omega_norm(st, x, 90);
    if (!(margin > 0.0)) {
      std::string where;
      for (Eigen::Index i = 0; i < x.size(); ++i) where += (i ? "," : "") + std::to_string(x[i]);
      throw Error(ErrorCode::InvalidArgument,
                  "SSTK admissibility Lambda + ||omega|| > 0 fails at x = (" + where + ")");
    }
  }
  return st;
}

Vec StaticSpacetime::omega(const Vec& x) const {
  Vec w = Vec::Zero(dim());
  for (size_t i = 0; i < omega_.size(); ++i) w[static_cast<Eigen::Index>(i)] = omega_[i].value(x);
  return w;
}

std::string_view to_string(CausalKind kind) {
  switch (kind) {
    case CausalKind::Timelike: return "Timelike";
    case CausalKind::Lightlike: return "Lightlike";
    case CausalKind::CausalBoundary: return "CausalBoundary";
    case CausalKind::Spacelike: return "Spacelike";
    case CausalKind::Zero: return "Zero";
  }
  return "Unknown";
}

std::string_view to_string(Orientation orientation) {
  switch (orientation) {
    case Orientation::Future: return "Future";
    case Orientation::Past: return "Past";
    case Orientation::None: return "None";
  }
  return "Unknown";
}

double eval_L(const StaticSpacetime& st, const Vec& x, const Tangent& w) {
  st.base().require_in_chart(x);
  double l = -st.lambda(x) * w.tau * w.tau + st.base().norm_sq(x, w.v);
  if (st.mode() == SpacetimeMode::Sstk) l += 2.0 * w.tau * st.omega(x).dot(w.v);
  return l;
}

Mat spacetime_tensor(const StaticSpacetime& st, const Vec& x, const Tangent& w) {
  if (w.v.isZero(0.0)) {
    throw Error(ErrorCode::OnExceptionalBundle, "the spacetime tensor is undefined on the line bundle of d/dt");
  }
  st.base().require_in_chart(x);
  const int n = st.dim();
  Mat g(n + 1, n + 1);
  const Vec om = st.omega(x);
  g(0, 0) = -st.lambda(x);
  g.block(1, 0, n, 1) = om;
  g.block(0, 1, 1, n) = om.transpose();
  g.block(1, 1, n, n) = st.base().tensor(x, w.v);
  return g;
}

namespace {

double lagrangian_scale(const StaticSpacetime& st, const Vec& x, const Tangent& w) {
  double s = std::abs(st.lambda(x)) * w.tau * w.tau + st.base().norm_sq(x, w.v);
  if (st.mode() == SpacetimeMode::Sstk) s += 2.0 * std::abs(w.tau * st.omega(x).dot(w.v));
  return s;
}

Orientation orientation_of(double tau) {
  if (tau > 0.0) return Orientation::Future;
  if (tau < 0.0) return Orientation::Past;
  return Orientation::None;
}

}  // namespace

CausalClass classify(const StaticSpacetime& st, const Vec& x, const Tangent& w, double class_tol) {
  CausalClass out;
  if (w.tau == 0.0 && w.v.isZero(0.0)) return out;
  out.lagrangian = eval_L(st, x, w);
  const bool on_bundle = w.v.isZero(0.0);
  const bool timelike_bundle = st.mode() == SpacetimeMode::Static || st.lambda(x) > 0.0;
  if (on_bundle && timelike_bundle) {
    out.kind = CausalKind::Timelike;
    out.orientation = orientation_of(w.tau);
    return out;
  }
  const double band = class_tol * lagrangian_scale(st, x, w);
  const double l = out.lagrangian;
  if (std::abs(l) <= band) {
    out.kind = CausalKind::Lightlike;
  } else if (std::abs(l) <= 10.0 * band) {
    out.kind = CausalKind::CausalBoundary;
    return out;
  } else {
    out.kind = l < 0.0 ? CausalKind::Timelike : CausalKind::Spacelike;
  }
  if (out.kind != CausalKind::Spacelike) out.orientation = orientation_of(w.tau);
  return out;
}

double reverse_cs_gap(const StaticSpacetime& st, const Vec& x, const Tangent& v, const Tangent& w,
                      double class_tol) {
  if (st.mode() != SpacetimeMode::Static) {
    throw Error(ErrorCode::InvalidArgument, "reverse Cauchy-Schwarz is stated for static mode");
  }
  for (const Tangent* t : {&v, &w}) {
    const CausalClass c = classify(st, x, *t, class_tol);
    const bool causal = c.kind == CausalKind::Timelike || c.kind == CausalKind::Lightlike ||
                        c.kind == CausalKind::CausalBoundary;
    if (!causal || !(t->tau > 0.0)) {
      throw Error(ErrorCode::NotCausal, "reverse_cs_gap requires future-pointing causal tangents");
    }
  }
  const double lam = st.lambda(x);
  // -1/2 dL/dv~(v~) w~ = Lambda tau_v tau_w - 1/2 dF^2/dv(v) . w
  const double lhs = lam * v.tau * w.tau - 0.5 * st.base().momentum(x, v.v).dot(w.v);
  const double rhs = std::sqrt(std::max(0.0, -eval_L(st, x, v))) *
                     std::sqrt(std::max(0.0, -eval_L(st, x, w)));
  return lhs - rhs;
}

namespace {

// Future boundary tau for one direction; nullopt when there is no future root.
std::optional<double> future_root(const StaticSpacetime& st, const Vec& x, const Vec& v,
                                  bool* critical) {
  const double f2 = st.base().norm_sq(x, v);
  const double lam = st.lambda(x);
  if (st.mode() == SpacetimeMode::Static) return std::sqrt(f2 / lam);
  const double om = st.omega(x).dot(v);
  const bool crit = std::abs(lam) <= kCriticalLambda;
  if (critical) *critical = crit;
  if (crit) {
    if (om < 0.0) return -f2 / (2.0 * om);
    return std::nullopt;
  }
  const double radicand = lam * f2 + om * om;
  if (radicand < 0.0) return std::nullopt;
  if (lam < 0.0 && !(om < 0.0)) return std::nullopt;
  const double root = std::sqrt(radicand);
  if (om <= 0.0) return f2 / (-om + root);
  return (om + root) / lam;
}

}  // namespace

std::vector<ConeSample> cone_boundary(const StaticSpacetime& st, const Vec& x,
                                      const std::vector<Vec>& directions) {
  st.base().require_in_chart(x);
  std::vector<ConeSample> out;
  out.reserve(directions.size());
  for (const Vec& v : directions) {
    if (v.isZero(0.0)) throw Error(ErrorCode::InvalidArgument, "cone directions must be non-zero");
    bool critical = false;
    const auto tau = future_root(st, x, v, &critical);
    if (!tau) {
      throw Error(ErrorCode::NoFutureRoot, "direction lies outside the future cone structure");
    }
    out.push_back({v, *tau, critical});
  }
  return out;
}

namespace {

Vec random_direction(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> normal;
  Vec d(dim);
  do {
    for (int i = 0; i < dim; ++i) d[i] = normal(rng);
  } while (d.norm() < 1e-12);
  return d.normalized();
}

// A future-pointing causal vector over v: on the boundary, or (for SSTK with
// Lambda < 0) anywhere between the two lightlike roots.
std::optional<Tangent> sample_future_causal(const StaticSpacetime& st, const Vec& x, const Vec& v,
                                            double interior, std::mt19937_64& rng) {
  const auto tau = future_root(st, x, v, nullptr);
  if (!tau) return std::nullopt;
  double t = *tau;
  if (st.mode() == SpacetimeMode::Sstk && st.lambda(x) < -kCriticalLambda) {
    const ConicMetrics cm = conic_metrics(st, x, v);
    if (cm.f_o_l) {
      std::uniform_real_distribution<double> u(0.0, interior);
      t = *cm.f_o + u(rng) * (*cm.f_o_l - *cm.f_o);
    }
  } else {
    std::uniform_real_distribution<double> u(0.0, interior);
    t *= 1.0 + u(rng);
  }
  return Tangent{t, v};
}

}  // namespace

ConvexityReport cone_convexity_check(const StaticSpacetime& st, const Vec& x, int chord_samples,
                                     unsigned seed) {
  if (chord_samples < 100) throw Error(ErrorCode::InvalidArgument, "cone_convexity_check needs >= 100 chords");
  st.base().require_in_chart(x);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.25, 2.0);
  std::bernoulli_distribution lightlike(0.75);
  ConvexityReport report;
  const int n = st.dim();
  for (int i = 0; i < chord_samples; ++i) {
    const Vec va = radius(rng) * random_direction(rng, n);
    const Vec vb = radius(rng) * random_direction(rng, n);
    const auto a = sample_future_causal(st, x, va, lightlike(rng) ? 0.0 : 0.5, rng);
    const auto b = sample_future_causal(st, x, vb, lightlike(rng) ? 0.0 : 0.5, rng);
    if (!a || !b) continue;
    ++report.chords_tested;
    const Tangent mid{0.5 * (a->tau + b->tau), 0.5 * (a->v + b->v)};
    const double scale = std::max(lagrangian_scale(st, x, mid), 1e-300);
    const double violation = mid.tau > 0.0 ? eval_L(st, x, mid) / scale : 1.0;
    if (violation > kConvTol && violation > report.worst_violation) {
      report.convex = false;
      report.worst_violation = violation;
      double boundary = 0.0;
      if (!mid.v.isZero(0.0)) {
        if (const auto r = future_root(st, x, mid.v, nullptr)) boundary = *r;
      }
      report.witness = Chord{*a, *b, mid, boundary};
    }
  }
  return report;
}

Mat jc_hessian(const NormSpec& optical_norm, const Vec& v, double alpha) {
  const double f = eval_norm(optical_norm, v);
  const double g_sq = f * f;
  const Vec dF = momentum(optical_norm, v) / (2.0 * f);
  const Mat g = fundamental_tensor(optical_norm, v).g;
  const Mat hess_f = (g - dF * dF.transpose()) / f;
  const double root = std::sqrt(g_sq + alpha);
  return (dF * dF.transpose()) / root * (1.0 - g_sq / (g_sq + alpha)) + (f / root) * hess_f;
}

JcConvexityReport jc_convexity_check(const StaticSpacetime& st, const Vec& x, double c, int samples,
                                     unsigned seed) {
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "J(c) needs c > 0");
  if (st.mode() != SpacetimeMode::Static) {
    throw Error(ErrorCode::InvalidArgument, "J(c) convexity is stated for static mode");
  }
  st.base().require_in_chart(x);
  const NormSpec opt = st.base().optical().norm_at(x);
  const double alpha = c / st.lambda(x);
  auto height = [&](const Vec& v) { return std::sqrt(std::pow(eval_norm(opt, v), 2) + alpha); };

  JcConvexityReport report;
  report.min_hessian_eigenvalue = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.0, 2.0);
  const int n = st.dim();
  for (int i = 0; i < samples; ++i) {
    const Vec va = radius(rng) * random_direction(rng, n);
    const Vec vb = radius(rng) * random_direction(rng, n);
    const Vec vm = 0.5 * (va + vb);
    // Boundary chord: strict convexity puts the midpoint strictly above.
    const double gap = 0.5 * (height(va) + height(vb)) - height(vm);
    if (gap < -kConvTol * (1.0 + height(vm))) report.chords_ok = false;
  }
  const std::vector<Vec> dirs = unit_directions(n, samples);
  for (size_t k = 0; k < dirs.size(); ++k) {
    const double r = 0.25 + 1.75 * (static_cast<double>(k % 7) / 6.0);
    const Vec v = r * dirs[k];
    const Mat h = jc_hessian(opt, v, alpha);
    Eigen::SelfAdjointEigenSolver<Mat> eig(h, Eigen::EigenvaluesOnly);
    report.min_hessian_eigenvalue = std::min(report.min_hessian_eigenvalue, eig.eigenvalues().minCoeff());
    const Mat numeric = fd::hessian(height, v, fd::hessian_step(v));
    report.hessian_formula_error =
        std::max(report.hessian_formula_error, (h - numeric).cwiseAbs().maxCoeff());
  }
  report.hessian_ok = report.min_hessian_eigenvalue > 0.0;
  report.strictly_convex = report.chords_ok && report.hessian_ok;
  return report;
}

double omega_norm(const StaticSpacetime& st, const Vec& x, int outer_samples) {
  if (st.mode() != SpacetimeMode::Sstk) throw Error(ErrorCode::InvalidArgument, "omega_norm needs SSTK mode");
  const Vec om = st.omega(x);
  if (om.isZero(0.0)) return 0.0;
  auto inner = [&](const Vec& v) { return dual_norm(st.base().tensor(x, v), om); };
  return minimize_on_sphere(inner, st.dim(), std::max(8, outer_samples)).value;
}

ConicMetrics conic_metrics(const StaticSpacetime& st, const Vec& x, const Vec& v) {
  ConicMetrics out;
  if (v.isZero(0.0)) return out;
  const double f2 = st.base().norm_sq(x, v);
  const double lam = st.lambda(x);
  const double om = st.mode() == SpacetimeMode::Sstk ? st.omega(x).dot(v) : 0.0;
  double radicand = lam * f2 + om * om;
  if (radicand < 0.0 && radicand > -1e-14 * (std::abs(lam) * f2 + om * om)) radicand = 0.0;
  out.radicand = radicand;
  out.critical_region = std::abs(lam) <= kCriticalLambda;
  if (lam > kCriticalLambda) {
    const double root = std::sqrt(radicand);
    out.f_o = om <= 0.0 ? f2 / (-om + root) : (om + root) / lam;
    return out;
  }
  if (!(om < 0.0) || radicand < 0.0) return out;
  const double root = std::sqrt(radicand);
  out.f_o = f2 / (-om + root);
  if (!out.critical_region) out.f_o_l = -f2 / (om + root);
  return out;
}

std::vector<double> exceptional_cone_angles(const StaticSpacetime& st, const Vec& x, int directions) {
  st.base().require_in_chart(x);
  std::vector<double> passing;
  const double deg = std::acos(-1.0) / 180.0;
  for (double angle : {10.0, 1.0, 0.1}) {
    bool ok = true;
    for (const Vec& u : unit_directions(st.dim(), directions)) {
      for (double frac : {1.0, 0.5, 0.1}) {
        const Tangent w{1.0, std::tan(frac * angle * deg) * u};
        if (!(eval_L(st, x, w) < 0.0)) ok = false;
      }
    }
    if (ok) passing.push_back(angle);
  }
  return passing;
}

}  // namespace sfst
