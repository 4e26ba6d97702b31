#include "sfst/geodesics.hpp"

#include <cmath>

#include "sfst/error.hpp"

namespace sfst {

double Trajectory::max_lagrangian_drift() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.lagrangian - samples.front().lagrangian));
  return m;
}

double Trajectory::max_k_drift() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.k - samples.front().k));
  return m;
}

double Trajectory::max_residual() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.residual);
  return m;
}

std::vector<Vec> Trajectory::points() const {
  std::vector<Vec> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back(s.event.x);
  return out;
}

namespace {

double residual_norm(const NormSpec& norm, const Vec& v, const Vec& q) {
  return (momentum(norm, v) - q).norm();
}

std::optional<Vec> newton(const NormSpec& norm, const Vec& q, Vec v) {
  const double tol = 1e-13 * std::max(1.0, q.norm());
  double r = residual_norm(norm, v, q);
  for (int iter = 0; iter < 50; ++iter) {
    if (r <= tol) return v;
    const Vec res = momentum(norm, v) - q;
    const Mat jac = 2.0 * fundamental_tensor(norm, v).g;
    const Vec dv = jac.ldlt().solve(res);
    double damping = 1.0;
    bool accepted = false;
    while (damping > 1e-8) {
      const Vec cand = v - damping * dv;
      if (!cand.isZero(0.0)) {
        const double rc = residual_norm(norm, cand, q);
        if (rc < r) {
          v = cand;
          r = rc;
          accepted = true;
          break;
        }
      }
      damping *= 0.5;
    }
    if (!accepted) return r <= 1e3 * tol ? std::optional<Vec>(v) : std::nullopt;
  }
  return r <= 1e3 * tol ? std::optional<Vec>(v) : std::nullopt;
}

}  // namespace

Vec invert_momentum(const FinslerField& field, const Vec& x, const Vec& q, const Vec& guess) {
  if (q.isZero(0.0)) return Vec::Zero(q.size());
  const NormSpec norm = field.norm_at(x);
  if (const auto* quad = std::get_if<QuadraticNorm>(&norm.variant())) {
    return quad->a.ldlt().solve(q) / 2.0;
  }
  if (!norm.is_finsler_function()) {
    throw Error(ErrorCode::NotAFinslerFunction, "momentum inversion needs a Finsler function");
  }
  Vec start = guess;
  if (start.size() != q.size() || start.isZero(0.0) || !start.allFinite()) {
    start = std::get<RandersNorm>(norm.variant()).a.ldlt().solve(q) / 2.0;
  }
  try {
    if (auto v = newton(norm, q, start)) return *v;
    // Ray fallback: momentum is 1-homogeneous, so the best point on the ray
    // through the guess has a closed form.
    const Vec d = start.normalized();
    const Vec md = momentum(norm, d);
    const double c = std::max(1e-12, q.dot(md) / md.squaredNorm());
    if (auto v = newton(norm, q, c * d)) return *v;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateTensor && e.code() != ErrorCode::ZeroVector) throw;
  }
  throw Error(ErrorCode::NewtonDivergence, "momentum inversion failed to converge");
}

namespace {

struct StState {
  double t = 0.0;
  Vec x;
  double theta_dot = 0.0;
  Vec q;
};

struct StDeriv {
  double dt = 0.0;
  Vec dx;
  double dtheta_dot = 0.0;
  Vec dq;
  Vec v;
};

bool point_ok(const FinslerField& f, const Vec& x, StopReason* why) {
  if (!f.chart().contains(x)) {
    *why = StopReason::ChartExit;
    return false;
  }
  if (f.mask().contains(x)) {
    *why = StopReason::MaskEntry;
    return false;
  }
  return true;
}

template <class Derivs, class State, class Combine>
bool rk4_step(const Derivs& derivs, const State& y, double h, const Combine& combine, State* out) {
  auto k1 = derivs(y);
  if (!k1) return false;
  auto k2 = derivs(combine(y, *k1, 0.5 * h));
  if (!k2) return false;
  auto k3 = derivs(combine(y, *k2, 0.5 * h));
  if (!k3) return false;
  auto k4 = derivs(combine(y, *k3, h));
  if (!k4) return false;
  State acc = combine(y, *k1, h / 6.0);
  acc = combine(acc, *k2, h / 3.0);
  acc = combine(acc, *k3, h / 3.0);
  *out = combine(acc, *k4, h / 6.0);
  return true;
}

void check_geodesic_field(const FinslerField& f) {
  if (!f.is_finsler_function()) {
    throw Error(ErrorCode::NotAFinslerFunction, "geodesics need a Finsler-function base norm");
  }
}

std::vector<double> nonuniform_derivative_weights(const std::vector<double>& s, size_t i) {
  const size_t n = s.size();
  if (i == 0) {
    const double h1 = s[1] - s[0], h2 = s[2] - s[1];
    return {-(2 * h1 + h2) / (h1 * (h1 + h2)), (h1 + h2) / (h1 * h2), -h1 / (h2 * (h1 + h2))};
  }
  if (i == n - 1) {
    const double h1 = s[n - 2] - s[n - 3], h2 = s[n - 1] - s[n - 2];
    return {h2 / (h1 * (h1 + h2)), -(h1 + h2) / (h1 * h2), (2 * h2 + h1) / (h2 * (h1 + h2))};
  }
  const double h1 = s[i] - s[i - 1], h2 = s[i + 1] - s[i];
  return {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))};
}

size_t stencil_first(size_t i, size_t n) {
  if (i == 0) return 0;
  if (i == n - 1) return n - 3;
  return i - 1;
}

}  // namespace

Trajectory integrate_spacetime_geodesic(const StaticSpacetime& st, const Event& start,
                                        const Tangent& w0, double s_max, double step) {
  if (st.mode() != SpacetimeMode::Static) {
    throw Error(ErrorCode::InvalidArgument, "spacetime geodesics are integrated in static mode only");
  }
  const FinslerField& f = st.base();
  check_geodesic_field(f);
  f.require_in_chart(start.x);
  if (w0.tau == 0.0 && w0.v.isZero(0.0)) throw Error(ErrorCode::InvalidArgument, "initial tangent is zero");
  if (!(step > 0.0) || !(s_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "step and s_max must be positive");
  const bool static_line = w0.v.isZero(0.0);
  if (static_line && f.grad_lambda(start.x).norm() > 1e-12 * std::max(1.0, std::abs(f.lambda(start.x)))) {
    throw Error(ErrorCode::InvalidArgument, "v0 = 0 requires dLambda(x0) = 0 (static line)");
  }

  StState y{start.t, start.x, w0.tau, f.momentum(start.x, w0.v)};
  const double q0 = y.q.norm();
  Vec last_v = w0.v;
  StopReason why = StopReason::Completed;

  auto derivs = [&](const StState& s) -> std::optional<StDeriv> {
    if (!point_ok(f, s.x, &why)) return std::nullopt;
    if (!static_line && s.q.norm() <= 1e-12 * q0) {
      throw Error(ErrorCode::ZeroVelocityBreakdown, "velocity vanished along a non-static geodesic");
    }
    StDeriv d;
    d.v = static_line ? Vec(Vec::Zero(s.x.size())) : invert_momentum(f, s.x, s.q, last_v);
    const double lam = f.lambda(s.x);
    const Vec grad = f.grad_lambda(s.x);
    d.dt = s.theta_dot;
    d.dx = d.v;
    d.dtheta_dot = -s.theta_dot * grad.dot(d.v) / lam;
    d.dq = f.dx_norm_sq(s.x, d.v) - grad * s.theta_dot * s.theta_dot;
    return d;
  };
  auto combine = [](const StState& s, const StDeriv& d, double h) {
    return StState{s.t + h * d.dt, s.x + h * d.dx, s.theta_dot + h * d.dtheta_dot, s.q + h * d.dq};
  };

  Trajectory traj;
  auto record = [&](double s, const StState& state, const Vec& v) {
    TrajectorySample smp;
    smp.s = s;
    smp.event = {state.t, state.x};
    smp.tangent = {state.theta_dot, v};
    smp.lagrangian = eval_L(st, state.x, smp.tangent);
    smp.k = f.lambda(state.x) * state.theta_dot;
    traj.samples.push_back(std::move(smp));
  };
  record(0.0, y, w0.v);
  const long steps = std::max(1L, std::lround(std::ceil(s_max / step - 1e-9)));
  const double h = s_max / static_cast<double>(steps);
  for (long i = 1; i <= steps; ++i) {
    StState next;
    if (!rk4_step(derivs, y, h, combine, &next) || !point_ok(f, next.x, &why)) {
      traj.stop = why;
      break;
    }
    y = std::move(next);
    last_v = static_line ? Vec(Vec::Zero(y.x.size())) : invert_momentum(f, y.x, y.q, last_v);
    record(static_cast<double>(i) * h, y, last_v);
  }
  const auto res = spacetime_el_residuals(st, traj);
  for (size_t i = 0; i < res.size(); ++i) traj.samples[i].residual = res[i];
  return traj;
}

Trajectory integrate_base_geodesic(const FinslerField& f, const Vec& x0, const Vec& v0, double s_max,
                                   double step) {
  check_geodesic_field(f);
  f.require_in_chart(x0);
  if (v0.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "base geodesics need v0 != 0");
  if (!(step > 0.0) || !(s_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "step and s_max must be positive");

  struct State {
    Vec x, q;
  };
  struct Deriv {
    Vec dx, dq;
  };
  Vec last_v = v0;
  const double q0 = f.momentum(x0, v0).norm();
  StopReason why = StopReason::Completed;
  auto derivs = [&](const State& s) -> std::optional<Deriv> {
    if (!point_ok(f, s.x, &why)) return std::nullopt;
    if (s.q.norm() <= 1e-12 * q0) throw Error(ErrorCode::ZeroVelocityBreakdown, "base velocity vanished");
    const Vec v = invert_momentum(f, s.x, s.q, last_v);
    return Deriv{v, f.dx_norm_sq(s.x, v)};
  };
  auto combine = [](const State& s, const Deriv& d, double h) { return State{s.x + h * d.dx, s.q + h * d.dq}; };

  Trajectory traj;
  traj.base_only = true;
  std::vector<Vec> qs;
  auto record = [&](double s, const State& state, const Vec& v) {
    TrajectorySample smp;
    smp.s = s;
    smp.event = {0.0, state.x};
    smp.tangent = {0.0, v};
    smp.k = f.norm(state.x, v);
    smp.lagrangian = smp.k * smp.k;
    traj.samples.push_back(std::move(smp));
    qs.push_back(state.q);
  };
  State y{x0, f.momentum(x0, v0)};
  record(0.0, y, v0);
  const long steps = std::max(1L, std::lround(std::ceil(s_max / step - 1e-9)));
  const double h = s_max / static_cast<double>(steps);
  for (long i = 1; i <= steps; ++i) {
    State next;
    if (!rk4_step(derivs, y, h, combine, &next) || !point_ok(f, next.x, &why)) {
      traj.stop = why;
      break;
    }
    y = std::move(next);
    last_v = invert_momentum(f, y.x, y.q, last_v);
    record(static_cast<double>(i) * h, y, last_v);
  }
  const size_t n = traj.samples.size();
  if (n >= 3) {
    std::vector<double> s(n);
    for (size_t i = 0; i < n; ++i) s[i] = traj.samples[i].s;
    for (size_t i = 0; i < n; ++i) {
      const auto w = nonuniform_derivative_weights(s, i);
      const size_t j = stencil_first(i, n);
      const Vec dq = w[0] * qs[j] + w[1] * qs[j + 1] + w[2] * qs[j + 2];
      const auto& smp = traj.samples[i];
      traj.samples[i].residual = (f.dx_norm_sq(smp.event.x, smp.tangent.v) - dq).lpNorm<Eigen::Infinity>();
    }
  }
  return traj;
}

std::vector<double> spacetime_el_residuals(const StaticSpacetime& st, const Trajectory& traj) {
  const FinslerField& f = st.base();
  const size_t n = traj.samples.size();
  std::vector<double> out(n, 0.0);
  if (n < 3) return out;
  std::vector<double> s(n), k(n);
  std::vector<Vec> q(n);
  for (size_t i = 0; i < n; ++i) {
    const auto& smp = traj.samples[i];
    s[i] = smp.s;
    q[i] = f.momentum(smp.event.x, smp.tangent.v);
    k[i] = f.lambda(smp.event.x) * smp.tangent.tau;
  }
  for (size_t i = 0; i < n; ++i) {
    const auto w = nonuniform_derivative_weights(s, i);
    const size_t j = stencil_first(i, n);
    const Vec dq = w[0] * q[j] + w[1] * q[j + 1] + w[2] * q[j + 2];
    const double dk = w[0] * k[j] + w[1] * k[j + 1] + w[2] * k[j + 2];
    const auto& smp = traj.samples[i];
    const Vec& x = smp.event.x;
    const double td = smp.tangent.tau;
    const Vec e = f.dx_norm_sq(x, smp.tangent.v) - f.grad_lambda(x) * td * td - dq;
    out[i] = std::max(e.lpNorm<Eigen::Infinity>(), std::abs(dk));
  }
  return out;
}

Trajectory fermat_lift(const StaticSpacetime& st, const Trajectory& base, double t0) {
  const FinslerField opt = st.base().optical();
  Trajectory out;
  out.stop = base.stop;
  double theta = t0;
  for (size_t i = 0; i < base.samples.size(); ++i) {
    const auto& b = base.samples[i];
    if (b.tangent.v.isZero(0.0)) throw Error(ErrorCode::ZeroVector, "fermat_lift needs a regular curve");
    if (i > 0) {
      const auto& a = base.samples[i - 1];
      const Vec xm = 0.5 * (a.event.x + b.event.x);
      const Vec vm = 0.5 * (a.tangent.v + b.tangent.v);
      theta += (b.s - a.s) * opt.norm(xm, vm);
    }
    TrajectorySample smp;
    smp.s = b.s;
    smp.event = {theta, b.event.x};
    smp.tangent = {opt.norm(b.event.x, b.tangent.v), b.tangent.v};
    smp.lagrangian = eval_L(st, b.event.x, smp.tangent);
    smp.k = st.lambda(b.event.x) * smp.tangent.tau;
    out.samples.push_back(std::move(smp));
  }
  return out;
}

Trajectory affine_reparametrize(const StaticSpacetime& st, const Trajectory& lifted) {
  Trajectory out = lifted;
  if (lifted.samples.empty()) return out;
  auto rate = [&](const TrajectorySample& smp) { return st.lambda(smp.event.x) * smp.tangent.tau; };
  const double c = rate(lifted.samples.front());
  if (!(c > 0.0)) throw Error(ErrorCode::NotCausal, "affine_reparametrize needs a future-pointing curve");
  double s_new = lifted.samples.front().s;
  for (size_t i = 0; i < lifted.samples.size(); ++i) {
    const auto& smp = lifted.samples[i];
    if (i > 0) {
      const auto& prev = lifted.samples[i - 1];
      s_new += 0.5 * (smp.s - prev.s) * (rate(prev) + rate(smp)) / c;
    }
    const double rho = rate(smp) / c;  // ds_new / ds_old
    auto& o = out.samples[i];
    o.s = s_new;
    o.tangent = {smp.tangent.tau / rho, smp.tangent.v / rho};
    o.lagrangian = eval_L(st, o.event.x, o.tangent);
    o.k = st.lambda(o.event.x) * o.tangent.tau;
  }
  const auto res = spacetime_el_residuals(st, out);
  for (size_t i = 0; i < res.size(); ++i) out.samples[i].residual = res[i];
  return out;
}

namespace {

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b) {
  const Vec ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

double directed_hausdorff(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  double worst = 0.0;
  for (const Vec& p : a) {
    double best = std::numeric_limits<double>::infinity();
    if (b.size() == 1) best = (p - b[0]).norm();
    for (size_t k = 0; k + 1 < b.size(); ++k) best = std::min(best, point_segment_distance(p, b[k], b[k + 1]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double hausdorff_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "hausdorff_distance needs non-empty curves");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace sfst
