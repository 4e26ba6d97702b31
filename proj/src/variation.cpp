#include <cmath>
#include <numbers>

#include "sfst/error.hpp"
#include "sfst/geodesics.hpp"

namespace sfst {

namespace {

struct Segment {
  double ds = 0.0;
  Vec x_mid;
  Vec v;            // sigma' on the segment
  double theta_dot = 0.0;
};

// sin^2 bump on [c0, c1], zero outside.
double bump(double s, double c0, double c1) {
  if (s <= c0 || s >= c1) return 0.0;
  const double u = std::sin(std::numbers::pi * (s - c0) / (c1 - c0));
  return u * u;
}

}  // namespace

VariationResult timelike_variation_probe(const StaticSpacetime& st, const Trajectory& curve) {
  if (st.mode() != SpacetimeMode::Static) {
    throw Error(ErrorCode::InvalidArgument, "timelike_variation_probe needs static mode");
  }
  const FinslerField& f = st.base();
  const auto& smp = curve.samples;
  if (smp.size() < 3) throw Error(ErrorCode::InvalidArgument, "curve needs at least 3 samples");
  const double a = smp.front().s, b = smp.back().s;
  const int n = f.dim();
  const size_t m = smp.size() - 1;

  // Reparametrize on [a, b] so that Lambda(mid) * dtheta/ds is constant per segment.
  std::vector<double> weight(m);
  double total = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const Vec mid = 0.5 * (smp[i].event.x + smp[i + 1].event.x);
    const double dtheta = smp[i + 1].event.t - smp[i].event.t;
    const Tangent w{dtheta, smp[i + 1].event.x - smp[i].event.x};
    if (!(dtheta > 0.0) || eval_L(st, mid, w) > kClassTol * (f.lambda(mid) * dtheta * dtheta + f.norm_sq(mid, w.v))) {
      throw Error(ErrorCode::NotCausal, "timelike_variation_probe needs a future-pointing causal curve");
    }
    weight[i] = f.lambda(mid) * dtheta;
    total += weight[i];
  }
  const double c = total / (b - a);
  std::vector<double> s(m + 1);
  s[0] = a;
  for (size_t i = 0; i < m; ++i) s[i + 1] = s[i] + weight[i] / c;
  s[m] = b;

  std::vector<Segment> seg(m);
  for (size_t i = 0; i < m; ++i) {
    seg[i].ds = s[i + 1] - s[i];
    seg[i].x_mid = 0.5 * (smp[i].event.x + smp[i + 1].event.x);
    seg[i].v = (smp[i + 1].event.x - smp[i].event.x) / seg[i].ds;
    seg[i].theta_dot = (smp[i + 1].event.t - smp[i].event.t) / seg[i].ds;
  }

  // Candidate fields Z = bump * e_j; h_i is the segment value of
  // q . Z' + (dF^2/dx - dLambda theta_dot^2) . Z.
  struct Candidate {
    double c0, c1;
    int axis;
  };
  std::vector<Candidate> candidates;
  for (int axis = 0; axis < n; ++axis) {
    candidates.push_back({a, b, axis});
    for (int k = 0; k <= 4; ++k) candidates.push_back({a + k * (b - a) / 8, a + (k + 4) * (b - a) / 8, axis});
  }
  std::vector<Vec> q(m), force(m);
  for (size_t i = 0; i < m; ++i) {
    q[i] = f.momentum(seg[i].x_mid, seg[i].v);
    force[i] = f.dx_norm_sq(seg[i].x_mid, seg[i].v) - f.grad_lambda(seg[i].x_mid) * seg[i].theta_dot * seg[i].theta_dot;
  }
  auto z_at = [&](const Candidate& cand, double sv) {
    Vec z = Vec::Zero(n);
    z[cand.axis] = bump(sv, cand.c0, cand.c1);
    return z;
  };
  auto h_values = [&](const Candidate& cand, double* pairing, double* scale) {
    std::vector<double> h(m);
    *pairing = 0.0;
    *scale = 0.0;
    for (size_t i = 0; i < m; ++i) {
      const Vec dz = (z_at(cand, s[i + 1]) - z_at(cand, s[i])) / seg[i].ds;
      const Vec z = z_at(cand, 0.5 * (s[i] + s[i + 1]));
      h[i] = q[i].dot(dz) + force[i].dot(z);
      *pairing += h[i] * seg[i].ds;
      *scale += (q[i].cwiseAbs().dot(dz.cwiseAbs()) + force[i].cwiseAbs().dot(z.cwiseAbs())) * seg[i].ds;
    }
    return h;
  };

  double best_abs = -1.0, best_scale = 0.0;
  size_t best = 0;
  for (size_t k = 0; k < candidates.size(); ++k) {
    double pairing = 0.0, scale = 0.0;
    h_values(candidates[k], &pairing, &scale);
    if (std::abs(pairing) > best_abs) {
      best_abs = std::abs(pairing);
      best_scale = scale;
      best = k;
    }
  }
  if (best_abs <= 1e-8 * best_scale + 1e-14) {
    throw Error(ErrorCode::IsGeodesic, "the curve is a lightlike pregeodesic; no timelike variation exists");
  }
  double pairing = 0.0, scale = 0.0;
  std::vector<double> h = h_values(candidates[best], &pairing, &scale);
  const double sign = pairing < 0.0 ? 1.0 : -1.0;
  for (double& hi : h) hi *= sign;
  pairing *= sign;
  const Candidate cand = candidates[best];

  VariationResult out;
  out.constant_c = c;
  out.pairing = pairing;
  out.alpha = -pairing / (b - a);

  // Y(s_i) = (1 / 2C) (sum_{j < i} h_j ds_j + alpha (s_i - a)).
  std::vector<double> y(m + 1, 0.0);
  double acc = 0.0;
  for (size_t i = 0; i < m; ++i) {
    acc += h[i] * seg[i].ds;
    y[i + 1] = (acc + out.alpha * (s[i + 1] - a)) / (2.0 * c);
  }

  // First variation of L along psi_w = (theta + w Y, sigma + w Z), by central
  // differences in w, averaged over the parameter.
  const double dw = 1e-6;
  auto lagrangian = [&](size_t i, double w) {
    const Vec z0 = sign * z_at(cand, s[i]), z1 = sign * z_at(cand, s[i + 1]);
    const Vec zm = sign * z_at(cand, 0.5 * (s[i] + s[i + 1]));
    const Vec x = seg[i].x_mid + w * zm;
    const Tangent t{seg[i].theta_dot + w * (y[i + 1] - y[i]) / seg[i].ds, seg[i].v + w * (z1 - z0) / seg[i].ds};
    return eval_L(st, x, t);
  };
  double fv = 0.0;
  for (size_t i = 0; i < m; ++i) fv += (lagrangian(i, dw) - lagrangian(i, -dw)) / (2.0 * dw) * seg[i].ds;
  out.first_variation = fv / (b - a);
  return out;
}

}  // namespace sfst
