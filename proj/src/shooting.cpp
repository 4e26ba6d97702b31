#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sfst/error.hpp"
#include "sfst/geodesics.hpp"
#include "sfst/sampling.hpp"

namespace sfst {

namespace {

struct RayHit {
  double miss = std::numeric_limits<double>::infinity();
  double side = 0.0;
  double length = 0.0;
  size_t index = 0;
  Trajectory trajectory;
};

class RayShooter {
 public:
  RayShooter(const FinslerField& field, const ShootingProblem& p, double budget)
      : field_(field), problem_(p), budget_(budget) {}

  RayHit shoot(const Vec& direction) const {
    RayHit hit;
    const Vec v = direction / field_.norm(problem_.start, direction);
    try {
      hit.trajectory = integrate_base_geodesic(field_, problem_.start, v, budget_, problem_.step);
    } catch (const Error& e) {
      if (!is_numerical_fault(e.code())) throw;
      return hit;
    }
    const auto& smp = hit.trajectory.samples;
    const Vec& y = problem_.target;
    for (size_t k = 0; k + 1 < smp.size(); ++k) {
      const Vec& a = smp[k].event.x;
      const Vec ab = smp[k + 1].event.x - a;
      const double len2 = ab.squaredNorm();
      const double t = len2 > 0.0 ? std::clamp((y - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
      const Vec closest = a + t * ab;
      const double d = (y - closest).norm();
      if (d < hit.miss) {
        hit.miss = d;
        hit.index = k;
        hit.length = smp[k].s + t * (smp[k + 1].s - smp[k].s);
        const Vec r = y - closest;
        hit.side = ab.size() == 2 ? ab[0] * r[1] - ab[1] * r[0] : 0.0;
      }
    }
    return hit;
  }

 private:
  const FinslerField& field_;
  const ShootingProblem& problem_;
  double budget_;
};

ShootingResult finish(RayHit hit) {
  ShootingResult out;
  hit.trajectory.samples.resize(std::min(hit.trajectory.samples.size(), hit.index + 2));
  out.trajectory = std::move(hit.trajectory);
  out.length = hit.length;
  out.endpoint_error = hit.miss;
  return out;
}

void keep_best(std::optional<ShootingResult>& best, RayHit hit, double tol) {
  if (!(hit.miss < tol)) return;
  if (!best || hit.length < best->length) best = finish(std::move(hit));
}

std::optional<ShootingResult> shoot_2d(const RayShooter& shooter, const ShootingProblem& p) {
  const Vec chord = p.target - p.start;
  const double base_angle = std::atan2(chord[1], chord[0]);
  const double away_miss = chord.norm() * (1.0 - 1e-12);
  constexpr int kStarts = 16;
  std::vector<double> angles(kStarts);
  std::vector<RayHit> hits(kStarts);
  for (int k = 0; k < kStarts; ++k) {
    angles[k] = base_angle + 2.0 * std::numbers::pi * k / kStarts;
    hits[k] = shooter.shoot(direction_from_angle(angles[k]));
  }
  std::optional<ShootingResult> best;
  for (int k = 0; k < kStarts; ++k) keep_best(best, hits[k], p.tolerance);

  for (int k = 0; k < kStarts; ++k) {
    const int next = (k + 1) % kStarts;
    double lo = angles[k];
    double hi = next == 0 ? angles[0] + 2.0 * std::numbers::pi : angles[next];
    double side_lo = hits[k].side;
    const double side_hi = hits[next].side;
    if (!(side_lo * side_hi < 0.0)) continue;
    // Sign flips of rays heading away from the target never close the miss.
    if (std::min(hits[k].miss, hits[next].miss) >= away_miss) continue;
    for (int it = 0; it < p.max_iterations; ++it) {
      const double mid = 0.5 * (lo + hi);
      RayHit h = shooter.shoot(direction_from_angle(mid));
      const double side = h.side;
      if (h.miss < p.tolerance) {
        keep_best(best, std::move(h), p.tolerance);
        break;
      }
      if (side * side_lo > 0.0) {
        lo = mid;
        side_lo = side;
      } else {
        hi = mid;
      }
    }
  }

  // Tangential approaches without a side change: refine local minima of the miss.
  for (int k = 0; k < kStarts; ++k) {
    const int prev = (k + kStarts - 1) % kStarts, next = (k + 1) % kStarts;
    if (!(hits[k].miss <= hits[prev].miss && hits[k].miss <= hits[next].miss)) continue;
    if (hits[k].miss < p.tolerance || hits[k].miss >= away_miss) continue;
    const double step = 2.0 * std::numbers::pi / kStarts;
    double a = angles[k] - step, b = angles[k] + step;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a), d = a + g * (b - a);
    RayHit hc = shooter.shoot(direction_from_angle(c)), hd = shooter.shoot(direction_from_angle(d));
    for (int it = 0; it < p.max_iterations && std::abs(b - a) > 1e-13; ++it) {
      if (hc.miss < hd.miss) {
        b = d;
        d = c;
        hd = std::move(hc);
        c = b - g * (b - a);
        hc = shooter.shoot(direction_from_angle(c));
      } else {
        a = c;
        c = d;
        hc = std::move(hd);
        d = a + g * (b - a);
        hd = shooter.shoot(direction_from_angle(d));
      }
      if (std::min(hc.miss, hd.miss) < p.tolerance) break;
    }
    keep_best(best, hc.miss < hd.miss ? std::move(hc) : std::move(hd), p.tolerance);
  }
  return best;
}

std::optional<ShootingResult> shoot_nd(const RayShooter& shooter, const ShootingProblem& p, int n) {
  std::optional<ShootingResult> best;
  const double away_miss = (p.target - p.start).norm() * (1.0 - 1e-12);
  std::vector<Vec> starts{(p.target - p.start).normalized()};
  for (const Vec& d : unit_directions(n, 16)) starts.push_back(d);
  auto miss = [&](const Vec& d) { return shooter.shoot(d.normalized()).miss; };
  for (const Vec& s0 : starts) {
    if (n == 1) {
      keep_best(best, shooter.shoot(s0), p.tolerance);
      continue;
    }
    // Nelder-Mead on the unnormalized direction.
    std::vector<Vec> simplex{s0};
    for (int i = 0; i < n; ++i) {
      Vec e = s0;
      e[i] += 0.2;
      simplex.push_back(e);
    }
    std::vector<double> vals;
    for (const Vec& s : simplex) vals.push_back(miss(s));
    for (int it = 0; it < p.max_iterations * 4; ++it) {
      std::vector<size_t> order(simplex.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return vals[a] < vals[b]; });
      std::vector<Vec> s2;
      std::vector<double> v2;
      for (size_t i : order) {
        s2.push_back(simplex[i]);
        v2.push_back(vals[i]);
      }
      simplex = std::move(s2);
      vals = std::move(v2);
      if (vals.front() < p.tolerance || vals.front() >= away_miss) break;
      double spread = 0.0;
      for (const Vec& s : simplex) spread = std::max(spread, (s - simplex.front()).norm());
      if (spread < 1e-12 * simplex.front().norm()) break;
      Vec centroid = Vec::Zero(n);
      for (int i = 0; i < n; ++i) centroid += simplex[static_cast<size_t>(i)];
      centroid /= n;
      const Vec worst = simplex.back();
      const Vec refl = centroid + (centroid - worst);
      const double fr = miss(refl);
      if (fr < vals.front()) {
        const Vec exp = centroid + 2.0 * (centroid - worst);
        const double fe = miss(exp);
        if (fe < fr) simplex.back() = exp, vals.back() = fe;
        else simplex.back() = refl, vals.back() = fr;
      } else if (fr < vals[vals.size() - 2]) {
        simplex.back() = refl;
        vals.back() = fr;
      } else {
        const Vec con = centroid + 0.5 * (worst - centroid);
        const double fc = miss(con);
        if (fc < vals.back()) {
          simplex.back() = con;
          vals.back() = fc;
        } else {
          for (size_t i = 1; i < simplex.size(); ++i) {
            simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
            vals[i] = miss(simplex[i]);
          }
        }
      }
    }
    keep_best(best, shooter.shoot(simplex.front().normalized()), p.tolerance);
  }
  return best;
}

}  // namespace

std::optional<ShootingResult> shoot_to_target(const FinslerField& field, const ShootingProblem& p) {
  field.require_in_chart(p.start);
  field.require_in_chart(p.target);
  const Vec chord = p.target - p.start;
  if (chord.isZero(0.0)) {
    ShootingResult r;
    TrajectorySample smp;
    smp.event = {0.0, p.start};
    smp.tangent = {0.0, Vec::Zero(p.start.size())};
    r.trajectory.samples.push_back(smp);
    r.trajectory.base_only = true;
    return r;
  }
  const double chord_length = field.norm(0.5 * (p.start + p.target), chord);
  const RayShooter shooter(field, p, 2.0 * chord_length);
  if (field.dim() == 2) return shoot_2d(shooter, p);
  return shoot_nd(shooter, p, field.dim());
}

std::optional<ShootingResult> shoot_to_target(const StaticSpacetime& st, const ShootingProblem& p) {
  return shoot_to_target(st.base().optical(), p);
}

}  // namespace sfst
