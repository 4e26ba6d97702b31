#include "sfst/base_manifold.hpp"

#include <cmath>

#include "sfst/error.hpp"
#include "sfst/grid.hpp"

namespace sfst {

FinslerField optical_field(const FinslerField& field) { return field.optical(); }

double curve_length(const FinslerField& field, std::span<const Vec> samples) {
  if (samples.size() < 2) throw Error(ErrorCode::InvalidArgument, "curve_length needs at least 2 samples");
  for (const Vec& x : samples) field.require_in_chart(x);
  double total = 0.0;
  for (size_t k = 0; k + 1 < samples.size(); ++k) {
    const Vec mid = 0.5 * (samples[k] + samples[k + 1]);
    total += field.norm(mid, samples[k + 1] - samples[k]);
  }
  return total;
}

SubquadraticFit subquadratic_probe(const ScalarField& lambda, const FinslerField& field,
                                   const Vec& basepoint, int cells_per_axis) {
  field.require_in_chart(basepoint);
  auto grid = std::make_shared<const Grid>(field, cells_per_axis);
  const DistanceField dist = distance_field(grid, basepoint, Direction::Forward);

  std::vector<double> d2, y;
  std::vector<Vec> pts;
  for (int k = 0; k < grid->node_count(); ++k) {
    const double d = dist.at_node(k);
    if (!std::isfinite(d)) continue;
    pts.push_back(grid->point(k));
    d2.push_back(d * d);
    y.push_back(std::abs(lambda.value(pts.back())));
  }

  // Nonnegative least squares for y ~ c1 d^2 + c2 (two unknowns: check the
  // unconstrained solution, else the two single-variable faces).
  const double n = static_cast<double>(y.size());
  double sx = 0, sxx = 0, sy = 0, sxy = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    sx += d2[i];
    sxx += d2[i] * d2[i];
    sy += y[i];
    sxy += d2[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  double c1 = 0.0, c2 = sy / n;
  if (det > 1e-12 * n * sxx) {
    const double u1 = (n * sxy - sx * sy) / det;
    const double u2 = (sy - u1 * sx) / n;
    if (u1 >= 0.0 && u2 >= 0.0) {
      c1 = u1;
      c2 = u2;
    } else {
      auto sse = [&](double a, double b) {
        double s = 0;
        for (size_t i = 0; i < y.size(); ++i) s += std::pow(y[i] - a * d2[i] - b, 2);
        return s;
      };
      const double only_c1 = sxx > 0 ? sxy / sxx : 0.0;
      if (sse(only_c1, 0.0) < sse(0.0, sy / n)) {
        c1 = only_c1;
        c2 = 0.0;
      }
    }
  }
  if (std::abs(c1) < 1e-12 * std::max(1.0, c2)) c1 = 0.0;

  SubquadraticFit fit;
  fit.c1 = c1;
  fit.c2 = c2;
  fit.worst_violation = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < y.size(); ++i) {
    const double v = y[i] - (c1 * d2[i] + c2) * (1.0 + kSubquadraticSlack);
    if (v > fit.worst_violation) {
      fit.worst_violation = v;
      fit.worst_point = pts[i];
    }
  }
  fit.fits = fit.worst_violation <= 0.0;
  return fit;
}

}  // namespace sfst
