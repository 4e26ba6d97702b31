#include "sfst/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "sfst/error.hpp"

namespace sfst {

Vec direction_from_angle(double angle) {
  Vec d(2);
  d << std::cos(angle), std::sin(angle);
  return d;
}

std::vector<Vec> unit_directions(int dim, int count) {
  if (dim < 1 || count < 1) {
    throw Error(ErrorCode::InvalidArgument, "unit_directions needs dim >= 1 and count >= 1");
  }
  std::vector<Vec> out;
  out.reserve(static_cast<size_t>(count));
  if (dim == 1) {
    for (int i = 0; i < count; ++i) out.push_back(Vec::Constant(1, i % 2 == 0 ? 1.0 : -1.0));
    return out;
  }
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      out.push_back(direction_from_angle(2.0 * std::numbers::pi * i / count));
    }
    return out;
  }
  if (dim == 3) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec d(3);
      d << r * std::cos(golden * i), r * std::sin(golden * i), z;
      out.push_back(d);
    }
    return out;
  }
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  for (int i = 0; i < count; ++i) {
    Vec d(dim);
    for (int k = 0; k < dim; ++k) d[k] = normal(rng);
    out.push_back(d.normalized());
  }
  return out;
}

double golden_section_argmax(const std::function<double(double)>& f, double lo,
                             double hi, double tol, int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

namespace {

// Pattern search on the sphere: perturb along tangent directions with a
// shrinking step, keeping the best point.
SphereExtremum refine_on_sphere(const std::function<double(const Vec&)>& f,
                                SphereExtremum best, double step) {
  const int dim = static_cast<int>(best.direction.size());
  while (step > 1e-12) {
    bool improved = false;
    for (int k = 0; k < dim; ++k) {
      for (double sign : {1.0, -1.0}) {
        Vec trial = best.direction;
        trial[k] += sign * step;
        trial.normalize();
        const double value = f(trial);
        if (value > best.value) {
          best = {value, trial};
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace

SphereExtremum maximize_on_sphere(const std::function<double(const Vec&)>& f,
                                  int dim, int samples) {
  const auto dirs = unit_directions(dim, samples);
  SphereExtremum best{-std::numeric_limits<double>::infinity(), dirs.front()};
  size_t best_index = 0;
  for (size_t i = 0; i < dirs.size(); ++i) {
    const double value = f(dirs[i]);
    if (value > best.value) {
      best = {value, dirs[i]};
      best_index = i;
    }
  }
  if (dim == 1) return best;
  if (dim == 2) {
    const double spacing = 2.0 * std::numbers::pi / samples;
    const double center = 2.0 * std::numbers::pi * static_cast<double>(best_index) / samples;
    const double angle = golden_section_argmax(
        [&](double a) { return f(direction_from_angle(a)); }, center - spacing,
        center + spacing);
    const Vec dir = direction_from_angle(angle);
    const double value = f(dir);
    if (value > best.value) best = {value, dir};
    return best;
  }
  return refine_on_sphere(f, best, 2.0 / std::sqrt(static_cast<double>(samples)));
}

SphereExtremum minimize_on_sphere(const std::function<double(const Vec&)>& f,
                                  int dim, int samples) {
  auto result = maximize_on_sphere([&](const Vec& v) { return -f(v); }, dim, samples);
  result.value = -result.value;
  return result;
}

}  // namespace sfst
