#pragma once

#include <functional>
#include <vector>

#include "sfst/types.hpp"

namespace sfst {

/// Deterministic unit directions in R^dim: both signs in 1D, a uniform angle
/// grid in 2D, a Fibonacci sphere in 3D and seeded Gaussian samples above.
std::vector<Vec> unit_directions(int dim, int count);

Vec direction_from_angle(double angle);

/// Argmax of a unimodal function on [lo, hi].
double golden_section_argmax(const std::function<double(double)>& f, double lo,
                             double hi, double tol = 1e-12, int max_iter = 200);

struct SphereExtremum {
  double value = 0.0;
  Vec direction;
};

/// Maximizes f over the unit sphere: grid of `samples` directions, then local
/// refinement around the best grid point.
SphereExtremum maximize_on_sphere(const std::function<double(const Vec&)>& f,
                                  int dim, int samples);

SphereExtremum minimize_on_sphere(const std::function<double(const Vec&)>& f,
                                  int dim, int samples);

}  // namespace sfst
