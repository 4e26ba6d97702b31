#pragma once

#include <span>

#include "sfst/finsler_field.hpp"

namespace sfst {

/// The optical field F / sqrt(Lambda) with conformal factor 1.
FinslerField optical_field(const FinslerField& field);

/// Midpoint quadrature sum_k F_{mid}(x_{k+1} - x_k). Throws OutsideChart.
double curve_length(const FinslerField& field, std::span<const Vec> samples);

struct SubquadraticFit {
  bool fits = false;
  double c1 = 0.0;
  double c2 = 0.0;
  /// max over samples of |Lambda| - (c1 d^2 + c2)(1 + slack); <= 0 when fits.
  double worst_violation = 0.0;
  Vec worst_point;
};

inline constexpr double kSubquadraticSlack = 0.05;

/// Least-squares probe of |Lambda(x)| <= c1 d(xbar, x)^2 + c2 over a grid of
/// `cells_per_axis` cells, with d the forward grid distance of `field`.
SubquadraticFit subquadratic_probe(const ScalarField& lambda, const FinslerField& field,
                                   const Vec& basepoint, int cells_per_axis);

}  // namespace sfst
