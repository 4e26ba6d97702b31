#pragma once

#include <vector>

#include "sfst/minkowski.hpp"
#include "sfst/scalar_field.hpp"

namespace sfst {

/// Point-dependent norm coefficients: A(x) entries and, for Randers, b(x).
struct NormField {
  enum class Kind { Quadratic, Randers, FigureOne };

  Kind kind = Kind::Quadratic;
  int dim = 0;
  std::vector<ScalarField> a;  // dim*dim, row-major; only i <= j entries are read
  std::vector<ScalarField> b;  // Randers only
  double figure_scale = 1.0;

  static NormField constant(const NormSpec& spec);
  bool is_constant() const;
};

enum class LambdaPolicy {
  Positive,  // static spacetimes
  AnySign,   // SSTK splittings
};

/// A Finsler structure on a chart: F_x from a NormField, scaled by
/// 1/sqrt(d_1(x) ... d_m(x)) for conformal divisors, plus a function Lambda.
class FinslerField {
 public:
  /// Validates Lambda positivity (per policy) and norm admissibility on a
  /// sample grid plus the chart corners, skipping masked points.
  FinslerField(Chart chart, NormField norm, ScalarField lambda, Mask mask = {},
               LambdaPolicy policy = LambdaPolicy::Positive, int samples_per_axis = 17);

  const Chart& chart() const { return chart_; }
  const Mask& mask() const { return mask_; }
  const NormField& norm_field() const { return norm_; }
  const ScalarField& lambda_field() const { return lambda_; }
  int dim() const { return chart_.dim(); }
  bool is_finsler_function() const { return norm_.kind != NormField::Kind::FigureOne; }
  bool is_reversed() const { return reversed_; }

  bool in_domain(const Vec& x) const { return chart_.contains(x) && !mask_.contains(x); }
  /// Throws OutsideChart naming the point.
  void require_in_chart(const Vec& x) const;

  NormSpec norm_at(const Vec& x) const;
  double norm(const Vec& x, const Vec& v) const;
  double norm_sq(const Vec& x, const Vec& v) const;
  /// dF_x^2/dv.
  Vec momentum(const Vec& x, const Vec& v) const;
  Mat tensor(const Vec& x, const Vec& v) const;
  /// dF_x^2(v)/dx at fixed v.
  Vec dx_norm_sq(const Vec& x, const Vec& v) const;

  double lambda(const Vec& x) const { return lambda_.value(x); }
  Vec grad_lambda(const Vec& x) const { return lambda_.gradient(x); }

  /// Field with norm F_x / sqrt(Lambda(x)) and Lambda = 1.
  FinslerField optical() const;
  /// Field with the reverse norm v -> F_x(-v).
  FinslerField reversed() const;

 private:
  FinslerField() = default;
  double conformal_sq(const Vec& x) const;
  Vec grad_conformal_sq(const Vec& x) const;

  Chart chart_;
  NormField norm_;
  ScalarField lambda_;
  Mask mask_;
  LambdaPolicy policy_ = LambdaPolicy::Positive;
  std::vector<ScalarField> divisors_;
  bool reversed_ = false;
};

/// Sample points used for admissibility checks: a regular grid plus corners.
std::vector<Vec> chart_samples(const Chart& chart, int samples_per_axis);

}  // namespace sfst
