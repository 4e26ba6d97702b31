#pragma once

#include <variant>
#include <vector>

#include "sfst/types.hpp"

namespace sfst {

/// Rectangular chart [lo_i, hi_i] with a boundary margin.
struct Chart {
  Vec lo;
  Vec hi;
  double margin = 0.0;

  /// Throws InvalidArgument when lo >= hi or the margin is too large.
  static Chart make(Vec lo, Vec hi, double margin);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& x) const;
  /// Euclidean distance from x to the chart boundary (0 outside).
  double boundary_distance(const Vec& x) const;
  double diameter() const { return (hi - lo).norm(); }
  Vec center() const { return 0.5 * (lo + hi); }
};

/// Union of closed Euclidean disks standing in for deleted points of M.
struct Mask {
  struct Disk {
    Vec center;
    double radius = 0.0;
  };
  std::vector<Disk> disks;

  bool empty() const { return disks.empty(); }
  bool contains(const Vec& x) const;
};

struct Monomial {
  double coefficient = 0.0;
  std::vector<int> exponents;
};

/// Bilinear table on a 2-D rectangle; values are row-major with x1 fastest.
struct GridTable {
  Vec lo;
  Vec hi;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;
};

class ScalarField {
 public:
  struct Constant {
    double c = 0.0;
  };
  struct Polynomial {
    std::vector<Monomial> terms;
  };
  /// a * exp(k |x|^2)
  struct RadialExp {
    double a = 1.0;
    double k = 0.0;
  };
  using Variant = std::variant<Constant, Polynomial, RadialExp, GridTable>;

  ScalarField() : variant_(Constant{0.0}) {}

  static ScalarField constant(double c);
  /// Total degree of every term must be at most 4.
  static ScalarField polynomial(std::vector<Monomial> terms);
  static ScalarField radial_exp(double a, double k);
  static ScalarField grid_table(GridTable table);

  double value(const Vec& x) const;
  Vec gradient(const Vec& x) const;

  const Variant& variant() const { return variant_; }
  bool is_constant() const { return std::holds_alternative<Constant>(variant_); }

 private:
  explicit ScalarField(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

}  // namespace sfst
