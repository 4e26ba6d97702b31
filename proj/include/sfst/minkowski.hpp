#pragma once

// Minkowski norms on a single fiber R^n.

#include <functional>
#include <variant>

#include "sfst/types.hpp"

namespace sfst {

inline constexpr double kEigenTol = 1e-10;

struct QuadraticNorm {
  Mat a;  // symmetric positive definite
};

/// F(v) = sqrt(v^T A v) + b.v with the A-dual norm of b below 1.
struct RandersNorm {
  Mat a;
  Vec b;
};

/// F(v) = scale |v| exp(-2 v2^2/|v|^2) on R^2. Its tensor is the generalized
/// metric scale^2 exp(-4 v2^2/|v|^2) I, which is not the vertical Hessian of
/// any function; it is only meaningful for light-cone operations.
struct FigureOneNorm {
  double scale = 1.0;
};

class NormSpec {
 public:
  using Variant = std::variant<QuadraticNorm, RandersNorm, FigureOneNorm>;

  /// Validating constructors; throw InadmissibleNorm.
  static NormSpec quadratic(Mat a);
  static NormSpec randers(Mat a, Vec b);
  static NormSpec figure_one(double scale = 1.0);

  /// Skips validation. Used on hot paths where the coefficients were already
  /// checked at field construction.
  static NormSpec unchecked(Variant v);

  int dim() const;
  const Variant& variant() const { return variant_; }

  /// Norm of the same kind equal to s * F (s > 0).
  NormSpec scaled(double s) const;
  /// The reverse norm v -> F(-v).
  NormSpec reversed() const;

  bool is_finsler_function() const;
  bool is_quadratic() const { return std::holds_alternative<QuadraticNorm>(variant_); }

 private:
  explicit NormSpec(Variant v) : variant_(std::move(v)) {}
  Variant variant_;
};

/// How a derivative is obtained.
enum class DiffMethod {
  Auto,     // closed form where available
  Numeric,  // central finite differences
};

struct FundamentalTensor {
  Mat g;
  Vec at_vector;
};

double eval_norm(const NormSpec& spec, const Vec& v);

/// dF^2/dv at v != 0. Throws ZeroVector.
Vec momentum(const NormSpec& spec, const Vec& v, DiffMethod method = DiffMethod::Auto);

/// Half the vertical Hessian of F^2 (generalized metric for FigureOneNorm).
/// Throws ZeroVector, DegenerateTensor.
FundamentalTensor fundamental_tensor(const NormSpec& spec, const Vec& v,
                                     DiffMethod method = DiffMethod::Auto);

/// max_{ijk} |dg_ij/dv^k - dg_ik/dv^j| by central differences of the tensor.
double cartan_symmetry_residual(const NormSpec& spec, const Vec& v);

/// sup F(v)/F(-v) over a direction grid with local refinement. samples >= 8.
double reversibility_constant(const NormSpec& spec, int samples);

/// Dual norm of a covector in the inner product g: sqrt(w g^-1 w^T).
double dual_norm(const Mat& g, const Vec& covector);

namespace fd {

/// Central-difference gradient with step h.
Vec gradient(const std::function<double(const Vec&)>& f, const Vec& v, double h);
/// Central second differences with step h.
Mat hessian(const std::function<double(const Vec&)>& f, const Vec& v, double h);

double gradient_step(const Vec& v);
double hessian_step(const Vec& v);

}  // namespace fd

}  // namespace sfst
