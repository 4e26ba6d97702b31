#pragma once

// Standard static Finsler spacetimes R x M with L = -Lambda tau^2 + F^2(v),
// and the SSTK extension L = -Lambda tau^2 + 2 tau omega(v) + F^2(v).

#include <optional>
#include <string_view>
#include <vector>

#include "sfst/finsler_field.hpp"

namespace sfst {

inline constexpr double kClassTol = 1e-9;
inline constexpr double kCriticalLambda = 1e-12;

enum class SpacetimeMode { Static, Sstk };

class StaticSpacetime {
 public:
  /// Static mode; Lambda must be positive (enforced by the field policy).
  static StaticSpacetime make_static(FinslerField base);
  /// SSTK mode; requires Lambda(x) + ||omega||_x > 0 at every sample point.
  static StaticSpacetime make_sstk(FinslerField base, std::vector<ScalarField> omega,
                                   int samples_per_axis = 9);

  SpacetimeMode mode() const { return mode_; }
  const FinslerField& base() const { return base_; }
  int dim() const { return base_.dim(); }

  double lambda(const Vec& x) const { return base_.lambda(x); }
  /// omega_x as a covector; zero in Static mode.
  Vec omega(const Vec& x) const;

 private:
  StaticSpacetime(FinslerField base, SpacetimeMode mode, std::vector<ScalarField> omega)
      : base_(std::move(base)), mode_(mode), omega_(std::move(omega)) {}

  FinslerField base_;
  SpacetimeMode mode_;
  std::vector<ScalarField> omega_;
};

enum class CausalKind { Timelike, Lightlike, CausalBoundary, Spacelike, Zero };
enum class Orientation { Future, Past, None };

struct CausalClass {
  CausalKind kind = CausalKind::Zero;
  Orientation orientation = Orientation::None;
  double lagrangian = 0.0;
};

std::string_view to_string(CausalKind kind);
std::string_view to_string(Orientation orientation);

/// L at (x, w). t never enters: d/dt is Killing. Throws OutsideChart.
double eval_L(const StaticSpacetime& st, const Vec& x, const Tangent& w);

/// [[-Lambda, omega^T], [omega, g_v]]. Throws OnExceptionalBundle if v = 0.
Mat spacetime_tensor(const StaticSpacetime& st, const Vec& x, const Tangent& w);

CausalClass classify(const StaticSpacetime& st, const Vec& x, const Tangent& w,
                     double class_tol = kClassTol);

/// Left minus right side of the reverse Cauchy-Schwarz inequality
/// -1/2 dL/dv~(v~) w~ >= sqrt(-L(v~)) sqrt(-L(w~)). Static mode only.
/// Throws NotCausal unless both tangents are future-pointing causal.
double reverse_cs_gap(const StaticSpacetime& st, const Vec& x, const Tangent& v,
                      const Tangent& w, double class_tol = kClassTol);

struct ConeSample {
  Vec v;
  double tau = 0.0;
  bool critical_region = false;
};

/// Future light-cone boundary tau(v) over the given directions.
/// Throws NoFutureRoot for SSTK directions outside the cone structure.
std::vector<ConeSample> cone_boundary(const StaticSpacetime& st, const Vec& x,
                                      const std::vector<Vec>& directions);

struct Chord {
  Tangent a;
  Tangent b;
  Tangent midpoint;
  double midpoint_boundary = 0.0;  // boundary tau at the midpoint's v
};

struct ConvexityReport {
  bool convex = true;
  std::optional<Chord> witness;
  int chords_tested = 0;
  double worst_violation = 0.0;
};

inline constexpr double kConvTol = 1e-9;

/// Samples chords between future-pointing causal vectors and checks that all
/// convex combinations stay causal. chord_samples >= 100.
ConvexityReport cone_convexity_check(const StaticSpacetime& st, const Vec& x, int chord_samples,
                                     unsigned seed = 42);

struct JcConvexityReport {
  bool strictly_convex = true;
  bool chords_ok = true;
  bool hessian_ok = true;
  double min_hessian_eigenvalue = 0.0;
  /// max entrywise |closed-form Hessian - numeric Hessian of sqrt(G + alpha)|.
  double hessian_formula_error = 0.0;
};

/// Strict convexity of J(c) = {tau >= sqrt(G(v) + c/Lambda)}, G = F~^2, by
/// chord sampling and by positivity of the closed-form fiberwise Hessian.
JcConvexityReport jc_convexity_check(const StaticSpacetime& st, const Vec& x, double c,
                                     int samples, unsigned seed = 42);

/// Closed-form fiberwise Hessian of sqrt(G + alpha) at v != 0.
Mat jc_hessian(const NormSpec& optical_norm, const Vec& v, double alpha);

/// min over unit v of sqrt(omega g_v^-1 omega^T). SSTK mode only.
double omega_norm(const StaticSpacetime& st, const Vec& x, int outer_samples = 720);

struct ConicMetrics {
  std::optional<double> f_o;
  std::optional<double> f_o_l;
  double radicand = 0.0;
  bool critical_region = false;
};

ConicMetrics conic_metrics(const StaticSpacetime& st, const Vec& x, const Vec& v);

/// Half-angles (degrees) from {10, 1, 0.1} for which every sampled w in the
/// punctured cone around d/dt has g~_w(w, w) < 0. Empty when none passes.
std::vector<double> exceptional_cone_angles(const StaticSpacetime& st, const Vec& x,
                                            int directions = 64);

}  // namespace sfst
