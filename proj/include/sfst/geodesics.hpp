#pragma once

#include <optional>
#include <vector>

#include "sfst/spacetime.hpp"

namespace sfst {

struct TrajectorySample {
  double s = 0.0;
  Event event;
  Tangent tangent;
  /// Spacetime runs: L(w) and k = Lambda * theta_dot. Base runs: F^2(v) and F(v).
  double lagrangian = 0.0;
  double k = 0.0;
  double residual = 0.0;
};

enum class StopReason { Completed, ChartExit, MaskEntry };

struct Trajectory {
  std::vector<TrajectorySample> samples;
  StopReason stop = StopReason::Completed;
  bool base_only = false;

  double max_lagrangian_drift() const;
  double max_k_drift() const;
  double max_residual() const;
  std::vector<Vec> points() const;
};

inline constexpr double kDefaultStep = 1e-3;

/// Solves dF_x^2/dv(v) = q for v by damped Newton from `guess`, falling back
/// to bisection along the ray through the guess. Throws NewtonDivergence.
Vec invert_momentum(const FinslerField& field, const Vec& x, const Vec& q, const Vec& guess);

/// RK4 on (t, x, theta_dot, q). Static mode with a Finsler-function base only.
/// Stops at s_max or on leaving the domain (flagged in `stop`).
Trajectory integrate_spacetime_geodesic(const StaticSpacetime& st, const Event& start,
                                        const Tangent& w0, double s_max,
                                        double step = kDefaultStep);

/// RK4 on (x, q) for the Euler-Lagrange system of F^2 (constant F-speed).
Trajectory integrate_base_geodesic(const FinslerField& field, const Vec& x0, const Vec& v0,
                                   double s_max, double step = kDefaultStep);

/// Lifts a base curve to (theta, sigma) with theta = t0 + int F~(sigma').
/// `field` is the raw base field of `st`; tangents are (F~(v), v).
Trajectory fermat_lift(const StaticSpacetime& st, const Trajectory& base, double t0);

/// Reparametrizes a lifted curve so that Lambda(sigma) theta_dot is constant
/// (equal to its initial value), as required for spacetime geodesics.
Trajectory affine_reparametrize(const StaticSpacetime& st, const Trajectory& lifted);

/// Spacetime Euler-Lagrange residual per sample from the stored tangents,
/// differentiating the momenta along the (possibly non-uniform) samples.
std::vector<double> spacetime_el_residuals(const StaticSpacetime& st, const Trajectory& traj);

/// Hausdorff distance between the base images of two trajectories (polylines).
double hausdorff_distance(const std::vector<Vec>& a, const std::vector<Vec>& b);

struct ShootingProblem {
  Vec start;
  Vec target;
  double tolerance = 1e-6;
  int max_iterations = 60;
  double step = 5e-3;
};

struct ShootingResult {
  Trajectory trajectory;
  double length = 0.0;
  double endpoint_error = 0.0;
};

/// Multi-start shooting for a geodesic of `field` from start to target.
std::optional<ShootingResult> shoot_to_target(const FinslerField& field, const ShootingProblem& problem);
/// Shooting on the optical field of a static spacetime.
std::optional<ShootingResult> shoot_to_target(const StaticSpacetime& st, const ShootingProblem& problem);

struct VariationResult {
  double alpha = 0.0;
  double first_variation = 0.0;
  double constant_c = 0.0;
  double pairing = 0.0;
};

/// Builds the proper variation of a future-pointing causal piecewise-linear
/// curve (given by its event samples) that makes it timelike; returns alpha
/// and the finite-difference first variation of L, which should equal -alpha.
/// Throws IsGeodesic for lightlike pregeodesics and NotCausal for bad input.
VariationResult timelike_variation_probe(const StaticSpacetime& st, const Trajectory& curve);

}  // namespace sfst
