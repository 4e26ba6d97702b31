#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "sfst/base_manifold.hpp"
#include "sfst/error.hpp"
#include "sfst/geodesics.hpp"

using namespace sfst;

namespace {

Vec v2(double a, double b) { return Vec{{a, b}}; }
Chart square(double r) { return Chart::make(v2(-r, -r), v2(r, r), 0.05); }
ScalarField one_plus_x1sq() { return ScalarField::polynomial({{1.0, {0, 0}}, {1.0, {2, 0}}}); }

FinslerField euclid_field(double r = 3, ScalarField lambda = ScalarField::constant(1.0)) {
  return FinslerField(square(r), NormField::constant(NormSpec::quadratic(Mat::Identity(2, 2))), lambda);
}

StaticSpacetime st_of(FinslerField f) { return StaticSpacetime::make_static(std::move(f)); }

Trajectory polyline(const std::vector<std::pair<double, Vec>>& events, int per_segment) {
  Trajectory t;
  double s = 0;
  for (size_t k = 0; k + 1 < events.size(); ++k) {
    for (int i = (k == 0 ? 0 : 1); i <= per_segment; ++i) {
      const double u = static_cast<double>(i) / per_segment;
      TrajectorySample smp;
      smp.s = s + u;
      smp.event = {(1 - u) * events[k].first + u * events[k + 1].first, (1 - u) * events[k].second + u * events[k + 1].second};
      t.samples.push_back(smp);
    }
    s += 1;
  }
  return t;
}

}  // namespace

TEST(SpacetimeGeodesic, FlatLightRay) {
  const auto st = st_of(euclid_field());
  const Trajectory t = integrate_spacetime_geodesic(st, {0, v2(0, 0)}, {1, v2(1, 0)}, 1.0, 1e-3);
  ASSERT_EQ(t.stop, StopReason::Completed);
  for (const auto& s : t.samples) {
    EXPECT_NEAR(s.event.x[0], s.s, 1e-12);
    EXPECT_EQ(s.event.x[1], 0.0);
    EXPECT_NEAR(s.event.t, s.s, 1e-12);
    EXPECT_EQ(s.k, 1.0);
    EXPECT_EQ(s.lagrangian, 0.0);
  }
}

TEST(SpacetimeGeodesic, StaticLine) {
  const auto st = st_of(euclid_field(3, one_plus_x1sq()));
  const Trajectory t = integrate_spacetime_geodesic(st, {0, v2(0, 0)}, {1, v2(0, 0)}, 1.0, 1e-3);
  for (const auto& s : t.samples) {
    EXPECT_EQ(s.event.x, v2(0, 0));
    EXPECT_NEAR(s.event.t, s.s, 1e-12);
  }
  EXPECT_LT(t.max_residual(), 1e-10);
  // Off the critical point of Lambda the static line is not a geodesic.
  EXPECT_THROW(integrate_spacetime_geodesic(st, {0, v2(1, 0)}, {1, v2(0, 0)}, 1.0, 1e-3), Error);
}

TEST(SpacetimeGeodesic, Conservation) {
  const auto st = st_of(euclid_field(3, one_plus_x1sq()));
  const Trajectory t = integrate_spacetime_geodesic(st, {0, v2(0, 0)}, {1, v2(1, 0)}, 1.0, 1e-3);
  EXPECT_LT(t.max_k_drift(), 1e-8);
  EXPECT_LT(t.max_lagrangian_drift(), 1e-7);
  EXPECT_LT(t.max_residual(), 1e-5);
}

TEST(SpacetimeGeodesic, ChartExitIsFlagged) {
  const auto st = st_of(euclid_field(1));
  const Trajectory t = integrate_spacetime_geodesic(st, {0, v2(0, 0)}, {2, v2(1, 0)}, 5.0, 1e-2);
  EXPECT_EQ(t.stop, StopReason::ChartExit);
  EXPECT_LE(t.samples.back().event.x[0], 1.0);
}

TEST(SpacetimeGeodesic, RejectsUnsupportedInputs) {
  const auto fig = st_of(FinslerField(square(1), NormField::constant(NormSpec::figure_one()), ScalarField::constant(1.0)));
  try {
    integrate_spacetime_geodesic(fig, {0, v2(0, 0)}, {1, v2(1, 0)}, 1.0, 1e-3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAFinslerFunction);
  }
  const auto st = st_of(euclid_field());
  EXPECT_THROW(integrate_spacetime_geodesic(st, {0, v2(0, 0)}, {0, v2(0, 0)}, 1.0, 1e-3), Error);
}

TEST(SpacetimeGeodesic, ReparametrizationHalvesTheSpan) {
  const auto st = st_of(euclid_field(3, one_plus_x1sq()));
  const Tangent w{1.2, v2(0.8, 0.3)};
  const Trajectory a = integrate_spacetime_geodesic(st, {0, v2(-0.5, 0.1)}, w, 1.0, 1e-3);
  const Trajectory b = integrate_spacetime_geodesic(st, {0, v2(-0.5, 0.1)}, {2 * w.tau, 2 * w.v}, 0.5, 5e-4);
  EXPECT_LT(hausdorff_distance(a.points(), b.points()), 1e-8);
  EXPECT_NEAR(a.samples.back().event.t, b.samples.back().event.t, 1e-10);
}

TEST(MomentumInversion, RoundTripRandomRanders) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0, 0.9);
  for (int i = 0; i < 1000; ++i) {
    Mat m(2, 2);
    m << g(rng), g(rng), g(rng), g(rng);
    const Mat a = m * m.transpose() + 0.3 * Mat::Identity(2, 2);
    Vec b = v2(g(rng), g(rng));
    b *= u(rng) / std::sqrt(b.dot(a.ldlt().solve(b)));
    const FinslerField f(square(1), NormField::constant(NormSpec::randers(a, b)), ScalarField::constant(1.0));
    const Vec v = v2(g(rng), g(rng));
    const Vec guess = v + 0.3 * v2(g(rng), g(rng));
    const Vec back = invert_momentum(f, v2(0, 0), f.momentum(v2(0, 0), v), guess);
    EXPECT_LT((back - v).norm(), 1e-9 * std::max(1.0, v.norm()));
  }
}

TEST(BaseGeodesic, StraightLines) {
  const Trajectory e = integrate_base_geodesic(euclid_field(), v2(0, 0), v2(0.6, 0.8), 1.0, 1e-3);
  for (const auto& s : e.samples) {
    EXPECT_NEAR(s.event.x[0], 0.6 * s.s, 1e-12);
    EXPECT_NEAR(s.event.x[1], 0.8 * s.s, 1e-12);
    EXPECT_NEAR(s.k, 1.0, 1e-14);
  }
  const FinslerField r(square(3), NormField::constant(NormSpec::randers(Mat::Identity(2, 2), v2(0.5, 0))), ScalarField::constant(1.0));
  const Trajectory t = integrate_base_geodesic(r, v2(0, 0), v2(0.3, 1.0), 1.0, 1e-3);
  double line_err = 0.0;
  for (const auto& s : t.samples) line_err = std::max(line_err, std::abs(s.event.x[0] * 1.0 - s.event.x[1] * 0.3));
  EXPECT_LT(line_err, 1e-12);
  double drift = 0.0;
  for (const auto& s : t.samples) drift = std::max(drift, std::abs(s.k - t.samples.front().k));
  EXPECT_LT(drift, 1e-9);
}

TEST(BaseGeodesic, OpticalBendsAwayFromHighLambdaAndIsShorterThanChord) {
  const FinslerField opt = optical_field(euclid_field(3, one_plus_x1sq()));
  // Refractive index 1 / sqrt(Lambda) is largest on the x2-axis; a ray started
  // parallel to it at x1 = 0.5 curves back toward it.
  const Trajectory t = integrate_base_geodesic(opt, v2(0.5, -1), v2(0, 1), 1.0, 1e-3);
  EXPECT_LT(t.samples.back().event.x[0], 0.5);
  const auto pts = t.points();
  const double along = curve_length(opt, pts);
  std::vector<Vec> chord;
  for (int i = 0; i <= 2000; ++i) chord.push_back(pts.front() + (pts.back() - pts.front()) * (i / 2000.0));
  EXPECT_LE(along, curve_length(opt, chord) + 1e-4);
}

TEST(FermatLift, Examples) {
  const auto st1 = st_of(euclid_field());
  const Trajectory line = integrate_base_geodesic(euclid_field(), v2(0, 0), v2(1, 0), 1.0, 1e-2);
  const Trajectory lift = fermat_lift(st1, line, 0.0);
  for (const auto& s : lift.samples) {
    EXPECT_NEAR(s.event.t, s.s, 1e-12);
    EXPECT_EQ(classify(st1, s.event.x, s.tangent).kind, CausalKind::Lightlike);
    EXPECT_EQ(classify(st1, s.event.x, s.tangent).orientation, Orientation::Future);
  }
  const auto st4 = st_of(euclid_field(3, ScalarField::constant(4.0)));
  const Trajectory lift4 = fermat_lift(st4, line, 0.0);
  for (const auto& s : lift4.samples) EXPECT_NEAR(s.event.t, s.s / 2, 1e-12);
}

TEST(FermatLift, LiftedOpticalGeodesicSolvesSpacetimeEquations) {
  const auto st = st_of(euclid_field(3, one_plus_x1sq()));
  const FinslerField opt = st.base().optical();
  const Vec x0 = v2(-0.5, 0.2), v0 = v2(1, 0.3);
  const Trajectory og = integrate_base_geodesic(opt, x0, v0 / opt.norm(x0, v0), 1.0, 1e-3);
  const Trajectory lifted = affine_reparametrize(st, fermat_lift(st, og, 0.0));
  EXPECT_LT(lifted.max_residual(), 1e-5);
  EXPECT_LT(lifted.max_k_drift(), 1e-12);
  for (const auto& s : lifted.samples) EXPECT_EQ(classify(st, s.event.x, s.tangent).kind, CausalKind::Lightlike);
}

TEST(FermatLift, ProjectedLightRayIsOpticalGeodesic) {
  const auto st = st_of(euclid_field(3, one_plus_x1sq()));
  const FinslerField opt = st.base().optical();
  const Vec x0 = v2(-0.5, 0.2), v0 = v2(1, 0.3);
  const Trajectory sp = integrate_spacetime_geodesic(st, {0, x0}, {opt.norm(x0, v0), v0}, 1.0, 1e-3);
  const auto pts = sp.points();
  const Trajectory og = integrate_base_geodesic(opt, x0, v0 / opt.norm(x0, v0), curve_length(opt, pts), 1e-3);
  EXPECT_LT(hausdorff_distance(pts, og.points()), 1e-4);
}

TEST(Shooting, Examples) {
  const auto e = shoot_to_target(euclid_field(), {v2(0, 0), v2(1, 1)});
  ASSERT_TRUE(e);
  EXPECT_NEAR(e->length, std::sqrt(2.0), 1e-8);
  const FinslerField r(square(3), NormField::constant(NormSpec::randers(Mat::Identity(2, 2), v2(0.5, 0))), ScalarField::constant(1.0));
  const auto rs = shoot_to_target(r, {v2(0, 0), v2(1, 0)});
  ASSERT_TRUE(rs);
  EXPECT_NEAR(rs->length, 1.5, 1e-8);
  const auto back = shoot_to_target(r, {v2(1, 0), v2(0, 0)});
  ASSERT_TRUE(back);
  EXPECT_NEAR(back->length, 0.5, 1e-8);
}

TEST(Shooting, CurvedFieldBeatsTheChord) {
  const auto st = st_of(euclid_field(3, one_plus_x1sq()));
  const auto res = shoot_to_target(st, {v2(-1, 0), v2(1, 0)});
  ASSERT_TRUE(res);
  std::vector<Vec> chord;
  for (int i = 0; i <= 2000; ++i) chord.push_back(v2(-1 + 2.0 * i / 2000, 0));
  EXPECT_LE(res->length, curve_length(st.base().optical(), chord) + 1e-6);
  EXPECT_LT(res->endpoint_error, 1e-6);
}

TEST(Shooting, ThreeDimensional) {
  const Chart c = Chart::make(Vec::Constant(3, -2), Vec::Constant(3, 2), 0.05);
  const FinslerField f(c, NormField::constant(NormSpec::quadratic(Mat::Identity(3, 3))), ScalarField::constant(1.0));
  const auto res = shoot_to_target(f, {Vec::Zero(3), Vec{{0.5, -0.4, 0.3}}, 1e-6});
  ASSERT_TRUE(res);
  EXPECT_NEAR(res->length, std::sqrt(0.5), 1e-6);
}

TEST(TimelikeVariation, BrokenLightlikeCurve) {
  const auto st = st_of(euclid_field());
  const Trajectory curve = polyline({{0.0, v2(0, 0)}, {1.0, v2(1, 0)}, {2.0, v2(1, 1)}}, 200);
  const VariationResult r = timelike_variation_probe(st, curve);
  EXPECT_GT(r.alpha, 0.0);
  EXPECT_NEAR(r.first_variation, -r.alpha, 1e-4);
}

TEST(TimelikeVariation, StraightLightlikeLineIsGeodesic) {
  const auto st = st_of(euclid_field());
  const Trajectory curve = polyline({{0.0, v2(0, 0)}, {1.0, v2(1, 0)}}, 200);
  try {
    timelike_variation_probe(st, curve);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IsGeodesic);
  }
}

TEST(TimelikeVariation, TimelikeCornerAndCurvedLambda) {
  const auto flat = st_of(euclid_field());
  const Trajectory corner = polyline({{0.0, v2(0, 0)}, {2.0, v2(1, 0)}, {4.0, v2(1, 1)}}, 100);
  const VariationResult a = timelike_variation_probe(flat, corner);
  EXPECT_GT(a.alpha, 0.0);
  EXPECT_NEAR(a.first_variation, -a.alpha, 1e-4);

  const auto curved = st_of(euclid_field(3, one_plus_x1sq()));
  const Trajectory c2 = polyline({{0.0, v2(0, 0)}, {1.5, v2(1, 0)}, {3.0, v2(1, 1)}}, 150);
  const VariationResult b = timelike_variation_probe(curved, c2);
  EXPECT_GT(b.alpha, 0.0);
  EXPECT_NEAR(b.first_variation, -b.alpha, 1e-4);
}

TEST(TimelikeVariation, RejectsSpacelikeCurves) {
  const auto st = st_of(euclid_field());
  const Trajectory curve = polyline({{0.0, v2(0, 0)}, {0.5, v2(1, 0)}}, 10);
  try {
    timelike_variation_probe(st, curve);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotCausal);
  }
}
