#pragma once

// Scene files: INI text with sections [chart], [norm], [lambda], [omega],
// [mask], [grid], [tolerances], [cauchy], [ladder].

#include <iosfwd>
#include <optional>
#include <string>

#include "sfst/causality.hpp"
#include "sfst/spacetime.hpp"

namespace sfst {

struct LadderSettings {
  ChartModel model = ChartModel::WholePlane;
  int pairs = 20;
  int rays = 16;
  double budget = 0.0;  // 0: twice the chart diameter
  std::optional<Vec> x, y;
  double r = 1.0, s = 1.0;
};

struct Scene {
  explicit Scene(StaticSpacetime st) : spacetime(std::move(st)) {}

  StaticSpacetime spacetime;
  int resolution = 200;
  int stencil_radius = 2;
  unsigned seed = 42;
  double step = 1e-3;
  double class_tol = kClassTol;
  std::optional<ScalarField> cauchy_f;
  std::optional<double> cauchy_alpha;
  LadderSettings ladder;
};

/// Parses a scalar field: const(c), poly(c:e1,e2; ...), radexp(a,k),
/// table(xlo,ylo,xhi,yhi,nx,ny; v00 v10 ...). A bare number is a constant.
ScalarField parse_scalar_field(const std::string& text, int dim);

/// Comma-separated numbers.
Vec parse_vector(const std::string& text);

/// Throws SceneError on syntax problems; module validation errors propagate.
Scene load_scene(std::istream& in);
Scene load_scene_file(const std::string& path);

}  // namespace sfst
