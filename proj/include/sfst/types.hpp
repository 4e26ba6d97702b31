#pragma once

#include <Eigen/Dense>

namespace sfst {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Event (t, x) of the product R x M.
struct Event {
  double t = 0.0;
  Vec x;
};

/// Tangent vector (tau, v) at an event; tau is the d/dt component.
struct Tangent {
  double tau = 0.0;
  Vec v;
};

}  // namespace sfst
