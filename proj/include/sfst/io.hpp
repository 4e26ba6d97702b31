#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "sfst/causality.hpp"
#include "sfst/geodesics.hpp"
#include "sfst/spacetime.hpp"

namespace sfst {

/// %.17g, so that CSV output round-trips and is byte-stable.
std::string format_double(double v);

nlohmann::json vec_json(const Vec& v);
nlohmann::json tangent_json(const Tangent& w);
nlohmann::json to_json(const CausalClass& c);
nlohmann::json to_json(const ConvexityReport& r);
nlohmann::json to_json(const ChronoResult& r);
nlohmann::json to_json(const SimplicityReport& r);
nlohmann::json to_json(const HyperbolicityReport& r);
nlohmann::json to_json(const CompletenessReport& r);
nlohmann::json to_json(const CauchyGraphReport& r);

/// Columns s, t, x1..xn, tau, v1..vn, L, k, residual.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// Columns x1, x2, value (one row per node; unreachable nodes print inf).
void write_distance_csv(std::ostream& out, const DistanceField& field);

}  // namespace sfst
