#include "sfst/causality.hpp"

#include "sfst/error.hpp"

namespace sfst {

std::shared_ptr<const Grid> optical_grid(const StaticSpacetime& st, int cells, int stencil_radius) {
  return std::make_shared<const Grid>(st.base().optical(), cells, stencil_radius);
}

std::vector<int> ball(std::shared_ptr<const Grid> grid, const Vec& x0, double r, Direction direction,
                      bool closed) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "ball radius must be positive");
  const DistanceField d = distance_field(grid, x0, direction);
  const double bound = closed ? r + grid->half_cell_length(x0) : r;
  std::vector<int> out;
  for (int k = 0; k < grid->node_count(); ++k) {
    const double v = d.at_node(k);
    if (closed ? v <= bound : v < bound) out.push_back(k);
  }
  return out;
}

double grid_tolerance(const Grid& grid, const Vec& x, double d) {
  return (grid.stencil_error_bound(x) - 1.0) * d + 3.0 * grid.half_cell_length(x);
}

const DistanceField& ChronoOracle::forward_from(const Vec& x) {
  const int node = grid_->nearest_node(x);
  auto it = cache_.find(node);
  if (it == cache_.end()) it = cache_.emplace(node, distance_field(grid_, grid_->point(node), Direction::Forward)).first;
  return it->second;
}

ChronoResult ChronoOracle::related(const Event& p, const Event& q) {
  grid_->field().require_in_chart(p.x);
  grid_->field().require_in_chart(q.x);
  ChronoResult out;
  out.distance = forward_from(p.x).at(q.x);
  out.margin = (q.t - p.t) - out.distance;
  out.grid_tol = std::isfinite(out.distance) ? grid_tolerance(*grid_, p.x, out.distance) : 0.0;
  out.chronological = out.margin > out.grid_tol;
  out.causal_assuming_simplicity = out.margin >= -out.grid_tol;
  return out;
}

ChronoResult chrono_related(std::shared_ptr<const Grid> grid, const Event& p, const Event& q) {
  ChronoOracle oracle(std::move(grid));
  return oracle.related(p, q);
}

}  // namespace sfst
