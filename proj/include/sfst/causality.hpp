#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sfst/geodesics.hpp"
#include "sfst/grid.hpp"
#include "sfst/spacetime.hpp"

namespace sfst {

/// Grid over the optical field F~ = F / sqrt(Lambda) of a static spacetime.
std::shared_ptr<const Grid> optical_grid(const StaticSpacetime& st, int cells, int stencil_radius = 2);

/// Nodes with distance < r (open ball); `closed` uses <= r + half a cell.
std::vector<int> ball(std::shared_ptr<const Grid> grid, const Vec& x0, double r, Direction direction,
                      bool closed = false);

struct ChronoResult {
  bool chronological = false;
  bool causal_assuming_simplicity = false;
  double margin = 0.0;
  double distance = 0.0;
  double grid_tol = 0.0;
};

/// Tolerance of a grid distance d measured from x: stencil bias times d plus
/// the node-snapping error of both endpoints.
double grid_tolerance(const Grid& grid, const Vec& x, double d);

/// Chronological / causal queries on an optical grid, caching one forward
/// distance field per source node.
class ChronoOracle {
 public:
  explicit ChronoOracle(std::shared_ptr<const Grid> grid) : grid_(std::move(grid)) {}
  ChronoResult related(const Event& p, const Event& q);
  const DistanceField& forward_from(const Vec& x);
  const Grid& grid() const { return *grid_; }

 private:
  std::shared_ptr<const Grid> grid_;
  std::map<int, DistanceField> cache_;
};

ChronoResult chrono_related(std::shared_ptr<const Grid> grid, const Event& p, const Event& q);

struct SimplicityFailure {
  Vec x;
  Vec y;
  std::optional<double> shooting_length;
  double grid_distance = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
};

struct SimplicityReport {
  bool all_minimizers_found = true;
  int pairs = 0;
  double worst_relative_gap = 0.0;
  std::vector<SimplicityFailure> failures;
};

/// Shooting on the optical field vs the grid distance for random node pairs;
/// a pair passes when |shooting - grid| <= max(2% d, 2 cells of F~).
SimplicityReport causal_simplicity_probe(const StaticSpacetime& st, std::shared_ptr<const Grid> grid,
                                         int pair_samples, unsigned seed = 42, double step = 5e-3);

struct HyperbolicityReport {
  bool compact_proxy = true;
  bool boundary_contact = false;
  int intersection_nodes = 0;
  std::optional<Vec> contact_point;
};

/// Closed-ball intersection B+(x, r) with B-(y, s) and its contact with the
/// chart margin or with masked nodes.
HyperbolicityReport global_hyperbolicity_probe(std::shared_ptr<const Grid> grid, const Vec& x, const Vec& y,
                                               double r, double s);

enum class ChartModel { WholePlane, Masked };

enum class RayOutcome { BudgetExhausted, ChartExit, EnteredMask };

struct RayRecord {
  Vec origin;
  Vec direction;
  bool forward = true;
  double length = 0.0;
  RayOutcome outcome = RayOutcome::BudgetExhausted;
};

struct CompletenessReport {
  bool forward_complete_proxy = true;
  bool backward_complete_proxy = true;
  int inconclusive_rays = 0;
  std::vector<RayRecord> escaping_rays;
};

/// Unit-speed geodesic rays of `field` from the quarter points of the chart;
/// a ray entering a masked hole with length below the budget is escaping.
/// Backward rays use the reverse metric. Chart exits are inconclusive.
CompletenessReport completeness_probe(const FinslerField& field, ChartModel model, int ray_samples,
                                      double length_budget, double step = 2e-3);

struct GraphViolation {
  Vec x;
  Vec v;
  std::string condition;
  double value = 0.0;
};

struct CauchyGraphReport {
  bool future_spacelike = true;
  bool spacelike = true;
  std::vector<GraphViolation> violations;
};

/// Direction sweep of F~(v) - df(v) > 0 and F^2(v) - Lambda (df(v))^2 / alpha^2 > 0.
CauchyGraphReport cauchy_graph_check(const StaticSpacetime& st, const ScalarField& f, double alpha,
                                     int samples_per_axis = 9, int angles = 720);

}  // namespace sfst
