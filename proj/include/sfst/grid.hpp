#pragma once

// Directed shortest-path discretization of a Finsler distance on a 2-D chart.

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "sfst/finsler_field.hpp"

namespace sfst {

enum class Direction { Forward, Backward };

struct Edge {
  int to = 0;
  double weight = 0.0;
};

/// Node lattice with `cells` cells per axis (cells + 1 nodes) and a stencil
/// of all primitive integer offsets with coordinates in [-radius, radius].
/// Edge u -> u + o carries F_mid(h o), the field's norm at the edge midpoint.
class Grid {
 public:
  Grid(FinslerField field, int cells, int stencil_radius = 2);

  const FinslerField& field() const { return field_; }
  int cells() const { return cells_; }
  int nodes_per_axis() const { return cells_ + 1; }
  int node_count() const { return nodes_per_axis() * nodes_per_axis(); }
  int stencil_radius() const { return radius_; }
  const std::vector<std::array<int, 2>>& stencil() const { return stencil_; }
  const Vec& cell_size() const { return h_; }

  int index(int i, int j) const { return j * nodes_per_axis() + i; }
  std::array<int, 2> coords(int node) const {
    return {node % nodes_per_axis(), node / nodes_per_axis()};
  }
  Vec point(int node) const;
  /// Nearest node to x (x must lie in the chart).
  int nearest_node(const Vec& x) const;
  bool masked(int node) const { return masked_[static_cast<size_t>(node)]; }

  std::span<const Edge> out_edges(int node) const;
  std::span<const Edge> in_edges(int node) const;

  /// Worst ratio (a N(u) + b N(w)) / N(a u + b w) over angularly adjacent
  /// stencil generators u, w, for the norm N at x: the factor by which a
  /// straight segment can be overestimated by lattice paths.
  double stencil_error_bound(const Vec& x) const;
  double stencil_error_bound() const { return stencil_error_bound(field_.chart().center()); }

  /// Half a cell measured by the norm: 0.5 * max over unit axis offsets of F.
  double half_cell_length(const Vec& x) const;

 private:
  FinslerField field_;
  int cells_;
  int radius_;
  Vec h_;
  std::vector<std::array<int, 2>> stencil_;
  std::vector<bool> masked_;
  std::vector<int> out_start_, in_start_;
  std::vector<Edge> out_, in_;
};

/// Primitive offsets in [-radius, radius]^2 sorted by angle (16 for radius 2).
std::vector<std::array<int, 2>> primitive_stencil(int radius);

class DistanceField {
 public:
  DistanceField(std::shared_ptr<const Grid> grid, int source, Direction direction,
                std::vector<double> values)
      : grid_(std::move(grid)), source_(source), direction_(direction), values_(std::move(values)) {}

  const Grid& grid() const { return *grid_; }
  int source() const { return source_; }
  Direction direction() const { return direction_; }
  const std::vector<double>& values() const { return values_; }
  double at_node(int node) const { return values_[static_cast<size_t>(node)]; }
  /// Value at the node nearest x.
  double at(const Vec& x) const { return at_node(grid_->nearest_node(x)); }

 private:
  std::shared_ptr<const Grid> grid_;
  int source_;
  Direction direction_;
  std::vector<double> values_;
};

/// Label-setting single-source shortest paths; Backward runs on in-edges so
/// the value at y is d(y, source). Throws OutsideChart / InvalidArgument for
/// a source outside the chart or inside the mask.
DistanceField distance_field(std::shared_ptr<const Grid> grid, const Vec& source, Direction direction);

}  // namespace sfst
