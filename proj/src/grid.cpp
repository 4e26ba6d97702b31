#include "sfst/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "sfst/error.hpp"
#include "sfst/sampling.hpp"

namespace sfst {

std::vector<std::array<int, 2>> primitive_stencil(int radius) {
  if (radius < 1) throw Error(ErrorCode::InvalidArgument, "stencil radius must be >= 1");
  std::vector<std::array<int, 2>> out;
  for (int j = -radius; j <= radius; ++j)
    for (int i = -radius; i <= radius; ++i)
      if ((i != 0 || j != 0) && std::gcd(std::abs(i), std::abs(j)) == 1) out.push_back({i, j});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::atan2(a[1], a[0]) < std::atan2(b[1], b[0]);
  });
  return out;
}

Grid::Grid(FinslerField field, int cells, int stencil_radius)
    : field_(std::move(field)), cells_(cells), radius_(stencil_radius) {
  if (field_.dim() != 2) throw Error(ErrorCode::InvalidArgument, "distance grids are two-dimensional");
  if (cells < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 cells per axis");
  const Chart& chart = field_.chart();
  h_ = (chart.hi - chart.lo) / cells;
  stencil_ = primitive_stencil(stencil_radius);

  const int n = node_count();
  masked_.resize(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) masked_[static_cast<size_t>(k)] = field_.mask().contains(point(k));

  std::vector<std::vector<Edge>> in_lists(static_cast<size_t>(n));
  out_start_.assign(static_cast<size_t>(n) + 1, 0);
  out_.reserve(static_cast<size_t>(n) * stencil_.size());
  const int m = nodes_per_axis();
  for (int k = 0; k < n; ++k) {
    out_start_[static_cast<size_t>(k)] = static_cast<int>(out_.size());
    if (masked(k)) continue;
    const auto [i, j] = coords(k);
    const Vec x = point(k);
    for (const auto& o : stencil_) {
      const int ti = i + o[0], tj = j + o[1];
      if (ti < 0 || tj < 0 || ti >= m || tj >= m) continue;
      const int to = index(ti, tj);
      if (masked(to)) continue;
      const Vec step{{o[0] * h_[0], o[1] * h_[1]}};
      const Vec mid = x + 0.5 * step;
      if (field_.mask().contains(mid)) continue;
      const double w = field_.norm(mid, step);
      if (!(w > 0.0)) throw Error(ErrorCode::InvalidArgument, "non-positive edge weight");
      out_.push_back({to, w});
      in_lists[static_cast<size_t>(to)].push_back({k, w});
    }
  }
  out_start_[static_cast<size_t>(n)] = static_cast<int>(out_.size());
  in_start_.assign(static_cast<size_t>(n) + 1, 0);
  in_.reserve(out_.size());
  for (int k = 0; k < n; ++k) {
    in_start_[static_cast<size_t>(k)] = static_cast<int>(in_.size());
    in_.insert(in_.end(), in_lists[static_cast<size_t>(k)].begin(), in_lists[static_cast<size_t>(k)].end());
  }
  in_start_[static_cast<size_t>(n)] = static_cast<int>(in_.size());
}

Vec Grid::point(int node) const {
  const auto [i, j] = coords(node);
  const Chart& chart = field_.chart();
  Vec x(2);
  x[0] = i == cells_ ? chart.hi[0] : chart.lo[0] + i * h_[0];
  x[1] = j == cells_ ? chart.hi[1] : chart.lo[1] + j * h_[1];
  return x;
}

int Grid::nearest_node(const Vec& x) const {
  field_.require_in_chart(x);
  const Chart& chart = field_.chart();
  auto snap = [&](int axis) {
    const long r = std::lround((x[axis] - chart.lo[axis]) / h_[axis]);
    return static_cast<int>(std::clamp<long>(r, 0, cells_));
  };
  return index(snap(0), snap(1));
}

std::span<const Edge> Grid::out_edges(int node) const {
  const auto b = static_cast<size_t>(out_start_[static_cast<size_t>(node)]);
  const auto e = static_cast<size_t>(out_start_[static_cast<size_t>(node) + 1]);
  return {out_.data() + b, e - b};
}

std::span<const Edge> Grid::in_edges(int node) const {
  const auto b = static_cast<size_t>(in_start_[static_cast<size_t>(node)]);
  const auto e = static_cast<size_t>(in_start_[static_cast<size_t>(node) + 1]);
  return {in_.data() + b, e - b};
}

double Grid::stencil_error_bound(const Vec& x) const {
  const NormSpec norm = field_.norm_at(x);
  double worst = 1.0;
  const size_t k = stencil_.size();
  for (size_t a = 0; a < k; ++a) {
    const auto& ou = stencil_[a];
    const auto& ow = stencil_[(a + 1) % k];
    const Vec u{{ou[0] * h_[0], ou[1] * h_[1]}};
    const Vec w{{ow[0] * h_[0], ow[1] * h_[1]}};
    const double nu = eval_norm(norm, u), nw = eval_norm(norm, w);
    auto ratio = [&](double t) {
      return ((1.0 - t) * nu + t * nw) / eval_norm(norm, Vec((1.0 - t) * u + t * w));
    };
    double best_t = 0.5, best = ratio(0.5);
    for (int s = 1; s < 64; ++s) {
      const double t = s / 64.0;
      if (const double r = ratio(t); r > best) best = r, best_t = t;
    }
    const double t = golden_section_argmax(ratio, std::max(0.0, best_t - 1.0 / 64), std::min(1.0, best_t + 1.0 / 64));
    worst = std::max({worst, best, ratio(t)});
  }
  return worst;
}

double Grid::half_cell_length(const Vec& x) const {
  double m = 0.0;
  for (int axis = 0; axis < 2; ++axis)
    for (double sgn : {-1.0, 1.0}) {
      Vec d = Vec::Zero(2);
      d[axis] = sgn * h_[axis];
      m = std::max(m, field_.norm(x, d));
    }
  return 0.5 * m;
}

DistanceField distance_field(std::shared_ptr<const Grid> grid, const Vec& source, Direction direction) {
  const int src = grid->nearest_node(source);
  if (grid->masked(src)) throw Error(ErrorCode::InvalidArgument, "distance source lies in the mask");
  const int n = grid->node_count();
  std::vector<double> dist(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<bool> done(static_cast<size_t>(n), false);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<size_t>(src)] = 0.0;
  heap.push({0.0, src});
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[static_cast<size_t>(u)]) continue;
    done[static_cast<size_t>(u)] = true;
    const auto edges = direction == Direction::Forward ? grid->out_edges(u) : grid->in_edges(u);
    for (const Edge& e : edges) {
      const double nd = d + e.weight;
      if (nd < dist[static_cast<size_t>(e.to)]) {
        dist[static_cast<size_t>(e.to)] = nd;
        heap.push({nd, e.to});
      }
    }
  }
  return DistanceField(std::move(grid), src, direction, std::move(dist));
}

}  // namespace sfst
