#include "sfst/scalar_field.hpp"

#include <algorithm>
#include <cmath>

#include "sfst/error.hpp"

namespace sfst {

Chart Chart::make(Vec lo, Vec hi, double margin) {
  if (lo.size() != hi.size() || lo.size() < 1) {
    throw Error(ErrorCode::InvalidArgument, "chart bounds must have equal, positive dimension");
  }
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) {
      throw Error(ErrorCode::InvalidArgument, "chart requires lo < hi on axis " + std::to_string(i));
    }
  }
  const double min_extent = (hi - lo).minCoeff();
  if (!(margin > 0.0) || !(margin < min_extent / 4.0)) {
    throw Error(ErrorCode::InvalidArgument, "chart margin must lie in (0, min extent / 4)");
  }
  return Chart{std::move(lo), std::move(hi), margin};
}

bool Chart::contains(const Vec& x) const {
  if (x.size() != lo.size()) return false;
  return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
}

double Chart::boundary_distance(const Vec& x) const {
  if (!contains(x)) return 0.0;
  return std::min((x - lo).minCoeff(), (hi - x).minCoeff());
}

bool Mask::contains(const Vec& x) const {
  return std::any_of(disks.begin(), disks.end(), [&](const Disk& d) {
    return (x - d.center).norm() <= d.radius;
  });
}

ScalarField ScalarField::constant(double c) { return ScalarField(Constant{c}); }

ScalarField ScalarField::polynomial(std::vector<Monomial> terms) {
  for (const auto& t : terms) {
    int degree = 0;
    for (int e : t.exponents) {
      if (e < 0) throw Error(ErrorCode::InvalidArgument, "negative polynomial exponent");
      degree += e;
    }
    if (degree > 4) throw Error(ErrorCode::InvalidArgument, "polynomial terms are limited to degree 4");
  }
  return ScalarField(Polynomial{std::move(terms)});
}

ScalarField ScalarField::radial_exp(double a, double k) { return ScalarField(RadialExp{a, k}); }

ScalarField ScalarField::grid_table(GridTable table) {
  if (table.lo.size() != 2 || table.hi.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "grid tables are two-dimensional");
  }
  if (table.nx < 2 || table.ny < 2 ||
      table.values.size() != static_cast<size_t>(table.nx) * static_cast<size_t>(table.ny)) {
    throw Error(ErrorCode::InvalidArgument, "grid table needs nx, ny >= 2 and nx*ny values");
  }
  if (!(table.lo.array() < table.hi.array()).all()) {
    throw Error(ErrorCode::InvalidArgument, "grid table requires lo < hi");
  }
  return ScalarField(std::move(table));
}

namespace {

double monomial_value(const Monomial& m, const Vec& x) {
  double v = m.coefficient;
  for (size_t i = 0; i < m.exponents.size() && i < static_cast<size_t>(x.size()); ++i) {
    if (m.exponents[i] > 0) v *= std::pow(x[static_cast<Eigen::Index>(i)], m.exponents[i]);
  }
  return v;
}

struct Cell {
  int i = 0, j = 0;
  double fx = 0.0, fy = 0.0;  // local coordinates in [0, 1]
  double hx = 1.0, hy = 1.0;
};

Cell locate(const GridTable& t, const Vec& x) {
  Cell c;
  c.hx = (t.hi[0] - t.lo[0]) / (t.nx - 1);
  c.hy = (t.hi[1] - t.lo[1]) / (t.ny - 1);
  const double gx = std::clamp((x[0] - t.lo[0]) / c.hx, 0.0, static_cast<double>(t.nx - 1));
  const double gy = std::clamp((x[1] - t.lo[1]) / c.hy, 0.0, static_cast<double>(t.ny - 1));
  c.i = std::min(static_cast<int>(gx), t.nx - 2);
  c.j = std::min(static_cast<int>(gy), t.ny - 2);
  c.fx = gx - c.i;
  c.fy = gy - c.j;
  return c;
}

double at(const GridTable& t, int i, int j) {
  return t.values[static_cast<size_t>(j) * static_cast<size_t>(t.nx) + static_cast<size_t>(i)];
}

}  // namespace

double ScalarField::value(const Vec& x) const {
  if (const auto* c = std::get_if<Constant>(&variant_)) return c->c;
  if (const auto* p = std::get_if<Polynomial>(&variant_)) {
    double v = 0.0;
    for (const auto& m : p->terms) v += monomial_value(m, x);
    return v;
  }
  if (const auto* r = std::get_if<RadialExp>(&variant_)) return r->a * std::exp(r->k * x.squaredNorm());
  const auto& t = std::get<GridTable>(variant_);
  const Cell c = locate(t, x);
  const double v00 = at(t, c.i, c.j), v10 = at(t, c.i + 1, c.j);
  const double v01 = at(t, c.i, c.j + 1), v11 = at(t, c.i + 1, c.j + 1);
  return (1 - c.fx) * (1 - c.fy) * v00 + c.fx * (1 - c.fy) * v10 + (1 - c.fx) * c.fy * v01 +
         c.fx * c.fy * v11;
}

Vec ScalarField::gradient(const Vec& x) const {
  Vec g = Vec::Zero(x.size());
  if (std::holds_alternative<Constant>(variant_)) return g;
  if (const auto* p = std::get_if<Polynomial>(&variant_)) {
    for (const auto& m : p->terms) {
      for (size_t k = 0; k < m.exponents.size() && k < static_cast<size_t>(x.size()); ++k) {
        const int e = m.exponents[k];
        if (e == 0) continue;
        Monomial d = m;
        d.coefficient *= e;
        d.exponents[k] = e - 1;
        g[static_cast<Eigen::Index>(k)] += monomial_value(d, x);
      }
    }
    return g;
  }
  if (const auto* r = std::get_if<RadialExp>(&variant_)) {
    return 2.0 * r->k * r->a * std::exp(r->k * x.squaredNorm()) * x;
  }
  // Bilinear cell derivative; at the table edges this is the one-sided
  // difference of the boundary cell.
  const auto& t = std::get<GridTable>(variant_);
  const Cell c = locate(t, x);
  const double v00 = at(t, c.i, c.j), v10 = at(t, c.i + 1, c.j);
  const double v01 = at(t, c.i, c.j + 1), v11 = at(t, c.i + 1, c.j + 1);
  g[0] = ((1 - c.fy) * (v10 - v00) + c.fy * (v11 - v01)) / c.hx;
  g[1] = ((1 - c.fx) * (v01 - v00) + c.fx * (v11 - v10)) / c.hy;
  return g;
}

}  // namespace sfst
