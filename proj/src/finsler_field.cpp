#include "sfst/finsler_field.hpp"

#include <cmath>
#include <sstream>

#include "sfst/error.hpp"

namespace sfst {

namespace {

std::string format_point(const Vec& x) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

}  // namespace

NormField NormField::constant(const NormSpec& spec) {
  NormField f;
  f.dim = spec.dim();
  const auto& var = spec.variant();
  auto fill_a = [&](const Mat& a) {
    for (int i = 0; i < f.dim; ++i)
      for (int j = 0; j < f.dim; ++j) f.a.push_back(ScalarField::constant(a(i, j)));
  };
  if (const auto* q = std::get_if<QuadraticNorm>(&var)) {
    f.kind = Kind::Quadratic;
    fill_a(q->a);
  } else if (const auto* r = std::get_if<RandersNorm>(&var)) {
    f.kind = Kind::Randers;
    fill_a(r->a);
    for (int i = 0; i < f.dim; ++i) f.b.push_back(ScalarField::constant(r->b[i]));
  } else {
    f.kind = Kind::FigureOne;
    f.figure_scale = std::get<FigureOneNorm>(var).scale;
  }
  return f;
}

bool NormField::is_constant() const {
  for (const auto& s : a)
    if (!s.is_constant()) return false;
  for (const auto& s : b)
    if (!s.is_constant()) return false;
  return true;
}

std::vector<Vec> chart_samples(const Chart& chart, int samples_per_axis) {
  const int n = chart.dim();
  const int per_axis = std::max(2, samples_per_axis);
  std::vector<Vec> pts;
  size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<size_t>(per_axis);
  pts.reserve(total + (size_t{1} << n));
  std::vector<int> idx(static_cast<size_t>(n), 0);
  for (size_t k = 0; k < total; ++k) {
    Vec x(n);
    for (int i = 0; i < n; ++i) {
      x[i] = chart.lo[i] + (chart.hi[i] - chart.lo[i]) * idx[static_cast<size_t>(i)] / (per_axis - 1);
    }
    pts.push_back(std::move(x));
    for (int i = 0; i < n; ++i) {
      if (++idx[static_cast<size_t>(i)] < per_axis) break;
      idx[static_cast<size_t>(i)] = 0;
    }
  }
  return pts;  // the regular grid includes every corner
}

FinslerField::FinslerField(Chart chart, NormField norm, ScalarField lambda, Mask mask,
                           LambdaPolicy policy, int samples_per_axis)
    : chart_(std::move(chart)),
      norm_(std::move(norm)),
      lambda_(std::move(lambda)),
      mask_(std::move(mask)),
      policy_(policy) {
  const int n = chart_.dim();
  if (norm_.dim != n) {
    throw Error(ErrorCode::InvalidArgument, "norm dimension does not match chart dimension");
  }
  if (norm_.kind == NormField::Kind::FigureOne) {
    if (n != 2) throw Error(ErrorCode::InvalidArgument, "figure-one norm is two-dimensional");
  } else {
    if (norm_.a.size() != static_cast<size_t>(n * n)) {
      throw Error(ErrorCode::InvalidArgument, "norm needs dim*dim coefficient fields");
    }
    if (norm_.kind == NormField::Kind::Randers && norm_.b.size() != static_cast<size_t>(n)) {
      throw Error(ErrorCode::InvalidArgument, "Randers norm needs dim one-form fields");
    }
  }
  // Admissibility on the sample grid (constant norms are checked once).
  bool norm_checked = false;
  for (const Vec& x : chart_samples(chart_, samples_per_axis)) {
    if (mask_.contains(x)) continue;
    if (policy_ == LambdaPolicy::Positive && !(lambda_.value(x) > 0.0)) {
      throw Error(ErrorCode::NonPositiveLambda,
                  "Lambda must be positive; Lambda" + format_point(x) + " = " +
                      std::to_string(lambda_.value(x)));
    }
    if (norm_checked) continue;
    NormSpec spec = norm_at(x);
    try {
      if (const auto* q = std::get_if<QuadraticNorm>(&spec.variant())) {
        NormSpec::quadratic(q->a);
      } else if (const auto* r = std::get_if<RandersNorm>(&spec.variant())) {
        NormSpec::randers(r->a, r->b);
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::InadmissibleNorm, std::string(e.what()) + " at x = " + format_point(x));
    }
    norm_checked = norm_.is_constant();
  }
}

void FinslerField::require_in_chart(const Vec& x) const {
  if (!chart_.contains(x)) throw Error(ErrorCode::OutsideChart, "point " + format_point(x) + " lies outside the chart");
}

double FinslerField::conformal_sq(const Vec& x) const {
  double s = 1.0;
  for (const auto& d : divisors_) s /= d.value(x);
  return s;
}

Vec FinslerField::grad_conformal_sq(const Vec& x) const {
  Vec g = Vec::Zero(x.size());
  if (divisors_.empty()) return g;
  const double s = conformal_sq(x);
  for (const auto& d : divisors_) g -= d.gradient(x) / d.value(x);
  return s * g;
}

NormSpec FinslerField::norm_at(const Vec& x) const {
  const int n = dim();
  const double scale = std::sqrt(conformal_sq(x));
  if (norm_.kind == NormField::Kind::FigureOne) {
    return NormSpec::unchecked(FigureOneNorm{norm_.figure_scale * scale});
  }
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      a(i, j) = norm_.a[static_cast<size_t>(i * n + j)].value(x);
      a(j, i) = a(i, j);
    }
  a *= scale * scale;
  if (norm_.kind == NormField::Kind::Quadratic) return NormSpec::unchecked(QuadraticNorm{std::move(a)});
  Vec b(n);
  for (int i = 0; i < n; ++i) b[i] = norm_.b[static_cast<size_t>(i)].value(x);
  b *= reversed_ ? -scale : scale;
  return NormSpec::unchecked(RandersNorm{std::move(a), std::move(b)});
}

double FinslerField::norm(const Vec& x, const Vec& v) const { return eval_norm(norm_at(x), v); }

double FinslerField::norm_sq(const Vec& x, const Vec& v) const {
  const double f = norm(x, v);
  return f * f;
}

Vec FinslerField::momentum(const Vec& x, const Vec& v) const {
  if (v.isZero(0.0)) return Vec::Zero(v.size());  // F^2 is C^1 with zero differential at 0
  return sfst::momentum(norm_at(x), v);
}

Mat FinslerField::tensor(const Vec& x, const Vec& v) const {
  return fundamental_tensor(norm_at(x), v).g;
}

Vec FinslerField::dx_norm_sq(const Vec& x, const Vec& v) const {
  const int n = dim();
  const double s2 = conformal_sq(x);
  Vec grad = Vec::Zero(n);
  double base_sq = 0.0;
  if (norm_.kind == NormField::Kind::FigureOne) {
    const double f = norm_.figure_scale * v.norm() *
                     std::exp(-2.0 * (v.squaredNorm() > 0 ? v[1] * v[1] / v.squaredNorm() : 0.0));
    base_sq = f * f;
  } else {
    Mat a(n, n);
    std::vector<Vec> da(static_cast<size_t>(n * n));
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const auto& field = norm_.a[static_cast<size_t>(i * n + j)];
        a(i, j) = a(j, i) = field.value(x);
        da[static_cast<size_t>(i * n + j)] = field.gradient(x);
        da[static_cast<size_t>(j * n + i)] = da[static_cast<size_t>(i * n + j)];
      }
    // d/dx_k (v^T A v)
    Vec dquad = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dquad += v[i] * v[j] * da[static_cast<size_t>(i * n + j)];
    const double quad = std::max(0.0, v.dot(a * v));
    if (norm_.kind == NormField::Kind::Quadratic) {
      base_sq = quad;
      grad = dquad;
    } else {
      const double sign = reversed_ ? -1.0 : 1.0;
      const double alpha = std::sqrt(quad);
      double beta = 0.0;
      Vec dbeta = Vec::Zero(n);
      for (int i = 0; i < n; ++i) {
        const auto& field = norm_.b[static_cast<size_t>(i)];
        beta += sign * field.value(x) * v[i];
        dbeta += sign * v[i] * field.gradient(x);
      }
      const double f = alpha + beta;
      base_sq = f * f;
      Vec dalpha = alpha > 0.0 ? Vec(dquad / (2.0 * alpha)) : Vec(Vec::Zero(n));
      grad = 2.0 * f * (dalpha + dbeta);
    }
  }
  return s2 * grad + base_sq * grad_conformal_sq(x);
}

FinslerField FinslerField::optical() const {
  if (policy_ != LambdaPolicy::Positive) {
    for (const Vec& x : chart_samples(chart_, 9)) {
      if (!mask_.contains(x) && !(lambda_.value(x) > 0.0)) {
        throw Error(ErrorCode::NonPositiveLambda, "optical metric needs Lambda > 0; Lambda" + format_point(x) +
                                                      " = " + std::to_string(lambda_.value(x)));
      }
    }
  }
  FinslerField out = *this;
  out.divisors_.push_back(lambda_);
  out.lambda_ = ScalarField::constant(1.0);
  out.policy_ = LambdaPolicy::Positive;
  return out;
}

FinslerField FinslerField::reversed() const {
  FinslerField out = *this;
  out.reversed_ = !reversed_;
  return out;
}

}  // namespace sfst
