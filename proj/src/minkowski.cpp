#include "sfst/minkowski.hpp"

#include <cmath>

#include "sfst/error.hpp"
#include "sfst/sampling.hpp"

namespace sfst {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_spd(const Mat& a) {
  if (a.rows() != a.cols() || a.rows() < 1) {
    throw Error(ErrorCode::InadmissibleNorm, "coefficient matrix must be square and non-empty");
  }
  if (!a.isApprox(a.transpose(), 1e-12)) {
    throw Error(ErrorCode::InadmissibleNorm, "coefficient matrix must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(a, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= kEigenTol) {
    throw Error(ErrorCode::InadmissibleNorm, "coefficient matrix must be positive definite");
  }
}

double figure_one_exponent(const Vec& v) {
  const double n2 = v.squaredNorm();
  return n2 > 0.0 ? v[1] * v[1] / n2 : 0.0;
}

void require_nonzero(const Vec& v, const char* op) {
  if (v.isZero(0.0)) throw Error(ErrorCode::ZeroVector, std::string(op) + " is undefined at v = 0");
}

}  // namespace

double dual_norm(const Mat& g, const Vec& covector) {
  return std::sqrt(std::max(0.0, covector.dot(g.ldlt().solve(covector))));
}

NormSpec NormSpec::quadratic(Mat a) {
  require_spd(a);
  return NormSpec(QuadraticNorm{std::move(a)});
}

NormSpec NormSpec::randers(Mat a, Vec b) {
  require_spd(a);
  if (b.size() != a.rows()) {
    throw Error(ErrorCode::InadmissibleNorm, "Randers one-form has the wrong dimension");
  }
  const double beta = dual_norm(a, b);
  if (!(beta < 1.0)) {
    throw Error(ErrorCode::InadmissibleNorm,
                "Randers one-form must have dual norm < 1, got " + std::to_string(beta));
  }
  return NormSpec(RandersNorm{std::move(a), std::move(b)});
}

NormSpec NormSpec::figure_one(double scale) {
  if (!(scale > 0.0)) throw Error(ErrorCode::InadmissibleNorm, "figure-one scale must be positive");
  return NormSpec(FigureOneNorm{scale});
}

NormSpec NormSpec::unchecked(Variant v) { return NormSpec(std::move(v)); }

int NormSpec::dim() const {
  return std::visit(Overloaded{
                        [](const QuadraticNorm& q) { return static_cast<int>(q.a.rows()); },
                        [](const RandersNorm& r) { return static_cast<int>(r.a.rows()); },
                        [](const FigureOneNorm&) { return 2; },
                    },
                    variant_);
}

NormSpec NormSpec::scaled(double s) const {
  return std::visit(Overloaded{
                        [&](const QuadraticNorm& q) { return NormSpec(QuadraticNorm{q.a * (s * s)}); },
                        [&](const RandersNorm& r) { return NormSpec(RandersNorm{r.a * (s * s), r.b * s}); },
                        [&](const FigureOneNorm& f) { return NormSpec(FigureOneNorm{f.scale * s}); },
                    },
                    variant_);
}

NormSpec NormSpec::reversed() const {
  if (const auto* r = std::get_if<RandersNorm>(&variant_)) {
    return NormSpec(RandersNorm{r->a, -r->b});
  }
  return *this;  // quadratic and figure-one norms are reversible
}

bool NormSpec::is_finsler_function() const {
  return !std::holds_alternative<FigureOneNorm>(variant_);
}

double eval_norm(const NormSpec& spec, const Vec& v) {
  return std::visit(Overloaded{
                        [&](const QuadraticNorm& q) { return std::sqrt(std::max(0.0, v.dot(q.a * v))); },
                        [&](const RandersNorm& r) {
                          return std::sqrt(std::max(0.0, v.dot(r.a * v))) + r.b.dot(v);
                        },
                        [&](const FigureOneNorm& f) {
                          return f.scale * v.norm() * std::exp(-2.0 * figure_one_exponent(v));
                        },
                    },
                    spec.variant());
}

namespace fd {

double gradient_step(const Vec& v) { return 1e-5 * std::max(1.0, v.norm()); }
double hessian_step(const Vec& v) { return 1e-4 * std::max(1.0, v.norm()); }

Vec gradient(const std::function<double(const Vec&)>& f, const Vec& v, double h) {
  Vec grad(v.size());
  Vec p = v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    p[i] = v[i] + h;
    const double fp = f(p);
    p[i] = v[i] - h;
    const double fm = f(p);
    p[i] = v[i];
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

Mat hessian(const std::function<double(const Vec&)>& f, const Vec& v, double h) {
  const Eigen::Index n = v.size();
  Mat hess(n, n);
  const double f0 = f(v);
  Vec p = v;
  for (Eigen::Index i = 0; i < n; ++i) {
    p[i] = v[i] + h;
    const double fp = f(p);
    p[i] = v[i] - h;
    const double fm = f(p);
    p[i] = v[i];
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      auto at = [&](double si, double sj) {
        Vec q = v;
        q[i] += si * h;
        q[j] += sj * h;
        return f(q);
      };
      const double value = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
      hess(i, j) = value;
      hess(j, i) = value;
    }
  }
  return hess;
}

}  // namespace fd

namespace {

Vec numeric_momentum(const NormSpec& spec, const Vec& v) {
  auto f2 = [&](const Vec& w) {
    const double f = eval_norm(spec, w);
    return f * f;
  };
  return fd::gradient(f2, v, fd::gradient_step(v));
}

Mat numeric_tensor(const NormSpec& spec, const Vec& v) {
  auto half_f2 = [&](const Vec& w) {
    const double f = eval_norm(spec, w);
    return 0.5 * f * f;
  };
  Mat g = fd::hessian(half_f2, v, fd::hessian_step(v));
  return 0.5 * (g + g.transpose());
}

}  // namespace

Vec momentum(const NormSpec& spec, const Vec& v, DiffMethod method) {
  require_nonzero(v, "momentum");
  if (method == DiffMethod::Numeric) return numeric_momentum(spec, v);
  return std::visit(Overloaded{
                        [&](const QuadraticNorm& q) -> Vec { return 2.0 * (q.a * v); },
                        [&](const RandersNorm& r) -> Vec {
                          const Vec av = r.a * v;
                          const double alpha = std::sqrt(v.dot(av));
                          const double f = alpha + r.b.dot(v);
                          return 2.0 * f * (av / alpha + r.b);
                        },
                        [&](const FigureOneNorm&) -> Vec { return numeric_momentum(spec, v); },
                    },
                    spec.variant());
}

FundamentalTensor fundamental_tensor(const NormSpec& spec, const Vec& v, DiffMethod method) {
  require_nonzero(v, "fundamental_tensor");
  Mat g;
  if (const auto* fig = std::get_if<FigureOneNorm>(&spec.variant())) {
    // Generalized metric; a Hessian route does not exist for this variant.
    const double c = fig->scale * fig->scale * std::exp(-4.0 * figure_one_exponent(v));
    g = c * Mat::Identity(2, 2);
  } else if (const auto* q = std::get_if<QuadraticNorm>(&spec.variant())) {
    g = q->a;
  } else if (method == DiffMethod::Numeric) {
    g = numeric_tensor(spec, v);
  } else {
    const auto& r = std::get<RandersNorm>(spec.variant());
    const Vec av = r.a * v;
    const double alpha = std::sqrt(v.dot(av));
    const double f = alpha + r.b.dot(v);
    const Vec l = av / alpha + r.b;
    const Mat hess_f = r.a / alpha - (av * av.transpose()) / (alpha * alpha * alpha);
    g = l * l.transpose() + f * hess_f;
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(g, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() <= kEigenTol) {
    throw Error(ErrorCode::DegenerateTensor, "fundamental tensor is not positive definite");
  }
  return {std::move(g), v};
}

double cartan_symmetry_residual(const NormSpec& spec, const Vec& v) {
  require_nonzero(v, "cartan_symmetry_residual");
  const Eigen::Index n = v.size();
  const double h = fd::hessian_step(v);
  std::vector<Mat> dg(static_cast<size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) {
    Vec p = v, m = v;
    p[k] += h;
    m[k] -= h;
    dg[k] = (fundamental_tensor(spec, p).g - fundamental_tensor(spec, m).g) / (2.0 * h);
  }
  double residual = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k)
        residual = std::max(residual, std::abs(dg[k](i, j) - dg[j](i, k)));
  return residual;
}

double reversibility_constant(const NormSpec& spec, int samples) {
  if (samples < 8) throw Error(ErrorCode::InvalidArgument, "reversibility_constant needs >= 8 samples");
  auto ratio = [&](const Vec& u) { return eval_norm(spec, u) / eval_norm(spec, -u); };
  return std::max(1.0, maximize_on_sphere(ratio, spec.dim(), samples).value);
}

}  // namespace sfst
