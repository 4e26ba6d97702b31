#include "sfst/scene.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fstream>
#include <sstream>

#include "sfst/error.hpp"

namespace sfst {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw Error(ErrorCode::SceneError, "expected a number, got '" + t + "'");
  }
  if (used != t.size()) throw Error(ErrorCode::SceneError, "expected a number, got '" + t + "'");
  return v;
}

int parse_int(const std::string& text) {
  const double v = parse_number(text);
  if (v != static_cast<int>(v)) throw Error(ErrorCode::SceneError, "expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

std::string call_args(const std::string& text, const std::string& name) {
  const std::string t = trim(text);
  if (t.rfind(name + "(", 0) != 0 || t.back() != ')') return {};
  return t.substr(name.size() + 1, t.size() - name.size() - 2);
}

std::string get(const pt::ptree& tree, const std::string& key) {
  const auto v = tree.get_optional<std::string>(key);
  if (!v) throw Error(ErrorCode::SceneError, "missing key '" + key + "'");
  return *v;
}

}  // namespace

Vec parse_vector(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.empty() || (parts.size() == 1 && parts[0].empty())) {
    throw Error(ErrorCode::SceneError, "empty vector");
  }
  Vec v(static_cast<Eigen::Index>(parts.size()));
  for (size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_number(parts[i]);
  return v;
}

ScalarField parse_scalar_field(const std::string& text, int dim) {
  const std::string t = trim(text);
  if (t.rfind("const(", 0) == 0) return ScalarField::constant(parse_number(call_args(t, "const")));
  if (t.rfind("radexp(", 0) == 0) {
    const Vec p = parse_vector(call_args(t, "radexp"));
    if (p.size() != 2) throw Error(ErrorCode::SceneError, "radexp takes (a, k)");
    return ScalarField::radial_exp(p[0], p[1]);
  }
  if (t.rfind("poly(", 0) == 0) {
    std::vector<Monomial> terms;
    for (const auto& term : split(call_args(t, "poly"), ';')) {
      const auto parts = split(term, ':');
      if (parts.size() != 2) throw Error(ErrorCode::SceneError, "poly term must be c:e1,...,en");
      Monomial m;
      m.coefficient = parse_number(parts[0]);
      for (const auto& e : split(parts[1], ',')) m.exponents.push_back(parse_int(e));
      if (static_cast<int>(m.exponents.size()) != dim) {
        throw Error(ErrorCode::SceneError, "poly exponents must have one entry per dimension");
      }
      terms.push_back(std::move(m));
    }
    try {
      return ScalarField::polynomial(std::move(terms));
    } catch (const Error& e) {
      throw Error(ErrorCode::SceneError, e.what());
    }
  }
  if (t.rfind("table(", 0) == 0) {
    const auto parts = split(call_args(t, "table"), ';');
    if (parts.size() != 2) throw Error(ErrorCode::SceneError, "table takes (xlo,ylo,xhi,yhi,nx,ny; values)");
    const Vec head = parse_vector(parts[0]);
    if (head.size() != 6) throw Error(ErrorCode::SceneError, "table header needs 6 numbers");
    GridTable table;
    table.lo = head.head(2);
    table.hi = head.segment(2, 2);
    table.nx = static_cast<int>(head[4]);
    table.ny = static_cast<int>(head[5]);
    std::istringstream is(parts[1]);
    std::string tok;
    while (is >> tok) table.values.push_back(parse_number(tok));
    try {
      return ScalarField::grid_table(std::move(table));
    } catch (const Error& e) {
      throw Error(ErrorCode::SceneError, e.what());
    }
  }
  return ScalarField::constant(parse_number(t));
}

Scene load_scene(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::SceneError, e.what());
  }

  const auto chart_tree = tree.get_child_optional("chart");
  if (!chart_tree) throw Error(ErrorCode::SceneError, "missing [chart] section");
  const Vec lo = parse_vector(get(*chart_tree, "lo"));
  const Vec hi = parse_vector(get(*chart_tree, "hi"));
  if (lo.size() != hi.size()) throw Error(ErrorCode::SceneError, "chart lo/hi dimensions differ");
  const int n = static_cast<int>(lo.size());
  const double margin = parse_number(chart_tree->get<std::string>("margin", "0.05"));
  Chart chart = Chart::make(lo, hi, margin);

  const auto norm_tree = tree.get_child_optional("norm");
  if (!norm_tree) throw Error(ErrorCode::SceneError, "missing [norm] section");
  const std::string kind = norm_tree->get<std::string>("kind", "quadratic");
  NormField norm;
  norm.dim = n;
  if (kind == "figure_one") {
    norm.kind = NormField::Kind::FigureOne;
    norm.figure_scale = parse_number(norm_tree->get<std::string>("scale", "1"));
  } else if (kind == "quadratic" || kind == "randers") {
    norm.kind = kind == "quadratic" ? NormField::Kind::Quadratic : NormField::Kind::Randers;
    Mat a = Mat::Identity(n, n);
    if (const auto text = norm_tree->get_optional<std::string>("a")) {
      const auto rows = split(*text, ';');
      if (static_cast<int>(rows.size()) != n) throw Error(ErrorCode::SceneError, "norm.a needs one row per dimension");
      for (int i = 0; i < n; ++i) {
        const Vec row = parse_vector(rows[static_cast<size_t>(i)]);
        if (row.size() != n) throw Error(ErrorCode::SceneError, "norm.a rows need one entry per dimension");
        a.row(i) = row.transpose();
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int lo_i = std::min(i, j), hi_j = std::max(i, j);
        const std::string canonical = "a" + std::to_string(lo_i + 1) + std::to_string(hi_j + 1);
        if (const auto text = norm_tree->get_optional<std::string>(canonical)) {
          norm.a.push_back(parse_scalar_field(*text, n));
        } else {
          norm.a.push_back(ScalarField::constant(a(i, j)));
        }
      }
    if (norm.kind == NormField::Kind::Randers) {
      Vec b = Vec::Zero(n);
      if (const auto text = norm_tree->get_optional<std::string>("b")) {
        b = parse_vector(*text);
        if (b.size() != n) throw Error(ErrorCode::SceneError, "norm.b needs one entry per dimension");
      }
      for (int i = 0; i < n; ++i) {
        const std::string key = "b" + std::to_string(i + 1);
        if (const auto text = norm_tree->get_optional<std::string>(key)) {
          norm.b.push_back(parse_scalar_field(*text, n));
        } else {
          norm.b.push_back(ScalarField::constant(b[i]));
        }
      }
    }
  } else {
    throw Error(ErrorCode::SceneError, "unknown norm kind '" + kind + "'");
  }

  const ScalarField lambda = parse_scalar_field(tree.get<std::string>("lambda.value", "const(1)"), n);

  Mask mask;
  LadderSettings ladder;
  if (const auto mask_tree = tree.get_child_optional("mask")) {
    if (const auto disks = mask_tree->get_optional<std::string>("disks")) {
      for (const auto& d : split(*disks, ';')) {
        if (d.empty()) continue;
        const Vec v = parse_vector(d);
        if (v.size() != n + 1) throw Error(ErrorCode::SceneError, "mask disk needs center and radius");
        if (!(v[n] > 0.0)) throw Error(ErrorCode::SceneError, "mask disk radius must be positive");
        mask.disks.push_back({v.head(n), v[n]});
      }
    }
  }
  ladder.model = mask.empty() ? ChartModel::WholePlane : ChartModel::Masked;

  const auto omega_tree = tree.get_child_optional("omega");
  const LambdaPolicy policy = omega_tree ? LambdaPolicy::AnySign : LambdaPolicy::Positive;
  FinslerField field(chart, norm, lambda, mask, policy);

  std::optional<StaticSpacetime> st;
  if (omega_tree) {
    std::vector<ScalarField> omega;
    for (int i = 0; i < n; ++i) {
      omega.push_back(parse_scalar_field(omega_tree->get<std::string>("w" + std::to_string(i + 1), "0"), n));
    }
    st = StaticSpacetime::make_sstk(field, std::move(omega));
  } else {
    st = StaticSpacetime::make_static(field);
  }

  Scene scene(*st);
  scene.resolution = parse_int(tree.get<std::string>("grid.resolution", "200"));
  scene.stencil_radius = parse_int(tree.get<std::string>("grid.stencil_radius", "2"));
  scene.seed = static_cast<unsigned>(parse_int(tree.get<std::string>("tolerances.seed", "42")));
  scene.step = parse_number(tree.get<std::string>("tolerances.step", "1e-3"));
  scene.class_tol = parse_number(tree.get<std::string>("tolerances.class_tol", "1e-9"));
  if (scene.resolution < 2) throw Error(ErrorCode::SceneError, "grid.resolution must be >= 2");
  if (!(scene.step > 0.0)) throw Error(ErrorCode::SceneError, "tolerances.step must be positive");

  if (const auto c = tree.get_child_optional("cauchy")) {
    if (const auto f = c->get_optional<std::string>("f")) scene.cauchy_f = parse_scalar_field(*f, n);
    if (const auto a = c->get_optional<std::string>("alpha")) scene.cauchy_alpha = parse_number(*a);
  }
  if (const auto l = tree.get_child_optional("ladder")) {
    if (const auto m = l->get_optional<std::string>("model")) {
      if (*m == "whole-plane") ladder.model = ChartModel::WholePlane;
      else if (*m == "masked") ladder.model = ChartModel::Masked;
      else throw Error(ErrorCode::SceneError, "ladder.model must be whole-plane or masked");
    }
    ladder.pairs = parse_int(l->get<std::string>("pairs", "20"));
    ladder.rays = parse_int(l->get<std::string>("rays", "16"));
    ladder.budget = parse_number(l->get<std::string>("budget", "0"));
    if (const auto x = l->get_optional<std::string>("x")) ladder.x = parse_vector(*x);
    if (const auto y = l->get_optional<std::string>("y")) ladder.y = parse_vector(*y);
    ladder.r = parse_number(l->get<std::string>("r", "1"));
    ladder.s = parse_number(l->get<std::string>("s", "1"));
  }
  scene.ladder = ladder;
  return scene;
}

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::SceneError, "cannot open scene file '" + path + "'");
  return load_scene(in);
}

}  // namespace sfst
