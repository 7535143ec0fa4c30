#include "finsler/families.hpp"

#include <cmath>

#include "finsler/submanifold.hpp"

namespace finsler {

namespace {

constexpr double kPoleCollar = 1e-3;  // exclusion radius around chart poles

struct ConstMetricField {
  MatrixXd A;
  template <class S>
  SMat<S> operator()(std::span<const S>) const {
    const int m = static_cast<int>(A.rows());
    SMat<S> r(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) r(i, j) = S(A(i, j));
    return r;
  }
};

struct ConstOneForm {
  VectorXd b;
  template <class S>
  SVec<S> operator()(std::span<const S>) const {
    SVec<S> r(b.size());
    for (int i = 0; i < b.size(); ++i) r[static_cast<size_t>(i)] = S(b[i]);
    return r;
  }
};

// Round-sphere block metric, optionally extended by a flat circle factor:
// diag(1, sin^2 r [, 1]) in coordinates (r, theta [, t]).
struct SphereBlockMetric {
  int m;
  template <class S>
  SMat<S> operator()(std::span<const S> x) const {
    SMat<S> A(m, m);
    A(0, 0) = S(1.0);
    S sr = sin(x[0]);
    A(1, 1) = sr * sr;
    if (m == 3) A(2, 2) = S(1.0);
    return A;
  }
};

struct SphereBlockGamma {
  int m;
  template <class S>
  STen3<S> operator()(std::span<const S> x, std::span<const S>) const {
    STen3<S> G(m);
    S sr = sin(x[0]), cr = cos(x[0]);
    G(0, 1, 1) = -1.0 * sr * cr;
    G(1, 0, 1) = G(1, 1, 0) = cr / sr;
    return G;
  }
};

struct ZeroGamma {
  int m;
  template <class S>
  STen3<S> operator()(std::span<const S>, std::span<const S>) const {
    return STen3<S>(m);
  }
};

// beta = -eps sin(r) dr = eps d(cos r); smooth on the whole sphere.
struct SphereExactOneForm {
  double eps;
  int m;
  template <class S>
  SVec<S> operator()(std::span<const S> x) const {
    SVec<S> b(m, S{});
    b[0] = -eps * sin(x[0]);
    return b;
  }
};

struct Sphere3Metric {
  template <class S>
  SMat<S> operator()(std::span<const S> x) const {
    SMat<S> A(3, 3);
    A(0, 0) = S(1.0);
    S sr = sin(x[0]), st = sin(x[1]);
    A(1, 1) = sr * sr;
    A(2, 2) = sr * sr * st * st;
    return A;
  }
};

struct Sphere3Gamma {
  template <class S>
  STen3<S> operator()(std::span<const S> x, std::span<const S>) const {
    STen3<S> G(3);
    S sr = sin(x[0]), cr = cos(x[0]), st = sin(x[1]), ct = cos(x[1]);
    G(0, 1, 1) = -1.0 * sr * cr;
    G(0, 2, 2) = -1.0 * sr * cr * st * st;
    G(1, 0, 1) = G(1, 1, 0) = cr / sr;
    G(1, 2, 2) = -1.0 * st * ct;
    G(2, 0, 2) = G(2, 2, 0) = cr / sr;
    G(2, 1, 2) = G(2, 2, 1) = ct / st;
    return G;
  }
};

Chart sphere_chart(int m) {
  Chart c;
  c.dim = m;
  c.bounds = {{0.0, M_PI}, {0.0, 2.0 * M_PI}};
  c.periodic = {false, true};
  if (m == 3) {
    c.bounds.push_back({0.0, 2.0 * M_PI});
    c.periodic.push_back(true);
  }
  c.singular = [](const VectorXd& x) {
    return x[0] < kPoleCollar || x[0] > M_PI - kPoleCollar;
  };
  return c;
}

struct PhiProfile {
  // 0: phi = 1 (Riemannian), 1: phi = 1 + s (Randers), 2: phi = 1/(1-s)
  int kind = 0;
  template <class S>
  S operator()(S s) const {
    if (kind == 0) return S(1.0);
    if (kind == 1) return 1.0 + s;
    return 1.0 / (1.0 - s);
  }
  double d1(double s) const { return kind == 0 ? 0.0 : kind == 1 ? 1.0 : 1.0 / ((1 - s) * (1 - s)); }
  double d2(double s) const { return kind <= 1 ? 0.0 : 2.0 / ((1 - s) * (1 - s) * (1 - s)); }
  double v(double s) const {
    return kind == 0 ? 1.0 : kind == 1 ? 1.0 + s : 1.0 / (1.0 - s);
  }
};

struct AlphaBetaNormFunctor {
  RandersSpec rs;
  PhiProfile phi;
  template <class S>
  S operator()(std::span<const S> x, std::span<const S> y) const {
    S alpha = randers_alpha<S>(rs, x, y);
    SVec<S> bv = rs.b<S>(x);
    SVec<S> yv(y.begin(), y.end());
    S s = dot(bv, yv) / alpha;
    return alpha * phi(s);
  }
};

void check_phi_positivity(const PhiProfile& phi, double bmax) {
  // phi - s phi' + (t^2 - s^2) phi'' > 0 sampled over |s| <= t <= bmax.
  for (int it = 0; it <= 24; ++it) {
    const double t = bmax * it / 24.0;
    for (int is = 0; is <= 48; ++is) {
      const double s = -t + 2.0 * t * is / 48.0;
      const double val = phi.v(s) - s * phi.d1(s) + (t * t - s * s) * phi.d2(s);
      if (!(val > 0.0))
        raise(Err::PositivityViolation, "alpha-beta profile fails convexity sampling");
    }
  }
}

}  // namespace

BuiltMetric make_euclidean(int m) {
  Chart c = Chart::box(m, -10.0, 10.0);
  RandersSpec rs = RandersSpec::make(c, ConstMetricField{MatrixXd::Identity(m, m)},
                                     ConstOneForm{VectorXd::Zero(m)});
  MetricSpec spec = metric_from_randers(rs, "euclidean-" + std::to_string(m) + "d");
  spec.set_gamma_override(ZeroGamma{m});
  return {std::move(spec), std::move(rs)};
}

BuiltMetric make_flat_randers(const VectorXd& bvec) {
  const int m = static_cast<int>(bvec.size());
  if (bvec.norm() >= 1.0) raise(Err::PositivityViolation, "flat Randers needs |b| < 1");
  Chart c = Chart::box(m, -10.0, 10.0);
  RandersSpec rs =
      RandersSpec::make(c, ConstMetricField{MatrixXd::Identity(m, m)}, ConstOneForm{bvec});
  MetricSpec spec = metric_from_randers(rs, "flat-randers-" + std::to_string(m) + "d");
  spec.set_gamma_override(ZeroGamma{m});
  return {std::move(spec), std::move(rs)};
}

BuiltMetric make_round_sphere() {
  Chart c = sphere_chart(2);
  RandersSpec rs = RandersSpec::make(c, SphereBlockMetric{2}, ConstOneForm{VectorXd::Zero(2)});
  MetricSpec spec = metric_from_randers(rs, "round-sphere");
  spec.set_gamma_override(SphereBlockGamma{2});
  return {std::move(spec), std::move(rs)};
}

BuiltMetric make_round_sphere_3() {
  Chart c;
  c.dim = 3;
  c.bounds = {{0.0, M_PI}, {0.0, M_PI}, {0.0, 2.0 * M_PI}};
  c.periodic = {false, false, true};
  c.singular = [](const VectorXd& x) {
    return x[0] < kPoleCollar || x[0] > M_PI - kPoleCollar || x[1] < kPoleCollar ||
           x[1] > M_PI - kPoleCollar;
  };
  RandersSpec rs = RandersSpec::make(c, Sphere3Metric{}, ConstOneForm{VectorXd::Zero(3)});
  MetricSpec spec = metric_from_randers(rs, "round-sphere-3");
  spec.set_gamma_override(Sphere3Gamma{});
  return {std::move(spec), std::move(rs)};
}

BuiltMetric make_sphere_randers(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) raise(Err::PositivityViolation, "sphere Randers needs eps in [0,1)");
  Chart c = sphere_chart(2);
  RandersSpec rs = RandersSpec::make(c, SphereBlockMetric{2}, SphereExactOneForm{eps, 2});
  MetricSpec spec = metric_from_randers(rs, "sphere-randers");
  return {std::move(spec), std::move(rs)};
}

BuiltMetric make_flat_torus(const std::vector<double>& sides) {
  const int m = static_cast<int>(sides.size());
  Chart c;
  c.dim = m;
  for (double s : sides) {
    c.bounds.push_back({0.0, s});
    c.periodic.push_back(true);
  }
  RandersSpec rs = RandersSpec::make(c, ConstMetricField{MatrixXd::Identity(m, m)},
                                     ConstOneForm{VectorXd::Zero(m)});
  MetricSpec spec = metric_from_randers(rs, "flat-torus");
  spec.set_gamma_override(ZeroGamma{m});
  return {std::move(spec), std::move(rs)};
}

BuiltMetric make_product_sphere_circle(double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    raise(Err::PositivityViolation, "product Randers needs eps in [0,1)");
  Chart c = sphere_chart(3);
  VectorXd b = VectorXd::Zero(3);
  b[2] = eps;
  RandersSpec rs = RandersSpec::make(c, SphereBlockMetric{3}, ConstOneForm{b});
  MetricSpec spec = metric_from_randers(rs, "product-sphere-circle");
  // Parallel one-form: the connection coefficients are those of the product
  // metric, independent of the reference direction.
  spec.set_gamma_override(SphereBlockGamma{3});
  return {std::move(spec), std::move(rs)};
}

BuiltMetric make_alphabeta_product(const std::string& phi_name, double eps) {
  PhiProfile phi;
  if (phi_name == "riemann") phi.kind = 0;
  else if (phi_name == "randers") phi.kind = 1;
  else if (phi_name == "matsumoto") phi.kind = 2;
  else raise(Err::ConfigError, "unknown alpha-beta profile: " + phi_name);
  check_phi_positivity(phi, eps);
  Chart c = sphere_chart(3);
  VectorXd b = VectorXd::Zero(3);
  b[2] = eps;
  RandersSpec rs = RandersSpec::make(c, SphereBlockMetric{3}, ConstOneForm{b});
  MetricSpec spec = make_metric(c, "alphabeta-" + phi_name, AlphaBetaNormFunctor{rs, phi});
  return {std::move(spec), std::move(rs)};
}

namespace {

struct LineEmbed {
  VectorXd base, dir;
  template <class S>
  SVec<S> operator()(std::span<const S> u) const {
    SVec<S> out(base.size());
    for (int i = 0; i < base.size(); ++i) out[static_cast<size_t>(i)] = base[i] + u[0] * dir[i];
    return out;
  }
};

struct EquatorEmbed {
  template <class S>
  SVec<S> operator()(std::span<const S> u) const {
    SVec<S> out(2);
    out[0] = S(M_PI / 2);
    out[1] = u[0];
    return out;
  }
};

// Circle of geodesic radius r0 about the point (rc, theta0) of the round
// 2-sphere chart, computed through the ambient unit sphere in the frame
// centered on the circle's center. The longitude is assembled as theta0 plus
// a centered atan2; circles that wrap every longitude carry one 2 pi jump in
// the periodic coordinate (harmless to the chart, which wraps).
struct DistanceCircleEmbed {
  double r0, rc, theta0;
  template <class S>
  SVec<S> operator()(std::span<const S> u) const {
    S cu = cos(u[0]), su = sin(u[0]);
    S px = S(std::cos(r0) * std::sin(rc)) + std::sin(r0) * std::cos(rc) * su;
    S py = std::sin(r0) * cu;
    S pz = S(std::cos(r0) * std::cos(rc)) - std::sin(r0) * std::sin(rc) * su;
    SVec<S> out(2);
    out[0] = acos(pz);
    out[1] = theta0 + atan2(py, px);
    return out;
  }
};

struct CircleFiberEmbed {
  double r, theta;
  template <class S>
  SVec<S> operator()(std::span<const S> u) const {
    SVec<S> out(3);
    out[0] = S(r);
    out[1] = S(theta);
    out[2] = u[0];
    return out;
  }
};

Chart interval_chart(double lo, double hi, bool periodic) {
  Chart c;
  c.dim = 1;
  c.bounds = {{lo, hi}};
  c.periodic = {periodic};
  return c;
}

}  // namespace

SubmanifoldSpec build_submanifold_family(const std::string& family,
                                         const std::map<std::string, double>& params,
                                         int ambient_dim) {
  auto get = [&](const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  };
  if (family == "point") {
    VectorXd x(ambient_dim);
    for (int i = 0; i < ambient_dim; ++i) x[i] = get("x" + std::to_string(i + 1), 0.0);
    return SubmanifoldSpec::point_at(x);
  }
  if (family == "line") {
    VectorXd base(ambient_dim), dir(ambient_dim);
    for (int i = 0; i < ambient_dim; ++i) {
      base[i] = get("x" + std::to_string(i + 1), 0.0);
      dir[i] = get("d" + std::to_string(i + 1), i == 0 ? 1.0 : 0.0);
    }
    const double len = get("len", 2.0);
    return SubmanifoldSpec::make(interval_chart(-len, len, false), ambient_dim,
                                 LineEmbed{base, dir});
  }
  if (family == "closed-line") {
    VectorXd base(ambient_dim), dir(ambient_dim);
    for (int i = 0; i < ambient_dim; ++i) {
      base[i] = get("x" + std::to_string(i + 1), 0.0);
      dir[i] = get("d" + std::to_string(i + 1), i == 0 ? 1.0 : 0.0);
    }
    const double len = get("len", 1.0);
    return SubmanifoldSpec::make(interval_chart(0.0, len, true), ambient_dim,
                                 LineEmbed{base, dir});
  }
  if (family == "equator")
    return SubmanifoldSpec::make(interval_chart(0.0, 2 * M_PI, true), 2, EquatorEmbed{});
  if (family == "distance-circle")
    return SubmanifoldSpec::make(
        interval_chart(0.0, 2 * M_PI, true), 2,
        DistanceCircleEmbed{get("r0", 0.7), get("rc", M_PI / 2), get("theta0", 0.0)});
  if (family == "circle-fiber")
    return SubmanifoldSpec::make(interval_chart(0.0, 2 * M_PI, true), 3,
                                 CircleFiberEmbed{get("r", M_PI / 2), get("theta", 0.0)});
  raise(Err::ConfigError, "unknown submanifold family: " + family);
}

BuiltMetric build_metric_family(const std::string& family,
                                const std::map<std::string, double>& params) {
  auto get = [&](const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : it->second;
  };
  if (family == "euclidean") return make_euclidean(static_cast<int>(get("dim", 2)));
  if (family == "flat-randers") {
    const int m = static_cast<int>(get("dim", 2));
    VectorXd b = VectorXd::Zero(m);
    for (int i = 0; i < m; ++i) b[i] = get("b" + std::to_string(i + 1), 0.0);
    return make_flat_randers(b);
  }
  if (family == "round-sphere") return make_round_sphere();
  if (family == "round-sphere-3") return make_round_sphere_3();
  if (family == "sphere-randers") return make_sphere_randers(get("eps", 0.1));
  if (family == "flat-torus") {
    const int m = static_cast<int>(get("dim", 2));
    std::vector<double> sides(m, get("side", 1.0));
    for (int i = 0; i < m; ++i) {
      auto it = params.find("side" + std::to_string(i + 1));
      if (it != params.end()) sides[static_cast<size_t>(i)] = it->second;
    }
    return make_flat_torus(sides);
  }
  if (family == "product-sphere-circle") return make_product_sphere_circle(get("eps", 0.0));
  if (family == "riemann-product") return make_alphabeta_product("riemann", get("eps", 0.0));
  if (family == "randers-product") return make_alphabeta_product("randers", get("eps", 0.0));
  if (family == "matsumoto-product") return make_alphabeta_product("matsumoto", get("eps", 0.1));
  raise(Err::ConfigError, "unknown metric family: " + family);
}

}  // namespace finsler
