#include "doctest.h"
#include "finsler/families.hpp"
#include "finsler/sampling.hpp"
#include "finsler/tensors.hpp"

#include <cmath>

using namespace finsler;

namespace {

VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}
VectorXd vec3(double a, double b, double c) {
  VectorXd v(3);
  v << a, b, c;
  return v;
}

struct IdMetricField {
  int m;
  template <class S>
  SMat<S> operator()(std::span<const S>) const {
    return SMat<S>::identity(m);
  }
};
struct FixedOneForm {
  VectorXd b;
  template <class S>
  SVec<S> operator()(std::span<const S>) const {
    SVec<S> r(b.size());
    for (int i = 0; i < b.size(); ++i) r[static_cast<size_t>(i)] = S(b[i]);
    return r;
  }
};
struct SphereNorm {
  template <class S>
  S operator()(std::span<const S> x, std::span<const S> y) const {
    S sr = sin(x[0]);
    return sqrt(y[0] * y[0] + sr * sr * y[1] * y[1]);
  }
};
struct BerwaldProductNorm {
  template <class S>
  S operator()(std::span<const S> x, std::span<const S> y) const {
    S sr = sin(x[0]);
    return sqrt(y[0] * y[0] + sr * sr * y[1] * y[1] + y[2] * y[2]) + 0.4 * y[2];
  }
};
struct NegativeNorm {
  template <class S>
  S operator()(std::span<const S>, std::span<const S> y) const {
    return S(-1.0) * sqrt(y[0] * y[0]);
  }
};
// Degenerate along y2: the Hessian of F^2/2 has a zero eigenvalue.
struct DegenerateNorm {
  template <class S>
  S operator()(std::span<const S>, std::span<const S> y) const {
    return sqrt(y[0] * y[0] + 1e-14 * y[1] * y[1]);
  }
};

// Flat Randers spec driven purely through the AD path (no overrides).
MetricSpec flat_randers_ad(const VectorXd& b) {
  Chart c = Chart::box(static_cast<int>(b.size()), -10.0, 10.0);
  RandersSpec rs = RandersSpec::make(c, IdMetricField{static_cast<int>(b.size())}, FixedOneForm{b});
  return make_metric(c, "flat-randers-ad", RandersNormFunctor{rs});
}

MetricSpec sphere_ad() {
  Chart c;
  c.dim = 2;
  c.bounds = {{0.0, M_PI}, {0.0, 2.0 * M_PI}};
  c.periodic = {false, true};
  c.singular = [](const VectorXd& x) { return x[0] < 1e-3 || x[0] > M_PI - 1e-3; };
  return make_metric(c, "sphere-ad", SphereNorm{});
}

}  // namespace

TEST_SUITE("metric-core") {

TEST_CASE("norm evaluation on the stock examples") {
  auto euclid = make_euclidean(2);
  CHECK(eval_norm(euclid.spec, vec2(0, 0), vec2(3, 4)) == doctest::Approx(5.0));

  VectorXd b = vec2(0.5, 0.0);
  auto randers = make_flat_randers(b);
  CHECK(eval_norm(randers.spec, vec2(0, 0), vec2(1, 0)) == doctest::Approx(1.5));

  auto prod = make_product_sphere_circle(0.3);
  CHECK(eval_norm(prod.spec, vec3(M_PI / 2, 0, 0), vec3(0, 0, 1)) == doctest::Approx(1.3));
}

TEST_CASE("norm errors: singular point and non-admissible direction") {
  auto sphere = make_round_sphere();
  CHECK_THROWS_AS(eval_norm(sphere.spec, vec2(1e-5, 0.0), vec2(1, 0)), Error);

  // A norm that dips negative on nonzero vectors must be rejected.
  Chart c = Chart::box(1, -1, 1);
  auto bad = make_metric(c, "bad", NegativeNorm{});
  VectorXd x1(1), y1(1);
  x1 << 0.0;
  y1 << 1.0;
  CHECK_THROWS_AS(eval_norm(bad, x1, y1), Error);
}

TEST_CASE("fundamental tensor: Riemannian y-independence and homogeneity") {
  auto sphere = make_round_sphere();
  Sampler smp(7);
  VectorXd x = smp.chart_point(sphere.spec.chart());
  MatrixXd g0 = fundamental_tensor(sphere.spec, x, vec2(1.0, 0.3));
  for (int i = 0; i < 6; ++i) {
    VectorXd y = smp.direction(2);
    MatrixXd g = fundamental_tensor(sphere.spec, x, y);
    CHECK((g - g0).cwiseAbs().maxCoeff() < 1e-9);
    MatrixXd g2 = fundamental_tensor(sphere.spec, x, 2.0 * y);
    CHECK((g - g2).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("fundamental tensor: closed-form Randers oracle vs AD path") {
  VectorXd b = vec2(0.35, -0.2);
  MetricSpec ad = flat_randers_ad(b);
  auto closed = make_flat_randers(b);
  Sampler smp(11);
  for (int i = 0; i < 10; ++i) {
    VectorXd x = smp.chart_point(ad.chart());
    VectorXd y = smp.unit_direction(ad, x);
    MatrixXd gad = fundamental_tensor(ad, x, y);
    MatrixXd gcf = fundamental_tensor(closed.spec, x, y);
    CHECK((gad - gcf).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(std::abs(y.dot(gad * y) - 1.0) < 1e-8);  // g_ij y^i y^j = F^2 on unit y
  }
}

TEST_CASE("cartan tensor: Riemannian vanishing, Euler identity, FD oracle") {
  auto sphere = make_round_sphere();
  Sampler smp(13);
  VectorXd x = smp.chart_point(sphere.spec.chart());
  Ten3d A = cartan_tensor(sphere.spec, x, vec2(0.4, 1.1));
  double amax = 0;
  for (double v : A.a) amax = std::max(amax, std::abs(v));
  CHECK(amax < 1e-9);

  VectorXd b = vec2(0.4, 0.1);
  MetricSpec rsp = flat_randers_ad(b);
  VectorXd x0 = vec2(0, 0);
  VectorXd y = vec2(0.8, 0.6);
  Ten3d Ar = cartan_tensor(rsp, x0, y);
  // Euler identity A_ijk y^k = 0
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double c = 0;
      for (int k = 0; k < 2; ++k) c += Ar(i, j, k) * y[k];
      CHECK(std::abs(c) < 1e-9);
    }
  // Third-order central differences of F^2
  auto F2 = [&](double u, double w) {
    VectorXd yy = vec2(u, w);
    const double f = eval_norm(rsp, x0, yy);
    return f * f;
  };
  const double h = 1e-2;
  // d3 F2 / du^2 dw at y
  auto d2u = [&](double u, double w) {
    return (F2(u + h, w) - 2 * F2(u, w) + F2(u - h, w)) / (h * h);
  };
  const double fd = (d2u(y[0], y[1] + h) - d2u(y[0], y[1] - h)) / (2 * h);
  const double F = eval_norm(rsp, x0, y);
  CHECK(Ar(0, 0, 1) == doctest::Approx(F / 4.0 * fd).epsilon(1e-4));
}

TEST_CASE("connection coefficients: flat, sphere Christoffel oracle, symmetry") {
  auto euclid = make_euclidean(3);
  Ten3d G = chern_coefficients(euclid.spec, vec3(0.1, -0.2, 0.5), vec3(1, 2, 0.3));
  double gmax = 0;
  for (double v : G.a) gmax = std::max(gmax, std::abs(v));
  CHECK(gmax < 1e-12);

  MetricSpec sph = sphere_ad();
  const double r = 1.1, cotr = std::cos(r) / std::sin(r);
  VectorXd x = vec2(r, 0.4);
  VectorXd y = vec2(0.3, 0.9);
  Ten3d Gs = chern_coefficients(sph, x, y);
  CHECK(Gs(0, 1, 1) == doctest::Approx(-std::sin(r) * std::cos(r)).epsilon(1e-7));
  CHECK(Gs(1, 0, 1) == doctest::Approx(cotr).epsilon(1e-7));
  CHECK(Gs(1, 1, 0) == doctest::Approx(cotr).epsilon(1e-7));
  CHECK(std::abs(Gs(0, 0, 0)) < 1e-7);
  CHECK(std::abs(Gs(0, 0, 1)) < 1e-7);
  // index symmetry in the lower pair
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) CHECK(Gs(i, j, k) == doctest::Approx(Gs(i, k, j)));
}

TEST_CASE("connection reproduces the spray on the AD path") {
  VectorXd b = vec2(0.3, -0.25);
  MetricSpec rsp = flat_randers_ad(b);
  Sampler smp(3);
  for (int t = 0; t < 5; ++t) {
    VectorXd x = smp.chart_point(rsp.chart());
    VectorXd y = smp.unit_direction(rsp, x);
    Ten3d G = chern_coefficients(rsp, x, y);
    VectorXd spr = spray_coefficients(rsp, x, y);
    for (int i = 0; i < 2; ++i) {
      double acc = 0;
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) acc += 0.5 * G(i, j, k) * y[j] * y[k];
      CHECK(acc == doctest::Approx(spr[i]).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("Berwald family has direction-independent coefficients") {
  // AD path must see y-independent Gamma for the parallel one-form product.
  Chart c = make_product_sphere_circle(0.4).spec.chart();
  MetricSpec spec = make_metric(c, "berwald-ad", BerwaldProductNorm{});
  Sampler smp(17);
  VectorXd x = smp.chart_point(spec.chart());
  Ten3d G0 = chern_coefficients(spec, x, smp.unit_direction(spec, x));
  for (int t = 0; t < 3; ++t) {
    Ten3d G = chern_coefficients(spec, x, smp.unit_direction(spec, x));
    double dmax = 0;
    for (size_t i = 0; i < G.a.size(); ++i) dmax = std::max(dmax, std::abs(G.a[i] - G0.a[i]));
    CHECK(dmax < 1e-6);
  }
}

TEST_CASE("degenerate tensors and flags are rejected") {
  Chart c = Chart::box(2, -1, 1);
  auto bad = make_metric(c, "degenerate", DegenerateNorm{});
  VectorXd x = vec2(0, 0), y = vec2(1.0, 0.3);
  CHECK_THROWS_AS(fundamental_tensor(bad, x, y), Error);

  auto sphere = make_round_sphere();
  VectorXd xs = vec2(1.1, 0.4), ys = vec2(0.3, 0.8);
  CHECK_THROWS_AS(flag_curvature(sphere.spec, xs, Flag{ys, 2.0 * ys}), Error);
}

TEST_CASE("flag curvature: model spaces") {
  MetricSpec sph = sphere_ad();
  Sampler smp(19);
  for (int t = 0; t < 4; ++t) {
    VectorXd x = smp.chart_point(sph.chart());
    VectorXd y = smp.unit_direction(sph, x);
    VectorXd V = smp.direction(2);
    if (std::abs(y.dot(V)) > 0.99 * y.norm() * V.norm()) continue;
    CHECK(flag_curvature(sph, x, Flag{y, V}) == doctest::Approx(1.0).epsilon(1e-6));
  }
  auto euclid = make_euclidean(3);
  VectorXd x = vec3(0.3, 0.1, -0.4);
  CHECK(std::abs(flag_curvature(euclid.spec, x, Flag{vec3(1, 0.2, 0), vec3(0, 1, 0.5)})) < 1e-8);

  // Invariance under V -> aV + by and y -> lambda y
  VectorXd y = vec3(0.9, -0.1, 0.2), V = vec3(0.1, 1.0, 0.0);
  auto prod = make_product_sphere_circle(0.3);
  VectorXd xp = vec3(1.2, 0.7, 0.5);
  const double k0 = flag_curvature(prod.spec, xp, Flag{y, V});
  const double k1 = flag_curvature(prod.spec, xp, Flag{y, 1.7 * V + 0.4 * y});
  const double k2 = flag_curvature(prod.spec, xp, Flag{3.0 * y, V});
  CHECK(k1 == doctest::Approx(k0).epsilon(1e-6).scale(1.0));
  CHECK(k2 == doctest::Approx(k0).epsilon(1e-6).scale(1.0));
  CHECK(k0 >= -1e-6);  // the product family is non-negatively curved
}

TEST_CASE("radial curvature: connection route agrees with spray route") {
  auto rnd = make_sphere_randers(0.2);
  Sampler smp(23);
  for (int t = 0; t < 3; ++t) {
    VectorXd x = smp.chart_point(rnd.spec.chart());
    VectorXd y = smp.unit_direction(rnd.spec, x);
    MatrixXd a = radial_curvature(rnd.spec, x, y);
    MatrixXd b = radial_curvature_spray(rnd.spec, x, y);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + a.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("ricci: constant-curvature values and basis independence") {
  auto s3 = make_round_sphere_3();
  Sampler smp(29);
  VectorXd x = smp.chart_point(s3.spec.chart());
  VectorXd y = smp.unit_direction(s3.spec, x);
  CHECK(ricci(s3.spec, x, y) == doctest::Approx(2.0).epsilon(1e-5));

  auto euclid = make_euclidean(2);
  CHECK(std::abs(ricci(euclid.spec, vec2(0, 0), vec2(0.3, 1.0))) < 1e-10);

  // Basis independence: the sum over any orthonormal completion equals the
  // trace of the radial operator divided by F^2.
  auto rnd = make_sphere_randers(0.15);
  VectorXd xr = smp.chart_point(rnd.spec.chart());
  VectorXd yr = smp.unit_direction(rnd.spec, xr);
  MatrixXd RT = radial_curvature(rnd.spec, xr, yr);
  MatrixXd g = fundamental_tensor(rnd.spec, xr, yr);
  const double F2 = yr.dot(g * yr);
  CHECK(ricci(rnd.spec, xr, yr) == doctest::Approx(RT.trace() / F2).epsilon(1e-6));
}

TEST_CASE("T-curvature: Berwald vanishing and reference-vector identity") {
  auto prod = make_product_sphere_circle(0.3);
  Sampler smp(31);
  for (int t = 0; t < 3; ++t) {
    VectorXd x = smp.chart_point(prod.spec.chart());
    VectorXd y = smp.unit_direction(prod.spec, x);
    VectorXd v = smp.unit_direction(prod.spec, x);
    CHECK(std::abs(t_curvature(prod.spec, x, y, v)) < 1e-7);
  }
  auto sphere = make_round_sphere();
  VectorXd x = smp.chart_point(sphere.spec.chart());
  CHECK(std::abs(t_curvature(sphere.spec, x, vec2(1, 0.5), vec2(0.2, 1))) < 1e-8);
  // T_y(y) = 0
  auto rnd = make_sphere_randers(0.3);
  VectorXd xr = smp.chart_point(rnd.spec.chart());
  VectorXd yr = smp.unit_direction(rnd.spec, xr);
  CHECK(std::abs(t_curvature(rnd.spec, xr, yr, yr)) < 1e-9);
}

TEST_CASE("T bound check: Berwald with l=0 and the infinite sentinel") {
  auto prod = make_product_sphere_circle(0.5);
  Sampler smp(37);
  std::vector<TBoundSample> samples;
  for (int t = 0; t < 8; ++t) {
    VectorXd x = smp.chart_point(prod.spec.chart());
    samples.push_back({x, smp.unit_direction(prod.spec, x), smp.unit_direction(prod.spec, x)});
  }
  auto rep0 = t_bound_check(prod.spec, 0.0, samples);
  CHECK(rep0.pass);
  CHECK(rep0.max_violation < 1e-8);
  auto repInf =
      t_bound_check(make_sphere_randers(0.4).spec, std::numeric_limits<double>::infinity(),
                    std::span<const TBoundSample>(samples.data(), 3));
  CHECK(repInf.pass);
}

TEST_CASE("reversibility: Riemannian unit, flat Randers closed form") {
  auto sphere = make_round_sphere();
  Sampler smp(41);
  std::vector<std::pair<VectorXd, VectorXd>> samples;
  for (int t = 0; t < 32; ++t) {
    VectorXd x = smp.chart_point(sphere.spec.chart());
    samples.emplace_back(x, smp.direction(2));
  }
  CHECK(reversibility(sphere.spec, samples).value == doctest::Approx(1.0).epsilon(1e-9));

  auto randers = make_flat_randers(vec2(0.5, 0.0));
  std::vector<std::pair<VectorXd, VectorXd>> dense;
  for (int i = 0; i < 4096; ++i) {
    const double th = 2.0 * M_PI * i / 4096;
    dense.emplace_back(vec2(0, 0), vec2(std::cos(th), std::sin(th)));
  }
  CHECK(reversibility(randers.spec, dense).value == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("uniformity: Riemannian unit, refinement stability, lambda <= sqrt(Lambda)") {
  Sampler smp(43);
  auto sphere = make_round_sphere();
  std::vector<UniformitySample> us;
  for (int t = 0; t < 16; ++t) {
    VectorXd x = smp.chart_point(sphere.spec.chart());
    us.push_back({x, smp.direction(2), smp.direction(2), smp.direction(2)});
  }
  CHECK(uniformity(sphere.spec, us).value == doctest::Approx(1.0).epsilon(1e-9));

  auto randers = make_flat_randers(vec2(0.3, 0.0));
  auto batch = [&](int n, uint64_t seed) {
    Sampler s2(seed);
    std::vector<UniformitySample> v;
    VectorXd origin = vec2(0, 0);
    for (int t = 0; t < n; ++t)
      v.push_back({origin, s2.direction(2), s2.direction(2), s2.direction(2)});
    return uniformity(randers.spec, v).value;
  };
  const double u1 = batch(3000, 5), u2 = batch(6000, 5);
  CHECK(u2 >= u1 - 1e-12);  // monotone under refinement with nested seeds
  CHECK(std::abs(u2 - u1) < 1e-2);
  CHECK(u2 >= 1.0);

  std::vector<std::pair<VectorXd, VectorXd>> rev;
  Sampler s3(7);
  for (int t = 0; t < 2000; ++t) rev.emplace_back(vec2(0, 0), s3.direction(2));
  const double lam = reversibility(randers.spec, rev).value;
  CHECK(lam <= std::sqrt(batch(6000, 5)) + 1e-2);
}

TEST_CASE("AD derivatives match central differences on smooth samples") {
  auto rnd = make_sphere_randers(0.25);
  Sampler smp(47);
  VectorXd x = smp.chart_point(rnd.spec.chart());
  VectorXd y = smp.unit_direction(rnd.spec, x);
  MatrixXd g = fundamental_tensor(rnd.spec, x, y);
  const double h = 1e-4;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto F2 = [&](double du, double dw) {
        VectorXd yy = y;
        yy[i] += du;
        yy[j] += dw;
        const double f = eval_norm(rnd.spec, x, yy);
        return 0.5 * f * f;
      };
      double fd;
      if (i == j)
        fd = (F2(h, 0) - 2 * F2(0, 0) + F2(-h, 0)) / (h * h);
      else
        fd = (F2(h, h) - F2(h, -h) - F2(-h, h) + F2(-h, -h)) / (4 * h * h);
      CHECK(g(i, j) == doctest::Approx(fd).epsilon(1e-4));
    }
}

}  // TEST_SUITE
