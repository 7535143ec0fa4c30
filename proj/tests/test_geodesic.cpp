#include "doctest.h"
#include "finsler/families.hpp"
#include "finsler/geodesic.hpp"
#include "finsler/sampling.hpp"

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
}  // namespace

TEST_SUITE("geodesic") {

TEST_CASE("Euclidean geodesics are straight lines") {
  auto euclid = make_euclidean(2);
  auto seg = integrate_geodesic(euclid.spec, vec2(0.5, -0.5), vec2(1.0, 2.0), 3.0, 31);
  for (size_t j = 0; j < seg.ts.size(); ++j) {
    VectorXd expect = vec2(0.5 + seg.ts[j], -0.5 + 2.0 * seg.ts[j]);
    CHECK((seg.xs[j] - expect).norm() < 1e-10);
  }
}

TEST_CASE("great circle on the round sphere closes after one period") {
  auto sphere = make_round_sphere();
  // Equatorial circle: r = pi/2, unit angular speed.
  auto seg = integrate_geodesic(sphere.spec, vec2(M_PI / 2, 0.2), vec2(0.0, 1.0), 2.0 * M_PI, 101);
  CHECK(std::abs(seg.xs.back()[0] - M_PI / 2) < 1e-5);
  CHECK(std::abs(seg.xs.back()[1] - 0.2) < 1e-5);
  // Energy conservation along the way.
  for (size_t j = 0; j < seg.ts.size(); ++j)
    CHECK(std::abs(seg.speed(static_cast<int>(j)) - 1.0) < 1e-6);
}

TEST_CASE("circle fibers of the product family are geodesics") {
  auto prod = make_product_sphere_circle(0.3);
  VectorXd x0 = vec3(M_PI / 2, 0.0, 0.5);
  auto seg = integrate_geodesic(prod.spec, x0, vec3(0, 0, -1.0), 2.0, 41);
  for (size_t j = 0; j < seg.ts.size(); ++j) {
    CHECK(std::abs(seg.xs[j][0] - M_PI / 2) < 1e-7);
    CHECK(std::abs(seg.xs[j][1] - 0.0) < 1e-7);
    double expect_t = std::fmod(std::fmod(0.5 - seg.ts[j], 2 * M_PI) + 2 * M_PI, 2 * M_PI);
    CHECK(std::abs(seg.xs[j][2] - expect_t) < 1e-7);
    CHECK(seg.speed(static_cast<int>(j)) == doctest::Approx(0.7).epsilon(1e-8));
  }
  CHECK(seg.length() == doctest::Approx(2.0 * 0.7).epsilon(1e-8));
}

TEST_CASE("energy drift stays small over long integrations") {
  auto rnd = make_sphere_randers(0.3);
  VectorXd x0 = vec2(1.2, 0.4);
  Sampler smp(3);
  VectorXd y0 = smp.unit_direction(rnd.spec, x0);
  auto seg = integrate_geodesic(rnd.spec, x0, y0, 10.0, 101);
  double fmin = 1e300, fmax = 0;
  for (size_t j = 0; j < seg.ts.size(); ++j) {
    const double f = seg.speed(static_cast<int>(j));
    fmin = std::min(fmin, f);
    fmax = std::max(fmax, f);
  }
  CHECK((fmax - fmin) / fmax < 1e-6);
}

TEST_CASE("exp map: scaling consistency and equatorial antipode") {
  auto sphere = make_round_sphere();
  VectorXd x = vec2(M_PI / 2, 1.0);
  VectorXd y = vec2(0.0, 1.0);
  // exp(x, t y) equals the geodesic node gamma_y(t)
  auto seg = integrate_geodesic(sphere.spec, x, y, 0.7, 8);
  VectorXd e = exp_map(sphere.spec, x, 0.7 * y);
  CHECK((e - seg.xs.back()).norm() < 1e-8);
  // |y| = pi along the equator lands on the antipode
  VectorXd anti = exp_map(sphere.spec, x, M_PI * y);
  CHECK(std::abs(anti[0] - M_PI / 2) < 1e-5);
  CHECK(std::abs(anti[1] - (1.0 + M_PI)) < 1e-5);
}

TEST_CASE("chart exit raised at the pole collar") {
  auto sphere = make_round_sphere();
  CHECK_THROWS_AS(integrate_geodesic(sphere.spec, vec2(M_PI / 2, 0.0), vec2(1.0, 0.0), 2.0, 11),
                  Error);
}

TEST_CASE("fixed-step convergence order matches the scheme") {
  auto sphere = make_round_sphere();
  // Tilted great circle so the coordinate trajectory genuinely curves.
  VectorXd x0 = vec2(M_PI / 2, 0.0), y0 = vec2(0.6, 0.8);
  auto endpoint_with = [&](int substeps) {
    IntegratorOptions opt;
    opt.fixed_step = true;
    opt.fixed_substeps = substeps;
    auto seg = integrate_geodesic(sphere.spec, x0, y0, 1.5, 2, opt);
    return seg.xs.back();
  };
  VectorXd ref = exp_map(sphere.spec, x0, 1.5 * y0);  // tight adaptive reference
  const double e1 = (endpoint_with(16) - ref).norm();
  const double e2 = (endpoint_with(32) - ref).norm();
  const double p = std::log2(e1 / e2);
  CHECK(p == doctest::Approx(5.0).epsilon(0.06));  // order 5 +- 0.3
}

TEST_CASE("parallel transport: isometry of the pairing and sphere holonomy") {
  auto sphere = make_round_sphere();
  VectorXd x0 = vec2(M_PI / 2, 0.0), y0 = vec2(0.0, 1.0);
  MatrixXd V(2, 2);
  V << 1.0, 0.3, 0.0, 0.8;  // columns: radial-ish and mixed vectors
  auto tr = parallel_transport(sphere.spec, x0, y0, V, 2.0 * M_PI, 101);
  MatrixXd g0 = fundamental_tensor(sphere.spec, x0, y0);
  MatrixXd gram0 = tr.frames.front().transpose() * g0 * tr.frames.front();
  for (size_t j = 0; j < tr.frames.size(); ++j) {
    MatrixXd g = fundamental_tensor(sphere.spec, tr.segment.xs[j], tr.segment.vs[j]);
    MatrixXd gram = tr.frames[j].transpose() * g * tr.frames[j];
    CHECK((gram - gram0).cwiseAbs().maxCoeff() < 1e-6);
  }
  // Closed transport along the equatorial geodesic returns the start vector.
  CHECK((tr.frames.back() - tr.frames.front()).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("transport of the tangent reproduces the velocity field") {
  auto rnd = make_sphere_randers(0.25);
  VectorXd x0 = vec2(1.0, 0.7);
  Sampler smp(7);
  VectorXd y0 = smp.unit_direction(rnd.spec, x0);
  auto tr = parallel_transport(rnd.spec, x0, y0, y0, 2.5, 51);
  for (size_t j = 0; j < tr.frames.size(); ++j)
    CHECK((tr.frames[j].col(0) - tr.segment.vs[j]).norm() < 1e-7);
}

TEST_CASE("Euclidean transport keeps components constant") {
  auto euclid = make_euclidean(3);
  MatrixXd V = MatrixXd::Identity(3, 3);
  auto tr = parallel_transport(euclid.spec, vec3(0, 0, 0), vec3(1, 0.5, -0.2), V, 2.0, 21);
  CHECK((tr.frames.back() - V).cwiseAbs().maxCoeff() < 1e-12);
}

}  // TEST_SUITE
