#include "doctest.h"
#include "finsler/bounds.hpp"

#include <cmath>

using namespace finsler;

TEST_SUITE("bounds") {

TEST_CASE("comparison function values and derivative consistency") {
  CHECK(s_delta(1.0, M_PI / 2) == doctest::Approx(1.0));
  CHECK(s_delta(0.0, 3.0) == doctest::Approx(3.0));
  CHECK(s_delta(-1.0, 1.0) == doctest::Approx(std::sinh(1.0)));
  for (double delta : {1.0, 0.0, -0.7, 2.3}) {
    for (double t : {0.2, 0.9, 1.7}) {
      const double h = 1e-6;
      const double fd = (s_delta(delta, t + h) - s_delta(delta, t - h)) / (2 * h);
      CHECK(s_delta_prime(delta, t) == doctest::Approx(fd).epsilon(1e-8));
    }
  }
  CHECK(std::isinf(conjugate_horizon(0.0)));
  CHECK(std::isinf(conjugate_horizon(-1.0)));
  CHECK(conjugate_horizon(4.0) == doctest::Approx(M_PI / 2));
}

TEST_CASE("unit sphere volumes") {
  CHECK(sphere_volume(0) == doctest::Approx(2.0));
  CHECK(sphere_volume(1) == doctest::Approx(2 * M_PI));
  CHECK(sphere_volume(2) == doctest::Approx(4 * M_PI));
  CHECK(sphere_volume(3) == doctest::Approx(2 * M_PI * M_PI));
}

TEST_CASE("first zeros of the comparison factor") {
  CHECK(zeta(1.0, 0.0, 1) == doctest::Approx(M_PI / 2).epsilon(1e-10));
  CHECK(zeta(0.0, 3.0, 3) == doctest::Approx(1.0));
  const double r0 = 0.8;
  CHECK(zeta(1.0, std::cos(r0) / std::sin(r0), 1) == doctest::Approx(r0).epsilon(1e-9));
  CHECK(std::isinf(zeta(0.0, -2.0, 1)));
  CHECK(std::isinf(zeta(-1.0, 0.5, 1)));
  CHECK(zeta(-1.0, 2.0, 1) == doctest::Approx(std::atanh(0.5)).epsilon(1e-9));
}

TEST_CASE("model determinant closed forms") {
  CHECK(model_det(1.0, 0.0, 0, 2, 0.7) == doctest::Approx(std::sin(0.7)));
  CHECK(model_det(0.0, 2.0, 2, 5, 0.3) ==
        doctest::Approx(std::pow(1 - 0.3, 2) * std::pow(0.3, 2)));
  const double r0 = 0.6, lam = std::cos(r0) / std::sin(r0);
  CHECK(model_det(1.0, lam, 1, 2, 0.4) ==
        doctest::Approx(std::cos(0.4) - lam * std::sin(0.4)));
  CHECK(model_det_first_zero(1.0, {lam}, 1, 2) == doctest::Approx(r0).epsilon(1e-9));
  CHECK(model_det_first_zero(1.0, {}, 0, 2) == doctest::Approx(M_PI));
  CHECK(std::isinf(model_det_first_zero(0.0, {-1.0}, 1, 2)));
}

TEST_CASE("powers of the comparison function integrate to closed forms") {
  const double d = 1.3;
  CHECK(integral_s_delta_pow(1.0, 1, d) == doctest::Approx(1 - std::cos(d)).epsilon(1e-10));
  CHECK(integral_s_delta_pow(1.0, 2, d) ==
        doctest::Approx(0.5 * (d - std::sin(d) * std::cos(d))).epsilon(1e-10));
  CHECK(integral_s_delta_pow(0.0, 2, d) == doctest::Approx(d * d * d / 3).epsilon(1e-10));
  CHECK(integral_s_delta_pow(-1.0, 1, d) == doctest::Approx(std::cosh(d) - 1).epsilon(1e-10));
  CHECK(integral_s_delta_pow(4.0, 3, d) ==
        doctest::Approx(adaptive_simpson(
            [&](double t) { return std::pow(std::sin(2 * t) / 2, 3); }, 0, d)));
}

TEST_CASE("tube right-hand sides saturate on the round sphere") {
  // point case: tau = 0, fiber integral 2 pi, delta = 1, d = pi
  CHECK(point_tube_rhs(2 * M_PI, 1.0, M_PI, 2) == doctest::Approx(4 * M_PI).epsilon(1e-10));
  // equator case: c_0 = 2, Lambda = 1, muN = 2 pi, H = 0
  CHECK(submanifold_tube_rhs(2, 1, 1.0, 2 * M_PI, 1.0, M_PI, 0.0) ==
        doctest::Approx(4 * M_PI).epsilon(1e-9));
  // flat closed geodesic: the integral collapses to L * d * c_0
  CHECK(submanifold_tube_rhs(2, 1, 1.0, 3.0, 0.0, 0.7, 0.0) ==
        doctest::Approx(2.0 * 3.0 * 0.7).epsilon(1e-10));
}

TEST_CASE("flat point-case tube value") {
  // flat chart, k = 0: the integral term is d^2/2, giving 2 pi d^2 / 2.
  const double d = std::sqrt(2.0) / 2;
  CHECK(point_tube_rhs(2 * M_PI, 0.0, d, 2) == doctest::Approx(M_PI * d * d).epsilon(1e-12));
  CHECK(point_tube_rhs(2 * M_PI, 0.0, d, 2) >= 1.0);  // dominates the unit torus area
}

TEST_CASE("length and injectivity bounds on the models") {
  CHECK(closed_geodesic_length_bound(4 * M_PI, 2, 1.0, 1.0, M_PI, 0.0) ==
        doctest::Approx(2 * M_PI).epsilon(1e-12));
  CHECK(closed_geodesic_length_bound(1.0, 2, 1.0, 0.0, std::sqrt(2.0) / 2, 0.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(injectivity_radius_bound(4 * M_PI, 2, 1.0, 1.0, M_PI, 0.0) ==
        doctest::Approx(M_PI / std::sinh(M_PI)).epsilon(1e-12));
  CHECK(injectivity_radius_bound(1.0, 2, 1.0, 0.0, 0.7, 0.0) ==
        doctest::Approx(1.0 / (2 * 2 * 0.7)).epsilon(1e-12));
}

TEST_CASE("Randers length bound: Riemannian reduction and monotonicity") {
  const double mu = 4 * M_PI, volAlpha = 4 * M_PI;
  CHECK(randers_length_bound(mu, volAlpha, 0.0, 0.0, 1.0, M_PI, 2) ==
        doctest::Approx(closed_geodesic_length_bound(mu, 2, 1.0, 1.0, M_PI, 0.0))
            .epsilon(1e-10));
  double prev = kInf;
  for (double b1 : {0.0, 0.1, 0.5, 2.0}) {
    const double v = randers_length_bound(30.0, 28.0, 0.3, b1, 0.5, 3.0, 3);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("report helpers carry margins and pass flags") {
  auto up = make_upper_bound_report("s", "c", 3.0, 4.0);
  CHECK(up.pass);
  CHECK(up.margin == doctest::Approx(1.0));
  auto dn = make_lower_bound_report("s", "c", 3.0, 4.0);
  CHECK(!dn.pass);
  CHECK(dn.margin == doctest::Approx(-1.0));
  auto tight = make_lower_bound_report("s", "c", 4.0, 4.0 + 1e-10);
  CHECK(tight.pass);  // within tolerance of the bound
}

}  // TEST_SUITE
