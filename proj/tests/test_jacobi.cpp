#include "doctest.h"
#include "finsler/families.hpp"
#include "finsler/jacobi.hpp"
#include "finsler/sampling.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace finsler;
using finsler::testing::variation_fd;

namespace {
VectorXd vec0() { return VectorXd(0); }
VectorXd vec1(double a) {
  VectorXd v(1);
  v << a;
  return v;
}
VectorXd vec2(double a, double b) {
  VectorXd v(2);
  v << a, b;
  return v;
}

}  // namespace

TEST_SUITE("jacobi") {

TEST_CASE("point on the round sphere: det A = sin t, focal value pi") {
  auto sphere = make_round_sphere();
  auto pt = SubmanifoldSpec::point_at(vec2(M_PI / 2, 0.3));
  // tilted direction: the geodesic stays away from the poles
  ConormalFrame fr = conormal_sphere_point(sphere.spec, pt, vec0(), vec1(M_PI / 3));
  JacobiSolution sol = solve_jacobi(sphere.spec, fr, 3.4, 341);
  for (size_t j = 0; j < sol.ts.size(); ++j)
    CHECK(std::abs(sol.detA[j] - std::sin(sol.ts[j])) < 1e-6);
  CHECK(focal_value(sol) == doctest::Approx(M_PI).epsilon(1e-6));
  // q -> 1 near zero
  for (size_t j = 1; j < sol.ts.size() && sol.ts[j] < 1e-2; ++j)
    CHECK(std::abs(sol.q[j] - 1.0) < 1e-3);
}

TEST_CASE("point on the 3-sphere: touch-point focal detection at pi") {
  auto s3 = make_round_sphere_3();
  auto pt = SubmanifoldSpec::point_at(Eigen::Vector3d(M_PI / 2, M_PI / 2, 1.0));
  VectorXd theta(2);
  theta << 1.35, 1.2;  // generic tilt, clear of both polar axes
  ConormalFrame fr = conormal_sphere_point(s3.spec, pt, vec0(), theta);
  JacobiSolution sol = solve_jacobi(s3.spec, fr, 3.4, 241);
  for (size_t j = 0; j < sol.ts.size(); ++j)
    CHECK(std::abs(sol.detA[j] - std::pow(std::sin(sol.ts[j]), 2)) < 1e-6);
  // det A = sin^2 t never changes sign; the touch at pi must still be found
  CHECK(focal_value(sol) == doctest::Approx(M_PI).epsilon(1e-6));
}

TEST_CASE("distance circle: shifted cosine solution and focal values both ways") {
  auto sphere = make_round_sphere();
  const double r0 = 0.8;
  SubmanifoldSpec circle =
      build_submanifold_family("distance-circle", {{"r0", r0}, {"theta0", 0.0}}, 2);
  for (double th : {0.0, M_PI}) {
    ConormalFrame fr = conormal_sphere_point(sphere.spec, circle, vec1(0.9), vec1(th));
    const double lam = fr.weingarten(0, 0);
    const double expected_focal = lam > 0 ? r0 : M_PI - r0;
    JacobiSolution sol = solve_jacobi(sphere.spec, fr, 0.95 * expected_focal + 0.2, 241);
    for (size_t j = 0; j < sol.ts.size(); ++j) {
      const double model = std::cos(sol.ts[j]) - lam * std::sin(sol.ts[j]);
      CHECK(std::abs(sol.detA[j] - model) < 1e-5);
    }
    CHECK(focal_value(sol) == doctest::Approx(expected_focal).epsilon(1e-6));
  }
}

TEST_CASE("flat line has no focal points") {
  auto euclid = make_euclidean(3);
  SubmanifoldSpec line = build_submanifold_family("line", {{"d1", 1.0}}, 3);
  ConormalFrame fr = conormal_sphere_point(euclid.spec, line, vec1(0.1), vec1(0.7));
  JacobiSolution sol = solve_jacobi(euclid.spec, fr, 6.0, 121);
  CHECK(std::isinf(focal_value(sol)));
  for (size_t j = 0; j < sol.ts.size(); ++j) CHECK(std::abs(sol.q[j] - 1.0) < 1e-8);
}

TEST_CASE("matrix columns match central-difference geodesic variations") {
  const double tmax = 1.2;
  const int nodes = 25;
  const double h = 1e-4;

  // flat Randers, point: transverse column
  {
    auto flat = make_flat_randers(Eigen::Vector2d(0.35, -0.15));
    auto pt = SubmanifoldSpec::point_at(vec2(0.2, 0.1));
    ConormalFrame fr = conormal_sphere_point(flat.spec, pt, vec0(), vec1(1.1));
    JacobiSolution sol = solve_jacobi(flat.spec, fr, tmax, nodes);
    MatrixXd fd = variation_fd(flat.spec, pt, vec0(), vec1(1.1), 0, true, tmax, nodes, h);
    for (int j = 0; j < nodes; ++j) {
      VectorXd col = sol.E[static_cast<size_t>(j)] * sol.A[static_cast<size_t>(j)].col(0);
      CHECK((col - fd.col(j)).cwiseAbs().maxCoeff() < 1e-4);
    }
  }
  // round sphere, distance circle: tangential column through the u-variation
  {
    auto sphere = make_round_sphere();
    SubmanifoldSpec circle =
        build_submanifold_family("distance-circle", {{"r0", 0.8}, {"theta0", 0.0}}, 2);
    ConormalFrame fr = conormal_sphere_point(sphere.spec, circle, vec1(0.4), vec1(0.0));
    JacobiSolution sol = solve_jacobi(sphere.spec, fr, tmax, nodes);
    MatrixXd fd = variation_fd(sphere.spec, circle, vec1(0.4), vec1(0.0), 0, false, tmax, nodes, h);
    for (int j = 0; j < nodes; ++j) {
      VectorXd col = sol.E[static_cast<size_t>(j)] * sol.A[static_cast<size_t>(j)].col(0);
      CHECK((col - fd.col(j)).cwiseAbs().maxCoeff() < 1e-4);
    }
  }
  // Randers sphere, point: non-Riemannian variation
  {
    auto rnd = make_sphere_randers(0.2);
    auto pt = SubmanifoldSpec::point_at(vec2(1.2, 0.5));
    ConormalFrame fr = conormal_sphere_point(rnd.spec, pt, vec0(), vec1(2.0));
    JacobiSolution sol = solve_jacobi(rnd.spec, fr, tmax, nodes);
    MatrixXd fd = variation_fd(rnd.spec, pt, vec0(), vec1(2.0), 0, true, tmax, nodes, h);
    for (int j = 0; j < nodes; ++j) {
      VectorXd col = sol.E[static_cast<size_t>(j)] * sol.A[static_cast<size_t>(j)].col(0);
      CHECK((col - fd.col(j)).cwiseAbs().maxCoeff() < 1e-4);
    }
  }
}

TEST_CASE("conservation: Lagrange identity and the radial pairing") {
  auto rnd = make_sphere_randers(0.25);
  auto pt = SubmanifoldSpec::point_at(vec2(1.3, 2.0));
  ConormalFrame fr = conormal_sphere_point(rnd.spec, pt, vec0(), vec1(0.4));
  JacobiSolution sol = solve_jacobi(rnd.spec, fr, 2.0, 101);
  MatrixXd W0 = sol.Adot.front().transpose() * sol.gram0 * sol.A.front() -
                sol.A.front().transpose() * sol.gram0 * sol.Adot.front();
  for (size_t j = 0; j < sol.ts.size(); ++j) {
    MatrixXd W = sol.Adot[j].transpose() * sol.gram0 * sol.A[j] -
                 sol.A[j].transpose() * sol.gram0 * sol.Adot[j];
    CHECK((W - W0).cwiseAbs().maxCoeff() < 1e-6);
    // g_T(T, J) = 0 for every column pushed through the transported frame
    MatrixXd g = fundamental_tensor(rnd.spec, sol.xs[j], sol.vs[j]);
    VectorXd gT = g * sol.vs[j];
    VectorXd col = sol.E[j] * sol.A[j].col(0);
    CHECK(std::abs(gT.dot(col)) < 1e-6);
  }
}

TEST_CASE("transported curvature: model values and metric self-adjointness") {
  auto euclid = make_euclidean(3);
  SubmanifoldSpec line = build_submanifold_family("line", {{"d1", 1.0}}, 3);
  ConormalFrame fre = conormal_sphere_point(euclid.spec, line, vec1(0.1), vec1(0.7));
  JacobiSolution sole = solve_jacobi(euclid.spec, fre, 2.0, 21);
  for (size_t j = 0; j < sole.ts.size(); ++j)
    CHECK(transported_curvature(sole, static_cast<int>(j)).cwiseAbs().maxCoeff() < 1e-10);

  auto sphere = make_round_sphere();
  auto pt = SubmanifoldSpec::point_at(vec2(M_PI / 2, 0.3));
  ConormalFrame fr = conormal_sphere_point(sphere.spec, pt, vec0(), vec1(M_PI / 3));
  JacobiSolution sol = solve_jacobi(sphere.spec, fr, 2.0, 41);
  for (size_t j = 0; j < sol.ts.size(); ++j) {
    MatrixXd R = transported_curvature(sol, static_cast<int>(j));
    CHECK(R.rows() == 1);
    CHECK(R(0, 0) == doctest::Approx(1.0).epsilon(1e-5));
  }

  auto rnd = make_sphere_randers(0.25);
  auto pt2 = SubmanifoldSpec::point_at(vec2(1.2, 0.7));
  ConormalFrame fr2 = conormal_sphere_point(rnd.spec, pt2, vec0(), vec1(0.9));
  JacobiSolution sol2 = solve_jacobi(rnd.spec, fr2, 2.0, 41);
  for (size_t j = 0; j < sol2.ts.size(); j += 5) {
    // self-adjointness with respect to the transported pairing
    MatrixXd S = sol2.gram0 * transported_curvature(sol2, static_cast<int>(j));
    CHECK((S - S.transpose()).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("determinant is independent of the transverse basis choice") {
  auto s3 = make_round_sphere_3();
  auto pt = SubmanifoldSpec::point_at(Eigen::Vector3d(M_PI / 2, M_PI / 2, 0.3));
  VectorXd theta(2);
  theta << 1.3, 1.1;
  ConormalFrame fr = conormal_sphere_point(s3.spec, pt, vec0(), theta);
  JacobiSolution sol1 = solve_jacobi(s3.spec, fr, 1.5, 41);

  ConormalFrame fr2 = fr;
  const double ang = 0.6;
  Eigen::Matrix2d Q;
  Q << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
  fr2.e_trans = fr.e_trans * Q;
  fr2.basis << fr2.e_tan, fr2.e_trans;
  fr2.gram = fr2.basis.transpose() * fr2.gn * fr2.basis;
  JacobiSolution sol2 = solve_jacobi(s3.spec, fr2, 1.5, 41);
  for (size_t j = 1; j < sol1.ts.size(); ++j)
    CHECK(sol2.detA[j] == doctest::Approx(sol1.detA[j]).epsilon(1e-8));
}

TEST_CASE("index form: vanishing field, model Jacobi field, positivity") {
  auto sphere = make_round_sphere();
  auto pt = SubmanifoldSpec::point_at(vec2(M_PI / 2, 0.6));
  ConormalFrame fr = conormal_sphere_point(sphere.spec, pt, vec0(), vec1(M_PI / 2));
  JacobiSolution sol = solve_jacobi(sphere.spec, fr, M_PI, 201);

  const int nn = static_cast<int>(sol.ts.size());
  FrameField zero;
  zero.vals = MatrixXd::Zero(1, nn);
  zero.derivs = MatrixXd::Zero(1, nn);
  CHECK(index_form(sol, zero, zero) == 0.0);

  // X = sin(t) E(t) vanishes at both ends on [0, pi]: a Jacobi field, I = 0.
  FrameField X;
  X.vals = MatrixXd(1, nn);
  X.derivs = MatrixXd(1, nn);
  for (int j = 0; j < nn; ++j) {
    X.vals(0, j) = std::sin(sol.ts[static_cast<size_t>(j)]);
    X.derivs(0, j) = std::cos(sol.ts[static_cast<size_t>(j)]);
  }
  CHECK(std::abs(index_form(sol, X, X)) < 1e-5);

  //

  // On a focal-free segment the index is positive definite on fields
  // vanishing at both ends.
  JacobiSolution part = solve_jacobi(sphere.spec, fr, 2.4, 201);
  Sampler smp(5);
  const int pn = static_cast<int>(part.ts.size());
  for (int trial = 0; trial < 20; ++trial) {
    const double a2 = smp.uniform(-1, 1), a3 = smp.uniform(-1, 1);
    FrameField Y;
    Y.vals = MatrixXd(1, pn);
    Y.derivs = MatrixXd(1, pn);
    const double L = part.ts.back();
    for (int j = 0; j < pn; ++j) {
      const double t = part.ts[static_cast<size_t>(j)];
      const double s1 = std::sin(M_PI * t / L), s2 = std::sin(2 * M_PI * t / L);
      const double d1 = M_PI / L * std::cos(M_PI * t / L),
                   d2 = 2 * M_PI / L * std::cos(2 * M_PI * t / L);
      Y.vals(0, j) = a2 * s1 + a3 * s2;
      Y.derivs(0, j) = a2 * d1 + a3 * d2;
    }
    if (std::abs(a2) + std::abs(a3) < 1e-3) continue;
    CHECK(index_form(part, Y, Y) > 0.0);
  }
}

TEST_CASE("index minimality of the transverse Jacobi field") {
  auto sphere = make_round_sphere();
  SubmanifoldSpec circle =
      build_submanifold_family("distance-circle", {{"r0", 0.9}, {"theta0", 0.0}}, 2);
  ConormalFrame fr = conormal_sphere_point(sphere.spec, circle, vec1(1.1), vec1(0.0));
  const double lam = fr.weingarten(0, 0);
  const double cf = lam > 0 ? 0.9 : M_PI - 0.9;
  JacobiSolution sol = solve_jacobi(sphere.spec, fr, 0.7 * cf, 201);
  FrameField J = jacobi_column_field(sol, 0);
  const double IJ = index_form(sol, J, J);
  Sampler smp(7);
  const int nn = static_cast<int>(sol.ts.size());
  for (int trial = 0; trial < 10; ++trial) {
    const double amp = smp.uniform(-0.5, 0.5);
    FrameField X = J;
    const double L = sol.ts.back();
    for (int j = 0; j < nn; ++j) {
      const double t = sol.ts[static_cast<size_t>(j)];
      X.vals(0, j) += amp * std::sin(M_PI * t / L);
      X.derivs(0, j) += amp * M_PI / L * std::cos(M_PI * t / L);
    }
    CHECK(index_form(sol, X, X) >= IJ - 1e-6);
  }
}

TEST_CASE("past the focal value a field with negative index exists") {
  auto sphere = make_round_sphere();
  auto pt = SubmanifoldSpec::point_at(vec2(M_PI / 2, 0.6));
  ConormalFrame fr = conormal_sphere_point(sphere.spec, pt, vec0(), vec1(M_PI / 2));
  const double a = M_PI + 0.4;
  JacobiSolution sol = solve_jacobi(sphere.spec, fr, a, 351);
  const double cf = focal_value(sol);
  REQUIRE(cf < a);
  // truncated Jacobi field plus a small corrector with Z(c_f) = -J'(c_f)
  const int nn = static_cast<int>(sol.ts.size());
  size_t j0 = 0;
  while (j0 + 1 < sol.ts.size() && sol.ts[j0 + 1] <= cf) ++j0;
  FrameField U;
  U.vals = MatrixXd::Zero(1, nn);
  U.derivs = MatrixXd::Zero(1, nn);
  const double dJ = sol.Adot[j0](0, 0);
  for (int j = 0; j <= static_cast<int>(j0); ++j) {
    U.vals(0, j) = sol.A[static_cast<size_t>(j)](0, 0);
    U.derivs(0, j) = sol.Adot[static_cast<size_t>(j)](0, 0);
  }
  const double t0 = sol.ts[j0];
  bool found_negative = false;
  for (double eps : {0.02, 0.05, 0.1, 0.2}) {
    FrameField U2 = U;
    for (int j = 0; j < nn; ++j) {
      const double t = sol.ts[static_cast<size_t>(j)];
      const double bump = t < t0 ? t / t0 : (sol.ts.back() - t) / (sol.ts.back() - t0);
      const double dbump = t < t0 ? 1.0 / t0 : -1.0 / (sol.ts.back() - t0);
      U2.vals(0, j) += eps * (-dJ) * bump;
      U2.derivs(0, j) += eps * (-dJ) * dbump;
    }
    if (index_form(sol, U2, U2) < 0) found_negative = true;
  }
  CHECK(found_negative);
}

TEST_CASE("focal value is lower semicontinuous along a frame path") {
  auto rnd = make_sphere_randers(0.15);
  auto pt = SubmanifoldSpec::point_at(vec2(1.4, 1.0));
  auto cf_at = [&](double th) {
    ConormalFrame fr = conormal_sphere_point(rnd.spec, pt, vec0(), vec1(th));
    JacobiSolution sol = solve_jacobi(rnd.spec, fr, 4.2, 201);
    return focal_value(sol);
  };
  const double cf0 = cf_at(0.8);
  double tail_min = kInf;
  for (double h : {0.04, 0.02, 0.01}) tail_min = std::min(tail_min, std::min(cf_at(0.8 - h), cf_at(0.8 + h)));
  CHECK(tail_min >= cf0 - 1e-3);
}

TEST_CASE("comparison bound: sphere saturates, Randers sphere passes with margin") {
  auto sphere = make_round_sphere();
  auto pt = SubmanifoldSpec::point_at(vec2(M_PI / 2, 0.3));
  ConormalFrame fr = conormal_sphere_point(sphere.spec, pt, vec0(), vec1(M_PI / 3));
  JacobiSolution sol = solve_jacobi(sphere.spec, fr, 3.4, 341);
  auto outcome = jacobi_determinant_bound(sol, 1.0);
  CHECK(outcome.pass);
  CHECK(std::abs(outcome.max_violation) < 1e-6);  // equality on the model space
  CHECK(outcome.zeta0 == doctest::Approx(M_PI).epsilon(1e-9));

  auto rnd = make_sphere_randers(0.1);
  auto pt2 = SubmanifoldSpec::point_at(vec2(1.3, 0.4));
  ConormalFrame fr2 = conormal_sphere_point(rnd.spec, pt2, vec0(), vec1(1.9));
  JacobiSolution sol2 = solve_jacobi(rnd.spec, fr2, 4.0, 301);
  auto outcome2 = jacobi_determinant_bound(sol2, 0.5);
  CHECK(outcome2.pass);
  CHECK(outcome2.min_flag_sampled >= 0.5);

  // hypothesis violation: the sphere does not have curvature >= 2
  CHECK_THROWS_AS(jacobi_determinant_bound(sol, 2.0), Error);
}

}  // TEST_SUITE
