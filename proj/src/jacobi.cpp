#include "finsler/jacobi.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <ostream>

#include "finsler/sampling.hpp"

namespace finsler {

namespace {

struct Layout {
  int m, d;
  int x0 = 0, v0, e0, a0, ad0, total;
  explicit Layout(int mm) : m(mm), d(mm - 1) {
    v0 = m;
    e0 = 2 * m;
    a0 = e0 + m * d;
    ad0 = a0 + d * d;
    total = ad0 + d * d;
  }
  MatrixXd frameE(const VectorXd& s) const {
    MatrixXd E(m, d);
    for (int a = 0; a < d; ++a) E.col(a) = s.segment(e0 + a * m, m);
    return E;
  }
  MatrixXd matA(const VectorXd& s, int base) const {
    MatrixXd A(d, d);
    for (int j = 0; j < d; ++j) A.col(j) = s.segment(base + j * d, d);
    return A;
  }
};

// Curvature matrix of the transported frame: coordinates of R_T(E_b) in the
// frame [v | E]. The v-component is discarded (zero up to integration error).
MatrixXd curvature_in_frame(const MetricSpec& spec, const VectorXd& x, const VectorXd& v,
                            const MatrixXd& E) {
  const int m = static_cast<int>(x.size());
  const int d = static_cast<int>(E.cols());
  MatrixXd RT = radial_curvature(spec, x, v);
  MatrixXd M(m, m);
  M.col(0) = v;
  M.rightCols(d) = E;
  Eigen::PartialPivLU<MatrixXd> lu(M);
  MatrixXd R(d, d);
  for (int b = 0; b < d; ++b) {
    VectorXd c = lu.solve(RT * E.col(b));
    R.col(b) = c.tail(d);
  }
  return R;
}

OdeRhs jacobi_rhs(const MetricSpec& spec, const Layout& L) {
  return [&spec, L](double, const VectorXd& s, VectorXd& ds) {
    const int m = L.m, d = L.d;
    ds.resize(L.total);
    SVec<double> xs(s.data(), s.data() + m);
    SVec<double> vs(s.data() + m, s.data() + 2 * m);
    SVec<double> G = spray<double>(spec, xs, vs);
    Ten3d Gm = chern<double>(spec, xs, vs);
    for (int i = 0; i < m; ++i) {
      ds[i] = s[L.v0 + i];
      ds[L.v0 + i] = -2.0 * G[i];
    }
    for (int a = 0; a < d; ++a)
      for (int i = 0; i < m; ++i) {
        double acc = 0;
        for (int j = 0; j < m; ++j)
          for (int k = 0; k < m; ++k) acc -= Gm(i, j, k) * s[L.e0 + a * m + j] * s[L.v0 + k];
        ds[L.e0 + a * m + i] = acc;
      }
    VectorXd x = s.head(m), v = s.segment(m, m);
    MatrixXd R = curvature_in_frame(spec, x, v, L.frameE(s));
    MatrixXd A = L.matA(s, L.a0);
    MatrixXd Add = -R * A;
    for (int j = 0; j < d; ++j) {
      ds.segment(L.a0 + j * d, d) = s.segment(L.ad0 + j * d, d);
      ds.segment(L.ad0 + j * d, d) = Add.col(j);
    }
  };
}

}  // namespace

JacobiSolution solve_jacobi(const MetricSpec& spec, const ConormalFrame& frame, double t_max,
                            int nodes, IntegratorOptions opt) {
  const int m = spec.dim();
  const int d = m - 1;
  const int k = static_cast<int>(frame.e_tan.cols());
  Layout L(m);

  JacobiSolution sol;
  sol.spec = &spec;
  sol.frame = frame;
  sol.reduced_power = m - k - 1;
  sol.gram0 = frame.gram;
  sol.ts = uniform_grid(0.0, t_max, nodes);

  VectorXd s0 = VectorXd::Zero(L.total);
  s0.head(m) = frame.x;
  s0.segment(m, m) = frame.n;
  for (int a = 0; a < d; ++a) s0.segment(L.e0 + a * m, m) = frame.basis.col(a);

  // A(0): identity on the tangent block, zero on the transverse block.
  MatrixXd A0 = MatrixXd::Zero(d, d);
  for (int a = 0; a < k; ++a) A0(a, a) = 1.0;
  // A'(0): tangent columns are the covariant normal-field derivatives in
  // frame coordinates (their n-component vanishes analytically and is
  // dropped); transverse columns are the identity.
  MatrixXd Ad0 = MatrixXd::Zero(d, d);
  if (k > 0) {
    MatrixXd M0(m, m);
    M0.col(0) = frame.n;
    M0.rightCols(d) = frame.basis;
    Eigen::PartialPivLU<MatrixXd> lu(M0);
    for (int a = 0; a < k; ++a) {
      VectorXd c = lu.solve(frame.dn_cov.col(a));
      if (std::abs(c[0]) > 1e-6)
        raise(Err::FrameDegenerate, "normal-field derivative has a radial component");
      Ad0.col(a) = c.tail(d);
    }
  }
  for (int j = k; j < d; ++j) Ad0(j, j) = 1.0;
  for (int j = 0; j < d; ++j) {
    s0.segment(L.a0 + j * d, d) = A0.col(j);
    s0.segment(L.ad0 + j * d, d) = Ad0.col(j);
  }

  if (!opt.post_step) {
    auto guard = chart_guard(spec);
    opt.post_step = guard;
  }
  if (opt.rtol > 1e-9) opt.rtol = 1e-9;

  const size_t nn = sol.ts.size();
  sol.states.resize(nn);
  sol.xs.resize(nn);
  sol.vs.resize(nn);
  sol.E.resize(nn);
  sol.A.resize(nn);
  sol.Adot.resize(nn);
  sol.R.resize(nn);
  sol.detA.resize(nn);
  sol.q.resize(nn);

  integrate_to_nodes(
      jacobi_rhs(spec, L), s0, sol.ts,
      [&](int node, double t, const VectorXd& st) {
        const size_t j = static_cast<size_t>(node);
        sol.states[j] = st;
        sol.xs[j] = st.head(m);
        sol.vs[j] = st.segment(m, m);
        sol.E[j] = L.frameE(st);
        sol.A[j] = L.matA(st, L.a0);
        sol.Adot[j] = L.matA(st, L.ad0);
        sol.R[j] = curvature_in_frame(spec, sol.xs[j], sol.vs[j], sol.E[j]);
        sol.detA[j] = sol.A[j].determinant();
        sol.q[j] = t > 0 ? sol.detA[j] / std::pow(t, sol.reduced_power)
                         : (sol.reduced_power == 0 ? sol.detA[j] : 1.0);
      },
      opt);
  return sol;
}

double reduced_det_at(const JacobiSolution& sol, double t) {
  const MetricSpec& spec = *sol.spec;
  const int m = spec.dim();
  Layout L(m);
  if (t <= 0.0) return sol.q.front();
  size_t j = 0;
  while (j + 1 < sol.ts.size() && sol.ts[j + 1] <= t) ++j;
  VectorXd st = sol.states[j];
  if (t > sol.ts[j] + 1e-14) {
    IntegratorOptions opt;
    opt.rtol = 1e-11;
    std::vector<double> grid = {sol.ts[j], t};
    integrate_to_nodes(
        jacobi_rhs(spec, L), st, grid,
        [&](int node, double, const VectorXd& s) {
          if (node == 1) st = s;
        },
        opt);
  }
  return L.matA(st, L.a0).determinant() / std::pow(t, sol.reduced_power);
}

namespace {

double bisect_zero(const JacobiSolution& sol, double lo, double hi, double qlo, double tol) {
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double qm = reduced_det_at(sol, mid);
    if ((qlo > 0) == (qm > 0))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Ternary search for the minimum of |q| in [lo, hi].
std::pair<double, double> min_abs_q(const JacobiSolution& sol, double lo, double hi) {
  for (int it = 0; it < 120 && hi - lo > 1e-11; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (std::abs(reduced_det_at(sol, m1)) < std::abs(reduced_det_at(sol, m2)))
      hi = m2;
    else
      lo = m1;
  }
  const double t = 0.5 * (lo + hi);
  return {t, reduced_det_at(sol, t)};
}

}  // namespace

double focal_value(const JacobiSolution& sol, double bisect_tol, double touch_tol) {
  const size_t n = sol.ts.size();
  double qmax = 0;
  for (double v : sol.q) qmax = std::max(qmax, std::abs(v));
  for (size_t j = 0; j + 1 < n; ++j) {
    const double q0 = sol.q[j], q1 = sol.q[j + 1];
    if (q0 > 0 && q1 <= 0) return bisect_zero(sol, sol.ts[j], sol.ts[j + 1], q0, bisect_tol);
    // Nodal local minimum well below the overall scale: candidate touch
    // point of even multiplicity, or a pair of crossings inside two cells.
    if (j >= 1 && q0 > 0 && q0 <= sol.q[j - 1] && q0 <= q1 && q0 < 0.05 * qmax) {
      auto [tmin, qmin] = min_abs_q(sol, sol.ts[j - 1], sol.ts[j + 1]);
      const double qsigned = reduced_det_at(sol, tmin);
      if (qsigned < 0) return bisect_zero(sol, sol.ts[j - 1], tmin, sol.q[j - 1], bisect_tol);
      if (std::abs(qmin) < touch_tol) return tmin;
      if (std::abs(qmin) < 1e-6 * qmax)
        raise(Err::GridTooCoarse, "reduced determinant dips near zero inside one cell at t = " +
                                      std::to_string(tmin));
    }
  }
  return kInf;
}

FrameField jacobi_column_field(const JacobiSolution& sol, int a) {
  const int d = static_cast<int>(sol.A.front().rows());
  FrameField f;
  f.vals = MatrixXd(d, sol.ts.size());
  f.derivs = MatrixXd(d, sol.ts.size());
  for (size_t j = 0; j < sol.ts.size(); ++j) {
    f.vals.col(static_cast<Eigen::Index>(j)) = sol.A[j].col(a);
    f.derivs.col(static_cast<Eigen::Index>(j)) = sol.Adot[j].col(a);
  }
  return f;
}

double index_form(const JacobiSolution& sol, const FrameField& X, const FrameField& Y) {
  const int k = static_cast<int>(sol.frame.e_tan.cols());
  const int d = static_cast<int>(sol.gram0.rows());
  // Boundary values must be tangent to the submanifold.
  for (int j = k; j < d; ++j)
    if (std::abs(X.vals(j, 0)) > 1e-9 || std::abs(Y.vals(j, 0)) > 1e-9)
      raise(Err::NonAdmissible, "index form needs tangent initial values");
  double boundary = 0.0;
  if (k > 0) {
    VectorXd x0 = X.vals.col(0).head(k), y0 = Y.vals.col(0).head(k);
    boundary = -x0.dot(sol.frame.h * y0);
  }
  std::vector<double> integrand(sol.ts.size());
  for (size_t j = 0; j < sol.ts.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    VectorXd dx = X.derivs.col(jj), dy = Y.derivs.col(jj);
    VectorXd xv = X.vals.col(jj), yv = Y.vals.col(jj);
    integrand[j] = dx.dot(sol.gram0 * dy) - (sol.R[j] * xv).dot(sol.gram0 * yv);
  }
  const double h = sol.ts[1] - sol.ts[0];
  return boundary + simpson_uniform(integrand, h);
}

MatrixXd transported_curvature(const JacobiSolution& sol, int node) {
  return sol.R[static_cast<size_t>(node)];
}

void JacobiSolution::write_csv(std::ostream& os, double delta, double H, int k, int m) const {
  os << "t,detA,q,model\n";
  for (size_t j = 0; j < ts.size(); ++j)
    os << ts[j] << "," << detA[j] << "," << q[j] << "," << model_det(delta, H, k, m, ts[j])
       << "\n";
}

JacobiBoundOutcome jacobi_determinant_bound(const JacobiSolution& sol, double delta,
                                            int flag_samples, uint64_t seed) {
  const MetricSpec& spec = *sol.spec;
  const int m = spec.dim();
  const int k = static_cast<int>(sol.frame.e_tan.cols());
  JacobiBoundOutcome out;
  out.delta = delta;
  out.H = sol.frame.co_mean;

  // Sampled curvature hypothesis along the geodesic: flags (T; V).
  Sampler smp(seed);
  for (int s = 0; s < flag_samples; ++s) {
    const size_t j = static_cast<size_t>(smp.uniform(0, 1) * (sol.ts.size() - 1));
    VectorXd V = smp.direction(m);
    const VectorXd& y = sol.vs[j];
    if (std::abs(V.dot(y)) > 0.99 * V.norm() * y.norm()) continue;
    out.min_flag_sampled =
        std::min(out.min_flag_sampled, flag_curvature(spec, sol.xs[j], Flag{y, V}));
  }
  if (out.min_flag_sampled < delta - 1e-6)
    raise(Err::CurvatureHypothesisViolated,
          "sampled flag curvature " + std::to_string(out.min_flag_sampled) +
              " below the assumed lower bound");

  out.c_f = focal_value(sol);

  // Proof-side first zero of the model determinant, from the shape operator
  // eigenvalues (generalized symmetric pencil against the tangent Gram).
  std::vector<double> lambdas;
  if (k > 0) {
    MatrixXd gram_tan = sol.frame.e_tan.transpose() * sol.frame.gn * sol.frame.e_tan;
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(sol.frame.h, gram_tan);
    for (int i = 0; i < k; ++i) lambdas.push_back(ges.eigenvalues()[i]);
  }
  out.zeta0 = model_det_first_zero(delta, lambdas, k, m);
  out.pass_focal = out.c_f <= out.zeta0 + 1e-6;

  const double horizon = std::min(out.c_f, sol.ts.back());
  out.max_violation = -kInf;
  out.pass_det = true;
  for (size_t j = 0; j < sol.ts.size() && sol.ts[j] <= horizon + 1e-12; ++j) {
    const double model = model_det(delta, out.H, k, m, sol.ts[j]);
    const double viol = sol.detA[j] - model;
    out.max_violation = std::max(out.max_violation, viol);
    if (viol > 1e-6 * (1.0 + std::abs(model))) out.pass_det = false;
  }
  out.pass = out.pass_det && out.pass_focal;
  return out;
}

}  // namespace finsler
