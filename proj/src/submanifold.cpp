#include "finsler/submanifold.hpp"

#include <Eigen/QR>
#include <cmath>

namespace finsler {

VectorXd SubmanifoldSpec::point(const VectorXd& u) const {
  SVec<double> us(u.data(), u.data() + u.size());
  return to_eigen_vec(e0_(us));
}

MatrixXd SubmanifoldSpec::tangent_frame(const VectorXd& u) const {
  MatrixXd T(m_, k_);
  SVec<double> us(u.data(), u.data() + u.size());
  for (int a = 0; a < k_; ++a) {
    SVec<D1> ud = lift_span<D1, double>(std::span<const double>(us));
    seed(ud[a], 0, 1.0);
    SVec<D1> p = e1_(std::span<const D1>(ud));
    for (int i = 0; i < m_; ++i) T(i, a) = p[static_cast<size_t>(i)].d;
  }
  return T;
}

std::vector<MatrixXd> SubmanifoldSpec::hessian(const VectorXd& u) const {
  std::vector<MatrixXd> H(static_cast<size_t>(m_), MatrixXd::Zero(k_, k_));
  SVec<double> us(u.data(), u.data() + u.size());
  for (int a = 0; a < k_; ++a)
    for (int b = a; b < k_; ++b) {
      SVec<D2> ud = lift_span<D2, double>(std::span<const double>(us));
      seed(ud[a], 0, 1.0);
      seed(ud[b], 1, 1.0);
      SVec<D2> p = e2_(std::span<const D2>(ud));
      for (int i = 0; i < m_; ++i) {
        H[static_cast<size_t>(i)](a, b) = p[static_cast<size_t>(i)].d.d;
        H[static_cast<size_t>(i)](b, a) = H[static_cast<size_t>(i)](a, b);
      }
    }
  return H;
}

namespace {
struct PointEmbed {
  VectorXd x;
  template <class S>
  SVec<S> operator()(std::span<const S>) const {
    SVec<S> r(x.size());
    for (int i = 0; i < x.size(); ++i) r[static_cast<size_t>(i)] = S(x[i]);
    return r;
  }
};
}  // namespace

SubmanifoldSpec SubmanifoldSpec::point_at(const VectorXd& x) {
  SubmanifoldSpec s;
  s.k_ = 0;
  s.m_ = static_cast<int>(x.size());
  PointEmbed pe{x};
  s.e0_ = [pe](std::span<const double> u) { return pe(u); };
  s.e1_ = [pe](std::span<const D1> u) { return pe(u); };
  s.e2_ = [pe](std::span<const D2> u) { return pe(u); };
  return s;
}

int sphere_param_angle_count(int q) { return q == 1 ? 1 : q - 1; }

VectorXd sphere_param(const VectorXd& theta, int q) {
  VectorXd c(q);
  if (q == 1) {
    c[0] = std::cos(theta[0]) >= 0.0 ? 1.0 : -1.0;
    return c;
  }
  const int p = q - 1;
  double prod = 1.0;
  for (int i = 0; i < p; ++i) {
    c[i] = prod * std::cos(theta[i]);
    prod *= std::sin(theta[i]);
  }
  c[p] = prod;
  return c;
}

MatrixXd sphere_param_jacobian(const VectorXd& theta, int q) {
  if (q == 1) return MatrixXd::Zero(1, 0);
  const int p = q - 1;
  MatrixXd J = MatrixXd::Zero(q, p);
  // c_i = cos(theta_i) prod_{j<i} sin(theta_j) for i < p; c_{q-1} = prod sin.
  for (int col = 0; col < p; ++col)
    for (int i = col; i < q; ++i) {
      double v = 1.0;
      for (int j = 0; j < std::min(i, p); ++j)
        v *= (j == col) ? std::cos(theta[j]) : std::sin(theta[j]);
      if (i < p) v *= (i == col) ? -std::sin(theta[i]) : std::cos(theta[i]);
      J(i, col) = v;
    }
  return J;
}

namespace {

// dF*/dx^j at a unit covector with preimage n:
//   dF*/dx^j = dF/dx^j(x, n) - n^i dg_ik/dx^j(x, n) n^k.
VectorXd dual_norm_x_gradient(const MetricSpec& spec, const VectorXd& x, const VectorXd& n) {
  const int m = spec.dim();
  SVec<double> xs = to_svec(x), ns = to_svec(n);
  VectorXd grad(m);
  STen3<double> dg = metric_x_derivative<double>(spec, xs, ns);
  for (int j = 0; j < m; ++j) {
    SVec<D1> X = lift_span<D1, double>(std::span<const double>(xs));
    SVec<D1> N = lift_span<D1, double>(std::span<const double>(ns));
    seed(X[j], 0, 1.0);
    grad[j] = norm_value<D1>(spec, std::span<const D1>(X), std::span<const D1>(N)).d;
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k) grad[j] -= n[i] * dg(i, k, j) * n[k];
  }
  return grad;
}

// d(L(x, n))_i/dx^j at fixed vector components: dg_ik/dx^j n^k.
MatrixXd transform_x_jacobian(const MetricSpec& spec, const VectorXd& x, const VectorXd& n) {
  const int m = spec.dim();
  STen3<double> dg = metric_x_derivative<double>(spec, to_svec(x), to_svec(n));
  MatrixXd DL(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double acc = 0;
      for (int k = 0; k < m; ++k) acc += dg(i, k, j) * n[k];
      DL(i, j) = acc;
    }
  return DL;
}

}  // namespace

ConormalFrame conormal_sphere_point(const MetricSpec& spec, const SubmanifoldSpec& sub,
                                    const VectorXd& u, const VectorXd& theta) {
  const int m = sub.ambient_dim();
  const int k = sub.dim();
  const int q = m - k;
  ConormalFrame fr;
  fr.u = u;
  fr.theta = theta;

  MatrixXd T(m, 0), W;
  if (k > 0) {
    fr.x = sub.point(u);
    T = sub.tangent_frame(u);
    Eigen::ColPivHouseholderQR<MatrixXd> rankqr(T);
    if (rankqr.rank() < k) raise(Err::RankLoss, "embedding frame is rank-deficient");
    Eigen::HouseholderQR<MatrixXd> qr(T);
    MatrixXd Q = qr.householderQ();
    W = Q.rightCols(q);  // Euclidean annihilator of the tangent columns
  } else {
    VectorXd empty(0);
    fr.x = sub.point(empty);
    W = MatrixXd::Identity(m, m);
  }
  fr.e_tan = T;
  fr.ann_basis = W;

  VectorXd c = sphere_param(theta, q);
  VectorXd xi_raw = W * c;
  Tangent pre = legendre_inverse(spec, {fr.x, xi_raw});
  const double s = eval_norm(spec, fr.x, pre.v);  // F*(xi_raw)
  fr.xi = xi_raw / s;
  fr.n = pre.v / s;

  fr.gn = to_eigen(fundamental<double>(spec, to_svec(fr.x), to_svec(fr.n)));
  MatrixXd gn_inv = fr.gn.inverse();

  // Transverse frame: push the fiber-angle derivatives through the inverse
  // transform. d(xi_hat)/dtheta = (W dc - (n . W dc) xi_hat)/s, and the
  // tangent map of the inverse transform at xi_hat is gn^{-1}.
  const int p = static_cast<int>(sphere_param_jacobian(theta, q).cols());
  MatrixXd dc = sphere_param_jacobian(theta, q);
  fr.e_trans = MatrixXd(m, p);
  for (int j = 0; j < p; ++j) {
    VectorXd dxi_raw = W * dc.col(j);
    VectorXd dxi = (dxi_raw - fr.n.dot(dxi_raw) * fr.xi) / s;
    fr.e_trans.col(j) = gn_inv * dxi;
  }

  fr.basis = MatrixXd(m, k + p);
  fr.basis << fr.e_tan, fr.e_trans;
  fr.gram = fr.basis.transpose() * fr.gn * fr.basis;

  if (k > 0) {
    // Co-second fundamental form via the embedding Hessian and the
    // reference-n connection (constant-coefficient extensions).
    std::vector<MatrixXd> H = sub.hessian(u);
    Ten3d Gm = chern_coefficients(spec, fr.x, fr.n);
    fr.h = MatrixXd::Zero(k, k);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) {
        double acc = 0;
        for (int i = 0; i < m; ++i) {
          double cov = H[static_cast<size_t>(i)](a, b);
          for (int jj = 0; jj < m; ++jj)
            for (int kk = 0; kk < m; ++kk) cov += Gm(i, jj, kk) * T(jj, a) * T(kk, b);
          acc += fr.xi[i] * cov;
        }
        fr.h(a, b) = acc;
      }

    fr.dn_cov = MatrixXd(m, k);
    for (int a = 0; a < k; ++a) fr.dn_cov.col(a) = conormal_field_derivative(spec, sub, fr, a);

    // Shape operator: minus the g_n-tangential part of the normal-field
    // derivative, expressed in the e_tan basis.
    MatrixXd gram_tan = T.transpose() * fr.gn * T;
    fr.weingarten = gram_tan.ldlt().solve(-T.transpose() * fr.gn * fr.dn_cov);
    fr.co_mean = fr.weingarten.trace();
  } else {
    fr.h = MatrixXd(0, 0);
    fr.weingarten = MatrixXd(0, 0);
    fr.dn_cov = MatrixXd(m, 0);
    fr.co_mean = 0.0;
  }
  return fr;
}

VectorXd conormal_field_derivative(const MetricSpec& spec, const SubmanifoldSpec& sub,
                                   const ConormalFrame& fr, int alpha) {
  const int m = sub.ambient_dim();
  const int k = sub.dim();
  const MatrixXd& T = fr.e_tan;
  MatrixXd M = T.transpose() * T;
  MatrixXd Minv = M.inverse();

  // dT along u^alpha from the embedding Hessian.
  std::vector<MatrixXd> H = sub.hessian(fr.u);
  MatrixXd dT(m, k);
  for (int i = 0; i < m; ++i)
    for (int b = 0; b < k; ++b) dT(i, b) = H[static_cast<size_t>(i)](alpha, b);

  // P(u) = I - T M^{-1} T^T projects onto the Euclidean annihilator; the
  // conormal field is P(u) xi_hat normalized by the dual norm.
  MatrixXd dM = dT.transpose() * T + T.transpose() * dT;
  MatrixXd dMinv = -Minv * dM * Minv;
  MatrixXd dP = -(dT * Minv * T.transpose() + T * dMinv * T.transpose() +
                  T * Minv * dT.transpose());
  VectorXd dxi_raw = dP * fr.xi;

  VectorXd t_a = T.col(alpha);
  VectorXd gradFx = dual_norm_x_gradient(spec, fr.x, fr.n);
  const double ds = gradFx.dot(t_a) + fr.n.dot(dxi_raw);
  VectorXd dxi = dxi_raw - ds * fr.xi;

  MatrixXd DL = transform_x_jacobian(spec, fr.x, fr.n);
  VectorXd dn = fr.gn.ldlt().solve(dxi - DL * t_a);

  // Covariant correction with the reference-n connection.
  Ten3d Gm = chern_coefficients(spec, fr.x, fr.n);
  VectorXd cov = dn;
  for (int i = 0; i < m; ++i) {
    double acc = 0;
    for (int jj = 0; jj < m; ++jj)
      for (int kk = 0; kk < m; ++kk) acc += Gm(i, jj, kk) * fr.n[jj] * t_a[kk];
    cov[i] += acc;
  }
  return cov;
}

double co_second_fundamental(const ConormalFrame& frame, const VectorXd& X, const VectorXd& Y) {
  const int k = static_cast<int>(frame.e_tan.cols());
  if (k == 0) raise(Err::FrameDegenerate, "no tangent directions at a point submanifold");
  auto coords = [&](const VectorXd& v) {
    VectorXd c = frame.e_tan.colPivHouseholderQr().solve(v);
    if ((frame.e_tan * c - v).norm() > 1e-8 * (1.0 + v.norm()))
      raise(Err::NonAdmissible, "vector is not tangent to the submanifold");
    return c;
  };
  return coords(X).dot(frame.h * coords(Y));
}

const MatrixXd& co_weingarten(const ConormalFrame& frame) {
  if (frame.weingarten.rows() == 0)
    raise(Err::FrameDegenerate, "shape operator undefined for a point submanifold");
  return frame.weingarten;
}

double co_mean_curvature(const ConormalFrame& frame) { return frame.co_mean; }

VectorXd conormal_exp(const MetricSpec& spec, const ConormalFrame& frame, double t,
                      IntegratorOptions opt) {
  if (t == 0.0) return frame.x;
  return integrate_geodesic(spec, frame.x, frame.n, t, 2, opt).xs.back();
}

}  // namespace finsler
