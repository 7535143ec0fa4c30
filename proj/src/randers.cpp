#include "finsler/randers.hpp"

#include <Eigen/Eigenvalues>

namespace finsler {

MetricSpec metric_from_randers(const RandersSpec& rs, const std::string& label) {
  MetricSpec spec = make_metric(rs.chart(), label, RandersNormFunctor{rs});
  spec.set_metric_override(RandersMetricFunctor{rs});
  return spec;
}

double randers_dual_norm(const RandersSpec& rs, const VectorXd& x, const VectorXd& xi) {
  SVec<double> xs(x.data(), x.data() + x.size());
  MatrixXd A = to_eigen(rs.a<double>(xs));
  VectorXd b = to_eigen_vec(rs.b<double>(xs));
  MatrixXd Ai = A.inverse();
  const double D = 1.0 - b.dot(Ai * b);
  const double bxi = xi.dot(Ai * b);
  const double astar2 = (D * xi.dot(Ai * xi) + bxi * bxi) / (D * D);
  return std::sqrt(astar2) - bxi / D;
}

BetaDerivatives beta_derivatives(const RandersSpec& rs, const VectorXd& x) {
  const int m = static_cast<int>(x.size());
  SVec<double> xs(x.data(), x.data() + x.size());
  MatrixXd A = to_eigen(rs.a<double>(xs));
  MatrixXd Ai = A.inverse();
  VectorXd b = to_eigen_vec(rs.b<double>(xs));

  // da(i,j,k) = da_ij/dx^k, db(i,k) = db_i/dx^k
  Ten3d da(m);
  MatrixXd db(m, m);
  for (int k = 0; k < m; ++k) {
    SVec<D1> X = lift_span<D1, double>(std::span<const double>(xs));
    seed(X[k], 0, 1.0);
    SMat<D1> Ak = rs.a<D1>(std::span<const D1>(X));
    SVec<D1> bk = rs.b<D1>(std::span<const D1>(X));
    for (int i = 0; i < m; ++i) {
      db(i, k) = bk[i].d;
      for (int j = 0; j < m; ++j) da(i, j, k) = Ak(i, j).d;
    }
  }
  Ten3d gam(m);  // Christoffel symbols of a
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        double acc = 0;
        for (int l = 0; l < m; ++l)
          acc += 0.5 * Ai(k, l) * (da(l, i, j) + da(l, j, i) - da(i, j, l));
        gam(k, i, j) = acc;
      }

  BetaDerivatives out;
  out.b_cov = MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      double acc = db(i, j);
      for (int k = 0; k < m; ++k) acc -= gam(k, i, j) * b[k];
      out.b_cov(i, j) = acc;
    }
  out.r = 0.5 * (out.b_cov + out.b_cov.transpose());
  out.s = 0.5 * (out.b_cov - out.b_cov.transpose());
  out.s_up = Ai * out.s;
  out.s_low = out.s_up.transpose() * b;  // s_j = b_i s^i_j
  out.e = out.r + b * out.s_low.transpose() + out.s_low * b.transpose();
  return out;
}

double t_curvature_closed_form(const RandersSpec& rs, const VectorXd& x, const VectorXd& y,
                               const VectorXd& v) {
  SVec<double> xs(x.data(), x.data() + x.size());
  MatrixXd A = to_eigen(rs.a<double>(xs));
  VectorXd b = to_eigen_vec(rs.b<double>(xs));
  BetaDerivatives d = beta_derivatives(rs, x);

  const double ay = std::sqrt(y.dot(A * y));
  const double av = std::sqrt(v.dot(A * v));
  const double Fy = ay + b.dot(y);
  const double Fv = av + b.dot(v);
  const double vy = v.dot(A * y);

  const double e00 = y.dot(d.e * y);
  const double e11 = v.dot(d.e * v);
  const double s0 = d.s_low.dot(y);
  const double s1 = d.s_low.dot(v);
  const double s01 = y.dot(d.s * v);  // s_ij y^i v^j

  const double bracket = -2.0 * (e11 / (2.0 * Fv) - s1) + 2.0 * s01 / ay +
                         (1.0 / ay) * (e00 / (2.0 * Fy) - s0) * (av + vy / ay);
  return bracket * Fy * ((av * ay - vy) / ay);
}

double beta_norm(const RandersSpec& rs, const VectorXd& x) {
  SVec<double> xs(x.data(), x.data() + x.size());
  MatrixXd A = to_eigen(rs.a<double>(xs));
  VectorXd b = to_eigen_vec(rs.b<double>(xs));
  return std::sqrt(b.dot(A.inverse() * b));
}

double beta_derivative_norm(const RandersSpec& rs, const VectorXd& x) {
  SVec<double> xs(x.data(), x.data() + x.size());
  MatrixXd A = to_eigen(rs.a<double>(xs));
  MatrixXd Ai = A.inverse();
  MatrixXd C = beta_derivatives(rs, x).b_cov;
  // sup over a-unit X, Y of b_{i|j} X^i Y^j = largest singular value of C in
  // the a-inner product; eigenvalues of Ai C^T Ai C are its squares.
  Eigen::EigenSolver<MatrixXd> es(Ai * C.transpose() * Ai * C);
  double lmax = 0;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    lmax = std::max(lmax, es.eigenvalues()[i].real());
  return std::sqrt(std::max(0.0, lmax));
}

}  // namespace finsler
