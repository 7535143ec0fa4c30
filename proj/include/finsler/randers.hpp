#pragma once

#include <memory>

#include "finsler/tensors.hpp"

namespace finsler {

template <class S>
using MatPointFn = std::function<SMat<S>(std::span<const S>)>;
template <class S>
using VecPointFn = std::function<SVec<S>(std::span<const S>)>;

// Riemannian-plus-one-form data: a_ij(x) and b_i(x). Both fields are erased
// over all dual depths so the induced norm and closed-form tensors can be
// differentiated like any other assembly. Copies share the implementation.
class RandersSpec {
 public:
  RandersSpec() = default;

  template <class AFn, class BFn>
  static RandersSpec make(Chart chart, AFn afn, BFn bfn) {
    chart.validate();
    RandersSpec r;
    auto impl = std::make_shared<Impl>();
    impl->chart = std::move(chart);
    impl->a0 = [afn](std::span<const double> x) { return afn(x); };
    impl->a1 = [afn](std::span<const D1> x) { return afn(x); };
    impl->a2 = [afn](std::span<const D2> x) { return afn(x); };
    impl->a3 = [afn](std::span<const D3> x) { return afn(x); };
    impl->a4 = [afn](std::span<const D4> x) { return afn(x); };
    impl->b0 = [bfn](std::span<const double> x) { return bfn(x); };
    impl->b1 = [bfn](std::span<const D1> x) { return bfn(x); };
    impl->b2 = [bfn](std::span<const D2> x) { return bfn(x); };
    impl->b3 = [bfn](std::span<const D3> x) { return bfn(x); };
    impl->b4 = [bfn](std::span<const D4> x) { return bfn(x); };
    r.impl_ = std::move(impl);
    return r;
  }

  bool valid() const { return static_cast<bool>(impl_); }
  const Chart& chart() const { return impl_->chart; }

  template <class S>
  SMat<S> a(std::span<const S> x) const {
    constexpr int d = dual_depth<S>::value;
    if constexpr (d == 0) return impl_->a0(x);
    else if constexpr (d == 1) return impl_->a1(x);
    else if constexpr (d == 2) return impl_->a2(x);
    else if constexpr (d == 3) return impl_->a3(x);
    else return impl_->a4(x);
  }
  template <class S>
  SVec<S> b(std::span<const S> x) const {
    constexpr int d = dual_depth<S>::value;
    if constexpr (d == 0) return impl_->b0(x);
    else if constexpr (d == 1) return impl_->b1(x);
    else if constexpr (d == 2) return impl_->b2(x);
    else if constexpr (d == 3) return impl_->b3(x);
    else return impl_->b4(x);
  }

 private:
  struct Impl {
    Chart chart;
    MatPointFn<double> a0;
    MatPointFn<D1> a1;
    MatPointFn<D2> a2;
    MatPointFn<D3> a3;
    MatPointFn<D4> a4;
    VecPointFn<double> b0;
    VecPointFn<D1> b1;
    VecPointFn<D2> b2;
    VecPointFn<D3> b3;
    VecPointFn<D4> b4;
  };
  std::shared_ptr<const Impl> impl_;
};

template <class S>
S randers_alpha(const RandersSpec& rs, std::span<const S> x, std::span<const S> y) {
  SMat<S> A = rs.a<S>(x);
  SVec<S> yv(y.begin(), y.end());
  return sqrt(dot(matvec(A, yv), yv));
}

template <class S>
S randers_norm(const RandersSpec& rs, std::span<const S> x, std::span<const S> y) {
  SVec<S> bv = rs.b<S>(x);
  SVec<S> yv(y.begin(), y.end());
  return randers_alpha<S>(rs, x, y) + dot(bv, yv);
}

// Closed-form fundamental tensor of alpha + beta:
//   g_ij = (F/alpha)(a_ij - l_i l_j) + (l_i + b_i)(l_j + b_j),  l_i = a_ij y^j / alpha.
template <class S>
SMat<S> randers_metric(const RandersSpec& rs, std::span<const S> x, std::span<const S> y) {
  const int m = static_cast<int>(x.size());
  SMat<S> A = rs.a<S>(x);
  SVec<S> bv = rs.b<S>(x);
  SVec<S> yv(y.begin(), y.end());
  SVec<S> ay = matvec(A, yv);
  S alpha = sqrt(dot(ay, yv));
  S F = alpha + dot(bv, yv);
  if (!(real_part(F) > 0.0))
    raise(Err::InadmissibleDirection, "closed-form tensor outside the admissible cone");
  SMat<S> g(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      S li = ay[i] / alpha, lj = ay[j] / alpha;
      g(i, j) = (F / alpha) * (A(i, j) - li * lj) + (li + bv[i]) * (lj + bv[j]);
    }
  return g;
}

struct RandersNormFunctor {
  RandersSpec rs;
  template <class S>
  S operator()(std::span<const S> x, std::span<const S> y) const {
    return randers_norm<S>(rs, x, y);
  }
};
struct RandersMetricFunctor {
  RandersSpec rs;
  template <class S>
  SMat<S> operator()(std::span<const S> x, std::span<const S> y) const {
    return randers_metric<S>(rs, x, y);
  }
};

// MetricSpec backed by the Randers norm with the closed-form tensor attached.
MetricSpec metric_from_randers(const RandersSpec& rs, const std::string& label);

// Dual Randers data at a point: F^*(xi) = alpha^*(xi) + beta^*(xi) with
//   alpha^*(xi)^2 = (D |xi|^2_{a^{-1}} + <b, xi>^2) / D^2,  beta^* = -<b, xi>/D,
//   D = 1 - |b|^2_a,  <b, xi> = a^{ij} b_i xi_j.
double randers_dual_norm(const RandersSpec& rs, const VectorXd& x, const VectorXd& xi);

struct BetaDerivatives {
  MatrixXd b_cov;  // b_{i|j}, covariant derivative of beta in the alpha metric
  MatrixXd r;      // symmetric part
  MatrixXd s;      // antisymmetric part
  MatrixXd s_up;   // s^i_j = a^{ik} s_kj
  VectorXd s_low;  // s_j = b_i s^i_j
  MatrixXd e;      // e_ij = r_ij + b_i s_j + b_j s_i
};
BetaDerivatives beta_derivatives(const RandersSpec& rs, const VectorXd& x);

// Closed-form T-curvature of a Randers metric in terms of the beta
// derivatives; agrees with the connection-difference definition.
double t_curvature_closed_form(const RandersSpec& rs, const VectorXd& x, const VectorXd& y,
                               const VectorXd& v);

// ||beta||_alpha and ||grad beta||_alpha at a point (operator norm in a).
double beta_norm(const RandersSpec& rs, const VectorXd& x);
double beta_derivative_norm(const RandersSpec& rs, const VectorXd& x);

}  // namespace finsler
