#pragma once

#include <span>
#include <tuple>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

// ======================================================================
// Scalar-generic tensor assemblies. Everything below runs over nested dual
// numbers, so any assembly can itself be differentiated by evaluating it at
// Dual<S> with a seeded coordinate. Conventions:
//   W(x,y)   = F^2(x,y)/2
//   g_ij     = d^2 W / dy^i dy^j            (fundamental tensor)
//   A_ijk    = (F/2) d^3 W / dy^i dy^j dy^k (Cartan tensor)
//   G^i      = (1/2) g^{il} (y^k W_{y^l x^k} - W_{x^l})  (spray, xdd + 2G = 0)
//   N^i_j    = dG^i/dy^j                    (nonlinear connection)
//   Gamma^i_jk = (1/2) g^{il} (d_j g_lk + d_k g_lj - d_l g_jk),
//     with the horizontal derivative d_k = d/dx^k - N^s_k d/dy^s and
//     dg/dy^s = 2 A_..s / F. This is the torsion-free, almost metric
//     compatible connection on the pulled-back bundle.
// ======================================================================

template <class S>
S norm_value(const MetricSpec& spec, std::span<const S> x, std::span<const S> y) {
  return spec.norm_raw<S>(x, y);
}

template <class S>
S half_F2(const MetricSpec& spec, std::span<const S> x, std::span<const S> y) {
  S f = spec.norm_raw<S>(x, y);
  return 0.5 * f * f;
}

template <class S>
SMat<S> fundamental(const MetricSpec& spec, std::span<const S> x, std::span<const S> y) {
  if (spec.has_metric_override<S>()) return spec.metric_override<S>(x, y);
  // The AD route costs two extra dual levels; past that depth a closed-form
  // override is mandatory (only the deepest derivative assemblies get here,
  // and only for specs that registered one).
  if constexpr (dual_depth<S>::value <= 2) {
    using SS = Dual<Dual<S>>;
    const int m = static_cast<int>(x.size());
    SVec<SS> X = lift_span<SS, S>(x);
    SVec<SS> Y0 = lift_span<SS, S>(y);
    SMat<S> g(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        SVec<SS> Y = Y0;
        seed(Y[i], 0, 1.0);
        seed(Y[j], 1, 1.0);
        SS W = half_F2<SS>(spec, std::span<const SS>(X), std::span<const SS>(Y));
        g(i, j) = W.d.d;
        if (j != i) g(j, i) = g(i, j);
      }
    return g;
  } else {
    raise(Err::ConfigError, "fundamental tensor at dual depth > 2 needs a closed-form override");
  }
}

template <class S>
STen3<S> cartan(const MetricSpec& spec, std::span<const S> x, std::span<const S> y) {
  const int m = static_cast<int>(x.size());
  S F = spec.norm_raw<S>(x, y);
  STen3<S> A(m);
  if constexpr (dual_depth<S>::value <= 2) {
    if (spec.has_metric_override<Dual<S>>()) {
      // A_ijk = (F/2) dg_ij/dy^k from the closed-form tensor
      for (int k = 0; k < m; ++k) {
        SVec<Dual<S>> X = lift_span<Dual<S>, S>(x);
        SVec<Dual<S>> Y = lift_span<Dual<S>, S>(y);
        seed(Y[k], 0, 1.0);
        SMat<Dual<S>> gk = spec.metric_override<Dual<S>>(std::span<const Dual<S>>(X),
                                                         std::span<const Dual<S>>(Y));
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < m; ++j) A(i, j, k) = 0.5 * F * gk(i, j).d;
      }
      return A;
    }
  }
  if constexpr (dual_depth<S>::value <= 1) {
    using SS = Dual<Dual<Dual<S>>>;
    SVec<SS> X = lift_span<SS, S>(x);
    SVec<SS> Y0 = lift_span<SS, S>(y);
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j)
        for (int k = j; k < m; ++k) {
          SVec<SS> Y = Y0;
          seed(Y[i], 0, 1.0);
          seed(Y[j], 1, 1.0);
          seed(Y[k], 2, 1.0);
          SS W = half_F2<SS>(spec, std::span<const SS>(X), std::span<const SS>(Y));
          S value = 0.5 * F * W.d.d.d;
          A(i, j, k) = A(i, k, j) = A(j, i, k) = A(j, k, i) = A(k, i, j) = A(k, j, i) = value;
        }
    return A;
  } else {
    raise(Err::ConfigError, "Cartan tensor at dual depth > 1 needs a closed-form metric override");
  }
}

// dg_ab/dx^k for all k, indexed (a, b, k).
template <class S>
STen3<S> metric_x_derivative(const MetricSpec& spec, std::span<const S> x, std::span<const S> y) {
  const int m = static_cast<int>(x.size());
  STen3<S> dg(m);
  for (int k = 0; k < m; ++k) {
    SVec<Dual<S>> X = lift_span<Dual<S>, S>(x);
    SVec<Dual<S>> Y = lift_span<Dual<S>, S>(y);
    seed(X[k], 0, 1.0);
    SMat<Dual<S>> gk =
        fundamental<Dual<S>>(spec, std::span<const Dual<S>>(X), std::span<const Dual<S>>(Y));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) dg(a, b, k) = gk(a, b).d;
  }
  return dg;
}

template <class S>
SVec<S> spray(const MetricSpec& spec, std::span<const S> x, std::span<const S> y) {
  const int m = static_cast<int>(x.size());
  if (spec.has_gamma_override<S>()) {
    STen3<S> G = spec.gamma_override<S>(x, y);
    SVec<S> r(m, S{});
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) r[i] += 0.5 * G(i, j, k) * y[j] * y[k];
    return r;
  }
  SMat<S> g = fundamental<S>(spec, x, y);
  SMat<S> gi = inverse(g);
  SVec<S> rhs(m, S{});
  if (spec.has_metric_override<Dual<S>>()) {
    // Spray from the formal Christoffel symbols of g in x:
    //   G^i = (1/2) g^{il} (dg_lk/dx^j y^j y^k - (1/2) dg_jk/dx^l y^j y^k)
    STen3<S> dg = metric_x_derivative<S>(spec, x, y);
    for (int l = 0; l < m; ++l) {
      S acc{};
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) acc += (dg(l, k, j) - 0.5 * dg(j, k, l)) * y[j] * y[k];
      rhs[l] = acc;
    }
    SVec<S> G(m, S{});
    for (int i = 0; i < m; ++i)
      for (int l = 0; l < m; ++l) G[i] += 0.5 * gi(i, l) * rhs[l];
    return G;
  }
  if constexpr (dual_depth<S>::value <= 2) {
    // rhs_l = y^k W_{y^l x^k} - W_{x^l}; the contraction over k is one
    // directional x-derivative along y.
    using SS = Dual<Dual<S>>;
    for (int l = 0; l < m; ++l) {
      SVec<SS> X = lift_span<SS, S>(x);
      SVec<SS> Y = lift_span<SS, S>(y);
      for (int k = 0; k < m; ++k) seed_scalar(X[k], 0, y[k]);
      seed(Y[l], 1, 1.0);
      SS W = half_F2<SS>(spec, std::span<const SS>(X), std::span<const SS>(Y));
      rhs[l] = W.d.d;
      SVec<Dual<S>> X1 = lift_span<Dual<S>, S>(x);
      SVec<Dual<S>> Y1 = lift_span<Dual<S>, S>(y);
      seed(X1[l], 0, 1.0);
      Dual<S> W1 =
          half_F2<Dual<S>>(spec, std::span<const Dual<S>>(X1), std::span<const Dual<S>>(Y1));
      rhs[l] -= W1.d;
    }
    SVec<S> G(m, S{});
    for (int i = 0; i < m; ++i)
      for (int l = 0; l < m; ++l) G[i] += 0.5 * gi(i, l) * rhs[l];
    return G;
  } else {
    raise(Err::ConfigError, "spray at dual depth > 2 needs a closed-form override");
  }
}

template <class S>
SMat<S> nonlinear_connection(const MetricSpec& spec, std::span<const S> x, std::span<const S> y) {
  const int m = static_cast<int>(x.size());
  SMat<S> N(m, m);
  for (int j = 0; j < m; ++j) {
    SVec<Dual<S>> X = lift_span<Dual<S>, S>(x);
    SVec<Dual<S>> Y = lift_span<Dual<S>, S>(y);
    seed(Y[j], 0, 1.0);
    SVec<Dual<S>> G = spray<Dual<S>>(spec, std::span<const Dual<S>>(X), std::span<const Dual<S>>(Y));
    for (int i = 0; i < m; ++i) N(i, j) = G[i].d;
  }
  return N;
}

template <class S>
STen3<S> chern(const MetricSpec& spec, std::span<const S> x, std::span<const S> y) {
  if (spec.has_gamma_override<S>()) return spec.gamma_override<S>(x, y);
  const int m = static_cast<int>(x.size());
  SMat<S> g = fundamental<S>(spec, x, y);
  SMat<S> gi = inverse(g);
  STen3<S> A = cartan<S>(spec, x, y);
  S F = spec.norm_raw<S>(x, y);
  STen3<S> dgdx = metric_x_derivative<S>(spec, x, y);
  SMat<S> N = nonlinear_connection<S>(spec, x, y);
  STen3<S> dg(m);  // dg(a,b,c) = horizontal derivative of g_ab along x^c
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        S acc = dgdx(a, b, c);
        for (int s = 0; s < m; ++s) acc -= N(s, c) * (2.0 / F) * A(a, b, s);
        dg(a, b, c) = acc;
      }
  STen3<S> Gm(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = j; k < m; ++k) {
        S acc{};
        for (int l = 0; l < m; ++l) acc += gi(i, l) * (dg(l, k, j) + dg(l, j, k) - dg(j, k, l));
        Gm(i, j, k) = 0.5 * acc;
        Gm(i, k, j) = Gm(i, j, k);
      }
  return Gm;
}

// ======================================================================
// Double-level API with validation. Errors follow error.hpp kinds.
// ======================================================================

SVec<double> to_svec(const VectorXd& v);
VectorXd to_eigen_vec(const SVec<double>& v);
MatrixXd to_eigen(const SMat<double>& m);
SMat<double> to_smat(const MatrixXd& m);

// Average of the fundamental tensor over admissible coordinate directions: a
// Riemannian stand-in used for Newton initial guesses and for flattening
// direction-sphere quadratures.
MatrixXd average_metric(const MetricSpec& spec, const VectorXd& x);

double eval_norm(const MetricSpec& spec, const VectorXd& x, const VectorXd& y);
MatrixXd fundamental_tensor(const MetricSpec& spec, const VectorXd& x, const VectorXd& y);
Ten3d cartan_tensor(const MetricSpec& spec, const VectorXd& x, const VectorXd& y);
Ten3d chern_coefficients(const MetricSpec& spec, const VectorXd& x, const VectorXd& y);
VectorXd spray_coefficients(const MetricSpec& spec, const VectorXd& x, const VectorXd& y);

// Curvature of the connection, R^i_{jkl} (two-form convention), and the
// radial operator [R_T]^i_k = R^i_{jkl} y^j y^l acting on vectors.
Ten4d curvature_tensor(const MetricSpec& spec, const VectorXd& x, const VectorXd& y);
MatrixXd radial_curvature(const MetricSpec& spec, const VectorXd& x, const VectorXd& y);
// Independent route: radial curvature assembled from spray derivatives only.
// Used as a cross-check oracle against the connection route.
MatrixXd radial_curvature_spray(const MetricSpec& spec, const VectorXd& x, const VectorXd& y);

double flag_curvature(const MetricSpec& spec, const VectorXd& x, const Flag& flag);
double ricci(const MetricSpec& spec, const VectorXd& x, const VectorXd& y);
double t_curvature(const MetricSpec& spec, const VectorXd& x, const VectorXd& y,
                   const VectorXd& v);

struct TBoundSample {
  VectorXd x, y, v;
};
struct ViolationReport {
  double max_violation = 0.0;
  int samples = 0;
  double tolerance = 0.0;
  bool pass = true;
};
// Checks T_y(v) <= l [sqrt(g_y(v,v)) - g_y(v, y/F(y))]^2 F(y) over samples.
// l may be +infinity (sentinel: always passes).
ViolationReport t_bound_check(const MetricSpec& spec, double l,
                              std::span<const TBoundSample> samples, double tol = 1e-8);

struct SampledSup {
  double value = 0.0;
  int samples = 0;
};
// Sampled lower bounds of the sup-type constants; exact sups are out of
// numerical reach, so callers must treat these as one-sided estimates.
SampledSup reversibility(const MetricSpec& spec,
                         std::span<const std::pair<VectorXd, VectorXd>> samples);
struct UniformitySample {
  VectorXd x, X, Y, Z;
};
SampledSup uniformity(const MetricSpec& spec, std::span<const UniformitySample> samples);

// Sharper estimator: at each base point, maximize the largest generalized
// eigenvalue of the pencil (g_X, g_Z) over reference directions (X, Z) with a
// refined angle grid; the Y slot is handled exactly by the eigensolver.
double uniformity_refined(const MetricSpec& spec, std::span<const VectorXd> base_points,
                          int grid = 12, int rounds = 6);

}  // namespace finsler
