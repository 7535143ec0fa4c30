#pragma once

#include <optional>

#include "finsler/geodesic.hpp"
#include "finsler/legendre.hpp"

namespace finsler {

template <class S>
using EmbedFn = std::function<SVec<S>(std::span<const S>)>;

// An embedded submanifold given by a parametrization into chart coordinates.
// The embedding is erased over dual depths 0..2 (frame and second derivatives
// come out of the same functor). k = 0 encodes a single point.
class SubmanifoldSpec {
 public:
  SubmanifoldSpec() = default;

  int dim() const { return k_; }
  int ambient_dim() const { return m_; }
  const Chart& domain() const { return *domain_; }

  template <class S>
  SVec<S> embed(std::span<const S> u) const {
    constexpr int d = dual_depth<S>::value;
    if constexpr (d == 0) return e0_(u);
    else if constexpr (d == 1) return e1_(u);
    else { static_assert(d == 2, "embedding erased to dual depth 2"); return e2_(u); }
  }

  VectorXd point(const VectorXd& u) const;
  MatrixXd tangent_frame(const VectorXd& u) const;         // m x k columns di/du^a
  std::vector<MatrixXd> hessian(const VectorXd& u) const;  // per ambient component, k x k

  template <class Fn>
  static SubmanifoldSpec make(Chart domain, int ambient_dim, Fn f) {
    domain.validate();
    SubmanifoldSpec s;
    s.k_ = domain.dim;
    s.m_ = ambient_dim;
    s.domain_ = std::move(domain);
    s.e0_ = [f](std::span<const double> u) { return f(u); };
    s.e1_ = [f](std::span<const D1> u) { return f(u); };
    s.e2_ = [f](std::span<const D2> u) { return f(u); };
    return s;
  }

  static SubmanifoldSpec point_at(const VectorXd& x);

 private:
  int k_ = 0, m_ = 0;
  std::optional<Chart> domain_;  // absent for k = 0
  EmbedFn<double> e0_;
  EmbedFn<D1> e1_;
  EmbedFn<D2> e2_;
};

// Euclidean sphere chart used to coordinatize the unit conormal fibers:
// q-vector c(theta) with p = q-1 angles (angles in [0,pi]^(p-1) x [0,2pi)).
// For q = 1 the "sphere" is the two signs; theta has one entry and selects
// the sign of the single component via cos(theta).
VectorXd sphere_param(const VectorXd& theta, int q);
MatrixXd sphere_param_jacobian(const VectorXd& theta, int q);  // q x p
int sphere_param_angle_count(int q);

// A point of the unit conormal bundle with every derived quantity the
// comparison machinery needs.
struct ConormalFrame {
  VectorXd u;           // submanifold parameters (size k)
  VectorXd theta;       // fiber angles
  VectorXd x;           // ambient chart point
  VectorXd xi;          // unit conormal, F*(xi) = 1, xi(TN) = 0
  VectorXd n;           // inverse transform of xi, F(n) = 1
  MatrixXd e_tan;       // m x k tangent frame
  MatrixXd e_trans;     // m x p transverse frame (pushforward of fiber angles)
  MatrixXd basis;       // m x (m-1): [e_tan | e_trans], a basis of the g_n-orthogonal
                        // complement of n
  MatrixXd gn;          // fundamental tensor at (x, n)
  MatrixXd gram;        // basis^T gn basis
  MatrixXd h;           // k x k co-second fundamental form on e_tan
  MatrixXd weingarten;  // k x k shape operator from the conormal field derivative
  MatrixXd dn_cov;      // m x k columns: covariant u-derivatives of the unit normal field
  MatrixXd ann_basis;   // m x (m-k) annihilator basis behind the theta chart
  double co_mean = 0.0;
};

ConormalFrame conormal_sphere_point(const MetricSpec& spec, const SubmanifoldSpec& sub,
                                    const VectorXd& u, const VectorXd& theta);

// h_xi(X, Y) for ambient vectors tangent to the submanifold at frame.x.
double co_second_fundamental(const ConormalFrame& frame, const VectorXd& X, const VectorXd& Y);
const MatrixXd& co_weingarten(const ConormalFrame& frame);
double co_mean_curvature(const ConormalFrame& frame);

// Conormal exponential: the point gamma_n(t) of the unit-speed normal
// geodesic with initial covector frame.xi.
VectorXd conormal_exp(const MetricSpec& spec, const ConormalFrame& frame, double t,
                      IntegratorOptions opt = {});

// Covariant u-derivative of the unit conormal field along direction alpha,
// computed through the implicit-function derivative of the inverse transform
// (the Newton solve is never differenced). Exposed for cross-validation.
VectorXd conormal_field_derivative(const MetricSpec& spec, const SubmanifoldSpec& sub,
                                   const ConormalFrame& frame, int alpha);

}  // namespace finsler
