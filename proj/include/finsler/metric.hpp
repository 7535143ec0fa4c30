#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "finsler/chart.hpp"
#include "finsler/smallmat.hpp"

namespace finsler {

template <class S>
using ScalarFieldFn = std::function<S(std::span<const S>, std::span<const S>)>;
template <class S>
using MatFieldFn = std::function<SMat<S>(std::span<const S>, std::span<const S>)>;
template <class S>
using Ten3FieldFn = std::function<STen3<S>(std::span<const S>, std::span<const S>)>;
template <class S>
using VecFieldFn = std::function<SVec<S>(std::span<const S>, std::span<const S>)>;

// A Finsler norm on one chart. The norm functor is erased at every dual depth
// the derivative assemblies reach (up to 4: curvature of the assembled
// connection). Optional closed-form overrides short-circuit the AD path for
// the fundamental tensor, the spray, and the connection coefficients; they
// are attached by metric families that know them (the Randers path).
class MetricSpec {
 public:
  MetricSpec() = default;

  const Chart& chart() const { return chart_; }
  int dim() const { return chart_.dim; }
  const std::string& label() const { return label_; }

  template <class S>
  S norm_raw(std::span<const S> x, std::span<const S> y) const {
    constexpr int d = dual_depth<S>::value;
    if constexpr (d == 0) return norm0_(x, y);
    else if constexpr (d == 1) return norm1_(x, y);
    else if constexpr (d == 2) return norm2_(x, y);
    else if constexpr (d == 3) return norm3_(x, y);
    else { static_assert(d == 4, "norm erased up to dual depth 4"); return norm4_(x, y); }
  }

  template <class S>
  bool has_metric_override() const {
    constexpr int d = dual_depth<S>::value;
    if constexpr (d == 0) return static_cast<bool>(g0_);
    else if constexpr (d == 1) return static_cast<bool>(g1_);
    else if constexpr (d == 2) return static_cast<bool>(g2_);
    else if constexpr (d == 3) return static_cast<bool>(g3_);
    else return false;
  }
  template <class S>
  SMat<S> metric_override(std::span<const S> x, std::span<const S> y) const {
    constexpr int d = dual_depth<S>::value;
    if constexpr (d == 0) return g0_(x, y);
    else if constexpr (d == 1) return g1_(x, y);
    else if constexpr (d == 2) return g2_(x, y);
    else if constexpr (d == 3) return g3_(x, y);
    else raise(Err::ConfigError, "metric override depth exceeded");
  }

  template <class S>
  bool has_gamma_override() const {
    constexpr int d = dual_depth<S>::value;
    if constexpr (d == 0) return static_cast<bool>(gamma0_);
    else if constexpr (d == 1) return static_cast<bool>(gamma1_);
    else return false;
  }
  template <class S>
  STen3<S> gamma_override(std::span<const S> x, std::span<const S> y) const {
    constexpr int d = dual_depth<S>::value;
    if constexpr (d == 0) return gamma0_(x, y);
    else if constexpr (d == 1) return gamma1_(x, y);
    else raise(Err::ConfigError, "gamma override depth exceeded");
  }

  template <class Fn>
  void set_norm(Fn f) {
    norm0_ = [f](std::span<const double> x, std::span<const double> y) { return f(x, y); };
    norm1_ = [f](std::span<const D1> x, std::span<const D1> y) { return f(x, y); };
    norm2_ = [f](std::span<const D2> x, std::span<const D2> y) { return f(x, y); };
    norm3_ = [f](std::span<const D3> x, std::span<const D3> y) { return f(x, y); };
    norm4_ = [f](std::span<const D4> x, std::span<const D4> y) { return f(x, y); };
  }
  template <class Fn>
  void set_metric_override(Fn f) {
    g0_ = [f](std::span<const double> x, std::span<const double> y) { return f(x, y); };
    g1_ = [f](std::span<const D1> x, std::span<const D1> y) { return f(x, y); };
    g2_ = [f](std::span<const D2> x, std::span<const D2> y) { return f(x, y); };
    g3_ = [f](std::span<const D3> x, std::span<const D3> y) { return f(x, y); };
  }
  template <class Fn>
  void set_gamma_override(Fn f) {
    gamma0_ = [f](std::span<const double> x, std::span<const double> y) { return f(x, y); };
    gamma1_ = [f](std::span<const D1> x, std::span<const D1> y) { return f(x, y); };
  }

  void set_chart(Chart c) { chart_ = std::move(c); }
  void set_label(std::string s) { label_ = std::move(s); }

 private:
  Chart chart_;
  std::string label_;
  ScalarFieldFn<double> norm0_;
  ScalarFieldFn<D1> norm1_;
  ScalarFieldFn<D2> norm2_;
  ScalarFieldFn<D3> norm3_;
  ScalarFieldFn<D4> norm4_;
  MatFieldFn<double> g0_;
  MatFieldFn<D1> g1_;
  MatFieldFn<D2> g2_;
  MatFieldFn<D3> g3_;
  Ten3FieldFn<double> gamma0_;
  Ten3FieldFn<D1> gamma1_;
};

template <class Fn>
MetricSpec make_metric(Chart chart, std::string label, Fn norm_functor) {
  chart.validate();
  MetricSpec spec;
  spec.set_chart(std::move(chart));
  spec.set_label(std::move(label));
  spec.set_norm(std::move(norm_functor));
  return spec;
}

// Base point plus components, tagged by variance so vectors and covectors
// cannot be mixed up at module boundaries.
struct Tangent {
  VectorXd x;
  VectorXd v;
};
struct Cotangent {
  VectorXd x;
  VectorXd xi;
};

struct Flag {
  VectorXd pole;        // y, nonzero
  VectorXd transverse;  // V, independent of y
};

}  // namespace finsler
