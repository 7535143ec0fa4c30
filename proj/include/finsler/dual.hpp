#pragma once

#include <cmath>
#include <type_traits>
#include <utility>

namespace finsler {

// Truncated first-order Taylor scalar v + d*eps, eps^2 = 0. Nesting the type
// (Dual<Dual<double>> and deeper) carries one independent direction per level,
// so a depth-n nest evaluates an exact n-th order mixed directional derivative
// in one pass. Constants lift through the double constructor with d = 0.
template <class T>
struct Dual {
  using inner_type = T;

  T v{};
  T d{};

  Dual() = default;
  Dual(double c) : v(c), d() {}
  Dual(T value, T deriv) : v(std::move(value)), d(std::move(deriv)) {}
};

using D1 = Dual<double>;
using D2 = Dual<D1>;
using D3 = Dual<D2>;
using D4 = Dual<D3>;

template <class S>
struct dual_depth;
template <>
struct dual_depth<double> : std::integral_constant<int, 0> {};
template <class T>
struct dual_depth<Dual<T>> : std::integral_constant<int, dual_depth<T>::value + 1> {};

inline double real_part(double x) { return x; }
template <class T>
double real_part(const Dual<T>& x) {
  return real_part(x.v);
}

inline void set_value(double& s, double c) { s = c; }
template <class T>
void set_value(Dual<T>& s, double c) {
  set_value(s.v, c);
}

// Seed a unit (or scaled) direction into the eps slot at nesting depth
// `level`, counted from the outermost dual. The pure-eps coefficient is the
// value part of d after descending level times through v.
inline void seed(double&, int, double) {}
template <class T>
void seed(Dual<T>& s, int level, double c) {
  if (level == 0)
    set_value(s.d, c);
  else
    seed(s.v, level - 1, c);
}

inline double d1(const D1& f) { return f.d; }
inline double d2(const D2& f) { return f.d.d; }
inline double d3(const D3& f) { return f.d.d.d; }
inline double d4(const D4& f) { return f.d.d.d.d; }

// Embed a scalar S as a constant of a deeper dual type TO.
template <class TO, class S>
struct Embedder {
  static TO from(const S& s) {
    TO r;
    r.v = Embedder<typename TO::inner_type, S>::from(s);
    return r;
  }
};
template <class S>
struct Embedder<S, S> {
  static S from(const S& s) { return s; }
};
template <class TO, class S>
TO embed(const S& s) {
  return Embedder<TO, S>::from(s);
}

// Seed with a scalar-valued coefficient (used for directional contractions
// where the direction components are themselves dual numbers).
template <class S>
void seed_scalar(double&, int, const S&) {}
template <class T, class S>
void seed_scalar(Dual<T>& s, int level, const S& c) {
  if constexpr (dual_depth<T>::value >= dual_depth<S>::value) {
    if (level == 0) {
      s.d = Embedder<T, S>::from(c);
      return;
    }
  }
  seed_scalar(s.v, level - 1, c);
}

// ---- arithmetic ----

template <class T>
Dual<T> operator+(const Dual<T>& x, const Dual<T>& y) {
  return {x.v + y.v, x.d + y.d};
}
template <class T>
Dual<T> operator+(const Dual<T>& x, double c) {
  return {x.v + c, x.d};
}
template <class T>
Dual<T> operator+(double c, const Dual<T>& x) {
  return {c + x.v, x.d};
}

template <class T>
Dual<T> operator-(const Dual<T>& x) {
  return {-x.v, -x.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& x, const Dual<T>& y) {
  return {x.v - y.v, x.d - y.d};
}
template <class T>
Dual<T> operator-(const Dual<T>& x, double c) {
  return {x.v - c, x.d};
}
template <class T>
Dual<T> operator-(double c, const Dual<T>& x) {
  return {c - x.v, -x.d};
}

template <class T>
Dual<T> operator*(const Dual<T>& x, const Dual<T>& y) {
  return {x.v * y.v, x.v * y.d + x.d * y.v};
}
template <class T>
Dual<T> operator*(const Dual<T>& x, double c) {
  return {x.v * c, x.d * c};
}
template <class T>
Dual<T> operator*(double c, const Dual<T>& x) {
  return {c * x.v, c * x.d};
}

template <class T>
Dual<T> operator/(const Dual<T>& x, const Dual<T>& y) {
  T q = x.v / y.v;
  return {q, (x.d - q * y.d) / y.v};
}
template <class T>
Dual<T> operator/(const Dual<T>& x, double c) {
  return {x.v / c, x.d / c};
}
template <class T>
Dual<T> operator/(double c, const Dual<T>& x) {
  T q = c / x.v;
  return {q, -(q / x.v) * x.d};
}

template <class T>
Dual<T>& operator+=(Dual<T>& x, const Dual<T>& y) {
  x = x + y;
  return x;
}
template <class T>
Dual<T>& operator-=(Dual<T>& x, const Dual<T>& y) {
  x = x - y;
  return x;
}
template <class T>
Dual<T>& operator*=(Dual<T>& x, const Dual<T>& y) {
  x = x * y;
  return x;
}
template <class T>
Dual<T>& operator/=(Dual<T>& x, const Dual<T>& y) {
  x = x / y;
  return x;
}

template <class T, class U>
bool operator<(const Dual<T>& x, const U& y) {
  return real_part(x) < real_part(y);
}
template <class T>
bool operator<(double x, const Dual<T>& y) {
  return x < real_part(y);
}
template <class T, class U>
bool operator>(const Dual<T>& x, const U& y) {
  return real_part(x) > real_part(y);
}
template <class T>
bool operator>(double x, const Dual<T>& y) {
  return x > real_part(y);
}
template <class T, class U>
bool operator<=(const Dual<T>& x, const U& y) {
  return real_part(x) <= real_part(y);
}
template <class T, class U>
bool operator>=(const Dual<T>& x, const U& y) {
  return real_part(x) >= real_part(y);
}

// ---- elementary functions (chain rule at each level) ----

using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tan;

template <class T>
Dual<T> sqrt(const Dual<T>& x) {
  T r = sqrt(x.v);
  return {r, x.d / (2.0 * r)};
}
template <class T>
Dual<T> sin(const Dual<T>& x) {
  return {sin(x.v), x.d * cos(x.v)};
}
template <class T>
Dual<T> cos(const Dual<T>& x) {
  return {cos(x.v), -1.0 * x.d * sin(x.v)};
}
template <class T>
Dual<T> tan(const Dual<T>& x) {
  T t = tan(x.v);
  return {t, x.d * (1.0 + t * t)};
}
template <class T>
Dual<T> exp(const Dual<T>& x) {
  T e = exp(x.v);
  return {e, x.d * e};
}
template <class T>
Dual<T> log(const Dual<T>& x) {
  return {log(x.v), x.d / x.v};
}
template <class T>
Dual<T> pow(const Dual<T>& x, double p) {
  T f = pow(x.v, p);
  return {f, p * pow(x.v, p - 1.0) * x.d};
}

inline double abs_val(double x) { return std::fabs(x); }
template <class T>
Dual<T> abs_val(const Dual<T>& x) {
  return real_part(x) < 0.0 ? -x : x;
}

using std::acos;
using std::asin;
using std::atan2;

template <class T>
Dual<T> acos(const Dual<T>& x) {
  return {acos(x.v), -1.0 * x.d / sqrt(1.0 - x.v * x.v)};
}
template <class T>
Dual<T> asin(const Dual<T>& x) {
  return {asin(x.v), x.d / sqrt(1.0 - x.v * x.v)};
}
template <class T>
Dual<T> atan2(const Dual<T>& y, const Dual<T>& x) {
  T r2 = x.v * x.v + y.v * y.v;
  return {atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / r2};
}

}  // namespace finsler
