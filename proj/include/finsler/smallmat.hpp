#pragma once

#include <cassert>
#include <span>
#include <vector>

#include "finsler/dual.hpp"
#include "finsler/error.hpp"

// Small dense vectors/matrices/tensors templated on the scalar so the tensor
// assemblies can run over nested dual numbers. Pivoting compares real parts.
namespace finsler {

template <class S>
using SVec = std::vector<S>;

template <class S>
struct SMat {
  int rows = 0, cols = 0;
  std::vector<S> a;

  SMat() = default;
  SMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

  S& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const S& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static SMat identity(int n) {
    SMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1.0);
    return m;
  }
};

template <class S>
struct STen3 {
  int n = 0;
  std::vector<S> a;

  STen3() = default;
  explicit STen3(int nn) : n(nn), a(static_cast<size_t>(nn) * nn * nn) {}

  S& operator()(int i, int j, int k) { return a[(static_cast<size_t>(i) * n + j) * n + k]; }
  const S& operator()(int i, int j, int k) const {
    return a[(static_cast<size_t>(i) * n + j) * n + k];
  }
};

struct Ten4d {
  int n = 0;
  std::vector<double> a;

  Ten4d() = default;
  explicit Ten4d(int nn) : n(nn), a(static_cast<size_t>(nn) * nn * nn * nn) {}

  double& operator()(int i, int j, int k, int l) {
    return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
  double operator()(int i, int j, int k, int l) const {
    return a[((static_cast<size_t>(i) * n + j) * n + k) * n + l];
  }
};

using Ten3d = STen3<double>;

template <class TO, class S>
SVec<TO> lift_span(std::span<const S> v) {
  SVec<TO> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = embed<TO>(v[i]);
  return r;
}

template <class S>
S dot(const SVec<S>& x, const SVec<S>& y) {
  S s{};
  for (size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

template <class S>
SVec<S> matvec(const SMat<S>& m, const SVec<S>& x) {
  SVec<S> r(m.rows, S{});
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) r[i] += m(i, j) * x[j];
  return r;
}

template <class S>
SMat<S> matmul(const SMat<S>& a, const SMat<S>& b) {
  SMat<S> r(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k)
      for (int j = 0; j < b.cols; ++j) r(i, j) += a(i, k) * b(k, j);
  return r;
}

// Gauss-Jordan inverse with partial pivoting on |real part|.
template <class S>
SMat<S> inverse(SMat<S> m) {
  const int n = m.rows;
  SMat<S> inv = SMat<S>::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::fabs(real_part(m(col, col)));
    for (int r = col + 1; r < n; ++r) {
      double c = std::fabs(real_part(m(r, col)));
      if (c > best) {
        best = c;
        piv = r;
      }
    }
    if (best == 0.0) raise(Err::DegenerateTensor, "singular matrix in inverse()");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m(piv, j), m(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
    S p = m(col, col);
    for (int j = 0; j < n; ++j) {
      m(col, j) /= p;
      inv(col, j) /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      S f = m(r, col);
      for (int j = 0; j < n; ++j) {
        m(r, j) -= f * m(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

template <class S>
S determinant(SMat<S> m) {
  const int n = m.rows;
  S det = S(1.0);
  double sign = 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = std::fabs(real_part(m(col, col)));
    for (int r = col + 1; r < n; ++r) {
      double c = std::fabs(real_part(m(r, col)));
      if (c > best) {
        best = c;
        piv = r;
      }
    }
    if (best == 0.0) return S(0.0);
    if (piv != col) {
      sign = -sign;
      for (int j = col; j < n; ++j) std::swap(m(piv, j), m(col, j));
    }
    for (int r = col + 1; r < n; ++r) {
      S f = m(r, col) / m(col, col);
      for (int j = col; j < n; ++j) m(r, j) -= f * m(col, j);
    }
    det *= m(col, col);
  }
  return sign * det;
}

template <class S>
SMat<S> value_of(const SMat<Dual<S>>& m) {
  SMat<S> r(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i].v;
  return r;
}
template <class S>
SMat<S> deriv_of(const SMat<Dual<S>>& m) {
  SMat<S> r(m.rows, m.cols);
  for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = m.a[i].d;
  return r;
}
template <class S>
SVec<S> value_of(const SVec<Dual<S>>& v) {
  SVec<S> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = v[i].v;
  return r;
}
template <class S>
SVec<S> deriv_of(const SVec<Dual<S>>& v) {
  SVec<S> r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = v[i].d;
  return r;
}
template <class S>
STen3<S> value_of(const STen3<Dual<S>>& t) {
  STen3<S> r(t.n);
  for (size_t i = 0; i < t.a.size(); ++i) r.a[i] = t.a[i].v;
  return r;
}
template <class S>
STen3<S> deriv_of(const STen3<Dual<S>>& t) {
  STen3<S> r(t.n);
  for (size_t i = 0; i < t.a.size(); ++i) r.a[i] = t.a[i].d;
  return r;
}

}  // namespace finsler
