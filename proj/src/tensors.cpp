#include "finsler/tensors.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

namespace finsler {

SVec<double> to_svec(const VectorXd& v) { return SVec<double>(v.data(), v.data() + v.size()); }

VectorXd to_eigen_vec(const SVec<double>& v) {
  VectorXd r(static_cast<int>(v.size()));
  for (size_t i = 0; i < v.size(); ++i) r[static_cast<int>(i)] = v[i];
  return r;
}

MatrixXd to_eigen(const SMat<double>& m) {
  MatrixXd r(m.rows, m.cols);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) r(i, j) = m(i, j);
  return r;
}

SMat<double> to_smat(const MatrixXd& m) {
  SMat<double> r(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < r.rows; ++i)
    for (int j = 0; j < r.cols; ++j) r(i, j) = m(i, j);
  return r;
}


MatrixXd average_metric(const MetricSpec& spec, const VectorXd& x) {
  const int m = spec.dim();
  SVec<double> xs = to_svec(x);
  MatrixXd acc = MatrixXd::Zero(m, m);
  int used = 0;
  for (int i = 0; i < m; ++i)
    for (double s : {1.0, -1.0}) {
      VectorXd e = VectorXd::Zero(m);
      e[i] = s;
      SVec<double> es = to_svec(e);
      if (!(spec.norm_raw<double>(std::span<const double>(xs), std::span<const double>(es)) >
            1e-10))
        continue;
      acc += to_eigen(fundamental<double>(spec, xs, es));
      ++used;
    }
  if (used == 0) return MatrixXd::Identity(m, m);
  return acc / used;
}

double eval_norm(const MetricSpec& spec, const VectorXd& x, const VectorXd& y) {
  if (spec.chart().is_singular(x)) raise(Err::SingularPoint, "norm evaluated at excluded point");
  SVec<double> xs = to_svec(x), ys = to_svec(y);
  double F = spec.norm_raw<double>(xs, ys);
  if (y.norm() > 0.0 && !(F > 0.0))
    raise(Err::NonAdmissible, "norm not positive on nonzero vector");
  return F;
}

MatrixXd fundamental_tensor(const MetricSpec& spec, const VectorXd& x, const VectorXd& y) {
  SVec<double> xs = to_svec(x), ys = to_svec(y);
  MatrixXd g = to_eigen(fundamental<double>(spec, xs, ys));
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (g + g.transpose()));
  const double tr = g.trace();
  if (es.eigenvalues().minCoeff() < 1e-10 * tr)
    raise(Err::DegenerateTensor, "fundamental tensor not positive definite at sample");
  return g;
}

Ten3d cartan_tensor(const MetricSpec& spec, const VectorXd& x, const VectorXd& y) {
  SVec<double> xs = to_svec(x), ys = to_svec(y);
  return cartan<double>(spec, xs, ys);
}

Ten3d chern_coefficients(const MetricSpec& spec, const VectorXd& x, const VectorXd& y) {
  SVec<double> xs = to_svec(x), ys = to_svec(y);
  return chern<double>(spec, xs, ys);
}

VectorXd spray_coefficients(const MetricSpec& spec, const VectorXd& x, const VectorXd& y) {
  SVec<double> xs = to_svec(x), ys = to_svec(y);
  return to_eigen_vec(spray<double>(spec, xs, ys));
}

Ten4d curvature_tensor(const MetricSpec& spec, const VectorXd& x, const VectorXd& y) {
  const int m = spec.dim();
  SVec<double> xs = to_svec(x), ys = to_svec(y);
  Ten3d G0 = chern<double>(spec, xs, ys);
  SMat<double> N0 = nonlinear_connection<double>(spec, xs, ys);
  std::vector<Ten3d> dGx(m), dGy(m);
  for (int a = 0; a < m; ++a) {
    {
      SVec<D1> X = lift_span<D1, double>(std::span<const double>(xs));
      SVec<D1> Y = lift_span<D1, double>(std::span<const double>(ys));
      seed(X[a], 0, 1.0);
      dGx[a] = deriv_of(chern<D1>(spec, std::span<const D1>(X), std::span<const D1>(Y)));
    }
    {
      SVec<D1> X = lift_span<D1, double>(std::span<const double>(xs));
      SVec<D1> Y = lift_span<D1, double>(std::span<const double>(ys));
      seed(Y[a], 0, 1.0);
      dGy[a] = deriv_of(chern<D1>(spec, std::span<const D1>(X), std::span<const D1>(Y)));
    }
  }
  // Horizontal derivative of Gamma along x^c.
  auto hder = [&](int i, int j, int l, int c) {
    double acc = dGx[c](i, j, l);
    for (int s = 0; s < m; ++s) acc -= N0(s, c) * dGy[s](i, j, l);
    return acc;
  };
  Ten4d R(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double acc = hder(i, j, l, k) - hder(i, j, k, l);
          for (int s = 0; s < m; ++s)
            acc += G0(i, k, s) * G0(s, j, l) - G0(i, l, s) * G0(s, j, k);
          R(i, j, k, l) = acc;
        }
  return R;
}

MatrixXd radial_curvature(const MetricSpec& spec, const VectorXd& x, const VectorXd& y) {
  const int m = spec.dim();
  Ten4d R = curvature_tensor(spec, x, y);
  MatrixXd RT = MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k) {
      double acc = 0;
      for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l) acc += R(i, j, k, l) * y[j] * y[l];
      RT(i, k) = acc;
    }
  return RT;
}

MatrixXd radial_curvature_spray(const MetricSpec& spec, const VectorXd& x, const VectorXd& y) {
  // R^i_k = 2 dG^i/dx^k - y^j d2G^i/dx^j dy^k + 2 G^j d2G^i/dy^j dy^k
  //         - dG^i/dy^j dG^j/dy^k, assembled from the spray alone.
  const int m = spec.dim();
  SVec<double> xs = to_svec(x), ys = to_svec(y);
  SVec<double> G0 = spray<double>(spec, xs, ys);
  MatrixXd dGx(m, m), dGy(m, m), mixXY(m, m), mixGY(m, m);
  for (int k = 0; k < m; ++k) {
    {
      SVec<D1> X = lift_span<D1, double>(std::span<const double>(xs));
      SVec<D1> Y = lift_span<D1, double>(std::span<const double>(ys));
      seed(X[k], 0, 1.0);
      SVec<D1> G = spray<D1>(spec, std::span<const D1>(X), std::span<const D1>(Y));
      for (int i = 0; i < m; ++i) dGx(i, k) = G[i].d;
    }
    {
      SVec<D1> X = lift_span<D1, double>(std::span<const double>(xs));
      SVec<D1> Y = lift_span<D1, double>(std::span<const double>(ys));
      seed(Y[k], 0, 1.0);
      SVec<D1> G = spray<D1>(spec, std::span<const D1>(X), std::span<const D1>(Y));
      for (int i = 0; i < m; ++i) dGy(i, k) = G[i].d;
    }
    {
      // y^j d2G^i/dx^j dy^k : x seeded along y, y^k seeded at the inner level
      SVec<D2> X = lift_span<D2, double>(std::span<const double>(xs));
      SVec<D2> Y = lift_span<D2, double>(std::span<const double>(ys));
      for (int j = 0; j < m; ++j) seed(X[j], 0, ys[j]);
      seed(Y[k], 1, 1.0);
      SVec<D2> G = spray<D2>(spec, std::span<const D2>(X), std::span<const D2>(Y));
      for (int i = 0; i < m; ++i) mixXY(i, k) = G[i].d.d;
    }
    {
      // G^j d2G^i/dy^j dy^k : y seeded along G at the outer level
      SVec<D2> X = lift_span<D2, double>(std::span<const double>(xs));
      SVec<D2> Y = lift_span<D2, double>(std::span<const double>(ys));
      for (int j = 0; j < m; ++j) seed(Y[j], 0, G0[j]);
      seed(Y[k], 1, 1.0);
      SVec<D2> G = spray<D2>(spec, std::span<const D2>(X), std::span<const D2>(Y));
      for (int i = 0; i < m; ++i) mixGY(i, k) = G[i].d.d;
    }
  }
  MatrixXd RT(m, m);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < m; ++k)
      RT(i, k) = 2.0 * dGx(i, k) - mixXY(i, k) + 2.0 * mixGY(i, k);
  RT -= dGy * dGy;
  return RT;
}

double flag_curvature(const MetricSpec& spec, const VectorXd& x, const Flag& flag) {
  const VectorXd& y = flag.pole;
  const VectorXd& V = flag.transverse;
  MatrixXd g = to_eigen(fundamental<double>(spec, to_svec(x), to_svec(y)));
  const double gyy = y.dot(g * y), gVV = V.dot(g * V), gyV = y.dot(g * V);
  const double denom = gyy * gVV - gyV * gyV;
  if (denom < 1e-12 * gyy * gVV)
    raise(Err::DegenerateFlag, "flag edge nearly parallel to pole");
  MatrixXd RT = radial_curvature(spec, x, y);
  const double num = V.dot(g * (RT * V));
  return num / denom;
}

double ricci(const MetricSpec& spec, const VectorXd& x, const VectorXd& y) {
  const int m = spec.dim();
  MatrixXd g = to_eigen(fundamental<double>(spec, to_svec(x), to_svec(y)));
  const double F2 = y.dot(g * y);
  MatrixXd RT = radial_curvature(spec, x, y);
  // g_y-orthonormal completion of y/F by Gram-Schmidt over coordinate axes.
  std::vector<VectorXd> basis;
  basis.push_back(y / std::sqrt(F2));
  for (int i = 0; i < m && static_cast<int>(basis.size()) < m; ++i) {
    VectorXd e = VectorXd::Zero(m);
    e[i] = 1.0;
    for (const auto& b : basis) e -= b.dot(g * e) * b;
    const double n2 = e.dot(g * e);
    if (n2 < 1e-14) continue;
    basis.push_back(e / std::sqrt(n2));
  }
  if (static_cast<int>(basis.size()) != m)
    raise(Err::DegenerateTensor, "could not complete orthonormal basis");
  double ric = 0;
  for (int i = 1; i < m; ++i) ric += basis[i].dot(g * (RT * basis[i])) / F2;
  return ric;
}

double t_curvature(const MetricSpec& spec, const VectorXd& x, const VectorXd& y,
                   const VectorXd& v) {
  const int m = spec.dim();
  SVec<double> xs = to_svec(x);
  Ten3d Gv = chern<double>(spec, xs, to_svec(v));
  Ten3d Gy = chern<double>(spec, xs, to_svec(y));
  MatrixXd g = to_eigen(fundamental<double>(spec, xs, to_svec(y)));
  VectorXd yl = g * y;  // y^l g_kl(y)
  double T = 0;
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      for (int mm = 0; mm < m; ++mm)
        T += yl[k] * (Gv(k, j, mm) - Gy(k, j, mm)) * v[j] * v[mm];
  return T;
}

ViolationReport t_bound_check(const MetricSpec& spec, double l,
                              std::span<const TBoundSample> samples, double tol) {
  ViolationReport rep;
  rep.tolerance = tol;
  rep.samples = static_cast<int>(samples.size());
  if (std::isinf(l) || samples.empty()) return rep;  // +inf sentinel: no constraint
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    MatrixXd g = to_eigen(fundamental<double>(spec, to_svec(s.x), to_svec(s.y)));
    const double F = eval_norm(spec, s.x, s.y);
    const double gvv = s.v.dot(g * s.v);
    const double gvy = s.v.dot(g * s.y) / F;
    const double rhs = l * (std::sqrt(gvv) - gvy) * (std::sqrt(gvv) - gvy) * F;
    const double T = t_curvature(spec, s.x, s.y, s.v);
    rep.max_violation = std::max(rep.max_violation, T - rhs);
  }
  rep.pass = rep.max_violation <= tol;
  return rep;
}

SampledSup reversibility(const MetricSpec& spec,
                         std::span<const std::pair<VectorXd, VectorXd>> samples) {
  SampledSup s;
  s.samples = static_cast<int>(samples.size());
  for (const auto& [x, y] : samples) {
    const double f = eval_norm(spec, x, y);
    const double fr = eval_norm(spec, x, -y);
    s.value = std::max(s.value, fr / f);
  }
  return s;
}

SampledSup uniformity(const MetricSpec& spec, std::span<const UniformitySample> samples) {
  SampledSup s;
  s.samples = static_cast<int>(samples.size());
  for (const auto& smp : samples) {
    MatrixXd gX = to_eigen(fundamental<double>(spec, to_svec(smp.x), to_svec(smp.X)));
    MatrixXd gZ = to_eigen(fundamental<double>(spec, to_svec(smp.x), to_svec(smp.Z)));
    const double r = smp.Y.dot(gX * smp.Y) / smp.Y.dot(gZ * smp.Y);
    s.value = std::max(s.value, r);
  }
  return s;
}

namespace {

VectorXd direction_from_angles(std::span<const double> ang, int m) {
  VectorXd d(m);
  double prod = 1.0;
  for (int j = 0; j + 1 < m; ++j) {
    d[j] = prod * std::cos(ang[static_cast<size_t>(j)]);
    prod *= std::sin(ang[static_cast<size_t>(j)]);
  }
  d[m - 1] = prod;
  return d;
}

// Coordinate-box maximizer with shrinking re-grids around the incumbent.
double refine_max(const std::function<double(std::span<const double>)>& f,
                  std::vector<std::array<double, 2>> box, int grid, int rounds) {
  const int dims = static_cast<int>(box.size());
  std::vector<double> best_pt(static_cast<size_t>(dims));
  double best = -std::numeric_limits<double>::infinity();
  for (int round = 0; round < rounds; ++round) {
    std::vector<size_t> idx(static_cast<size_t>(dims), 0);
    while (true) {
      std::vector<double> pt(static_cast<size_t>(dims));
      for (int i = 0; i < dims; ++i) {
        const auto& b = box[static_cast<size_t>(i)];
        pt[static_cast<size_t>(i)] =
            b[0] + (b[1] - b[0]) * (static_cast<double>(idx[static_cast<size_t>(i)]) + 0.5) / grid;
      }
      const double v = f(pt);
      if (v > best) {
        best = v;
        best_pt = pt;
      }
      int ax = dims - 1;
      for (; ax >= 0; --ax) {
        if (++idx[static_cast<size_t>(ax)] < static_cast<size_t>(grid)) break;
        idx[static_cast<size_t>(ax)] = 0;
      }
      if (ax < 0) break;
    }
    for (int i = 0; i < dims; ++i) {
      const double w = (box[static_cast<size_t>(i)][1] - box[static_cast<size_t>(i)][0]) / grid;
      box[static_cast<size_t>(i)] = {best_pt[static_cast<size_t>(i)] - w,
                                     best_pt[static_cast<size_t>(i)] + w};
    }
  }
  return best;
}

std::vector<std::array<double, 2>> direction_angle_box(int m) {
  std::vector<std::array<double, 2>> box;
  for (int j = 0; j + 2 < m; ++j) box.push_back({0.0, M_PI});
  box.push_back({0.0, 2.0 * M_PI});
  return box;
}

}  // namespace

double uniformity_refined(const MetricSpec& spec, std::span<const VectorXd> base_points,
                          int grid, int rounds) {
  const int m = spec.dim();
  double best = 1.0;
  for (const auto& x : base_points) {
    SVec<double> xs = to_svec(x);
    auto ratio = [&](std::span<const double> ang) {
      const int half = static_cast<int>(ang.size()) / 2;
      VectorXd X = direction_from_angles(ang.subspan(0, static_cast<size_t>(half)), m);
      VectorXd Z = direction_from_angles(ang.subspan(static_cast<size_t>(half)), m);
      SVec<double> Xs = to_svec(X), Zs = to_svec(Z);
      if (!(spec.norm_raw<double>(std::span<const double>(xs), std::span<const double>(Xs)) > 1e-8) ||
          !(spec.norm_raw<double>(std::span<const double>(xs), std::span<const double>(Zs)) > 1e-8))
        return -std::numeric_limits<double>::infinity();
      MatrixXd gX = to_eigen(fundamental<double>(spec, xs, Xs));
      MatrixXd gZ = to_eigen(fundamental<double>(spec, xs, Zs));
      Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(gX, gZ);
      return ges.eigenvalues().maxCoeff();
    };
    auto box = direction_angle_box(m);
    auto boxZ = direction_angle_box(m);
    box.insert(box.end(), boxZ.begin(), boxZ.end());
    best = std::max(best, refine_max(ratio, box, grid, rounds));
  }
  return best;
}

}  // namespace finsler
