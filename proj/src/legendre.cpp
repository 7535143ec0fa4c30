#include "finsler/legendre.hpp"

#include <Eigen/Dense>

namespace finsler {

Cotangent legendre(const MetricSpec& spec, const Tangent& t) {
  MatrixXd g = to_eigen(fundamental<double>(spec, to_svec(t.x), to_svec(t.v)));
  return {t.x, g * t.v};
}

namespace {

VectorXd forward(const MetricSpec& spec, const VectorXd& x, const VectorXd& y) {
  MatrixXd g = to_eigen(fundamental<double>(spec, to_svec(x), to_svec(y)));
  return g * y;
}

bool admissible(const MetricSpec& spec, const VectorXd& x, const VectorXd& y) {
  SVec<double> xs = to_svec(x), ys = to_svec(y);
  return spec.norm_raw<double>(xs, ys) > 1e-10;
}

}  // namespace

Tangent legendre_inverse(const MetricSpec& spec, const Cotangent& c, int max_iter, double tol) {
  const double scale = c.xi.norm();
  if (scale == 0.0) raise(Err::NonAdmissible, "inverse transform of the zero covector");
  const VectorXd xi = c.xi / scale;

  VectorXd y = average_metric(spec, c.x).ldlt().solve(xi);
  if (!admissible(spec, c.x, y)) y = xi;  // fallback: treat components as a vector
  VectorXd r = xi - forward(spec, c.x, y);
  double res = r.norm();
  for (int it = 0; it < max_iter && res > tol; ++it) {
    MatrixXd g = to_eigen(fundamental<double>(spec, to_svec(c.x), to_svec(y)));
    VectorXd dy = g.ldlt().solve(r);
    double lambda = 1.0;
    bool moved = false;
    while (lambda > 1e-6) {
      VectorXd ytry = y + lambda * dy;
      if (admissible(spec, c.x, ytry)) {
        VectorXd rtry = xi - forward(spec, c.x, ytry);
        if (rtry.norm() < res) {
          y = ytry;
          r = rtry;
          res = rtry.norm();
          moved = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!moved) break;
  }
  if (res > tol)
    raise(Err::NoConvergence, "Newton iteration for the inverse transform stalled at residual " +
                                  std::to_string(res));
  return {c.x, scale * y};
}

double dual_norm(const MetricSpec& spec, const Cotangent& c) {
  Tangent t = legendre_inverse(spec, c);
  return eval_norm(spec, t.x, t.v);
}

MatrixXd dual_tensor(const MetricSpec& spec, const Cotangent& c) {
  Tangent t = legendre_inverse(spec, c);
  MatrixXd g = to_eigen(fundamental<double>(spec, to_svec(t.x), to_svec(t.v)));
  return g.inverse();
}

SampledSup dual_uniformity(const MetricSpec& spec, std::span<const UniformitySample> samples) {
  SampledSup s;
  s.samples = static_cast<int>(samples.size());
  for (const auto& smp : samples) {
    MatrixXd gX = dual_tensor(spec, {smp.x, smp.X});
    MatrixXd gZ = dual_tensor(spec, {smp.x, smp.Z});
    const double r = smp.Y.dot(gX * smp.Y) / smp.Y.dot(gZ * smp.Y);
    s.value = std::max(s.value, r);
  }
  return s;
}

namespace {

VectorXd covector_from_angles(std::span<const double> ang, int m) {
  VectorXd d(m);
  double prod = 1.0;
  for (int j = 0; j + 1 < m; ++j) {
    d[j] = prod * std::cos(ang[static_cast<size_t>(j)]);
    prod *= std::sin(ang[static_cast<size_t>(j)]);
  }
  d[m - 1] = prod;
  return d;
}

double refine_max_dual(const std::function<double(std::span<const double>)>& f,
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

}  // namespace

double dual_uniformity_refined(const MetricSpec& spec, std::span<const VectorXd> base_points,
                               int grid, int rounds) {
  const int m = spec.dim();
  double best = 1.0;
  for (const auto& x : base_points) {
    auto ratio = [&](std::span<const double> ang) {
      const int half = static_cast<int>(ang.size()) / 2;
      VectorXd Xi = covector_from_angles(ang.subspan(0, static_cast<size_t>(half)), m);
      VectorXd Ze = covector_from_angles(ang.subspan(static_cast<size_t>(half)), m);
      MatrixXd gX, gZ;
      try {
        gX = dual_tensor(spec, {x, Xi});
        gZ = dual_tensor(spec, {x, Ze});
      } catch (const Error&) {
        return -std::numeric_limits<double>::infinity();
      }
      Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(gX, gZ);
      return ges.eigenvalues().maxCoeff();
    };
    std::vector<std::array<double, 2>> box;
    for (int rep = 0; rep < 2; ++rep) {
      for (int j = 0; j + 2 < m; ++j) box.push_back({0.0, M_PI});
      box.push_back({0.0, 2.0 * M_PI});
    }
    best = std::max(best, refine_max_dual(ratio, box, grid, rounds));
  }
  return best;
}

}  // namespace finsler
