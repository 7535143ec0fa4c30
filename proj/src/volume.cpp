#include "finsler/volume.hpp"

#include <cmath>

#include "finsler/parallel.hpp"

namespace finsler {

const char* to_string(VolumeForm f) { return f == VolumeForm::BH ? "BH" : "HT"; }

namespace {

double indicatrix_radius(const MetricSpec& spec, const SVec<double>& xs, const VectorXd& dir) {
  SVec<double> ds(dir.data(), dir.data() + dir.size());
  const double F = spec.norm_raw<double>(std::span<const double>(xs), std::span<const double>(ds));
  if (!(F > 0)) raise(Err::QuadratureFailure, "indicatrix not star-shaped at sample direction");
  double r = 1.0 / F;
  // Safeguard for norms that are not exactly homogeneous: fall back to a
  // bisection on F(x, s dir) = 1.
  SVec<double> test = ds;
  for (auto& c : test) c *= r;
  const double chk = spec.norm_raw<double>(std::span<const double>(xs), std::span<const double>(test));
  if (std::abs(chk - 1.0) > 1e-10) {
    double lo = 0.5 * r, hi = 2.0 * r;
    auto at = [&](double s) {
      SVec<double> v = ds;
      for (auto& c : v) c *= s;
      return spec.norm_raw<double>(std::span<const double>(xs), std::span<const double>(v)) - 1.0;
    };
    while (at(lo) > 0) lo *= 0.5;
    while (at(hi) < 0) hi *= 2.0;
    for (int it = 0; it < 100 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (at(mid) > 0 ? hi : lo) = mid;
    }
    r = 0.5 * (lo + hi);
  }
  return r;
}

// Inverse square root of the average metric. The direction sphere is swept
// through this map so that strongly anisotropic indicatrices (chart poles)
// become round in the integration variable; for Riemannian norms the
// substituted integrand is exactly constant.
struct SphereMap {
  MatrixXd T;
  double detT;
};
SphereMap average_sphere_map(const MetricSpec& spec, const VectorXd& x) {
  MatrixXd A = average_metric(spec, x);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(A);
  VectorXd lam = es.eigenvalues();
  MatrixXd T = es.eigenvectors() * lam.cwiseSqrt().cwiseInverse().asDiagonal() *
               es.eigenvectors().transpose();
  double detT = 1.0;
  for (int i = 0; i < lam.size(); ++i) detT /= std::sqrt(lam[i]);
  return {T, detT};
}

}  // namespace

double volume_density(const MetricSpec& spec, VolumeForm form, const VectorXd& x, int sphere_res) {
  const int m = spec.dim();
  if (spec.chart().is_singular(x)) raise(Err::SingularPoint, "density at excluded point");
  SVec<double> xs = to_svec(x);
  SphereQuadrature q = sphere_quadrature(m, sphere_res);
  const double cm1 = sphere_volume(m - 1);
  SphereMap map = average_sphere_map(spec, x);
  // 0-homogeneous integrands transform through y = T s with the factor
  // det(T); the radius along y is 1/F(x, y) up to the homogeneity safeguard.
  if (form == VolumeForm::BH) {
    double vol = 0;  // Euclidean volume of the unit ball of F(x, .)
    for (size_t i = 0; i < q.dirs.size(); ++i) {
      VectorXd y = map.T * q.dirs[i];
      vol += q.weights[i] * map.detT * std::pow(indicatrix_radius(spec, xs, y), m) / m;
    }
    return (cm1 / m) / vol;
  }
  double acc = 0;
  for (size_t i = 0; i < q.dirs.size(); ++i) {
    VectorXd y = map.T * q.dirs[i];
    SVec<double> ds(y.data(), y.data() + m);
    const double detg = determinant(fundamental<double>(spec, xs, ds));
    acc += q.weights[i] * map.detT * detg * std::pow(indicatrix_radius(spec, xs, y), m);
  }
  return acc / cm1;
}

double distortion(const MetricSpec& spec, VolumeForm form, const VectorXd& x, const VectorXd& y,
                  int sphere_res) {
  SVec<double> xs = to_svec(x), ys = to_svec(y);
  const double detg = determinant(fundamental<double>(spec, xs, ys));
  return std::log(std::sqrt(detg) / volume_density(spec, form, x, sphere_res));
}

double s_curvature(const MetricSpec& spec, VolumeForm form, const VectorXd& x, const VectorXd& y,
                   double fd_step, int sphere_res) {
  auto seg = integrate_geodesic(spec, x, y, 2.0 * fd_step, 3);
  const double t0 = distortion(spec, form, seg.xs[0], seg.vs[0], sphere_res);
  const double t1 = distortion(spec, form, seg.xs[1], seg.vs[1], sphere_res);
  const double t2 = distortion(spec, form, seg.xs[2], seg.vs[2], sphere_res);
  return (-3.0 * t0 + 4.0 * t1 - t2) / (2.0 * fd_step);
}

double total_volume(const MetricSpec& spec, VolumeForm form, const VolumeOptions& opt) {
  BoxQuadrature bq = box_quadrature(spec.chart(), opt.nodes_per_axis, opt.sub_bounds);
  double chart_measure = 0;
  for (double w : bq.weights) chart_measure += w;
  if (bq.skipped_measure > opt.max_skipped_measure * (chart_measure + bq.skipped_measure))
    raise(Err::QuadratureFailure, "singular set swallowed too much chart measure");
  std::vector<double> vals(bq.nodes.size());
  parallel_for(
      static_cast<int>(bq.nodes.size()),
      [&](int i) {
        vals[static_cast<size_t>(i)] =
            volume_density(spec, form, bq.nodes[static_cast<size_t>(i)], opt.sphere_res);
      },
      opt.workers);
  double acc = 0;
  for (size_t i = 0; i < vals.size(); ++i) acc += bq.weights[i] * vals[i];
  return acc;
}

double total_volume_checked(const MetricSpec& spec, VolumeForm form, VolumeOptions opt,
                            double rel_tol) {
  const double coarse = total_volume(spec, form, opt);
  VolumeOptions fine = opt;
  for (auto& n : fine.nodes_per_axis) n *= 2;
  const double refined = total_volume(spec, form, fine);
  if (std::abs(refined - coarse) > rel_tol * std::abs(refined))
    raise(Err::NonConvergent, "volume quadrature did not settle under refinement");
  return refined;
}

double conormal_sphere_measure(const MetricSpec& spec, const SubmanifoldSpec& sub,
                               const VectorXd& u, int resolution) {
  const int q = sub.ambient_dim() - sub.dim();
  AngleQuadrature aq = conormal_angle_quadrature(q, resolution);
  double acc = 0;
  for (size_t i = 0; i < aq.thetas.size(); ++i) {
    ConormalFrame fr = conormal_sphere_point(spec, sub, u, aq.thetas[i]);
    const int p = static_cast<int>(fr.e_trans.cols());
    const double det = p > 0 ? fr.gram.bottomRightCorner(p, p).determinant() : 1.0;
    acc += aq.weights[i] * std::sqrt(det);
  }
  return acc;
}

double weighted_conormal_integral(const MetricSpec& spec, const SubmanifoldSpec& sub,
                                  const VectorXd& u, VolumeForm form, double d, int resolution,
                                  int t_samples, int workers) {
  const int q = sub.ambient_dim() - sub.dim();
  AngleQuadrature aq = conormal_angle_quadrature(q, resolution);
  std::vector<double> vals(aq.thetas.size());
  parallel_for(
      static_cast<int>(aq.thetas.size()),
      [&](int i) {
        ConormalFrame fr = conormal_sphere_point(spec, sub, u, aq.thetas[static_cast<size_t>(i)]);
        const int p = static_cast<int>(fr.e_trans.cols());
        const double det = p > 0 ? fr.gram.bottomRightCorner(p, p).determinant() : 1.0;
        double sup = std::exp(-distortion(spec, form, fr.x, fr.n));
        try {
          auto seg = integrate_geodesic(spec, fr.x, fr.n, d, t_samples);
          for (size_t j = 0; j < seg.ts.size(); ++j)
            sup = std::max(sup, std::exp(-distortion(spec, form, seg.xs[j], seg.vs[j])));
        } catch (const Error& e) {
          // Chart exit: the supremum is taken over the reachable segment.
          if (e.kind() != Err::ChartExit) throw;
        }
        vals[static_cast<size_t>(i)] = aq.weights[static_cast<size_t>(i)] * std::sqrt(det) * sup;
      },
      workers);
  double acc = 0;
  for (double v : vals) acc += v;
  return acc;
}

double tube_pullback_volume(const MetricSpec& spec, const SubmanifoldSpec& sub, VolumeForm form,
                            double t1, const TubeOptions& opt) {
  const int k = sub.dim();
  const int q = sub.ambient_dim() - k;
  AngleQuadrature aq = conormal_angle_quadrature(q, opt.theta_res);

  // Parameter-domain nodes (empty product for a point).
  std::vector<VectorXd> us;
  std::vector<double> uws;
  if (k == 0) {
    us.push_back(VectorXd(0));
    uws.push_back(1.0);
  } else {
    BoxQuadrature ubq = box_quadrature(sub.domain(), std::vector<int>(static_cast<size_t>(k), opt.u_res));
    us = ubq.nodes;
    uws = ubq.weights;
  }

  struct Job {
    size_t ui, ti;
  };
  std::vector<Job> jobs;
  for (size_t ui = 0; ui < us.size(); ++ui)
    for (size_t ti = 0; ti < aq.thetas.size(); ++ti) jobs.push_back({ui, ti});
  std::vector<double> vals(jobs.size());
  parallel_for(
      static_cast<int>(jobs.size()),
      [&](int ji) {
        const Job& job = jobs[static_cast<size_t>(ji)];
        ConormalFrame fr = conormal_sphere_point(spec, sub, us[job.ui], aq.thetas[job.ti]);
        const int p = static_cast<int>(fr.e_trans.cols());
        const double fiber_det =
            p > 0 ? std::sqrt(fr.gram.bottomRightCorner(p, p).determinant()) : 1.0;
        const double tan_det =
            k > 0 ? std::sqrt(fr.gram.topLeftCorner(k, k).determinant()) : 1.0;
        JacobiSolution sol = solve_jacobi(spec, fr, t1, opt.t_nodes);
        std::vector<double> integrand(sol.ts.size());
        for (size_t j = 0; j < sol.ts.size(); ++j)
          integrand[j] =
              std::exp(-distortion(spec, form, sol.xs[j], sol.vs[j])) * sol.detA[j];
        const double tint = simpson_uniform(integrand, sol.ts[1] - sol.ts[0]);
        vals[static_cast<size_t>(ji)] =
            uws[job.ui] * aq.weights[job.ti] * fiber_det * tan_det * tint;
      },
      opt.workers);
  double acc = 0;
  for (double v : vals) acc += v;
  return acc;
}

}  // namespace finsler
