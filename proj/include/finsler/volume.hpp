#pragma once

#include "finsler/jacobi.hpp"

namespace finsler {

enum class VolumeForm { BH, HT };
const char* to_string(VolumeForm f);

// Chart density of the chosen volume form at x. The indicatrix is handled by
// radial integration over the Euclidean direction sphere: the radius along u
// is 1/F(x, u) (exact by homogeneity, safeguarded by a bisection fallback
// when a user norm is not exactly homogeneous).
double volume_density(const MetricSpec& spec, VolumeForm form, const VectorXd& x,
                      int sphere_res = 32);

// Distortion tau(y) = log(sqrt(det g(x, y)) / density(x)).
double distortion(const MetricSpec& spec, VolumeForm form, const VectorXd& x, const VectorXd& y,
                  int sphere_res = 32);

// Derivative of the distortion along the geodesic through (x, y) at t = 0,
// one-sided second-order differences on the integrated geodesic.
double s_curvature(const MetricSpec& spec, VolumeForm form, const VectorXd& x, const VectorXd& y,
                   double fd_step = 1e-4, int sphere_res = 32);

struct VolumeOptions {
  std::vector<int> nodes_per_axis;
  int sphere_res = 32;
  const std::vector<std::array<double, 2>>* sub_bounds = nullptr;
  int workers = 0;
  double max_skipped_measure = 1e-6;  // relative chart measure lost to singular cells
};

double total_volume(const MetricSpec& spec, VolumeForm form, const VolumeOptions& opt);

// Convergence-checked version: doubles the per-axis resolution once and
// raises NonConvergent when the two results disagree beyond rel_tol.
double total_volume_checked(const MetricSpec& spec, VolumeForm form, VolumeOptions opt,
                            double rel_tol);

// Fiber measure nu_x of the unit conormal sphere at u: the integral of
// sqrt(det g_n(e_trans, e_trans)) over the fiber angles.
double conormal_sphere_measure(const MetricSpec& spec, const SubmanifoldSpec& sub,
                               const VectorXd& u, int resolution = 48);

// Fiber integral of sup_t exp(-tau(gamma'(t))) over [0, d] per conormal
// direction; the point-case tube bound consumes this. Geodesics that leave
// the chart contribute the supremum over the reachable segment.
double weighted_conormal_integral(const MetricSpec& spec, const SubmanifoldSpec& sub,
                                  const VectorXd& u, VolumeForm form, double d,
                                  int resolution = 48, int t_samples = 33, int workers = 0);

// Pullback volume of the tube of radius t1 around the submanifold:
// the (t, u, theta)-integral of exp(-tau) det A against the tangent and
// fiber area factors. On regions where the conormal exponential is a
// diffeomorphism this reproduces the measure of the tube.
struct TubeOptions {
  int theta_res = 24;
  int u_res = 16;
  int t_nodes = 41;
  int workers = 0;
};
double tube_pullback_volume(const MetricSpec& spec, const SubmanifoldSpec& sub, VolumeForm form,
                            double t1, const TubeOptions& opt = {});

}  // namespace finsler
