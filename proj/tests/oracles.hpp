#pragma once

#include "finsler/geodesic.hpp"
#include "finsler/submanifold.hpp"

// Shared test oracle: central-difference geodesic variation d/ds E(t, xi(s)),
// with the frame construction supplying the conormal path. Independent of the
// matrix-solution route it validates.
namespace finsler::testing {

inline MatrixXd variation_fd(const MetricSpec& spec, const SubmanifoldSpec& sub,
                             const VectorXd& u, const VectorXd& theta, int comp, bool vary_theta,
                             double tmax, int nodes, double h) {
  auto shoot = [&](double s) {
    VectorXd uu = u, th = theta;
    if (vary_theta)
      th[comp] += s;
    else
      uu[comp] += s;
    ConormalFrame fr = conormal_sphere_point(spec, sub, uu, th);
    return integrate_geodesic(spec, fr.x, fr.n, tmax, nodes);
  };
  auto plus = shoot(h), minus = shoot(-h);
  MatrixXd out(spec.dim(), nodes);
  for (int j = 0; j < nodes; ++j)
    out.col(j) = (plus.xs[static_cast<size_t>(j)] - minus.xs[static_cast<size_t>(j)]) / (2 * h);
  return out;
}

}  // namespace finsler::testing
