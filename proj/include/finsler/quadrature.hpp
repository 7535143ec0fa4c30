#pragma once

#include <functional>
#include <span>

#include "finsler/chart.hpp"

namespace finsler {

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-11, int max_depth = 32);

// Composite Simpson over equally spaced samples (odd count preferred; a
// trailing trapezoid handles even counts).
double simpson_uniform(std::span<const double> values, double h);

// Product-angle quadrature on the Euclidean unit sphere S^{m-1}:
// Gauss-Legendre in the polar angles, uniform in the final azimuthal one.
struct SphereQuadrature {
  std::vector<VectorXd> dirs;
  std::vector<double> weights;  // sum = vol(S^{m-1})
};
SphereQuadrature sphere_quadrature(int m, int resolution);

// Angle-box nodes for a conormal fiber S^{q-1} with plain coordinate
// weights; metric area factors belong to the integrand. q = 1 enumerates the
// two signs with unit weight.
struct AngleQuadrature {
  std::vector<VectorXd> thetas;
  std::vector<double> weights;
};
AngleQuadrature conormal_angle_quadrature(int q, int resolution);

// Tensor-product chart quadrature: Gauss-Legendre on bounded axes, uniform
// midpoints on periodic ones. Nodes on the singular set get their cell
// subdivided once and the surviving sub-nodes reweighted.
struct BoxQuadrature {
  std::vector<VectorXd> nodes;
  std::vector<double> weights;
  double skipped_measure = 0.0;  // chart measure of still-singular subcells
};
BoxQuadrature box_quadrature(const Chart& chart, const std::vector<int>& nodes_per_axis,
                             const std::vector<std::array<double, 2>>* sub_bounds = nullptr);

// Gauss-Legendre nodes/weights on [a, b].
void gauss_legendre(int n, double a, double b, std::vector<double>& xs, std::vector<double>& ws);

}  // namespace finsler
