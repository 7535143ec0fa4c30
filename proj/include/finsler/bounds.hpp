#pragma once

#include <limits>
#include <string>
#include <vector>

#include "finsler/quadrature.hpp"

namespace finsler {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Solution of y'' + delta y = 0 with y(0) = 0, y'(0) = 1, and its derivative.
double s_delta(double delta, double t);
double s_delta_prime(double delta, double t);

// pi/sqrt(delta) for delta > 0, +inf otherwise.
double conjugate_horizon(double delta);

// Volume of the Euclidean unit n-sphere.
double sphere_volume(int n);

// First positive zero of s_delta'(t) - (H/k) s_delta(t); +inf when none is
// found on (0, horizon] (delta <= 0 with H/k below the asymptotic slope).
double zeta(double delta, double H, int k, double horizon = 1e3);

// First positive zero of the model determinant
// prod_a (s' - lambda_a s)(t) * s(t)^{m-k-1}; +inf when none exists.
double model_det_first_zero(double delta, const std::vector<double>& lambdas, int k, int m,
                            double horizon = 1e3);

// Model determinant in trace form, (s' - (H/k) s)^k (t) * s(t)^{m-k-1}.
double model_det(double delta, double H, int k, int m, double t);

double integral_s_delta_pow(double delta, int power, double d);

// Tube-volume right-hand sides and the derived lower bounds. The point case
// takes the fiber integral of the conormal sphere weighted by the distortion
// factor, computed by the caller.
double point_tube_rhs(double weighted_fiber_integral, double delta, double d, int m);
double submanifold_tube_rhs(int m, int k, double Lambda, double muN, double delta, double d,
                            double H0);
double closed_geodesic_length_bound(double mu, int m, double Lambda, double delta, double d,
                                    double l);
double injectivity_radius_bound(double V, int m, double Lambda, double delta, double d, double l);
double randers_length_bound(double mu_bh, double vol_alpha, double b, double b1, double delta,
                            double d, int m);

struct ReportedInput {
  std::string name;
  double value = 0.0;
  bool sampled = false;  // sampled estimate vs closed-form/configured input
};

struct ComparisonReport {
  std::string scenario;
  std::string check;
  double measured = 0.0;
  double bound = 0.0;
  // margin >= -tolerance means the inequality held; sign convention follows
  // the check (upper bounds: bound - measured, lower bounds: measured - bound).
  double margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool conditional = false;  // some hypothesis is only a sampled estimate
  std::vector<ReportedInput> inputs;
};

ComparisonReport make_upper_bound_report(const std::string& scenario, const std::string& check,
                                         double measured, double bound);
ComparisonReport make_lower_bound_report(const std::string& scenario, const std::string& check,
                                         double measured, double bound);

}  // namespace finsler
