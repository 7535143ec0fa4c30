#include "finsler/bounds.hpp"

#include <cmath>

namespace finsler {

double s_delta(double delta, double t) {
  if (delta > 0) {
    const double w = std::sqrt(delta);
    return std::sin(w * t) / w;
  }
  if (delta < 0) {
    const double w = std::sqrt(-delta);
    return std::sinh(w * t) / w;
  }
  return t;
}

double s_delta_prime(double delta, double t) {
  if (delta > 0) return std::cos(std::sqrt(delta) * t);
  if (delta < 0) return std::cosh(std::sqrt(-delta) * t);
  return 1.0;
}

double conjugate_horizon(double delta) { return delta > 0 ? M_PI / std::sqrt(delta) : kInf; }

double sphere_volume(int n) {
  return 2.0 * std::pow(M_PI, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

namespace {

double first_zero_scan(const std::function<double(double)>& f, double hi, int cells = 16384) {
  double prev_t = 0.0, prev_v = f(0.0);
  for (int i = 1; i <= cells; ++i) {
    const double t = hi * i / cells;
    const double v = f(t);
    if (prev_v > 0.0 && v <= 0.0) {
      double lo = prev_t, up = t;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + up);
        if (f(mid) > 0.0)
          lo = mid;
        else
          up = mid;
        if (up - lo < 1e-12) break;
      }
      return 0.5 * (lo + up);
    }
    prev_t = t;
    prev_v = v;
  }
  return kInf;
}

}  // namespace

double zeta(double delta, double H, int k, double horizon) {
  if (k < 1) raise(Err::ConfigError, "zeta needs k >= 1");
  const double slope = H / k;
  auto f = [&](double t) { return s_delta_prime(delta, t) - slope * s_delta(delta, t); };
  if (delta > 0) return first_zero_scan(f, conjugate_horizon(delta));
  if (delta == 0.0) return slope > 0 ? 1.0 / slope : kInf;
  // delta < 0: a zero exists iff slope exceeds sqrt(-delta).
  if (slope <= std::sqrt(-delta)) return kInf;
  return first_zero_scan(f, horizon);
}

double model_det(double delta, double H, int k, int m, double t) {
  double v = std::pow(s_delta(delta, t), m - k - 1);
  if (k >= 1) v *= std::pow(s_delta_prime(delta, t) - (H / k) * s_delta(delta, t), k);
  return v;
}

double model_det_first_zero(double delta, const std::vector<double>& lambdas, int k, int m,
                            double horizon) {
  double z = kInf;
  if (m - k - 1 >= 1) z = std::min(z, conjugate_horizon(delta));
  for (double lam : lambdas) z = std::min(z, zeta(delta, lam, 1, horizon));
  (void)k;
  return z;
}

double integral_s_delta_pow(double delta, int power, double d) {
  return adaptive_simpson([&](double t) { return std::pow(s_delta(delta, t), power); }, 0.0, d);
}

double point_tube_rhs(double weighted_fiber_integral, double delta, double d, int m) {
  return weighted_fiber_integral * integral_s_delta_pow(delta, m - 1, d);
}

double submanifold_tube_rhs(int m, int k, double Lambda, double muN, double delta, double d,
                            double H0) {
  const double upper = std::min(d, zeta(delta, H0, k));
  const double integral = adaptive_simpson(
      [&](double t) { return model_det(delta, H0, k, m, t); }, 0.0, upper);
  return sphere_volume(m - k - 1) * std::pow(Lambda, 0.5 * (3 * m + k)) * muN * integral;
}

double closed_geodesic_length_bound(double mu, int m, double Lambda, double delta, double d,
                                    double l) {
  const double horizon = delta > 0 ? M_PI / (2.0 * std::sqrt(delta)) : kInf;
  const double speak = std::pow(s_delta(delta, std::min(d, horizon)), m - 1);
  const double bracket = speak / (m - 1) + l * integral_s_delta_pow(delta, m - 1, d);
  return mu / (sphere_volume(m - 2) * std::pow(Lambda, 0.5 * (3 * m + 1)) * bracket);
}

double injectivity_radius_bound(double V, int m, double Lambda, double delta, double d, double l) {
  const double bracket = std::pow(s_delta(-delta, d), m - 1) / (m - 1) +
                         l * integral_s_delta_pow(-delta, m - 1, d);
  const double second =
      V / (2.0 * sphere_volume(m - 2) * std::pow(Lambda, 0.5 * (3 * m + 1)) * bracket);
  return std::min(conjugate_horizon(delta), second);
}

double randers_length_bound(double mu_bh, double vol_alpha, double b, double b1, double delta,
                            double d, int m) {
  const double horizon = delta > 0 ? M_PI / (2.0 * std::sqrt(delta)) : kInf;
  const double tcoef = b1 * (2 * b * b * b + 5 * b * b - 2 * b + 7) / (2.0 * std::pow(1.0 - b, 3));
  const double S = std::pow(s_delta(delta, std::min(d, horizon)), m - 1) / (m - 1) +
                   tcoef * integral_s_delta_pow(delta, m - 1, d);
  const double volmax =
      std::max(mu_bh / std::pow(1.0 + b, 0.5 * (m + 1)), std::pow(1.0 - b, 0.5 * (m + 1)) * vol_alpha);
  return std::pow(1.0 - b, 0.5 * (m + 2)) /
         (sphere_volume(m - 2) * std::sqrt(1.0 + b) * S) * volmax;
}

namespace {
ComparisonReport base_report(const std::string& scenario, const std::string& check,
                             double measured, double bound, double margin) {
  ComparisonReport r;
  r.scenario = scenario;
  r.check = check;
  r.measured = measured;
  r.bound = bound;
  r.margin = margin;
  r.tolerance = std::max(1e-9, 1e-6 * std::abs(bound));
  r.pass = margin >= -r.tolerance;
  return r;
}
}  // namespace

ComparisonReport make_upper_bound_report(const std::string& scenario, const std::string& check,
                                         double measured, double bound) {
  return base_report(scenario, check, measured, bound, bound - measured);
}

ComparisonReport make_lower_bound_report(const std::string& scenario, const std::string& check,
                                         double measured, double bound) {
  return base_report(scenario, check, measured, bound, measured - bound);
}

}  // namespace finsler
