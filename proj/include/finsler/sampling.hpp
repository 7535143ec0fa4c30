#pragma once

#include <random>

#include "finsler/metric.hpp"

namespace finsler {

// Seeded sample generator for property checks and sup-type constants.
struct Sampler {
  std::mt19937_64 rng;

  explicit Sampler(uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return d(rng);
  }

  // Point inside the chart, away from non-periodic boundaries and the
  // singular set.
  VectorXd chart_point(const Chart& chart, double margin = 0.05) {
    for (int attempt = 0; attempt < 256; ++attempt) {
      VectorXd x(chart.dim);
      for (int i = 0; i < chart.dim; ++i) {
        double lo = chart.bounds[i][0], hi = chart.bounds[i][1];
        if (!chart.periodic[i]) {
          const double pad = margin * (hi - lo);
          lo += pad;
          hi -= pad;
        }
        x[i] = uniform(lo, hi);
      }
      if (!chart.is_singular(x)) return x;
    }
    raise(Err::SingularPoint, "could not sample a non-singular chart point");
  }

  // Uniform direction on the Euclidean unit sphere.
  VectorXd direction(int m) {
    std::normal_distribution<double> n(0.0, 1.0);
    VectorXd v(m);
    double norm2 = 0;
    do {
      for (int i = 0; i < m; ++i) v[i] = n(rng);
      norm2 = v.squaredNorm();
    } while (norm2 < 1e-12);
    return v / std::sqrt(norm2);
  }

  // Direction with F(x, y) > 0, rescaled to unit norm F = 1.
  VectorXd unit_direction(const MetricSpec& spec, const VectorXd& x) {
    for (int attempt = 0; attempt < 256; ++attempt) {
      VectorXd v = direction(spec.dim());
      SVec<double> xs(x.data(), x.data() + x.size());
      SVec<double> vs(v.data(), v.data() + v.size());
      const double F = spec.norm_raw<double>(xs, vs);
      if (F > 1e-8) return v / F;
    }
    raise(Err::NonAdmissible, "could not sample an admissible direction");
  }
};

}  // namespace finsler
