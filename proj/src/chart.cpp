#include "finsler/chart.hpp"

#include <cmath>
#include <random>

namespace finsler {

Chart Chart::box(int m, double lo, double hi) {
  Chart c;
  c.dim = m;
  c.bounds.assign(m, {lo, hi});
  c.periodic.assign(m, false);
  return c;
}

VectorXd Chart::wrap(const VectorXd& x) const {
  VectorXd y = x;
  for (int i = 0; i < dim; ++i) {
    if (!periodic[i]) continue;
    const double lo = bounds[i][0], w = bounds[i][1] - lo;
    y[i] = lo + std::fmod(std::fmod(x[i] - lo, w) + w, w);
  }
  return y;
}

bool Chart::contains(const VectorXd& x) const {
  for (int i = 0; i < dim; ++i) {
    if (periodic[i]) continue;
    if (x[i] < bounds[i][0] || x[i] > bounds[i][1]) return false;
  }
  return true;
}

void Chart::validate(unsigned seed) const {
  if (dim < 1) raise(Err::ConfigError, "chart dimension must be >= 1");
  if (static_cast<int>(bounds.size()) != dim || static_cast<int>(periodic.size()) != dim)
    raise(Err::ConfigError, "chart bounds/periodic size mismatch");
  for (int i = 0; i < dim; ++i) {
    if (periodic[i] && !(std::isfinite(bounds[i][0]) && std::isfinite(bounds[i][1])))
      raise(Err::ConfigError, "periodic axis with non-finite bounds");
    if (!(bounds[i][0] < bounds[i][1])) raise(Err::ConfigError, "empty chart axis");
  }
  if (!singular) return;
  // Empty-interior check: no sampled box cell may be entirely singular.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int singular_hits = 0;
  const int trials = 256;
  for (int t = 0; t < trials; ++t) {
    VectorXd x(dim);
    for (int i = 0; i < dim; ++i) x[i] = bounds[i][0] + span(i) * u01(rng);
    if (is_singular(x)) ++singular_hits;
  }
  if (singular_hits > trials / 4)
    raise(Err::ConfigError, "singular set appears to have nonempty interior");
}

const char* to_string(Err e) {
  switch (e) {
    case Err::SingularPoint: return "SingularPoint";
    case Err::NonAdmissible: return "NonAdmissible";
    case Err::DegenerateTensor: return "DegenerateTensor";
    case Err::DegenerateFlag: return "DegenerateFlag";
    case Err::NoConvergence: return "NoConvergence";
    case Err::ChartExit: return "ChartExit";
    case Err::StepFailure: return "StepFailure";
    case Err::GridTooCoarse: return "GridTooCoarse";
    case Err::RankLoss: return "RankLoss";
    case Err::QuadratureFailure: return "QuadratureFailure";
    case Err::NonConvergent: return "NonConvergent";
    case Err::CurvatureHypothesisViolated: return "CurvatureHypothesisViolated";
    case Err::NonReversible: return "NonReversible";
    case Err::PositivityViolation: return "PositivityViolation";
    case Err::InadmissibleDirection: return "InadmissibleDirection";
    case Err::FrameDegenerate: return "FrameDegenerate";
    case Err::ConfigError: return "ConfigError";
    case Err::CheckFailure: return "CheckFailure";
  }
  return "UnknownError";
}

}  // namespace finsler
