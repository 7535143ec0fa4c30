#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "finsler/error.hpp"

namespace finsler {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// A single coordinate box. Periodic axes wrap by modular reduction; the
// singular predicate marks excluded points (e.g. spherical poles) together
// with a small exclusion collar around them.
struct Chart {
  int dim = 0;
  std::vector<std::array<double, 2>> bounds;  // per axis [lo, hi]
  std::vector<bool> periodic;                 // per axis
  std::function<bool(const VectorXd&)> singular;  // optional

  static Chart box(int m, double lo, double hi);

  double span(int axis) const { return bounds[axis][1] - bounds[axis][0]; }

  bool is_singular(const VectorXd& x) const { return singular && singular(x); }

  // Modular reduction of periodic axes into their bounds.
  VectorXd wrap(const VectorXd& x) const;

  // True when every non-periodic coordinate lies inside its interval.
  bool contains(const VectorXd& x) const;

  // Constructor-time sanity: periodic axes have finite bounds; the singular
  // set has empty interior (checked by sampling).
  void validate(unsigned seed = 12345) const;
};

}  // namespace finsler
