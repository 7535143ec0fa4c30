#pragma once

#include <map>
#include <optional>
#include <string>

#include "finsler/randers.hpp"

namespace finsler {

struct BuiltMetric {
  MetricSpec spec;
  std::optional<RandersSpec> randers;
};

BuiltMetric make_euclidean(int m);
BuiltMetric make_flat_randers(const VectorXd& bvec);
BuiltMetric make_round_sphere();                          // unit 2-sphere, chart (r, theta)
BuiltMetric make_round_sphere_3();                        // unit 3-sphere, chart (r, theta, phi)
BuiltMetric make_sphere_randers(double eps);              // beta = -eps sin(r) dr on the sphere
BuiltMetric make_flat_torus(const std::vector<double>& sides);
BuiltMetric make_product_sphere_circle(double eps);       // S2 x S1, beta = eps dt
BuiltMetric make_alphabeta_product(const std::string& phi_name, double eps);

// Family lookup used by scenario configs. Throws ConfigError on unknown
// family names, PositivityViolation when a family's admissibility sampling
// fails.
BuiltMetric build_metric_family(const std::string& family,
                                const std::map<std::string, double>& params);

class SubmanifoldSpec;

// Submanifold families resolvable from scenario configs:
//   point            x1..xm
//   line             base x1..xm, direction d1..dm, half-length len (flat charts)
//   equator          the r = pi/2 circle of the 2-sphere chart
//   distance-circle  circle of geodesic radius r0 about the equatorial point
//                    (pi/2, theta0) of the 2-sphere chart
//   circle-fiber     u -> (r, theta, u) in the product chart
//   closed-line      periodic line u -> x0 + u d on torus charts, period len
SubmanifoldSpec build_submanifold_family(const std::string& family,
                                         const std::map<std::string, double>& params,
                                         int ambient_dim);

}  // namespace finsler
