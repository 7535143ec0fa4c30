#pragma once

#include <functional>
#include <iosfwd>

#include "finsler/tensors.hpp"

namespace finsler {

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 1e-3;
  double h_min = 1e-13;
  long max_steps = 2000000;
  bool fixed_step = false;  // constant substeps, no error control (order probes)
  int fixed_substeps = 64;  // substeps per output interval in fixed mode
  // Applied after every accepted step (coordinate wrapping, chart checks).
  std::function<void(double, VectorXd&)> post_step;
};

struct IntegratorStats {
  long steps = 0;
  long rejected = 0;
};

using OdeRhs = std::function<void(double, const VectorXd&, VectorXd&)>;

// Dormand-Prince 5(4) with FSAL, emitting the state at each requested output
// time; adaptive steps are clamped so they never cross an output node.
IntegratorStats integrate_to_nodes(const OdeRhs& rhs, VectorXd state, std::span<const double> ts,
                                   const std::function<void(int, double, const VectorXd&)>& emit,
                                   const IntegratorOptions& opt);

std::vector<double> uniform_grid(double t0, double t1, int nodes);

struct GeodesicSegment {
  const MetricSpec* spec = nullptr;
  std::vector<double> ts;
  std::vector<VectorXd> xs, vs;
  IntegratorStats stats;

  double speed(int node) const;
  double length() const;  // integral of F(x, xdot) over the grid (Simpson)
  void write_csv(std::ostream& os) const;
};

// Constant-speed geodesic xdd^i + 2 G^i(x, xdot) = 0 from (x0, y0) to t_end.
GeodesicSegment integrate_geodesic(const MetricSpec& spec, const VectorXd& x0, const VectorXd& y0,
                                   double t_end, int nodes = 201, IntegratorOptions opt = {});

// Endpoint of the unit-time geodesic with initial velocity y.
VectorXd exp_map(const MetricSpec& spec, const VectorXd& x, const VectorXd& y,
                 IntegratorOptions opt = {});

struct TransportResult {
  GeodesicSegment segment;
  std::vector<MatrixXd> frames;  // m x c matrix of transported columns per node
};

// Transport of the given columns along the geodesic from (x0, y0) with the
// reference-vector connection at (x(t), xdot(t)); integrated jointly with the
// geodesic on one grid.
TransportResult parallel_transport(const MetricSpec& spec, const VectorXd& x0, const VectorXd& y0,
                                   const MatrixXd& vectors, double t_end, int nodes = 201,
                                   IntegratorOptions opt = {});

// Shared post-step hook: wraps periodic axes of the leading m state entries
// and raises ChartExit at boundaries or on the singular set.
std::function<void(double, VectorXd&)> chart_guard(const MetricSpec& spec);

}  // namespace finsler
