#pragma once

#include "finsler/bounds.hpp"
#include "finsler/submanifold.hpp"

namespace finsler {

// Matrix solution of the transverse Jacobi system along the normal geodesic
// of a conormal frame: A'' + R(t) A = 0 on the transported complement of the
// tangent direction, with A(0) the projection onto the submanifold tangent
// block and A'(0) built from the conormal field derivative (tangent block)
// and the identity (transverse block). Columns pushed through the transported
// frame are transverse Jacobi fields.
struct JacobiSolution {
  const MetricSpec* spec = nullptr;
  ConormalFrame frame;
  int reduced_power = 0;  // m - k - 1: forced vanishing order of det A at t = 0
  std::vector<double> ts;
  std::vector<VectorXd> states;  // packed integrator state per node (restart support)
  std::vector<VectorXd> xs, vs;
  std::vector<MatrixXd> E;     // m x (m-1) transported basis
  std::vector<MatrixXd> A, Adot;
  std::vector<MatrixXd> R;     // curvature matrix in the transported frame
  MatrixXd gram0;              // g_n Gram of the frame basis (transport-invariant)
  std::vector<double> detA, q;  // q = det A / t^reduced_power

  void write_csv(std::ostream& os, double delta, double H, int k, int m) const;
};

JacobiSolution solve_jacobi(const MetricSpec& spec, const ConormalFrame& frame, double t_max,
                            int nodes = 401, IntegratorOptions opt = {});

// Reduced determinant at an off-grid parameter by re-integrating from the
// nearest stored node (no interpolation).
double reduced_det_at(const JacobiSolution& sol, double t);

// First zero of the reduced determinant: sign-change bracketing plus
// bisection; even-multiplicity touch points (|q| < touch_tol at an interior
// minimum) also count. Returns +inf when the grid shows no focal point.
// Raises GridTooCoarse when a cell's interior minimum undershoots zero but
// refinement cannot bracket it.
double focal_value(const JacobiSolution& sol, double bisect_tol = 1e-10,
                   double touch_tol = 1e-10);

// Vector field along the geodesic in transported-frame coordinates.
struct FrameField {
  MatrixXd vals;    // (m-1) x nodes
  MatrixXd derivs;  // (m-1) x nodes
};

// Index form I(X, Y) = -h(X0, Y0) + integral of g(DX, DY) - g(R X, Y);
// Simpson on the solution grid. X(0), Y(0) must lie in the tangent block.
double index_form(const JacobiSolution& sol, const FrameField& X, const FrameField& Y);

// FrameField wrapping column a of the matrix solution (a transverse Jacobi field).
FrameField jacobi_column_field(const JacobiSolution& sol, int a);

MatrixXd transported_curvature(const JacobiSolution& sol, int node);

struct JacobiBoundOutcome {
  double c_f = kInf;
  double zeta0 = kInf;        // first zero of the comparison model determinant
  double max_violation = 0;   // max over grid of det A - model
  double min_flag_sampled = kInf;
  double delta = 0;
  double H = 0;
  bool pass_det = false;
  bool pass_focal = false;
  bool pass = false;
};

// Comparison against the constant-curvature model: verifies the sampled
// curvature hypothesis along the geodesic, then checks
// det A(t) <= (s' - (H/k) s)^k s^{m-k-1} on [0, c_f] and c_f <= zeta0.
JacobiBoundOutcome jacobi_determinant_bound(const JacobiSolution& sol, double delta,
                                            int flag_samples = 64, uint64_t seed = 1);

}  // namespace finsler
