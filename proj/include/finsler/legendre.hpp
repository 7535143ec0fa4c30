#pragma once

#include "finsler/tensors.hpp"

namespace finsler {

// Forward transform y -> g_y(y, .); components xi_i = g_ij(x,y) y^j.
Cotangent legendre(const MetricSpec& spec, const Tangent& t);

// Inverse by damped Newton. The Jacobian of the forward map is g_y itself
// (the Cartan contraction with y drops out), so each step solves with the
// fundamental tensor at the current iterate. The covector is normalized to
// unit Euclidean size first and the solution rescaled by homogeneity.
Tangent legendre_inverse(const MetricSpec& spec, const Cotangent& c, int max_iter = 50,
                         double tol = 1e-12);

// F*(xi) = F(L^{-1}(xi)).
double dual_norm(const MetricSpec& spec, const Cotangent& c);

// g* at xi: the matrix inverse of g at the preimage L^{-1}(xi). This is the
// Hessian of F*^2/2 by the inverse-function rule; tests cross-check it
// against finite differences of the dual norm.
MatrixXd dual_tensor(const MetricSpec& spec, const Cotangent& c);

// Sampled uniformity constant of the dual norm: sup g*_Xi(Eta,Eta)/g*_Zeta(Eta,Eta)
// over covector triples at common base points.
SampledSup dual_uniformity(const MetricSpec& spec, std::span<const UniformitySample> samples);

// Pencil-maximizing estimator over covector direction grids, mirroring
// uniformity_refined on the dual side.
double dual_uniformity_refined(const MetricSpec& spec, std::span<const VectorXd> base_points,
                               int grid = 12, int rounds = 6);

}  // namespace finsler
