#pragma once

#include <Eigen/Dense>

#include "codazzi/torus.hpp"

namespace codazzi {

// Pseudospectral calculus on the periodic grid. Derivatives are exact for
// trigonometric polynomials below the Nyquist mode; the Nyquist multiplier is
// zeroed so real fields stay real.

// 1-D spectral differentiation matrix in the lattice coordinate t_axis,
// d/dt on N samples; `shift` adds a constant offset to every mode (used by
// the Dirac assembly for half-integer spin shifts, where the full asymmetric
// mode window is kept instead).
Eigen::MatrixXcd spectral_derivative_1d(int n, double shift, bool zero_nyquist);

// Partial derivative along the ambient Cartesian axis.
ScalarField spectral_partial(const TorusSpec& spec, const ScalarField& f, int axis);

// grad^i = g^{ij} d_j f
VectorField gradient(const TorusSpec& spec, const MetricField& g, const ScalarField& f);

// div V = (1/sqrt(det g)) d_i (sqrt(det g) V^i)
ScalarField divergence(const TorusSpec& spec, const MetricField& g, const VectorField& v);

// Laplacian in the positive-operator convention: -div(grad f).
// On the flat unit torus, f = sin(2 pi x) maps to +(2 pi)^2 sin(2 pi x).
ScalarField laplacian(const TorusSpec& spec, const MetricField& g, const ScalarField& f);

// Christoffel symbols Gamma^k_ij of the Levi-Civita connection; output
// indexed (k, i, j), symmetric in (i, j).
Tensor3Field christoffel(const TorusSpec& spec, const MetricField& g);

// Scalar curvature from the Ricci contraction of the Riemann tensor built on
// christoffel(); the sign convention makes round spheres positive.
ScalarField scalar_curvature(const TorusSpec& spec, const MetricField& g);

// Covariant derivative of a symmetric 2-tensor:
// (grad beta)_{i;jk} = d_i beta_jk - Gamma^m_ij beta_mk - Gamma^m_ik beta_jm.
Tensor3Field covariant_derivative_sym2(const TorusSpec& spec, const SymField& beta,
                                       const MetricField& g);

// Pointwise Green identity defect
//   F*lap(u) - u*lap(F) - div( u grad F - F grad u ),   u = |psi|^2,
// for a spinor-valued grid field psi (flattened node-major, spinor fastest).
// Returns the max-norm over nodes; zero analytically for any smooth inputs.
double green_identity_residual(const TorusSpec& spec, const MetricField& g,
                               const ScalarField& F, const Eigen::VectorXcd& psi,
                               int spinor_dim);

// Periodic trapezoid quadrature sum(f * weight) * cell_volume. Sets
// *negative_weight (when given) if the weight dips below zero.
double integrate(const TorusSpec& spec, const ScalarField& f, const ScalarField& weight,
                 bool* negative_weight = nullptr);

// Pointwise |psi|^2 of a flattened spinor grid field.
ScalarField spinor_density(const TorusSpec& spec, const Eigen::VectorXcd& psi,
                           int spinor_dim);

// Pointwise inverse and determinant of a symmetric matrix field.
SymField pointwise_inverse(const SymField& m);
ScalarField pointwise_determinant(const SymField& m);

}  // namespace codazzi
