#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "codazzi/clifford.hpp"
#include "codazzi/deformation.hpp"
#include "codazzi/torus.hpp"

namespace codazzi {

enum class DiracKind { plain, beta_twist };

// Discretized Dirac-type operator on the flat torus. Acts on flattened grid
// spinors (node-major, spinor index fastest). The spin structure enters as
// the constant shift delta of the mode lattice, so constant-coefficient
// operators are exactly mode-diagonal.
struct DiracMatrix {
  Eigen::MatrixXcd m;
  ScalarField weight;  // per node; 1 for plain, |det beta^{-1}| for the twist
  DiracKind kind = DiracKind::plain;
  TorusSpec spec;
  int spinor_dim = 0;

  // max |W M - (W M)^*| with W the diagonal node weight.
  double w_selfadjoint_residual() const;
};

struct SpectrumResult {
  std::vector<double> eigenvalues;  // sorted by |value|, then value
  Eigen::MatrixXcd eigenspinors;    // columns, empty unless requested
  std::optional<double> lambda1;    // smallest |eigenvalue| above kernel_tol
  int zero_modes = 0;
  double asymmetry_residual = 0.0;  // max-norm of the discarded skew part
};

// Exact spectrum of the constant-coefficient operator: the multiset
// { +-2 pi |M B^{-T} (k + delta)| : k integer }, M = identity or the constant
// beta^{-1}; smallest `count` by absolute value. Lattice enumeration is the
// oracle every discretized spectrum is tested against.
std::vector<double> analytic_flat_spectrum(const TorusSpec& spec,
                                           const std::optional<Eigen::MatrixXd>& beta_inv,
                                           int count);

DiracMatrix assemble_dirac(const TorusSpec& spec, const CliffordRep& rep);

// D_beta psi = sum_{i} beta^{-1}(E_i) . d_{E_i} psi, weight |det beta^{-1}|.
DiracMatrix assemble_beta_dirac(const TorusSpec& spec, const CodazziField& beta,
                                const CliffordRep& rep);

// Eigen-decomposition of the self-adjoint part of W^{1/2} M W^{-1/2}; the
// discarded skew part is reported, not hidden. Eigenspinors are returned in
// the original (unweighted) representation when want_vectors is set.
SpectrumResult spectrum(const DiracMatrix& op, int count, bool want_vectors = false,
                        double kernel_tol = 1e-8);

// Smallest |eigenvalue| of the deformed-metric Dirac operator, computed as
// the beta-twist spectrum on the base torus. Gated on the Codazzi residual;
// constant beta is cross-checked against the lattice oracle.
double dbar_lambda1(const TorusSpec& spec, const CodazziField& beta, const CliffordRep& rep,
                    double codazzi_tol = 1e-6, double kernel_tol = 1e-8);

// Round-sphere closed forms: lambda1 = n/(2r), S = n(n-1)/r^2.
std::pair<double, double> sphere_closed_form(int n, double r);

// d_{E_axis} on flattened grid spinors with the spec's mode shift; the same
// derivative the assembled operators use.
Eigen::VectorXcd apply_spin_derivative(const TorusSpec& spec, const Eigen::VectorXcd& psi,
                                       int spinor_dim, int axis);

}  // namespace codazzi
