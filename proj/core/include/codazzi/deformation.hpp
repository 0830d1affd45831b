#pragma once

#include <Eigen/Dense>
#include <utility>

#include "codazzi/calculus.hpp"
#include "codazzi/torus.hpp"
#include "codazzi/trigpoly.hpp"

namespace codazzi {

enum class BetaKind { constant, diagonal_profile, hessian, samples };

// Symmetric nondegenerate (0,2)-tensor field on the flat torus together with
// how it was built. The constructor families guarantee the Codazzi symmetry
// of grad(beta); raw samples are accepted but only ever validated.
struct CodazziField {
  BetaKind kind = BetaKind::constant;
  SymField beta;

  bool constructor_built() const { return kind != BetaKind::samples; }
};

// Constant beta: parallel, hence Codazzi.
CodazziField make_constant_beta(const TorusSpec& spec, const Eigen::MatrixXd& value);

// beta = diag(b1(t_1), b2, ..., bn) with b1 a trig polynomial in the first
// lattice coordinate. Codazzi because each diagonal entry depends only on its
// own coordinate; requires a diagonal lattice basis so that lattice and
// ambient axes agree.
CodazziField make_diagonal_profile_beta(const TorusSpec& spec, const TrigPoly& b1,
                                        const Eigen::VectorXd& rest);

// beta = c0 * g + Hess f. Codazzi on the flat base by symmetry of third
// partials. Rejects inputs whose smallest |eigenvalue| dips below min_eig.
CodazziField make_hessian_beta(const TorusSpec& spec, double c0, const TrigPoly& f,
                               double min_eig = 0.05);

// Raw node samples; validated for symmetry, nothing else assumed.
CodazziField make_samples_beta(const TorusSpec& spec, SymField samples);

// Smallest |det beta| over nodes; throws hypothesis_error below `floor`.
double nondegeneracy_min_det(const CodazziField& beta, double floor = 1e-10);

// Max over nodes and index triples of |(grad beta)_{i;jk} - (grad beta)_{j;ik}|.
double codazzi_residual(const TorusSpec& spec, const CodazziField& beta);

// Pointwise invariants of beta^{-1} in the orthonormal frame.
struct Invariants {
  ScalarField tr_inv;       // tr beta^{-1}
  ScalarField norm_inv_sq;  // |beta^{-1}|^2 (Frobenius)
  ScalarField det_inv;      // det beta^{-1}
  ScalarField weight;       // |det beta^{-1}|, the deformed volume density
};

Invariants invariants(const TorusSpec& spec, const CodazziField& beta);

// gbar(X,Y) = g(beta X, beta Y); SPD whenever beta is nondegenerate.
MetricField deform_metric(const TorusSpec& spec, const CodazziField& beta);

// The (0,3) connection-difference tensor in the orthonormal frame,
// Lambda_ijk = g(Lambda(E_i,E_j), E_k), from the three-term cyclic formula
//   2 g(Lambda(X,Y),Z) = g(Z, b{(D_{bX} b^{-1})Y} - b{(D_{bY} b^{-1})X})
//                      + g(Y, b{(D_{bZ} b^{-1})X} - b{(D_{bX} b^{-1})Z})
//                      + g(X, b{(D_{bZ} b^{-1})Y} - b{(D_{bY} b^{-1})Z})
// with b = beta, bX = beta^{-1}(X). Identically antisymmetric in (j,k), and
// identically zero when beta is Codazzi.
Tensor3Field lambda_tensor(const TorusSpec& spec, const CodazziField& beta);

// 1-form omega_k = sum_j Lambda_jjk and 3-form
// Omega_{jkl} = Lambda_jkl + Lambda_klj + Lambda_ljk (j<k<l, lexicographic).
struct OmegaForms {
  VectorField omega;
  Eigen::Index triple_comps = 0;
  std::vector<ScalarField> big_omega;  // lexicographic over j<k<l
};
OmegaForms omega_forms(const TorusSpec& spec, const Tensor3Field& lambda);

// Scalar curvature of gbar evaluated through Lambda on the flat base:
//   Sbar = 2 sum_{i,j} (beta^{-1} grad Lambda)-trace term
//          - sum Lambda_iik Lambda_jjk - sum Lambda_ijk Lambda_jik.
// Cross-checked in tests against scalar_curvature(deform_metric(beta)).
ScalarField deformed_scalar_curvature(const TorusSpec& spec, const CodazziField& beta,
                                      const Tensor3Field& lambda);

// Defect of the connection relation
//   Dbar_{b^{-1}X}(b^{-1}Y) = b^{-1}(D_{b^{-1}X} Y) + b^{-1}(Lambda(X,Y)),
// with Dbar built numerically from christoffel(gbar). Holds for every
// symmetric nondegenerate beta, Codazzi or not.
double connection_residual(const TorusSpec& spec, const CodazziField& beta,
                           const Tensor3Field& lambda);

// Everything downstream consumers need, built once.
struct DeformationBundle {
  MetricField gbar;
  Tensor3Field lambda;
  OmegaForms forms;
  Invariants inv;
};

DeformationBundle make_bundle(const TorusSpec& spec, const CodazziField& beta);

}  // namespace codazzi
