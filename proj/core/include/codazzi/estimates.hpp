#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "codazzi/clifford.hpp"
#include "codazzi/deformation.hpp"
#include "codazzi/dirac.hpp"
#include "codazzi/torus.hpp"

namespace codazzi {

enum class Theorem {
  classical,            // scalar-curvature-only lower bound
  deformed,             // general Codazzi bound with free parameter c
  traceless,            // tr(beta^{-1}) = 0 bound, (p,q) at the closed endpoints
  constant_invariants,  // chained bound for constant beta eigenvalues
  surface_traceless,    // 2-D traceless specialization
  minimal_surface,      // Gauss-equation substitution of the 2-D bound
  family,               // one-parameter inequality on constant invariants
};

std::string theorem_name(Theorem t);

enum class PQMode { solved, closed_form, traceless_fixed };

// Pointwise solution of the linear system
//   n p + c tr(beta^{-1}) q = -1,   tr(beta^{-1}) p + c |beta^{-1}|^2 q = -c.
// Nodes with |determinant| < 1e-10*|c| are flagged degenerate and solved in
// the minimum-norm least-squares sense. Feasibility is the strict box
//   -1/n < p < 0,  -1/|beta^{-1}|^2 < q < 0
// (closed endpoints in traceless_fixed mode) plus consistency of the solve.
struct PQSolution {
  double c = 0.0;
  ScalarField p, q;
  std::vector<std::uint8_t> feasible;
  std::vector<std::uint8_t> degenerate;
  PQMode mode = PQMode::solved;

  bool all_feasible() const;
  int first_infeasible() const;  // -1 when none
  int count_infeasible() const;
  // Max residual of the two system rows over non-degenerate nodes.
  double system_residual(const Invariants& inv, int n) const;
};

PQSolution solve_pq(double c, const Invariants& inv, int n);

// Constant-invariant closed forms
//   p(c) = (|b|^2 - c T) / (T^2 - n |b|^2),
//   q(c) = (c n - T) / (c (T^2 - n |b|^2)),    T = tr beta^{-1}, |b|^2 = |beta^{-1}|^2.
std::pair<double, double> closed_form_pq(double c, double tr_inv, double norm_inv_sq, int n);

// c = |beta^{-1}|^2 / tr(beta^{-1}); the simple always-admissible choice for
// constant invariants with nonzero trace.
double universal_c(double tr_inv, double norm_inv_sq);
// Volume-averaged generalization for varying invariants (ratio of integrals;
// reduces to the constant formula when the fields are constant).
double universal_c_field(const TorusSpec& spec, const Invariants& inv);

struct BoundReport {
  Theorem theorem = Theorem::deformed;
  double lambda1 = 0.0;
  double lambda_bar1 = 0.0;
  std::optional<double> c;
  double rhs_inf = 0.0;
  int argmin = 0;
  double margin = 0.0;  // lambda1^2 - rhs_inf
  std::optional<double> chained_rhs;  // second link of the chained bound
  // per-node breakdown (size 1 for closed-form data)
  ScalarField s_term, lambda_term, laplace_term, integrand, F;
};

// rhs = inf over nodes of S/(4(p+1)) - q lb^2/(p+1) + lap(F)/(2(p+1)F),
// F = -|det beta^{-1}|/q. Throws hypothesis_error when pq is infeasible
// anywhere, listing offending nodes.
BoundReport deformed_bound(const TorusSpec& spec, const ScalarField& S, double lambda1,
                           double lambda_bar1, const PQSolution& pq, const Invariants& inv);

// Traceless specialization: rhs = inf of nS/(4(n-1)) + n lb^2/((n-1)|b|^2)
// + n lap(F)/(2(n-1)F), F = |det beta^{-1}| |beta^{-1}|^2. Requires
// max |tr beta^{-1}| <= trace_tol. Shares the integrand engine with
// deformed_bound through the endpoint (p,q).
BoundReport traceless_bound(const TorusSpec& spec, const ScalarField& S, double lambda1,
                            double lambda_bar1, const Invariants& inv,
                            double trace_tol = 1e-8);

// Chained bound for constant beta eigenvalues:
//   lambda1^2 >= Smin/4 + lb^2/|b|^2 >= Smin/4 + (n Sbar_min/(4(n-1)))/|b|^2.
BoundReport constant_invariants_bound(double s_min, double lambda1, double lambda_bar1,
                                      double norm_inv_sq, double sbar_min, int n);

// n = 2 traceless bound through the eigenvalue field a (beta has eigenvalues
// +-a): rhs = inf of S/2 + a^2 lb^2 + a^4 lap(a^{-4}).
BoundReport surface_traceless_bound(const TorusSpec& spec, const ScalarField& S,
                                    double lambda1, double lambda_bar1,
                                    const ScalarField& a);

// Minimal-surface form: rhs = kappa + inf((lb^2 - 1) a^2 + a^4 lap(a^{-4})),
// the surface_traceless bound after substituting S = 2 kappa - 2 a^2.
BoundReport minimal_surface_bound(const TorusSpec& spec, double kappa, const ScalarField& a,
                                  double lambda1, double lambda_bar1);

// The classical scalar-curvature bound n Smin / (4(n-1)).
double classical_rhs(double s_min, int n);

// Margin of lambda1^2 + (q(c)/(p(c)+1)) lb^2 >= Smin / (4(p(c)+1)) on
// constant invariants.
double family_margin(double c, double lambda1, double lambda_bar1, double s_min,
                     double tr_inv, double norm_inv_sq, int n);

struct ScanEntry {
  double c = 0.0;
  bool universal = false;
  bool feasible = false;
  std::string reason;  // why infeasible, empty otherwise
  double rhs_inf = 0.0;
  double margin = 0.0;
};

struct ScanResult {
  std::vector<ScanEntry> entries;
  std::optional<double> best_c;
  std::optional<double> best_rhs;
  std::optional<double> universal_rhs;
};

// Log-symmetric scan over [-c_max,-c_min] U [c_min,c_max] (steps magnitudes,
// both signs) plus the universal c when it lands in range. best_c maximizes
// rhs_inf among feasible entries.
ScanResult scan_c(const TorusSpec& spec, const ScalarField& S, double lambda1,
                  double lambda_bar1, const Invariants& inv, double c_min, double c_max,
                  int steps);

struct LimitingCaseReport {
  double d_eigen_residual = 0.0;      // |D psi - l1 psi| in the base norm
  double dbeta_eigen_residual = 0.0;  // |D_beta psi - lb1 psi| in the weighted norm
  double killing_residual = 0.0;      // gradient equation with the given (p,q)
  double traceless_killing_residual = 0.0;  // endpoint form of the gradient equation
  double compat_residual_1 = 0.0;     // |(1+np) D psi + q tr(b^{-1}) D_beta psi|
  double compat_residual_2 = 0.0;     // |(1+q|b|^2) D_beta psi + p tr(b^{-1}) D psi|
  double twistor_norm = 0.0;          // integral of F sum_j |Q_{E_j} psi|^2
  double c_ratio = 0.0;               // signed lambda_bar / lambda
};

// Defect norms of the equality-case equations on a candidate eigenspinor.
// lambda1/lambda_bar1 are magnitudes; signs are taken from the Rayleigh
// quotients of psi under D and D_beta.
LimitingCaseReport limiting_residuals(const TorusSpec& spec, const CliffordRep& rep,
                                      const Eigen::VectorXcd& psi, double lambda1,
                                      double lambda_bar1, const PQSolution& pq,
                                      const CodazziField& beta, const DiracMatrix& d,
                                      const DiracMatrix& d_beta);

}  // namespace codazzi
