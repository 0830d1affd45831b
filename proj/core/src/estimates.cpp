#include "codazzi/estimates.hpp"

#include <cmath>
#include <sstream>

#include "codazzi/calculus.hpp"
#include "codazzi/errors.hpp"

namespace codazzi {

namespace {

// strict feasibility box of the constraint interval; closed for the
// traceless endpoints
bool in_box(double p, double q, double n, double norm_inv_sq, bool closed) {
  const double p_lo = -1.0 / n;
  const double q_lo = -1.0 / norm_inv_sq;
  if (closed) {
    const double tol = 1e-12;
    return p >= p_lo - tol && p <= tol && q >= q_lo - tol && q <= tol;
  }
  return p > p_lo && p < 0.0 && q > q_lo && q < 0.0;
}

ScalarField flat_laplacian(const TorusSpec& spec, const ScalarField& f) {
  return laplacian(spec, flat_metric(spec), f);
}

BoundReport integrand_bound(Theorem theorem, const TorusSpec& spec, const ScalarField& S,
                            double lambda1, double lambda_bar1, const PQSolution& pq,
                            const Invariants& inv, std::optional<double> c) {
  const int nodes = spec.node_count();
  BoundReport r;
  r.theorem = theorem;
  r.lambda1 = lambda1;
  r.lambda_bar1 = lambda_bar1;
  r.c = c;
  r.F = -inv.weight / pq.q;
  const ScalarField p1 = pq.p + 1.0;
  r.s_term = S / (4.0 * p1);
  r.lambda_term = -pq.q * (lambda_bar1 * lambda_bar1) / p1;
  r.laplace_term = flat_laplacian(spec, r.F) / (2.0 * p1 * r.F);
  r.integrand = r.s_term + r.lambda_term + r.laplace_term;
  r.rhs_inf = r.integrand.minCoeff(&r.argmin);
  r.margin = lambda1 * lambda1 - r.rhs_inf;
  (void)nodes;
  return r;
}

double weighted_norm(const TorusSpec& spec, const Eigen::VectorXcd& v,
                     const ScalarField& node_weight, int sd) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    acc += std::norm(v[i]) * node_weight[i / sd];
  return std::sqrt(acc * spec.cell_volume());
}

double rayleigh_sign(const TorusSpec& spec, const Eigen::VectorXcd& psi,
                     const Eigen::VectorXcd& op_psi, const ScalarField& node_weight, int sd) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < psi.size(); ++i)
    acc += (std::conj(psi[i]) * op_psi[i]).real() * node_weight[i / sd];
  return acc >= 0.0 ? 1.0 : -1.0;
}

}  // namespace

std::string theorem_name(Theorem t) {
  switch (t) {
    case Theorem::classical: return "classical";
    case Theorem::deformed: return "deformed";
    case Theorem::traceless: return "traceless";
    case Theorem::constant_invariants: return "constant_invariants";
    case Theorem::surface_traceless: return "surface_traceless";
    case Theorem::minimal_surface: return "minimal_surface";
    case Theorem::family: return "family";
  }
  return "unknown";
}

bool PQSolution::all_feasible() const {
  for (auto f : feasible)
    if (!f) return false;
  return true;
}

int PQSolution::first_infeasible() const {
  for (size_t i = 0; i < feasible.size(); ++i)
    if (!feasible[i]) return static_cast<int>(i);
  return -1;
}

int PQSolution::count_infeasible() const {
  int k = 0;
  for (auto f : feasible)
    if (!f) ++k;
  return k;
}

double PQSolution::system_residual(const Invariants& inv, int n) const {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < p.size(); ++x) {
    if (degenerate[x]) continue;
    const double t = inv.tr_inv[x];
    const double nq = inv.norm_inv_sq[x];
    const double r1 = n * p[x] + c * t * q[x] + 1.0;
    const double r2 = t * p[x] + c * nq * q[x] + c;
    worst = std::max(worst, std::max(std::abs(r1), std::abs(r2)));
  }
  return worst;
}

PQSolution solve_pq(double c, const Invariants& inv, int n) {
  if (c == 0.0) throw std::invalid_argument("solve_pq: c must be nonzero");
  const Eigen::Index nodes = inv.tr_inv.size();
  PQSolution out;
  out.c = c;
  out.mode = PQMode::solved;
  out.p = ScalarField::Zero(nodes);
  out.q = ScalarField::Zero(nodes);
  out.feasible.assign(nodes, 0);
  out.degenerate.assign(nodes, 0);

  for (Eigen::Index x = 0; x < nodes; ++x) {
    const double t = inv.tr_inv[x];
    const double nq = inv.norm_inv_sq[x];
    const double det = c * (n * nq - t * t);
    double p, q;
    bool consistent = true;
    if (std::abs(det) < 1e-10 * std::abs(c)) {
      out.degenerate[x] = 1;
      Eigen::Matrix2d a;
      a << n, c * t, t, c * nq;
      Eigen::Vector2d b(-1.0, -c);
      const Eigen::Vector2d sol =
          a.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(b);
      p = sol[0];
      q = sol[1];
      consistent = (a * sol - b).cwiseAbs().maxCoeff() <= 1e-9 * std::max(1.0, std::abs(c));
    } else {
      p = (c * t - nq) * c / det;          // = (|b|^2 - cT)/(T^2 - n|b|^2)
      q = (t - c * n) / det;               // = (cn - T)/(c(T^2 - n|b|^2))
    }
    out.p[x] = p;
    out.q[x] = q;
    out.feasible[x] = consistent && in_box(p, q, n, nq, false);
  }
  return out;
}

std::pair<double, double> closed_form_pq(double c, double tr_inv, double norm_inv_sq, int n) {
  if (c == 0.0) throw std::invalid_argument("closed_form_pq: c must be nonzero");
  const double den = tr_inv * tr_inv - n * norm_inv_sq;
  if (std::abs(den) < 1e-14)
    throw numeric_error("closed_form_pq: degenerate denominator (beta^{-1} proportional "
                        "to the identity)");
  const double p = (norm_inv_sq - c * tr_inv) / den;
  const double q = (c * n - tr_inv) / (c * den);
  return {p, q};
}

double universal_c(double tr_inv, double norm_inv_sq) {
  if (tr_inv == 0.0)
    throw hypothesis_error("universal_c: undefined for traceless beta^{-1}");
  return norm_inv_sq / tr_inv;
}

double universal_c_field(const TorusSpec& spec, const Invariants& inv) {
  const ScalarField ones = ScalarField::Ones(spec.node_count());
  const double t = integrate(spec, inv.tr_inv, ones);
  const double nq = integrate(spec, inv.norm_inv_sq, ones);
  if (std::abs(t) < 1e-12)
    throw hypothesis_error("universal_c_field: mean trace vanishes");
  return nq / t;
}

BoundReport deformed_bound(const TorusSpec& spec, const ScalarField& S, double lambda1,
                           double lambda_bar1, const PQSolution& pq, const Invariants& inv) {
  if (lambda_bar1 == 0.0)
    throw hypothesis_error("deformed_bound: lambda_bar1 must be nonzero");
  if (!pq.all_feasible()) {
    std::ostringstream msg;
    msg << "deformed_bound: (p,q) infeasible at " << pq.count_infeasible()
        << " node(s); first node " << pq.first_infeasible();
    const int x = pq.first_infeasible();
    msg << " with p = " << pq.p[x] << ", q = " << pq.q[x];
    throw hypothesis_error(msg.str());
  }
  return integrand_bound(Theorem::deformed, spec, S, lambda1, lambda_bar1, pq, inv, pq.c);
}

BoundReport traceless_bound(const TorusSpec& spec, const ScalarField& S, double lambda1,
                            double lambda_bar1, const Invariants& inv, double trace_tol) {
  const double max_trace = inv.tr_inv.abs().maxCoeff();
  if (max_trace > trace_tol)
    throw hypothesis_error("traceless_bound: tr(beta^{-1}) does not vanish (max " +
                           std::to_string(max_trace) + "); use the deformed bound");
  if (lambda_bar1 == 0.0)
    throw hypothesis_error("traceless_bound: lambda_bar1 must be nonzero");
  const int n = spec.dim;
  PQSolution pq;
  pq.c = 0.0;
  pq.mode = PQMode::traceless_fixed;
  pq.p = ScalarField::Constant(spec.node_count(), -1.0 / n);
  pq.q = -1.0 / inv.norm_inv_sq;
  pq.feasible.assign(spec.node_count(), 1);
  pq.degenerate.assign(spec.node_count(), 0);
  BoundReport r = integrand_bound(Theorem::traceless, spec, S, lambda1, lambda_bar1, pq,
                                  inv, std::nullopt);
  return r;
}

BoundReport constant_invariants_bound(double s_min, double lambda1, double lambda_bar1,
                                      double norm_inv_sq, double sbar_min, int n) {
  BoundReport r;
  r.theorem = Theorem::constant_invariants;
  r.lambda1 = lambda1;
  r.lambda_bar1 = lambda_bar1;
  const double link1 = s_min / 4.0 + lambda_bar1 * lambda_bar1 / norm_inv_sq;
  const double link2 = s_min / 4.0 + classical_rhs(sbar_min, n) / norm_inv_sq;
  r.rhs_inf = link1;
  r.chained_rhs = link2;
  r.argmin = 0;
  r.margin = lambda1 * lambda1 - link1;
  r.s_term = ScalarField::Constant(1, s_min / 4.0);
  r.lambda_term = ScalarField::Constant(1, lambda_bar1 * lambda_bar1 / norm_inv_sq);
  r.laplace_term = ScalarField::Zero(1);
  r.integrand = ScalarField::Constant(1, link1);
  r.F = ScalarField::Zero(1);
  return r;
}

BoundReport surface_traceless_bound(const TorusSpec& spec, const ScalarField& S,
                                    double lambda1, double lambda_bar1,
                                    const ScalarField& a) {
  if (spec.dim != 2)
    throw std::invalid_argument("surface_traceless_bound: requires dimension 2");
  if (a.abs().minCoeff() <= 0.0)
    throw hypothesis_error("surface_traceless_bound: eigenvalue field vanishes at a node");
  BoundReport r;
  r.theorem = Theorem::surface_traceless;
  r.lambda1 = lambda1;
  r.lambda_bar1 = lambda_bar1;
  const ScalarField a2 = a * a;
  const ScalarField a4 = a2 * a2;
  r.F = 2.0 / a4;  // |det beta^{-1}| |beta^{-1}|^2 for eigenvalues +-a
  r.s_term = S / 2.0;
  r.lambda_term = a2 * (lambda_bar1 * lambda_bar1);
  r.laplace_term = a4 * flat_laplacian(spec, ScalarField(1.0 / a4));
  r.integrand = r.s_term + r.lambda_term + r.laplace_term;
  r.rhs_inf = r.integrand.minCoeff(&r.argmin);
  r.margin = lambda1 * lambda1 - r.rhs_inf;
  return r;
}

BoundReport minimal_surface_bound(const TorusSpec& spec, double kappa, const ScalarField& a,
                                  double lambda1, double lambda_bar1) {
  if (spec.dim != 2)
    throw std::invalid_argument("minimal_surface_bound: requires dimension 2");
  if (a.abs().minCoeff() <= 0.0)
    throw hypothesis_error("minimal_surface_bound: eigenvalue field vanishes at a node");
  BoundReport r;
  r.theorem = Theorem::minimal_surface;
  r.lambda1 = lambda1;
  r.lambda_bar1 = lambda_bar1;
  const ScalarField a2 = a * a;
  const ScalarField a4 = a2 * a2;
  r.s_term = ScalarField::Constant(spec.node_count(), kappa);  // curvature offset
  r.lambda_term = (lambda_bar1 * lambda_bar1 - 1.0) * a2;
  r.laplace_term = a4 * flat_laplacian(spec, ScalarField(1.0 / a4));
  r.integrand = r.lambda_term + r.laplace_term;
  r.rhs_inf = kappa + r.integrand.minCoeff(&r.argmin);
  r.margin = lambda1 * lambda1 - r.rhs_inf;
  r.F = 2.0 / a4;
  return r;
}

double classical_rhs(double s_min, int n) {
  if (n < 2) throw std::invalid_argument("classical_rhs: dimension must be >= 2");
  return n * s_min / (4.0 * (n - 1.0));
}

double family_margin(double c, double lambda1, double lambda_bar1, double s_min,
                     double tr_inv, double norm_inv_sq, int n) {
  const auto [p, q] = closed_form_pq(c, tr_inv, norm_inv_sq, n);
  if (!(p + 1.0 > 0.0))
    throw hypothesis_error("family_margin: p(c) + 1 must be positive");
  return lambda1 * lambda1 + q / (p + 1.0) * lambda_bar1 * lambda_bar1 -
         s_min / (4.0 * (p + 1.0));
}

ScanResult scan_c(const TorusSpec& spec, const ScalarField& S, double lambda1,
                  double lambda_bar1, const Invariants& inv, double c_min, double c_max,
                  int steps) {
  if (!(c_min > 0.0) || !(c_max >= c_min))
    throw std::invalid_argument("scan_c: need 0 < c_min <= c_max");
  if (steps < 2) throw std::invalid_argument("scan_c: need at least 2 steps");

  std::vector<std::pair<double, bool>> candidates;  // (c, universal flag)
  const double log_lo = std::log(c_min);
  const double log_hi = std::log(c_max);
  for (int i = 0; i < steps; ++i) {
    const double mag = std::exp(log_lo + (log_hi - log_lo) * i / (steps - 1));
    candidates.emplace_back(-mag, false);
    candidates.emplace_back(mag, false);
  }
  try {
    const double cu = universal_c_field(spec, inv);
    if (std::abs(cu) >= c_min && std::abs(cu) <= c_max) candidates.emplace_back(cu, true);
  } catch (const hypothesis_error&) {
    // traceless mean: no universal candidate
  }

  ScanResult out;
  for (const auto& [c, is_universal] : candidates) {
    ScanEntry e;
    e.c = c;
    e.universal = is_universal;
    const PQSolution pq = solve_pq(c, inv, spec.dim);
    if (!pq.all_feasible()) {
      e.feasible = false;
      std::ostringstream reason;
      const int x = pq.first_infeasible();
      reason << pq.count_infeasible() << " infeasible node(s); first node " << x
             << " (p = " << pq.p[x] << ", q = " << pq.q[x] << ")";
      e.reason = reason.str();
    } else {
      const BoundReport r = deformed_bound(spec, S, lambda1, lambda_bar1, pq, inv);
      e.feasible = true;
      e.rhs_inf = r.rhs_inf;
      e.margin = r.margin;
      if (!out.best_rhs || r.rhs_inf > *out.best_rhs) {
        out.best_rhs = r.rhs_inf;
        out.best_c = c;
      }
      if (is_universal) out.universal_rhs = r.rhs_inf;
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

LimitingCaseReport limiting_residuals(const TorusSpec& spec, const CliffordRep& rep,
                                      const Eigen::VectorXcd& psi, double lambda1,
                                      double lambda_bar1, const PQSolution& pq,
                                      const CodazziField& beta, const DiracMatrix& d,
                                      const DiracMatrix& d_beta) {
  if (lambda1 == 0.0 || lambda_bar1 == 0.0)
    throw hypothesis_error("limiting_residuals: eigenvalues must be nonzero");
  const int sd = rep.spinor_dim;
  const int nodes = spec.node_count();
  const Invariants inv = invariants(spec, beta);
  const ScalarField ones = ScalarField::Ones(nodes);

  const Eigen::VectorXcd d_psi = d.m * psi;
  const Eigen::VectorXcd db_psi = d_beta.m * psi;

  const double lam = rayleigh_sign(spec, psi, d_psi, ones, sd) * std::abs(lambda1);
  const double lam_bar =
      rayleigh_sign(spec, psi, db_psi, inv.weight, sd) * std::abs(lambda_bar1);

  LimitingCaseReport r;
  r.c_ratio = lam_bar / lam;

  const double psi_norm = weighted_norm(spec, psi, ones, sd);
  const double psi_wnorm = weighted_norm(spec, psi, inv.weight, sd);
  r.d_eigen_residual = weighted_norm(spec, d_psi - lam * psi, ones, sd) / psi_norm;
  r.dbeta_eigen_residual =
      weighted_norm(spec, db_psi - lam_bar * psi, inv.weight, sd) / psi_wnorm;

  // beta^{-1} per node for the twisted Clifford actions
  SymField binv(spec.dim, nodes);
  for (int x = 0; x < nodes; ++x) binv.set_node(x, beta.beta.at_node(x).inverse());

  // gradient equation, twistor operator, and the two compatibility relations
  double killing_sq = 0.0, endpoint_sq = 0.0, twistor = 0.0;
  double compat1_sq = 0.0, compat2_sq = 0.0;
  const ScalarField F = -inv.weight / pq.q;
  const double cell = spec.cell_volume();
  std::vector<Eigen::VectorXcd> dpsi_axis(spec.dim);
  for (int j = 0; j < spec.dim; ++j)
    dpsi_axis[j] = apply_spin_derivative(spec, psi, sd, j);

  for (int x = 0; x < nodes; ++x) {
    const Eigen::MatrixXd bi = binv.at_node(x);
    const double p = pq.p[x];
    const double q = pq.q[x];
    const double p_end = -1.0 / spec.dim;
    const double q_end = -1.0 / inv.norm_inv_sq[x];

    Eigen::VectorXcd psi_x(sd), dpsi_x(sd), dbpsi_x(sd);
    for (int s = 0; s < sd; ++s) {
      psi_x[s] = psi[x * sd + s];
      dpsi_x[s] = d_psi[x * sd + s];
      dbpsi_x[s] = db_psi[x * sd + s];
    }

    for (int j = 0; j < spec.dim; ++j) {
      Eigen::VectorXcd grad_j(sd);
      for (int s = 0; s < sd; ++s) grad_j[s] = dpsi_axis[j][x * sd + s];
      const Eigen::VectorXcd gamma_j_psi = rep.gamma[j] * psi_x;
      Eigen::VectorXcd binv_gamma_psi = Eigen::VectorXcd::Zero(sd);
      Eigen::VectorXcd binv_gamma_dpsi = Eigen::VectorXcd::Zero(sd);
      Eigen::VectorXcd gamma_dpsi = rep.gamma[j] * dpsi_x;
      for (int k = 0; k < spec.dim; ++k) {
        if (bi(k, j) == 0.0) continue;
        binv_gamma_psi += bi(k, j) * (rep.gamma[k] * psi_x);
        binv_gamma_dpsi += bi(k, j) * (rep.gamma[k] * dbpsi_x);
      }
      const Eigen::VectorXcd killing =
          grad_j - lam * p * gamma_j_psi - lam_bar * q * binv_gamma_psi;
      const Eigen::VectorXcd endpoint =
          grad_j - lam * p_end * gamma_j_psi - lam_bar * q_end * binv_gamma_psi;
      const Eigen::VectorXcd q_j = grad_j - p * gamma_dpsi - q * binv_gamma_dpsi;
      killing_sq += killing.squaredNorm() * cell;
      endpoint_sq += endpoint.squaredNorm() * cell;
      twistor += F[x] * q_j.squaredNorm() * cell;
    }

    const double t = inv.tr_inv[x];
    const Eigen::VectorXcd c1 = (1.0 + spec.dim * p) * dpsi_x + q * t * dbpsi_x;
    const Eigen::VectorXcd c2 =
        (1.0 + q * inv.norm_inv_sq[x]) * dbpsi_x + p * t * dpsi_x;
    compat1_sq += c1.squaredNorm() * cell;
    compat2_sq += c2.squaredNorm() * cell;
  }

  r.killing_residual = std::sqrt(killing_sq) / psi_norm;
  r.traceless_killing_residual = std::sqrt(endpoint_sq) / psi_norm;
  r.compat_residual_1 = std::sqrt(compat1_sq) / psi_norm;
  r.compat_residual_2 = std::sqrt(compat2_sq) / psi_norm;
  r.twistor_norm = twistor / (psi_norm * psi_norm);
  return r;
}

}  // namespace codazzi
