#include "codazzi/deformation.hpp"

#include <cmath>
#include <stdexcept>

#include "codazzi/errors.hpp"

namespace codazzi {

namespace {

bool lattice_is_diagonal(const Eigen::MatrixXd& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j)
      if (i != j && std::abs(b(i, j)) > 1e-14) return false;
  return true;
}

}  // namespace

CodazziField make_constant_beta(const TorusSpec& spec, const Eigen::MatrixXd& value) {
  if (value.rows() != spec.dim || value.cols() != spec.dim)
    throw std::invalid_argument("constant beta: wrong shape");
  if ((value - value.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("constant beta: matrix must be symmetric");
  CodazziField out;
  out.kind = BetaKind::constant;
  out.beta = constant_sym_field(spec, value);
  return out;
}

CodazziField make_diagonal_profile_beta(const TorusSpec& spec, const TrigPoly& b1,
                                        const Eigen::VectorXd& rest) {
  if (rest.size() != spec.dim - 1)
    throw std::invalid_argument("diagonal profile: need dim-1 constant entries");
  if (!lattice_is_diagonal(spec.lattice))
    throw std::invalid_argument(
        "diagonal profile: requires a diagonal lattice basis (profile axis must be "
        "an ambient axis)");
  for (const auto& term : b1.terms)
    for (int a = 1; a < term.freq.size(); ++a)
      if (term.freq[a] != 0)
        throw std::invalid_argument("diagonal profile: b1 may only depend on axis 1");

  CodazziField out;
  out.kind = BetaKind::diagonal_profile;
  out.beta = SymField(spec.dim, spec.node_count());
  out.beta(0, 0) = b1.sample(spec);
  for (int i = 1; i < spec.dim; ++i) out.beta(i, i).setConstant(rest[i - 1]);
  return out;
}

CodazziField make_hessian_beta(const TorusSpec& spec, double c0, const TrigPoly& f,
                               double min_eig) {
  const ScalarField fs = f.sample(spec);
  SymField beta(spec.dim, spec.node_count());
  for (int i = 0; i < spec.dim; ++i) {
    const ScalarField di = spectral_partial(spec, fs, i);
    for (int j = i; j < spec.dim; ++j)
      beta(i, j) = spectral_partial(spec, di, j) + (i == j ? c0 : 0.0);
  }
  // nondegeneracy gate on the spectrum of beta itself
  double worst = std::numeric_limits<double>::infinity();
  for (int x = 0; x < spec.node_count(); ++x) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(beta.at_node(x));
    worst = std::min(worst, es.eigenvalues().cwiseAbs().minCoeff());
  }
  if (worst < min_eig)
    throw hypothesis_error("hessian beta: smallest |eigenvalue| " + std::to_string(worst) +
                           " is below the nondegeneracy floor " + std::to_string(min_eig));
  CodazziField out;
  out.kind = BetaKind::hessian;
  out.beta = std::move(beta);
  return out;
}

CodazziField make_samples_beta(const TorusSpec& spec, SymField samples) {
  if (samples.dim != spec.dim ||
      samples.comp[0].size() != spec.node_count())
    throw std::invalid_argument("samples beta: shape mismatch");
  CodazziField out;
  out.kind = BetaKind::samples;
  out.beta = std::move(samples);
  return out;
}

double nondegeneracy_min_det(const CodazziField& beta, double floor) {
  const ScalarField det = pointwise_determinant(beta.beta);
  const double min_abs = det.abs().minCoeff();
  if (min_abs < floor)
    throw hypothesis_error("beta is degenerate: min |det beta| = " + std::to_string(min_abs));
  return min_abs;
}

double codazzi_residual(const TorusSpec& spec, const CodazziField& beta) {
  const MetricField g = flat_metric(spec);
  const Tensor3Field grad = covariant_derivative_sym2(spec, beta.beta, g);
  double worst = 0.0;
  const int n = spec.dim;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k)
        worst = std::max(worst, (grad(i, j, k) - grad(j, i, k)).abs().maxCoeff());
  return worst;
}

Invariants invariants(const TorusSpec& spec, const CodazziField& beta) {
  const int n = spec.dim;
  const int nodes = spec.node_count();
  Invariants inv;
  inv.tr_inv = ScalarField::Zero(nodes);
  inv.norm_inv_sq = ScalarField::Zero(nodes);
  inv.det_inv = ScalarField::Zero(nodes);
  for (int x = 0; x < nodes; ++x) {
    const Eigen::MatrixXd b = beta.beta.at_node(x);
    const double det = b.determinant();
    if (std::abs(det) < 1e-10)
      throw hypothesis_error("beta is singular at node " + std::to_string(x));
    const Eigen::MatrixXd binv = b.inverse();
    inv.tr_inv[x] = binv.trace();
    inv.norm_inv_sq[x] = binv.squaredNorm();
    inv.det_inv[x] = binv.determinant();
  }
  inv.weight = inv.det_inv.abs();
  return inv;
}

MetricField deform_metric(const TorusSpec& spec, const CodazziField& beta) {
  const int nodes = spec.node_count();
  MetricField gbar(spec.dim, nodes);
  for (int x = 0; x < nodes; ++x) {
    const Eigen::MatrixXd b = beta.beta.at_node(x);
    gbar.set_node(x, b.transpose() * b);  // base metric is the identity
  }
  return gbar;
}

Tensor3Field lambda_tensor(const TorusSpec& spec, const CodazziField& beta) {
  const int n = spec.dim;
  const int nodes = spec.node_count();

  // d[a](p,q) = d_a (beta^{-1})_pq, sampled pointwise
  SymField binv(n, nodes);
  for (int x = 0; x < nodes; ++x) binv.set_node(x, beta.beta.at_node(x).inverse());
  std::vector<SymField> dbinv(n);
  for (int a = 0; a < n; ++a) {
    dbinv[a] = SymField(n, nodes);
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) dbinv[a](p, q) = spectral_partial(spec, binv(p, q), a);
  }

  // H[i](k,j) = sum_a (beta^{-1})_{ai} (beta d_a beta^{-1})_{kj}
  std::vector<Eigen::MatrixXd> h(n);
  Tensor3Field lambda(n, nodes);
  for (int x = 0; x < nodes; ++x) {
    const Eigen::MatrixXd b = beta.beta.at_node(x);
    const Eigen::MatrixXd bi = binv.at_node(x);
    std::vector<Eigen::MatrixXd> bd(n);
    for (int a = 0; a < n; ++a) bd[a] = b * dbinv[a].at_node(x);
    for (int i = 0; i < n; ++i) {
      h[i].setZero(n, n);
      for (int a = 0; a < n; ++a) h[i] += bi(a, i) * bd[a];
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          lambda(i, j, k)[x] = 0.5 * (h[i](k, j) - h[j](k, i) + h[k](j, i) - h[i](j, k) +
                                      h[k](i, j) - h[j](i, k));
  }
  return lambda;
}

OmegaForms omega_forms(const TorusSpec& spec, const Tensor3Field& lambda) {
  const int n = spec.dim;
  const int nodes = spec.node_count();
  OmegaForms out;
  out.omega = VectorField(n, nodes);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) out.omega(k) += lambda(j, j, k);
  out.triple_comps = n * (n - 1) * (n - 2) / 6;
  out.big_omega.reserve(out.triple_comps);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k)
      for (int l = k + 1; l < n; ++l)
        out.big_omega.push_back(
            ScalarField(lambda(j, k, l) + lambda(k, l, j) + lambda(l, j, k)));
  return out;
}

ScalarField deformed_scalar_curvature(const TorusSpec& spec, const CodazziField& beta,
                                      const Tensor3Field& lambda) {
  const int n = spec.dim;
  const int nodes = spec.node_count();

  SymField binv(n, nodes);
  for (int x = 0; x < nodes; ++x) binv.set_node(x, beta.beta.at_node(x).inverse());

  // flat base: the curvature term of the base metric vanishes
  ScalarField s = ScalarField::Zero(nodes);

  // 2 sum_{i,j,a} (beta^{-1})_{ai} d_a Lambda_{jji}
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ScalarField tr_jj = lambda(j, j, i);
      for (int a = 0; a < n; ++a)
        s += 2.0 * binv(a, i) * spectral_partial(spec, tr_jj, a);
    }

  // - sum Lambda_iik Lambda_jjk - sum Lambda_ijk Lambda_jik
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        s -= lambda(i, i, k) * lambda(j, j, k);
        s -= lambda(i, j, k) * lambda(j, i, k);
      }
  return s;
}

double connection_residual(const TorusSpec& spec, const CodazziField& beta,
                           const Tensor3Field& lambda) {
  const int n = spec.dim;
  const int nodes = spec.node_count();
  const MetricField gbar = deform_metric(spec, beta);
  const Tensor3Field gammabar = christoffel(spec, gbar);

  SymField binv(n, nodes);
  for (int x = 0; x < nodes; ++x) binv.set_node(x, beta.beta.at_node(x).inverse());
  std::vector<SymField> dbinv(n);
  for (int a = 0; a < n; ++a) {
    dbinv[a] = SymField(n, nodes);
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) dbinv[a](p, q) = spectral_partial(spec, binv(p, q), a);
  }

  // For frame fields X = E_i, Y = E_j (constant, flat base):
  //   lhs^k = (b^{-1})_{ai} [ d_a (b^{-1})_{kj} + Gammabar^k_{ab} (b^{-1})_{bj} ]
  //   rhs^k = (b^{-1} Lambda(E_i,E_j))^k     (D_{b^{-1}X} Y vanishes)
  double worst = 0.0;
  for (int x = 0; x < nodes; ++x) {
    const Eigen::MatrixXd bi = binv.at_node(x);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double lhs = 0.0;
          for (int a = 0; a < n; ++a) {
            double cov = dbinv[a](k, j)[x];
            for (int b = 0; b < n; ++b) cov += gammabar(k, a, b)[x] * bi(b, j);
            lhs += bi(a, i) * cov;
          }
          double rhs = 0.0;
          for (int m = 0; m < n; ++m) rhs += bi(k, m) * lambda(i, j, m)[x];
          worst = std::max(worst, std::abs(lhs - rhs));
        }
  }
  return worst;
}

DeformationBundle make_bundle(const TorusSpec& spec, const CodazziField& beta) {
  DeformationBundle b;
  b.gbar = deform_metric(spec, beta);
  b.lambda = lambda_tensor(spec, beta);
  b.forms = omega_forms(spec, b.lambda);
  b.inv = invariants(spec, beta);
  return b;
}

}  // namespace codazzi
