#include "codazzi/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "codazzi/calculus.hpp"
#include "codazzi/errors.hpp"

namespace codazzi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 1-D twisted derivative tables d/dt_b for every axis, full mode window.
std::vector<Eigen::MatrixXcd> axis_tables(const TorusSpec& spec) {
  std::vector<Eigen::MatrixXcd> tables(spec.dim);
  for (int b = 0; b < spec.dim; ++b)
    tables[b] = spectral_derivative_1d(spec.grid[b], spec.spin_shift[b], false);
  return tables;
}

// Assemble sum_{j,b} gamma_j * A_jb(x) * (d/dt_b), A(x) = C(x) * dual^T ...
// rows indexed by node x; C = identity for the plain operator.
DiracMatrix assemble(const TorusSpec& spec, const CliffordRep& rep,
                     const SymField* beta_inv, const ScalarField* weight) {
  spec.validate();
  if (rep.dim != spec.dim) throw std::invalid_argument("assemble: Clifford dimension mismatch");
  const int n = spec.dim;
  const int sd = rep.spinor_dim;
  const int nodes = spec.node_count();
  const GridIndex gi(spec.grid);
  const Eigen::MatrixXd dual = spec.dual();  // d/dx_a = sum_b dual(a,b) d/dt_b
  const auto tables = axis_tables(spec);

  DiracMatrix out;
  out.spec = spec;
  out.spinor_dim = sd;
  out.kind = beta_inv ? DiracKind::beta_twist : DiracKind::plain;
  out.weight = weight ? *weight : ScalarField::Ones(nodes);
  out.m = Eigen::MatrixXcd::Zero(nodes * sd, nodes * sd);

  for (int x = 0; x < nodes; ++x) {
    // coefficient of d/dt_b on the gamma_j channel at this node
    Eigen::MatrixXd a(n, n);
    if (beta_inv) {
      const Eigen::MatrixXd c = beta_inv->at_node(x);
      a = c * dual;
    } else {
      a = dual;
    }
    for (int b = 0; b < n; ++b) {
      Eigen::MatrixXcd channel = Eigen::MatrixXcd::Zero(sd, sd);
      for (int j = 0; j < n; ++j)
        if (a(j, b) != 0.0) channel += a(j, b) * rep.gamma[j];
      const int r = gi.coord(x, b);
      const Eigen::MatrixXcd& d1 = tables[b];
      for (int s = 0; s < spec.grid[b]; ++s) {
        const int y = gi.with_axis(x, b, s);
        out.m.block(x * sd, y * sd, sd, sd) += d1(r, s) * channel;
      }
    }
  }
  return out;
}

}  // namespace

double DiracMatrix::w_selfadjoint_residual() const {
  const Eigen::Index dim = m.rows();
  Eigen::MatrixXcd wm = m;
  for (Eigen::Index r = 0; r < dim; ++r) wm.row(r) *= weight[r / spinor_dim];
  return (wm - wm.adjoint()).cwiseAbs().maxCoeff();
}

std::vector<double> analytic_flat_spectrum(const TorusSpec& spec,
                                           const std::optional<Eigen::MatrixXd>& beta_inv,
                                           int count) {
  spec.validate();
  if (count <= 0) throw std::invalid_argument("analytic_flat_spectrum: count must be positive");
  if (spec.dim < 2)
    throw std::invalid_argument("analytic_flat_spectrum: needs dimension >= 2");
  Eigen::MatrixXd a = spec.dual();
  if (beta_inv) {
    if (std::abs(beta_inv->determinant()) < 1e-10)
      throw hypothesis_error("analytic_flat_spectrum: constant beta is degenerate");
    a = (*beta_inv) * a;
  }
  const int sd = 1 << (spec.dim / 2);
  const int pairs = sd / 2;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const double sigma_min = svd.singularValues().minCoeff();

  std::vector<double> values;
  for (int box = 4;; box *= 2) {
    values.clear();
    std::vector<int> k(spec.dim, -box);
    while (true) {
      Eigen::VectorXd mode(spec.dim);
      for (int i = 0; i < spec.dim; ++i) mode[i] = k[i] + spec.spin_shift[i];
      const double v = kTwoPi * (a * mode).norm();
      if (v == 0.0) {
        values.insert(values.end(), sd, 0.0);
      } else {
        for (int p = 0; p < pairs; ++p) {
          values.push_back(-v);
          values.push_back(v);
        }
      }
      int axis = spec.dim - 1;
      while (axis >= 0 && ++k[axis] > box) k[axis--] = -box;
      if (axis < 0) break;
    }
    std::sort(values.begin(), values.end(), [](double l, double r) {
      return std::abs(l) != std::abs(r) ? std::abs(l) < std::abs(r) : l < r;
    });
    if (static_cast<int>(values.size()) >= count) {
      const double rho = std::abs(values[count - 1]);
      // any mode outside the box has |A(k+delta)| >= sigma_min*(box+1/2)
      if (kTwoPi * sigma_min * (box + 0.5) > rho) break;
    }
  }
  values.resize(count);
  return values;
}

DiracMatrix assemble_dirac(const TorusSpec& spec, const CliffordRep& rep) {
  return assemble(spec, rep, nullptr, nullptr);
}

DiracMatrix assemble_beta_dirac(const TorusSpec& spec, const CodazziField& beta,
                                const CliffordRep& rep) {
  const int nodes = spec.node_count();
  SymField binv(spec.dim, nodes);
  ScalarField weight(nodes);
  for (int x = 0; x < nodes; ++x) {
    const Eigen::MatrixXd b = beta.beta.at_node(x);
    const double det = b.determinant();
    if (std::abs(det) < 1e-10)
      throw hypothesis_error("assemble_beta_dirac: beta singular at node " + std::to_string(x));
    binv.set_node(x, b.inverse());
    weight[x] = std::abs(1.0 / det);
  }
  return assemble(spec, rep, &binv, &weight);
}

SpectrumResult spectrum(const DiracMatrix& op, int count, bool want_vectors,
                        double kernel_tol) {
  const Eigen::Index dim = op.m.rows();
  if (count <= 0 || count > dim)
    throw std::invalid_argument("spectrum: count out of range");

  // similarity transform by W^{1/2}, then keep the self-adjoint part
  Eigen::ArrayXd wsqrt(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double w = op.weight[i / op.spinor_dim];
    if (!(w > 0.0)) throw numeric_error("spectrum: nonpositive weight");
    wsqrt[i] = std::sqrt(w);
  }
  Eigen::MatrixXcd sym = op.m;
  for (Eigen::Index r = 0; r < dim; ++r) sym.row(r) *= wsqrt[r];
  for (Eigen::Index c = 0; c < dim; ++c) sym.col(c) /= wsqrt[c];
  const Eigen::MatrixXcd skew = 0.5 * (sym - sym.adjoint());

  SpectrumResult out;
  out.asymmetry_residual = skew.cwiseAbs().maxCoeff();
  sym -= skew;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      sym, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw numeric_error("spectrum: eigensolver failed");

  std::vector<int> order(dim);
  for (Eigen::Index i = 0; i < dim; ++i) order[i] = static_cast<int>(i);
  const Eigen::VectorXd& ev = es.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int l, int r) {
    return std::abs(ev[l]) != std::abs(ev[r]) ? std::abs(ev[l]) < std::abs(ev[r])
                                              : ev[l] < ev[r];
  });

  out.eigenvalues.reserve(count);
  for (int i = 0; i < count; ++i) out.eigenvalues.push_back(ev[order[i]]);
  for (Eigen::Index i = 0; i < dim; ++i)
    if (std::abs(ev[i]) <= kernel_tol) ++out.zero_modes;
  for (double v : out.eigenvalues)
    if (std::abs(v) > kernel_tol) {
      out.lambda1 = std::abs(v);
      break;
    }
  if (!out.lambda1 && out.zero_modes < dim) {
    // requested window was all kernel; look at the full sorted spectrum
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < dim; ++i)
      if (std::abs(ev[i]) > kernel_tol) best = std::min(best, std::abs(ev[i]));
    out.lambda1 = best;
  }

  if (want_vectors) {
    out.eigenspinors.resize(dim, count);
    const double cell = op.spec.cell_volume();
    for (int i = 0; i < count; ++i) {
      // back to the unweighted representation, unit weighted L2 norm
      Eigen::VectorXcd v = es.eigenvectors().col(order[i]);
      v.array() /= wsqrt;
      double norm_sq = 0.0;
      for (Eigen::Index r = 0; r < dim; ++r)
        norm_sq += std::norm(v[r]) * op.weight[r / op.spinor_dim] * cell;
      out.eigenspinors.col(i) = v / std::sqrt(norm_sq);
    }
  }
  return out;
}

double dbar_lambda1(const TorusSpec& spec, const CodazziField& beta, const CliffordRep& rep,
                    double codazzi_tol, double kernel_tol) {
  const double resid = codazzi_residual(spec, beta);
  if (resid > codazzi_tol)
    throw hypothesis_error("dbar_lambda1: Codazzi residual " + std::to_string(resid) +
                           " exceeds tolerance; the deformed-spectrum identification "
                           "does not apply");
  const DiracMatrix db = assemble_beta_dirac(spec, beta, rep);
  const SpectrumResult sr = spectrum(db, std::min<int>(16, db.m.rows()), false, kernel_tol);
  if (!sr.lambda1)
    throw hypothesis_error("dbar_lambda1: deformed Dirac operator has only zero modes");
  if (beta.kind == BetaKind::constant) {
    const Eigen::MatrixXd binv = beta.beta.at_node(0).inverse();
    const auto oracle = analytic_flat_spectrum(spec, binv, 4);
    double lam = 0.0;
    for (double v : oracle)
      if (std::abs(v) > kernel_tol) {
        lam = std::abs(v);
        break;
      }
    if (std::abs(lam - *sr.lambda1) > 1e-6 * std::max(1.0, lam))
      throw numeric_error("dbar_lambda1: discretized spectrum disagrees with the lattice "
                          "oracle for constant beta");
  }
  return *sr.lambda1;
}

std::pair<double, double> sphere_closed_form(int n, double r) {
  if (n < 2) throw std::invalid_argument("sphere_closed_form: dimension must be >= 2");
  if (!(r > 0.0)) throw std::invalid_argument("sphere_closed_form: radius must be positive");
  return {n / (2.0 * r), n * (n - 1.0) / (r * r)};
}

Eigen::VectorXcd apply_spin_derivative(const TorusSpec& spec, const Eigen::VectorXcd& psi,
                                       int spinor_dim, int axis) {
  if (axis < 0 || axis >= spec.dim)
    throw std::invalid_argument("apply_spin_derivative: axis out of range");
  const GridIndex gi(spec.grid);
  if (psi.size() != static_cast<Eigen::Index>(gi.total()) * spinor_dim)
    throw std::invalid_argument("apply_spin_derivative: size mismatch");
  const Eigen::MatrixXd dual = spec.dual();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
  for (int b = 0; b < spec.dim; ++b) {
    const double w = dual(axis, b);
    if (w == 0.0) continue;
    const Eigen::MatrixXcd d1 = spectral_derivative_1d(spec.grid[b], spec.spin_shift[b], false);
    for (int x = 0; x < gi.total(); ++x) {
      const int r = gi.coord(x, b);
      for (int s = 0; s < spec.grid[b]; ++s) {
        const Complex c = w * d1(r, s);
        const int y = gi.with_axis(x, b, s);
        for (int sp = 0; sp < spinor_dim; ++sp)
          out[x * spinor_dim + sp] += c * psi[y * spinor_dim + sp];
      }
    }
  }
  return out;
}

}  // namespace codazzi
