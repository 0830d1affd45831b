#include "codazzi/calculus.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "codazzi/errors.hpp"

namespace codazzi {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Apply a 1-D matrix along one grid axis of a complex flat field.
Eigen::VectorXcd apply_axis(const GridIndex& gi, const Eigen::MatrixXcd& m1d,
                            const Eigen::VectorXcd& f, int axis) {
  const int n = gi.shape()[axis];
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(f.size());
  for (int x = 0; x < gi.total(); ++x) {
    const int r = gi.coord(x, axis);
    Complex acc(0.0, 0.0);
    for (int s = 0; s < n; ++s) acc += m1d(r, s) * f[gi.with_axis(x, axis, s)];
    out[x] = acc;
  }
  return out;
}

void check_spd(const Eigen::MatrixXd& g, int node) {
  Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success)
    throw numeric_error("metric not positive-definite at node " + std::to_string(node));
}

}  // namespace

Eigen::MatrixXcd spectral_derivative_1d(int n, double shift, bool zero_nyquist) {
  // modes m in {-n/2, ..., n/2-1}; multiplier 2*pi*i*(m+shift)
  Eigen::VectorXcd mult(n);
  for (int i = 0; i < n; ++i) {
    const int m = (i < n / 2) ? i : i - n;  // FFT order
    const bool nyquist = (m == -n / 2);
    const double v = (nyquist && zero_nyquist) ? 0.0 : m + shift;
    mult[i] = Complex(0.0, kTwoPi * v);
  }
  Eigen::MatrixXcd d(n, n);
  for (int r = 0; r < n; ++r)
    for (int s = 0; s < n; ++s) {
      Complex acc(0.0, 0.0);
      for (int i = 0; i < n; ++i) {
        const int m = (i < n / 2) ? i : i - n;
        const double phase = kTwoPi * (m + shift) * (r - s) / n;
        acc += mult[i] * Complex(std::cos(phase), std::sin(phase));
      }
      d(r, s) = acc / static_cast<double>(n);
    }
  return d;
}

ScalarField spectral_partial(const TorusSpec& spec, const ScalarField& f, int axis) {
  if (axis < 0 || axis >= spec.dim)
    throw std::invalid_argument("spectral_partial: axis out of range");
  if (f.size() != spec.node_count())
    throw std::invalid_argument("spectral_partial: field size mismatch");
  const GridIndex gi(spec.grid);
  const Eigen::MatrixXd dual = spec.dual();  // d/dx_a = sum_b dual(a,b) d/dt_b
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(f.size());
  const Eigen::VectorXcd fc = f.matrix().cast<Complex>();
  for (int b = 0; b < spec.dim; ++b) {
    const double w = dual(axis, b);
    if (w == 0.0) continue;
    const Eigen::MatrixXcd d1 = spectral_derivative_1d(spec.grid[b], 0.0, true);
    acc += w * apply_axis(gi, d1, fc, b);
  }
  return acc.real().array();
}

VectorField gradient(const TorusSpec& spec, const MetricField& g, const ScalarField& f) {
  const int n = spec.dim;
  const int nodes = spec.node_count();
  std::vector<ScalarField> df(n);
  for (int j = 0; j < n; ++j) df[j] = spectral_partial(spec, f, j);
  const SymField ginv = pointwise_inverse(g);
  VectorField out(n, nodes);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i) += ginv(i, j) * df[j];
  return out;
}

ScalarField divergence(const TorusSpec& spec, const MetricField& g, const VectorField& v) {
  const ScalarField root = pointwise_determinant(g).sqrt();
  ScalarField out = ScalarField::Zero(spec.node_count());
  for (int i = 0; i < spec.dim; ++i)
    out += spectral_partial(spec, ScalarField(root * v(i)), i);
  return out / root;
}

ScalarField laplacian(const TorusSpec& spec, const MetricField& g, const ScalarField& f) {
  return -divergence(spec, g, gradient(spec, g, f));
}

Tensor3Field christoffel(const TorusSpec& spec, const MetricField& g) {
  const int n = spec.dim;
  const int nodes = spec.node_count();
  for (int x = 0; x < nodes; ++x) check_spd(g.at_node(x), x);

  // dg[l](i,j) = d_l g_ij
  std::vector<SymField> dg(n);
  for (int l = 0; l < n; ++l) {
    dg[l] = SymField(n, nodes);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) dg[l](i, j) = spectral_partial(spec, g(i, j), l);
  }
  const SymField ginv = pointwise_inverse(g);

  Tensor3Field gamma(n, nodes);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        ScalarField acc = ScalarField::Zero(nodes);
        for (int l = 0; l < n; ++l)
          acc += ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        gamma(k, i, j) = 0.5 * acc;
        if (i != j) gamma(k, j, i) = gamma(k, i, j);
      }
  return gamma;
}

ScalarField scalar_curvature(const TorusSpec& spec, const MetricField& g) {
  const int n = spec.dim;
  const int nodes = spec.node_count();
  const Tensor3Field gamma = christoffel(spec, g);

  // dGamma[l](k,i,j) = d_l Gamma^k_ij
  std::vector<Tensor3Field> dgamma(n);
  for (int l = 0; l < n; ++l) {
    dgamma[l] = Tensor3Field(n, nodes);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          dgamma[l](k, i, j) = spectral_partial(spec, gamma(k, i, j), l);
          if (i != j) dgamma[l](k, j, i) = dgamma[l](k, i, j);
        }
  }

  // Ric_ij = d_k Gamma^k_ij - d_i Gamma^k_kj + Gamma^k_kl Gamma^l_ij
  //          - Gamma^k_il Gamma^l_kj
  SymField ric(n, nodes);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      ScalarField acc = ScalarField::Zero(nodes);
      for (int k = 0; k < n; ++k) {
        acc += dgamma[k](k, i, j) - dgamma[i](k, k, j);
        for (int l = 0; l < n; ++l)
          acc += gamma(k, k, l) * gamma(l, i, j) - gamma(k, i, l) * gamma(l, k, j);
      }
      ric(i, j) = acc;
    }

  const SymField ginv = pointwise_inverse(g);
  ScalarField s = ScalarField::Zero(nodes);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += ginv(i, j) * ric(i, j);
  return s;
}

Tensor3Field covariant_derivative_sym2(const TorusSpec& spec, const SymField& beta,
                                       const MetricField& g) {
  const int n = spec.dim;
  const int nodes = spec.node_count();
  if (beta.dim != n) throw std::invalid_argument("covariant_derivative_sym2: shape mismatch");
  const Tensor3Field gamma = christoffel(spec, g);
  Tensor3Field out(n, nodes);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        ScalarField acc = spectral_partial(spec, beta(j, k), i);
        for (int m = 0; m < n; ++m)
          acc -= gamma(m, i, j) * beta(m, k) + gamma(m, i, k) * beta(j, m);
        out(i, j, k) = acc;
      }
  return out;
}

ScalarField spinor_density(const TorusSpec& spec, const Eigen::VectorXcd& psi,
                           int spinor_dim) {
  const int nodes = spec.node_count();
  if (psi.size() != static_cast<Eigen::Index>(nodes) * spinor_dim)
    throw std::invalid_argument("spinor_density: size mismatch");
  ScalarField u = ScalarField::Zero(nodes);
  for (int x = 0; x < nodes; ++x)
    for (int s = 0; s < spinor_dim; ++s) u[x] += std::norm(psi[x * spinor_dim + s]);
  return u;
}

double green_identity_residual(const TorusSpec& spec, const MetricField& g,
                               const ScalarField& F, const Eigen::VectorXcd& psi,
                               int spinor_dim) {
  const ScalarField u = spinor_density(spec, psi, spinor_dim);
  if (F.size() != u.size())
    throw std::invalid_argument("green_identity_residual: shape mismatch");
  const ScalarField lap_u = laplacian(spec, g, u);
  const ScalarField lap_F = laplacian(spec, g, F);
  const VectorField grad_u = gradient(spec, g, u);
  const VectorField grad_F = gradient(spec, g, F);
  VectorField flux(spec.dim, spec.node_count());
  for (int i = 0; i < spec.dim; ++i) flux(i) = u * grad_F(i) - F * grad_u(i);
  const ScalarField resid = F * lap_u - u * lap_F - divergence(spec, g, flux);
  return resid.abs().maxCoeff();
}

double integrate(const TorusSpec& spec, const ScalarField& f, const ScalarField& weight,
                 bool* negative_weight) {
  if (f.size() != spec.node_count() || weight.size() != spec.node_count())
    throw std::invalid_argument("integrate: field size mismatch");
  if (negative_weight) *negative_weight = (weight < 0.0).any();
  return (f * weight).sum() * spec.cell_volume();
}

SymField pointwise_inverse(const SymField& m) {
  const int n = m.dim;
  const int nodes = static_cast<int>(m.comp[0].size());
  SymField out(n, nodes);
  for (int x = 0; x < nodes; ++x) {
    const Eigen::MatrixXd a = m.at_node(x);
    const double det = a.determinant();
    if (std::abs(det) < 1e-300)
      throw numeric_error("pointwise_inverse: singular matrix at node " + std::to_string(x));
    out.set_node(x, a.inverse());
  }
  return out;
}

ScalarField pointwise_determinant(const SymField& m) {
  const int nodes = static_cast<int>(m.comp[0].size());
  ScalarField out(nodes);
  for (int x = 0; x < nodes; ++x) out[x] = m.at_node(x).determinant();
  return out;
}

}  // namespace codazzi
