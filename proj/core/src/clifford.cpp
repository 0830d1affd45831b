#include "codazzi/clifford.hpp"

#include <stdexcept>

namespace codazzi {

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

CliffordRep build_clifford(int n) {
  if (n < 1) throw std::invalid_argument("build_clifford: dimension must be >= 1");

  const Complex I(0.0, 1.0);
  Eigen::Matrix2cd s1, s2, s3, id2;
  s1 << 0, 1, 1, 0;
  s2 << 0, -I, I, 0;
  s3 << 1, 0, 0, -1;
  id2.setIdentity();

  const int m = n / 2;
  const int sd = 1 << m;

  CliffordRep rep;
  rep.dim = n;
  rep.spinor_dim = sd;
  rep.gamma.reserve(n);

  // Hermitian chain G_a with G_a G_b + G_b G_a = 2 delta_ab:
  //   G_{2k}   = s3^{(k)} (x) s1 (x) id^(m-k-1)
  //   G_{2k+1} = s3^{(k)} (x) s2 (x) id^(m-k-1)
  // and for odd n the extra G_{n-1} = s3^{(m)}. Generators are i*G_a.
  for (int a = 0; a < n; ++a) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(1, 1);
    if (a == 2 * m) {
      for (int f = 0; f < m; ++f) g = kron(g, s3);
    } else {
      const int k = a / 2;
      for (int f = 0; f < k; ++f) g = kron(g, s3);
      g = kron(g, (a % 2 == 0) ? s1 : s2);
      for (int f = k + 1; f < m; ++f) g = kron(g, id2);
    }
    rep.gamma.push_back(I * g);
  }
  return rep;
}

double CliffordRep::anticommutator_residual() const {
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(spinor_dim, spinor_dim);
  double worst = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const Eigen::MatrixXcd anti = gamma[i] * gamma[j] + gamma[j] * gamma[i] +
                                    (i == j ? 2.0 : 0.0) * id;
      worst = std::max(worst, anti.cwiseAbs().maxCoeff());
    }
  return worst;
}

double CliffordRep::skew_adjoint_residual() const {
  double worst = 0.0;
  for (const auto& g : gamma)
    worst = std::max(worst, (g.adjoint() + g).cwiseAbs().maxCoeff());
  return worst;
}

Eigen::VectorXcd vector_mul(const Eigen::VectorXd& v, const Eigen::VectorXcd& psi,
                            const CliffordRep& rep) {
  if (v.size() != rep.dim || psi.size() != rep.spinor_dim)
    throw std::invalid_argument("vector_mul: dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rep.spinor_dim);
  for (int i = 0; i < rep.dim; ++i)
    if (v[i] != 0.0) out += v[i] * (rep.gamma[i] * psi);
  return out;
}

int triple_count(int n) { return n * (n - 1) * (n - 2) / 6; }

int triple_index(int n, int j, int k, int l) {
  if (!(0 <= j && j < k && k < l && l < n))
    throw std::invalid_argument("triple_index: need 0 <= j < k < l < n");
  // lexicographic rank of (j,k,l) among increasing triples
  int rank = 0;
  for (int a = 0; a < j; ++a) rank += (n - 1 - a) * (n - 2 - a) / 2;
  for (int b = j + 1; b < k; ++b) rank += n - 1 - b;
  rank += l - k - 1;
  return rank;
}

Eigen::VectorXcd form_mul(const FormCoeffs& form, const Eigen::VectorXcd& psi,
                          const CliffordRep& rep) {
  if (psi.size() != rep.spinor_dim)
    throw std::invalid_argument("form_mul: spinor dimension mismatch");
  if (form.degree == 1) {
    if (form.coeffs.size() != rep.dim)
      throw std::invalid_argument("form_mul: coefficient count mismatch");
    return vector_mul(form.coeffs, psi, rep);
  }
  if (form.degree != 3)
    throw std::invalid_argument("form_mul: only degrees 1 and 3 are supported");
  if (form.coeffs.size() != triple_count(rep.dim))
    throw std::invalid_argument("form_mul: coefficient count mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(rep.spinor_dim);
  int idx = 0;
  for (int j = 0; j < rep.dim; ++j)
    for (int k = j + 1; k < rep.dim; ++k)
      for (int l = k + 1; l < rep.dim; ++l, ++idx) {
        const double c = form.coeffs[idx];
        if (c != 0.0) out += c * (rep.gamma[j] * (rep.gamma[k] * (rep.gamma[l] * psi)));
      }
  return out;
}

}  // namespace codazzi
