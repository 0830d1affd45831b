#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace codazzi {

using Complex = std::complex<double>;

// Irreducible complex Clifford representation in dimension n: generators
// gamma_i of size 2^(n/2) x 2^(n/2) with
//
//   gamma_i gamma_j + gamma_j gamma_i = -2 delta_ij,   gamma_i^* = -gamma_i.
//
// The construction is a fixed chain of Pauli tensor products, so the matrices
// are identical on every call for a given n.
struct CliffordRep {
  int dim = 0;         // manifold dimension n
  int spinor_dim = 0;  // 2^floor(n/2)
  std::vector<Eigen::MatrixXcd> gamma;

  // Max-norm defect of the anticommutation relation over all pairs.
  double anticommutator_residual() const;
  // Max-norm defect of gamma_i^* + gamma_i over all generators.
  double skew_adjoint_residual() const;
};

CliffordRep build_clifford(int n);

// Clifford action of a vector in the orthonormal frame: sum_i v_i gamma_i psi.
Eigen::VectorXcd vector_mul(const Eigen::VectorXd& v, const Eigen::VectorXcd& psi,
                            const CliffordRep& rep);

// Antisymmetric form coefficients over strictly increasing index tuples.
// degree 1: coeffs[j] for E^j; degree 3: coeffs in lexicographic order of
// (j,k,l) with j<k<l for E^j ^ E^k ^ E^l.
struct FormCoeffs {
  int degree = 1;
  Eigen::VectorXd coeffs;
};

int triple_count(int n);
int triple_index(int n, int j, int k, int l);

// Clifford action of a degree-1 or degree-3 form: sum_j c_j gamma_j psi, or
// sum_{j<k<l} c_{jkl} gamma_j gamma_k gamma_l psi.
Eigen::VectorXcd form_mul(const FormCoeffs& form, const Eigen::VectorXcd& psi,
                          const CliffordRep& rep);

}  // namespace codazzi
