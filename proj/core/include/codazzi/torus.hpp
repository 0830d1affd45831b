#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace codazzi {

using Complex = std::complex<double>;

// Flat torus model R^n / lattice. Columns of `lattice` generate the lattice;
// tensor components are expressed in the ambient Cartesian coordinates, where
// the base metric is the identity and the orthonormal frame is the standard
// basis (the inverse square-root factor of the constant metric).
//
// spin_shift is the half-integer shift delta of the dual mode lattice: spinor
// sections expand over modes exp(2*pi*i*(k+delta)^T B^{-1} x). delta = 0 is
// the trivial structure (harmonic spinors present).
struct TorusSpec {
  int dim = 0;
  Eigen::MatrixXd lattice;
  Eigen::VectorXd spin_shift;
  std::vector<int> grid;  // even entries >= 4

  void validate() const;  // throws std::invalid_argument

  int node_count() const;
  double cell_volume() const;     // |det lattice| / prod(grid)
  Eigen::MatrixXd dual() const;   // inverse transpose of lattice
  bool trivial_spin() const;      // all shifts zero

  // Lattice coordinates t = k/N in [0,1)^n of a flat node index (row-major).
  Eigen::VectorXd lattice_coord(int node) const;
  // Ambient position lattice * t.
  Eigen::VectorXd point(int node) const;
};

// Row-major flat indexing over an n-dimensional grid.
class GridIndex {
 public:
  GridIndex() = default;
  explicit GridIndex(std::vector<int> shape);

  int total() const { return total_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  const std::vector<int>& shape() const { return shape_; }

  int flatten(const std::vector<int>& k) const;
  std::vector<int> unflatten(int flat) const;
  // Flat index of the node with coordinate `axis` replaced by `to`.
  int with_axis(int flat, int axis, int to) const;
  // Coordinate of `flat` along `axis`.
  int coord(int flat, int axis) const;

 private:
  std::vector<int> shape_;
  std::vector<int> strides_;
  int total_ = 0;
};

// Grid fields are flat row-major arrays of node samples.
using ScalarField = Eigen::ArrayXd;

struct VectorField {
  int dim = 0;
  std::vector<ScalarField> comp;  // comp[i]

  VectorField() = default;
  VectorField(int n, int nodes) : dim(n), comp(n, ScalarField::Zero(nodes)) {}
  ScalarField& operator()(int i) { return comp[i]; }
  const ScalarField& operator()(int i) const { return comp[i]; }
};

// Symmetric 2-tensor field, packed upper triangle.
struct SymField {
  int dim = 0;
  std::vector<ScalarField> comp;  // packed (i <= j)

  SymField() = default;
  SymField(int n, int nodes) : dim(n), comp(n * (n + 1) / 2, ScalarField::Zero(nodes)) {}

  static int pack(int n, int i, int j) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  }
  ScalarField& operator()(int i, int j) { return comp[pack(dim, i, j)]; }
  const ScalarField& operator()(int i, int j) const { return comp[pack(dim, i, j)]; }

  Eigen::MatrixXd at_node(int node) const;
  void set_node(int node, const Eigen::MatrixXd& m);
};

using MetricField = SymField;  // SPD at every node where required

// Dense 3-index tensor field T(i,j,k); no symmetry assumed.
struct Tensor3Field {
  int dim = 0;
  std::vector<ScalarField> comp;

  Tensor3Field() = default;
  Tensor3Field(int n, int nodes) : dim(n), comp(n * n * n, ScalarField::Zero(nodes)) {}
  ScalarField& operator()(int i, int j, int k) { return comp[(i * dim + j) * dim + k]; }
  const ScalarField& operator()(int i, int j, int k) const {
    return comp[(i * dim + j) * dim + k];
  }
};

// Identity metric field (the flat torus base metric in ambient coordinates).
MetricField flat_metric(const TorusSpec& spec);

// Constant symmetric field from a single matrix.
SymField constant_sym_field(const TorusSpec& spec, const Eigen::MatrixXd& m);

}  // namespace codazzi
