#include "codazzi/torus.hpp"

#include <cmath>
#include <stdexcept>

namespace codazzi {

void TorusSpec::validate() const {
  if (dim < 1) throw std::invalid_argument("TorusSpec: dimension must be >= 1");
  if (lattice.rows() != dim || lattice.cols() != dim)
    throw std::invalid_argument("TorusSpec: lattice basis must be dim x dim");
  if (std::abs(lattice.determinant()) <= 1e-12)
    throw std::invalid_argument("TorusSpec: lattice basis is singular");
  if (spin_shift.size() != dim)
    throw std::invalid_argument("TorusSpec: spin structure must have dim entries");
  for (int i = 0; i < dim; ++i) {
    const double d = spin_shift[i];
    if (d != 0.0 && d != 0.5)
      throw std::invalid_argument("TorusSpec: spin shifts must be 0 or 1/2");
  }
  if (static_cast<int>(grid.size()) != dim)
    throw std::invalid_argument("TorusSpec: grid shape must have dim entries");
  for (int n : grid)
    if (n < 4 || n % 2 != 0)
      throw std::invalid_argument("TorusSpec: grid entries must be even and >= 4");
}

int TorusSpec::node_count() const {
  int total = 1;
  for (int n : grid) total *= n;
  return total;
}

double TorusSpec::cell_volume() const {
  return std::abs(lattice.determinant()) / node_count();
}

Eigen::MatrixXd TorusSpec::dual() const { return lattice.inverse().transpose(); }

bool TorusSpec::trivial_spin() const {
  return (spin_shift.array() == 0.0).all();
}

Eigen::VectorXd TorusSpec::lattice_coord(int node) const {
  GridIndex gi(grid);
  const std::vector<int> k = gi.unflatten(node);
  Eigen::VectorXd t(dim);
  for (int i = 0; i < dim; ++i) t[i] = static_cast<double>(k[i]) / grid[i];
  return t;
}

Eigen::VectorXd TorusSpec::point(int node) const { return lattice * lattice_coord(node); }

GridIndex::GridIndex(std::vector<int> shape) : shape_(std::move(shape)) {
  strides_.assign(shape_.size(), 1);
  for (int i = static_cast<int>(shape_.size()) - 2; i >= 0; --i)
    strides_[i] = strides_[i + 1] * shape_[i + 1];
  total_ = shape_.empty() ? 0 : strides_[0] * shape_[0];
}

int GridIndex::flatten(const std::vector<int>& k) const {
  int flat = 0;
  for (size_t i = 0; i < shape_.size(); ++i) flat += k[i] * strides_[i];
  return flat;
}

std::vector<int> GridIndex::unflatten(int flat) const {
  std::vector<int> k(shape_.size());
  for (size_t i = 0; i < shape_.size(); ++i) {
    k[i] = flat / strides_[i];
    flat -= k[i] * strides_[i];
  }
  return k;
}

int GridIndex::with_axis(int flat, int axis, int to) const {
  const int cur = (flat / strides_[axis]) % shape_[axis];
  return flat + (to - cur) * strides_[axis];
}

int GridIndex::coord(int flat, int axis) const {
  return (flat / strides_[axis]) % shape_[axis];
}

Eigen::MatrixXd SymField::at_node(int node) const {
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) m(i, j) = m(j, i) = (*this)(i, j)[node];
  return m;
}

void SymField::set_node(int node, const Eigen::MatrixXd& m) {
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) (*this)(i, j)[node] = 0.5 * (m(i, j) + m(j, i));
}

MetricField flat_metric(const TorusSpec& spec) {
  MetricField g(spec.dim, spec.node_count());
  for (int i = 0; i < spec.dim; ++i) g(i, i).setOnes();
  return g;
}

SymField constant_sym_field(const TorusSpec& spec, const Eigen::MatrixXd& m) {
  SymField f(spec.dim, spec.node_count());
  for (int i = 0; i < spec.dim; ++i)
    for (int j = i; j < spec.dim; ++j) f(i, j).setConstant(0.5 * (m(i, j) + m(j, i)));
  return f;
}

}  // namespace codazzi
