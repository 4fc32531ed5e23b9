#include "tsqm/spin.hpp"

#include "tsqm/linalg.hpp"

namespace tsqm {

SpinOps spin_ops(int l) {
  if (l < 1) throw ValidationError("spin_ops: l must be >= 1");
  const int dim = 2 * l + 1;
  SpinOps ops;
  ops.two_l_plus_1 = dim;
  ops.lz = Mat::Zero(dim, dim);
  ops.lplus = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    const double m = static_cast<double>(i - l);  // ascending -l ... +l
    ops.lz(i, i) = m;
    if (i + 1 < dim) {
      ops.lplus(i + 1, i) = std::sqrt(static_cast<double>(l) * (l + 1.0) - m * (m + 1.0));
    }
  }
  ops.lminus = ops.lplus.adjoint();
  ops.lx = 0.5 * (ops.lplus + ops.lminus);
  ops.ly = Complex(0.0, -0.5) * (ops.lplus - ops.lminus);
  return ops;
}

Vec spin_eigenstate(const Mat& component, Eigen::Index m_index) {
  const EigenSystem es = eig_hermitian(component);
  if (m_index < 0 || m_index >= static_cast<Eigen::Index>(es.vectors.size())) {
    throw ValidationError("spin_eigenstate: eigenvalue index out of range");
  }
  return es.vectors[static_cast<std::size_t>(m_index)];
}

Mat sigma_x() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat sigma_y() {
  Mat m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return m;
}

Mat sigma_z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat sigma_axis(double nx, double ny, double nz) {
  const double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
  if (norm <= 0.0) throw ValidationError("sigma_axis: zero direction");
  return (nx * sigma_x() + ny * sigma_y() + nz * sigma_z()) / norm;
}

}  // namespace tsqm
