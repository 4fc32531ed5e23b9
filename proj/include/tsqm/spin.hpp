#ifndef TSQM_SPIN_HPP
#define TSQM_SPIN_HPP

#include "tsqm/types.hpp"

namespace tsqm {

// Standard angular momentum matrices for total spin l (dimension 2l+1),
// ladder-operator convention L+-|l,m> = sqrt(l(l+1) - m(m+-1)) |l,m+-1>.
// Basis states are ordered by ascending Lz eigenvalue (-l ... +l).
struct SpinOps {
  int two_l_plus_1 = 0;
  Mat lx, ly, lz, lplus, lminus;
};

SpinOps spin_ops(int l);

// Eigenvector of a Hermitian spin component with the m-th eigenvalue in
// ascending order (m_index = l + m), phase-fixed per the library convention.
Vec spin_eigenstate(const Mat& component, Eigen::Index m_index);

// Pauli matrices (spin-1/2 doubled: sigma = 2L).
Mat sigma_x();
Mat sigma_y();
Mat sigma_z();
// n . sigma for a unit 3-vector n.
Mat sigma_axis(double nx, double ny, double nz);

}  // namespace tsqm

#endif  // TSQM_SPIN_HPP
