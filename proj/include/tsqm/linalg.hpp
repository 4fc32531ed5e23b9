#ifndef TSQM_LINALG_HPP
#define TSQM_LINALG_HPP

#include <cstdint>
#include <vector>

#include "tsqm/types.hpp"

namespace tsqm {

// Default cap on tensor-product result size (entries), see tensor().
inline constexpr std::size_t kTensorCapacity = 1'000'000;

bool is_finite(const Vec& v);
bool is_finite(const Mat& m);
bool is_hermitian(const Mat& m, double tol = kTolAlgebra);
bool is_normalized(const Vec& v, double tol = kTolAlgebra);

// Kronecker products. Result dimension is the product of the operand
// dimensions; exceeding `cap` entries raises CapacityError.
Vec tensor(const Vec& a, const Vec& b, std::size_t cap = kTensorCapacity);
Mat tensor(const Mat& a, const Mat& b, std::size_t cap = kTensorCapacity);

struct EigenSystem {
  RVec values;                    // ascending
  std::vector<Vec> vectors;       // orthonormal, phase-fixed
};

// Eigendecomposition of a Hermitian operator. Eigenvalues come out
// ascending; each eigenvector is normalized and phase-fixed so that its
// first component of magnitude > 1e-12 is real positive, making every
// derived quantity reproducible across runs.
EigenSystem eig_hermitian(const Mat& a, double herm_tol = kTolAlgebra);

// Σ_k λ_k |v_k><v_k| — handy for tests and matrix functions.
Mat eig_reconstruct(const EigenSystem& es);

// Haar-ish random normalized state (i.i.d. complex Gaussian entries,
// normalized, phase-fixed like eig_hermitian). Identical seed gives a
// bit-identical vector.
Vec random_state(Eigen::Index dim, std::uint64_t seed);

// Group eigenvalues into degenerate clusters: returns (distinct value,
// projector onto the eigenspace) pairs in ascending order.
struct EigenSpace {
  double value;
  Mat projector;
};
std::vector<EigenSpace> eigenspaces(const Mat& a, double herm_tol = kTolAlgebra,
                                    double degeneracy_tol = 1e-8);

}  // namespace tsqm

#endif  // TSQM_LINALG_HPP
