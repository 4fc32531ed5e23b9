#ifndef TSQM_TYPES_HPP
#define TSQM_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tsqm {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;   // state vector over a finite orthonormal basis
using Mat = Eigen::MatrixXcd;   // square operator unless stated otherwise
using RVec = Eigen::VectorXd;

// Tolerance ladder. Algebraic identities are held to kTolAlgebra,
// eigendecomposition-derived quantities to kTolEig. kEpsPhys is the
// operational cutoff below which a two-state trace counts as zero
// (orthogonal boundary conditions). Scenarios may override per query.
inline constexpr double kTolAlgebra = 1e-12;
inline constexpr double kTolEig = 1e-10;
inline constexpr double kEpsPhys = 1e-10;
inline constexpr double kIllConditioned = 1e-6;

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class CapacityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Raised when boundary conditions are (numerically) orthogonal and no
// physical two-state exists. Carries |<psi2|psi1>| for diagnostics.
class UnphysicalTwoStateError : public std::runtime_error {
public:
  UnphysicalTwoStateError(const std::string& what, double overlap_magnitude)
      : std::runtime_error(what), overlap_magnitude_(overlap_magnitude) {}
  double overlap_magnitude() const { return overlap_magnitude_; }

private:
  double overlap_magnitude_ = 0.0;
};

}  // namespace tsqm

#endif  // TSQM_TYPES_HPP
