#ifndef TSQM_POINTER_HPP
#define TSQM_POINTER_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "tsqm/types.hpp"

namespace tsqm {

// Measurement-device pointer wavefunction on a uniform grid in the readout
// variable pi. The conjugate variable q generates pi-translations
// ([pi, q] = i), so an impulsive coupling g0*q*A shifts the pointer by
// g0*a on each eigencomponent.
//
// The canonical initial state is a real Gaussian
//   Phi0(pi) = (2 pi w^2)^(-1/4) exp(-(pi - center)^2 / (4 w^2)),
// whose |Phi|^2 has standard deviation w. The Gaussian parameters are kept
// so shifted copies can be resampled analytically at shifted abscissae
// instead of interpolated.
//
// All moments and the sampling table are computed at construction; values
// are immutable afterwards and safe to share across threads.
class PointerState {
public:
  static PointerState gaussian(Eigen::Index points, double dpi, double width,
                               double center = 0.0);

  // Arbitrary grid amplitudes (renormalized); no analytic profile.
  PointerState(Eigen::Index points, double dpi, double center, Vec amps);

  Eigen::Index points() const { return amps_.size(); }
  double dpi() const { return dpi_; }
  double grid_center() const { return center_; }
  double pi_at(Eigen::Index j) const;
  const Vec& amps() const { return amps_; }

  bool has_gaussian_profile() const { return gaussian_; }
  double profile_width() const { return width_; }
  double profile_center() const { return profile_center_; }
  // Phi0 evaluated analytically at an arbitrary point (Gaussian profile only).
  double profile_at(double pi) const;

  double mean_pi() const { return mean_pi_; }
  double var_pi() const { return var_pi_; }

  // Conjugate-variable moments from the discrete Fourier transform of the
  // grid amplitudes (O(M^2), grids here stay <= a few thousand points).
  double mean_q() const { return mean_q_; }
  double var_q() const { return var_q_; }

  // One sample of pi from |Phi|^2 (grid-resolved).
  double sample(std::mt19937_64& rng) const;

  // |amps| at the first/last grid cell relative to the peak; the grid must
  // be wide enough that this stays below 1e-8.
  double edge_fraction() const;

private:
  PointerState() = default;
  void finalize();

  double dpi_ = 0.0;
  double center_ = 0.0;
  Vec amps_;
  bool gaussian_ = false;
  double width_ = 0.0;
  double profile_center_ = 0.0;

  double mean_pi_ = 0.0;
  double var_pi_ = 0.0;
  double mean_q_ = 0.0;
  double var_q_ = 0.0;
  std::vector<double> cdf_;
};

}  // namespace tsqm

#endif  // TSQM_POINTER_HPP
