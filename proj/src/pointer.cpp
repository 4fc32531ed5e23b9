#include "tsqm/pointer.hpp"

#include <algorithm>
#include <cmath>

#include "tsqm/rng.hpp"

namespace tsqm {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

PointerState PointerState::gaussian(Eigen::Index points, double dpi, double width,
                                    double center) {
  if (points < 8) throw ValidationError("PointerState: need at least 8 grid points");
  if (dpi <= 0.0 || width <= 0.0) {
    throw ValidationError("PointerState: dpi and width must be positive");
  }
  PointerState p;
  p.dpi_ = dpi;
  p.center_ = center;
  p.gaussian_ = true;
  p.width_ = width;
  p.profile_center_ = center;
  p.amps_.resize(points);
  const double norm = std::pow(2.0 * kPi * width * width, -0.25);
  for (Eigen::Index j = 0; j < points; ++j) {
    const double x = p.pi_at(j) - center;
    p.amps_[j] = norm * std::exp(-x * x / (4.0 * width * width));
  }
  p.finalize();
  return p;
}

PointerState::PointerState(Eigen::Index points, double dpi, double center, Vec amps)
    : dpi_(dpi), center_(center), amps_(std::move(amps)) {
  if (points < 8) throw ValidationError("PointerState: need at least 8 grid points");
  if (amps_.size() != points) throw DimensionError("PointerState: amplitude size mismatch");
  if (dpi_ <= 0.0) throw ValidationError("PointerState: dpi must be positive");
  finalize();
}

double PointerState::pi_at(Eigen::Index j) const {
  return center_ + (static_cast<double>(j) - 0.5 * static_cast<double>(amps_.size() - 1)) * dpi_;
}

double PointerState::profile_at(double pi) const {
  if (!gaussian_) {
    throw ValidationError("PointerState: no analytic profile available for resampling");
  }
  const double x = pi - profile_center_;
  return std::pow(2.0 * kPi * width_ * width_, -0.25) *
         std::exp(-x * x / (4.0 * width_ * width_));
}

void PointerState::finalize() {
  if (!amps_.allFinite()) throw ValidationError("PointerState: amplitudes must be finite");
  const Eigen::Index m = amps_.size();
  const double norm2 = amps_.squaredNorm() * dpi_;
  if (norm2 <= 0.0) throw ValidationError("PointerState: zero-norm pointer state");
  amps_ /= std::sqrt(norm2);

  double mean = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) mean += pi_at(j) * std::norm(amps_[j]) * dpi_;
  mean_pi_ = mean;
  double var = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const double d = pi_at(j) - mean;
    var += d * d * std::norm(amps_[j]) * dpi_;
  }
  var_pi_ = var;

  // q-moments via plain DFT with an exact twiddle table. Frequencies map to
  // q_k = 2*pi*k/(M*dpi) folded to (-pi/dpi, pi/dpi].
  std::vector<Complex> twiddle(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) {
    const double phase = -2.0 * kPi * static_cast<double>(r) / static_cast<double>(m);
    twiddle[static_cast<std::size_t>(r)] = Complex(std::cos(phase), std::sin(phase));
  }
  const double dq = 2.0 * kPi / (static_cast<double>(m) * dpi_);
  double total = 0.0, qsum = 0.0, q2sum = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    Complex f = 0.0;
    for (Eigen::Index j = 0; j < m; ++j) {
      f += amps_[j] * twiddle[static_cast<std::size_t>((j * k) % m)];
    }
    const double power = std::norm(f);
    const double q = (k <= m / 2 ? static_cast<double>(k) : static_cast<double>(k - m)) * dq;
    total += power;
    qsum += q * power;
    q2sum += q * q * power;
  }
  mean_q_ = qsum / total;
  var_q_ = q2sum / total - mean_q_ * mean_q_;

  cdf_.resize(static_cast<std::size_t>(m));
  double acc = 0.0;
  for (Eigen::Index j = 0; j < m; ++j) {
    acc += std::norm(amps_[j]) * dpi_;
    cdf_[static_cast<std::size_t>(j)] = acc;
  }
  cdf_.back() = 1.0;
}

double PointerState::sample(std::mt19937_64& rng) const {
  const double u = uniform01(rng);
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
  const Eigen::Index j = static_cast<Eigen::Index>(it - cdf_.begin());
  return pi_at(std::min(j, amps_.size() - 1));
}

double PointerState::edge_fraction() const {
  const double peak = amps_.cwiseAbs().maxCoeff();
  if (peak <= 0.0) return 0.0;
  return std::max(std::abs(amps_[0]), std::abs(amps_[amps_.size() - 1])) / peak;
}

}  // namespace tsqm
