#include "tsqm/dynamics.hpp"

#include "tsqm/linalg.hpp"

namespace tsqm {

Mat evolution_operator(const EvolutionSpec& spec) {
  const EigenSystem es = eig_hermitian(spec.hamiltonian);
  const double dt = spec.t1 - spec.t0;
  Mat u = Mat::Zero(spec.hamiltonian.rows(), spec.hamiltonian.cols());
  for (std::size_t k = 0; k < es.vectors.size(); ++k) {
    const Complex phase = std::exp(Complex(0.0, -es.values[static_cast<Eigen::Index>(k)] * dt));
    u += phase * (es.vectors[k] * es.vectors[k].adjoint());
  }
  return u;
}

TwoState evolve(const TwoState& r, const EvolutionSpec& spec) {
  if (spec.hamiltonian.rows() != r.dim()) throw DimensionError("evolve: dimension mismatch");
  const Mat u = evolution_operator(spec);
  return TwoState(u * r.mat() * u.adjoint());
}

MultipleState evolve_multi(const MultipleState& m, const std::vector<EvolutionSpec>& specs) {
  if (static_cast<int>(specs.size()) != m.intervals()) {
    throw ValidationError("evolve_multi: need exactly one spec per interval");
  }
  std::vector<Mat> us;
  us.reserve(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].hamiltonian.rows() != m.dims()[i]) {
      throw DimensionError("evolve_multi: spec dimension mismatch at interval " + std::to_string(i));
    }
    us.push_back(evolution_operator(specs[i]));
  }
  std::vector<MultipleState::Term> out;
  out.reserve(m.terms().size());
  for (const auto& t : m.terms()) {
    MultipleState::Term nt;
    nt.coeff = t.coeff;
    nt.factors.reserve(t.factors.size());
    for (std::size_t i = 0; i < t.factors.size(); ++i) {
      nt.factors.emplace_back(us[i] * t.factors[i].mat() * us[i].adjoint());
    }
    out.push_back(std::move(nt));
  }
  return MultipleState(std::move(out));
}

void LatticeTwoAmplitude::validate() const {
  if (points < 8) throw ValidationError("LatticeTwoAmplitude: need at least 8 grid points");
  if (dx <= 0.0) throw ValidationError("LatticeTwoAmplitude: dx must be positive");
  if (mass <= 0.0) throw ValidationError("LatticeTwoAmplitude: mass must be positive");
  if (potential.size() != points) {
    throw DimensionError("LatticeTwoAmplitude: potential size must match grid");
  }
  if (values.rows() != points || values.cols() != points) {
    throw DimensionError("LatticeTwoAmplitude: values must be points x points");
  }
  if (!values.allFinite()) throw ValidationError("LatticeTwoAmplitude: values must be finite");
}

namespace {

// Thomas solve of (I + i*dt/2*H) x = rhs for the tridiagonal lattice H,
// one column at a time. H: diag_j = 1/(m dx^2) + V_j, offdiag = -1/(2m dx^2).
class CayleyStepper {
public:
  CayleyStepper(const LatticeTwoAmplitude& lat, double dt)
      : n_(lat.points), half_(Complex(0.0, 0.5 * dt)) {
    const double kin = 1.0 / (lat.mass * lat.dx * lat.dx);
    diag_.resize(n_);
    for (Eigen::Index j = 0; j < n_; ++j) diag_[j] = kin + lat.potential[j];
    off_ = -0.5 * kin;
  }

  double max_eigen_bound() const {
    double vmax = 0.0;
    for (const double d : diag_) vmax = std::max(vmax, std::abs(d));
    return vmax + 2.0 * std::abs(off_);
  }

  // X = (I + i dt H / 2)^(-1) (I - i dt H / 2) M, columns independent.
  Mat apply(const Mat& m) const {
    Mat rhs(n_, m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index j = 0; j < n_; ++j) {
        Complex hx = diag_[j] * m(j, c);
        if (j > 0) hx += off_ * m(j - 1, c);
        if (j + 1 < n_) hx += off_ * m(j + 1, c);
        rhs(j, c) = m(j, c) - half_ * hx;
      }
    }
    Mat x(n_, m.cols());
    std::vector<Complex> cprime(static_cast<std::size_t>(n_));
    std::vector<Complex> dprime(static_cast<std::size_t>(n_));
    const Complex a = half_ * off_;  // sub/super diagonal of (I + i dt H/2)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      Complex b0 = 1.0 + half_ * diag_[0];
      cprime[0] = a / b0;
      dprime[0] = rhs(0, c) / b0;
      for (Eigen::Index j = 1; j < n_; ++j) {
        const Complex bj = 1.0 + half_ * diag_[j];
        const Complex denom = bj - a * cprime[static_cast<std::size_t>(j - 1)];
        cprime[static_cast<std::size_t>(j)] = a / denom;
        dprime[static_cast<std::size_t>(j)] =
            (rhs(j, c) - a * dprime[static_cast<std::size_t>(j - 1)]) / denom;
      }
      x(n_ - 1, c) = dprime[static_cast<std::size_t>(n_ - 1)];
      for (Eigen::Index j = n_ - 2; j >= 0; --j) {
        x(j, c) = dprime[static_cast<std::size_t>(j)] -
                  cprime[static_cast<std::size_t>(j)] * x(j + 1, c);
      }
    }
    return x;
  }

  // One full step K rho K^dag, via rho -> (K (K rho)^dag)^dag.
  Mat step(const Mat& rho) const { return apply(apply(rho).adjoint()).adjoint(); }

private:
  Eigen::Index n_;
  Complex half_;
  std::vector<double> diag_;
  double off_;
};

}  // namespace

LatticeTwoAmplitude evolve_lattice(const LatticeTwoAmplitude& rho, double dt, int steps) {
  rho.validate();
  if (steps < 0) throw ValidationError("evolve_lattice: steps must be nonnegative");
  if (steps == 0 || dt == 0.0) return rho;
  const CayleyStepper stepper(rho, dt);
  if (std::abs(dt) * stepper.max_eigen_bound() > 2.0) {
    throw ValidationError(
        "evolve_lattice: dt too large for accurate Cayley stepping (dt * ||H|| > 2); refine the "
        "step or the grid");
  }
  LatticeTwoAmplitude out = rho;
  for (int s = 0; s < steps; ++s) out.values = stepper.step(out.values);
  return out;
}

double continuity_residual(const LatticeTwoAmplitude& r1, const LatticeTwoAmplitude& r2,
                           double dt) {
  r1.validate();
  r2.validate();
  if (r1.points != r2.points || r1.dx != r2.dx || r1.mass != r2.mass ||
      (r1.potential - r2.potential).cwiseAbs().maxCoeff() != 0.0) {
    throw ValidationError("continuity_residual: states live on different grids");
  }
  if (dt <= 0.0) throw ValidationError("continuity_residual: dt must be positive");

  const LatticeTwoAmplitude s1 = evolve_lattice(r1, dt, 1);
  const LatticeTwoAmplitude s2 = evolve_lattice(r2, dt, 1);
  const Mat mid1 = 0.5 * (r1.values + s1.values);
  const Mat mid2 = 0.5 * (r2.values + s2.values);

  const Eigen::Index n = r1.points;
  const double dx = r1.dx;
  const Complex cur = Complex(0.0, -1.0) / (2.0 * r1.mass * dx);  // 1/(2im dx)

  // Half-cell currents of the sesquilinear density rho1* rho2, matched to
  // the second-difference stencil so the semi-discrete defect vanishes.
  auto jprime = [&](Eigen::Index j, Eigen::Index k) {  // at (j+1/2, k)
    return cur * (std::conj(mid1(j, k)) * mid2(j + 1, k) - std::conj(mid1(j + 1, k)) * mid2(j, k));
  };
  auto jsecond = [&](Eigen::Index j, Eigen::Index k) {  // at (j, k+1/2)
    return cur * (std::conj(mid1(j, k)) * mid2(j, k + 1) - std::conj(mid1(j, k + 1)) * mid2(j, k));
  };

  const int skip = 3;  // hard-wall cells excluded from the defect scan
  double worst = 0.0;
  for (Eigen::Index j = skip; j < n - skip; ++j) {
    for (Eigen::Index k = skip; k < n - skip; ++k) {
      const Complex ddt =
          (std::conj(s1.values(j, k)) * s2.values(j, k) - std::conj(r1.values(j, k)) * r2.values(j, k)) /
          dt;
      const Complex div1 = (jprime(j, k) - jprime(j - 1, k)) / dx;
      const Complex div2 = (jsecond(j, k) - jsecond(j, k - 1)) / dx;
      worst = std::max(worst, std::abs(ddt + div1 - div2));
    }
  }
  return worst;
}

}  // namespace tsqm
