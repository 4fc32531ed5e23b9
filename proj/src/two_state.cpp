#include "tsqm/two_state.hpp"

#include <Eigen/SVD>

#include "tsqm/linalg.hpp"

namespace tsqm {

TwoState::TwoState(Mat mat) : mat_(std::move(mat)) {
  if (mat_.rows() != mat_.cols()) throw DimensionError("TwoState: matrix must be square");
  if (mat_.rows() < 1) throw DimensionError("TwoState: dimension must be positive");
  if (!mat_.allFinite()) throw ValidationError("TwoState: entries must be finite");
  trace_ = mat_.trace();
}

TwoState TwoState::normalized(double eps) const {
  if (std::abs(trace_) <= eps) {
    throw UnphysicalTwoStateError("cannot normalize a two-state with (near-)zero trace",
                                  std::abs(trace_));
  }
  return TwoState(mat_ / trace_);
}

TwoState operator+(const TwoState& a, const TwoState& b) {
  if (a.dim() != b.dim()) throw DimensionError("two-state sum: dimension mismatch");
  return TwoState(a.mat_ + b.mat_);
}

TwoState operator*(Complex c, const TwoState& r) { return TwoState(c * r.mat_); }

TwoState make_generic(const Vec& psi1, const Vec& psi2, MakeInfo* info, double eps) {
  if (psi1.size() != psi2.size()) throw DimensionError("make_generic: dimension mismatch");
  const Complex overlap = psi2.dot(psi1);  // <psi2|psi1>
  const double mag = std::abs(overlap);
  if (info) {
    info->overlap_magnitude = mag;
    info->ill_conditioned = mag < kIllConditioned;
  }
  if (mag <= eps) {
    throw UnphysicalTwoStateError(
        "pre- and post-selection conditions are orthogonal; a physical two-state requires a "
        "nonzero overlap between them",
        mag);
  }
  return TwoState((psi1 * psi2.adjoint()) / overlap);
}

Complex inner(const TwoState& r1, const TwoState& r2) {
  if (r1.dim() != r2.dim()) throw DimensionError("inner: dimension mismatch");
  return (r1.mat().adjoint() * r2.mat()).trace();
}

TwoStateBasis::TwoStateBasis(std::vector<Vec> s1, std::vector<Vec> s2, double eps)
    : s1_(std::move(s1)), s2_(std::move(s2)) {
  if (s1_.empty() || s1_.size() != s2_.size()) {
    throw ValidationError("TwoStateBasis: need two bases of equal nonzero size");
  }
  const Eigen::Index d = s1_.front().size();
  auto check_orthonormal = [&](const std::vector<Vec>& s, const char* name) {
    if (static_cast<Eigen::Index>(s.size()) != d) {
      throw ValidationError(std::string("TwoStateBasis: ") + name + " must span the space");
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i].size() != d) throw DimensionError("TwoStateBasis: inconsistent vector dims");
      for (std::size_t j = 0; j <= i; ++j) {
        const Complex o = s[j].dot(s[i]);
        const double want = (i == j) ? 1.0 : 0.0;
        if (std::abs(o - want) > 1e-10) {
          throw ValidationError(std::string("TwoStateBasis: ") + name + " is not orthonormal");
        }
      }
    }
  };
  check_orthonormal(s1_, "S1");
  check_orthonormal(s2_, "S2");

  overlaps_.resize(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const Complex o = s2_[static_cast<std::size_t>(b)].dot(s1_[static_cast<std::size_t>(a)]);
      if (std::abs(o) <= eps) {
        throw ValidationError(
            "TwoStateBasis: bases have an orthogonal cross pair (" + std::to_string(a) + "," +
            std::to_string(b) + "); every <alpha|beta> must be nonzero");
      }
      overlaps_(a, b) = o;
    }
  }
}

Complex TwoStateBasis::overlap(Eigen::Index a, Eigen::Index b) const {
  if (a < 0 || b < 0 || a >= dim() || b >= dim()) {
    throw ValidationError("TwoStateBasis: label out of range");
  }
  return overlaps_(a, b);
}

TwoState TwoStateBasis::element(Eigen::Index a, Eigen::Index b) const {
  const Complex o = overlap(a, b);
  return TwoState((s1_[static_cast<std::size_t>(a)] * s2_[static_cast<std::size_t>(b)].adjoint()) / o);
}

double TwoStateBasis::element_norm2(Eigen::Index a, Eigen::Index b) const {
  const double mag = std::abs(overlap(a, b));
  return 1.0 / (mag * mag);
}

Complex two_amplitude(const TwoState& r, const TwoStateBasis& basis, Eigen::Index a,
                      Eigen::Index b) {
  if (r.dim() != basis.s1(0).size()) throw DimensionError("two_amplitude: dimension mismatch");
  const Vec& alpha = basis.s1(a);
  const Vec& beta = basis.s2(b);
  // <alpha|r|beta> <beta|alpha>
  return alpha.dot(r.mat() * beta) * basis.overlap(a, b);
}

namespace {

Mat boundary_density(const TwoState& r, bool in) {
  const double norm2 = std::real(inner(r, r));
  if (norm2 <= 0.0) throw ValidationError("rho_in/rho_out: zero-norm two-state");
  Mat m = in ? Mat(r.mat() * r.mat().adjoint()) : Mat(r.mat().adjoint() * r.mat());
  m /= norm2;
  // Clean the tiny anti-Hermitian roundoff so downstream eig calls are exact.
  return 0.5 * (m + m.adjoint());
}

}  // namespace

Mat rho_in(const TwoState& r) { return boundary_density(r, true); }
Mat rho_out(const TwoState& r) { return boundary_density(r, false); }

bool is_generic(const TwoState& r, double tol) {
  const Complex tr = r.trace();
  const Complex tr2 = (r.mat() * r.mat()).trace();
  // tr(r^2) is evaluated with cancellations of order ||r||_F^2, so the
  // identity has to be read at that scale (superweak states have huge
  // normalized entries).
  const double scale = std::max({1.0, std::norm(tr), r.mat().squaredNorm()});
  if (std::abs(tr2 - tr * tr) > tol * scale) return false;
  Eigen::JacobiSVD<Mat> svd(r.mat());
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return false;
  return sv.size() < 2 || sv[1] <= kTolEig * sv[0];
}

TwoState reduce(const TwoState& r_total, Eigen::Index dim_a, Eigen::Index dim_b, Keep keep) {
  if (dim_a < 1 || dim_b < 1 || r_total.dim() != dim_a * dim_b) {
    throw DimensionError("reduce: total dimension does not factor as dA*dB");
  }
  const Mat& m = r_total.mat();
  if (keep == Keep::A) {
    Mat out = Mat::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index j = 0; j < dim_a; ++j)
        for (Eigen::Index k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return TwoState(std::move(out));
  }
  Mat out = Mat::Zero(dim_b, dim_b);
  for (Eigen::Index i = 0; i < dim_b; ++i)
    for (Eigen::Index j = 0; j < dim_b; ++j)
      for (Eigen::Index k = 0; k < dim_a; ++k) out(i, j) += m(k * dim_b + i, k * dim_b + j);
  return TwoState(std::move(out));
}

}  // namespace tsqm
