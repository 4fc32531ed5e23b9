#ifndef TSQM_TWO_STATE_HPP
#define TSQM_TWO_STATE_HPP

#include <vector>

#include "tsqm/types.hpp"

namespace tsqm {

// A two-state: the operator-valued state of a system constrained by both a
// pre-selection and a post-selection. Generic two-states are single
// ket-bra products |psi1><psi2|; sums of those describe correlated
// boundary conditions (open subsystems). Values are immutable after
// construction and safe to share across threads.
class TwoState {
public:
  explicit TwoState(Mat mat);

  const Mat& mat() const { return mat_; }
  Complex trace() const { return trace_; }
  Eigen::Index dim() const { return mat_.rows(); }

  // Membership in the physical subspace: |tr| above the cutoff.
  bool physical(double eps = kEpsPhys) const { return std::abs(trace_) > eps; }

  TwoState dagger() const { return TwoState(mat_.adjoint()); }

  // mat / trace. Throws UnphysicalTwoStateError when |tr| <= eps.
  TwoState normalized(double eps = kEpsPhys) const;

  friend TwoState operator+(const TwoState& a, const TwoState& b);
  friend TwoState operator*(Complex c, const TwoState& r);

private:
  Mat mat_;
  Complex trace_;
};

// Diagnostics from make_generic; the conditioning flag warns when the
// bare overlap is small enough that normalized entries blow up.
struct MakeInfo {
  double overlap_magnitude = 0.0;
  bool ill_conditioned = false;
};

// |psi1><psi2| / <psi2|psi1>. Throws UnphysicalTwoStateError when the
// conditions are orthogonal within eps (no physical two-state exists;
// callers must evolve their states to a common time first).
TwoState make_generic(const Vec& psi1, const Vec& psi2, MakeInfo* info = nullptr,
                      double eps = kEpsPhys);

// Hilbert-space inner product tr(r1^dag r2).
Complex inner(const TwoState& r1, const TwoState& r2);

// A normalized two-state basis: two orthonormal bases of the underlying
// state space whose elements are pairwise non-orthogonal. Element (a,b)
// is |alpha_a><beta_b| / <beta_b|alpha_a>.
class TwoStateBasis {
public:
  TwoStateBasis(std::vector<Vec> s1, std::vector<Vec> s2, double eps = kEpsPhys);

  Eigen::Index dim() const { return static_cast<Eigen::Index>(s1_.size()); }
  const Vec& s1(Eigen::Index a) const { return s1_.at(static_cast<std::size_t>(a)); }
  const Vec& s2(Eigen::Index b) const { return s2_.at(static_cast<std::size_t>(b)); }

  // <beta_b|alpha_a>, the denominator of element (a,b).
  Complex overlap(Eigen::Index a, Eigen::Index b) const;

  TwoState element(Eigen::Index a, Eigen::Index b) const;

  // <element(a,b), element(a,b)> = 1/|<alpha_a|beta_b>|^2.
  double element_norm2(Eigen::Index a, Eigen::Index b) const;

private:
  std::vector<Vec> s1_, s2_;
  Mat overlaps_;  // overlaps_(a,b) = <beta_b|alpha_a>
};

// The two-state amplitude rho(a,b) = <alpha_a|r|beta_b><beta_b|alpha_a>,
// i.e. the projection <E_ab, r>/<E_ab, E_ab>. Expanding r over the basis
// with these coefficients reconstructs it.
Complex two_amplitude(const TwoState& r, const TwoStateBasis& basis, Eigen::Index a,
                      Eigen::Index b);

// Boundary-condition extraction: rr^dag/<r,r> and r^dag r/<r,r>. Both are
// Hermitian, positive semidefinite and unit trace; pure projectors exactly
// when r is generic.
Mat rho_in(const TwoState& r);
Mat rho_out(const TwoState& r);

// tr(r^2) = (tr r)^2 together with rank 1 (the rank check excludes the
// degenerate tr = 0 case, which satisfies the trace identity vacuously).
bool is_generic(const TwoState& r, double tol = kTolEig);

enum class Keep { A, B };

// Partial trace over the discarded tensor factor; dims = (dA, dB) with
// dim(r) = dA*dB.
TwoState reduce(const TwoState& r_total, Eigen::Index dim_a, Eigen::Index dim_b, Keep keep);

}  // namespace tsqm

#endif  // TSQM_TWO_STATE_HPP
