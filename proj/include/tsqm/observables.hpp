#ifndef TSQM_OBSERVABLES_HPP
#define TSQM_OBSERVABLES_HPP

#include <vector>

#include "tsqm/multistate.hpp"
#include "tsqm/two_state.hpp"

namespace tsqm {

// A normalized distribution over measurement outcomes. Each label is the
// tuple of eigenvalues recorded by the measurements that produced it (one
// entry for a single observable, more for sequences).
struct ProbDist {
  std::vector<std::vector<double>> labels;
  std::vector<double> probs;

  double prob_of(const std::vector<double>& label, double label_tol = 1e-9) const;
};

// ABL rule: the probability to record eigenvalue a of A on an ensemble in
// two-state r is |rho(a,a)|^2 / sum. Degenerate eigenvalues are merged
// coherently via their eigenprojectors, rho(a,a) = tr(P_a r), which keeps
// the result independent of the eigenbasis chosen inside each eigenspace.
ProbDist abl_prob(const TwoState& r, const Mat& a);

// sum a * Prob(a).
double strong_expectation(const TwoState& r, const Mat& a);

// Probability of the ordered pair (a at t, b at t+eps):
// |rho(a,b)|^2 / sum with rho(a,b) = tr(P_a r P_b). Orthogonal cross pairs
// simply get probability zero.
ProbDist joint_prob(const TwoState& r, const Mat& a, const Mat& b);

// One or two observables per interval of a multiple-state; outcome tuples
// are ordered interval by interval.
struct IntervalObservables {
  std::vector<Mat> ops;  // size 1 or 2
};
ProbDist multi_prob(const MultipleState& m, const std::vector<IntervalObservables>& per_interval);

enum class Boundary { In, Out };

// Born-rule distribution of A in the boundary density matrix rho_in
// (or rho_out): the one-condition reconstruction <E_aa, rho_in>.
ProbDist prob_one_condition(const TwoState& r, const Mat& a, Boundary side = Boundary::In);

// <rho_out, rho_in>; equals |<psi2|psi1>|^2 for generic states.
double transition_prob(const TwoState& r);

// A weak value with its conditioning number 1/|tr r| (large values flag
// superweak amplification near orthogonal conditions).
struct WeakValue {
  Complex value;
  double conditioning = 0.0;
};

// A_w = tr(A r)/tr r. A need not be Hermitian.
WeakValue weak_value(const TwoState& r, const Mat& a, double eps = kEpsPhys);

// The two-amplitude rho(a,b) read as the weak value of the (non-Hermitian)
// basis element: equals two_amplitude(r, basis, a, b)/tr(r), so it is
// invariant under rescaling of r and matches two_amplitude on normalized
// states.
WeakValue weak_value_offdiag(const TwoState& r, const TwoStateBasis& basis, Eigen::Index a,
                             Eigen::Index b, double eps = kEpsPhys);

// Weak moment Delta A_w^n = (A^n)_w - (A_w)^n; n = 1 vanishes identically.
// n = 2 controls the validity of the weak-measurement approximation.
Complex weak_moment(const TwoState& r, const Mat& a, int n, double eps = kEpsPhys);

}  // namespace tsqm

#endif  // TSQM_OBSERVABLES_HPP
