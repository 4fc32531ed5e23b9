#ifndef TSQM_MULTISTATE_HPP
#define TSQM_MULTISTATE_HPP

#include <utility>
#include <vector>

#include "tsqm/two_state.hpp"

namespace tsqm {

// A multiple-state over N time intervals (N+1 sequential conditions):
// a weighted sum of tensor products of per-interval two-states. Kept as an
// explicit sum of products so interval structure stays queryable; memory is
// O(terms * N * dim^2). Probability evaluation flattens on the fly.
class MultipleState {
public:
  struct Term {
    Complex coeff;
    std::vector<TwoState> factors;  // one per interval
  };

  MultipleState(std::vector<Term> terms);

  int intervals() const { return static_cast<int>(dims_.size()); }
  const std::vector<Eigen::Index>& dims() const { return dims_; }
  const std::vector<Term>& terms() const { return terms_; }

  // Product of factor traces summed with coefficients; must be nonzero for
  // a physical multiple-state.
  Complex total_trace() const;

private:
  std::vector<Term> terms_;
  std::vector<Eigen::Index> dims_;
};

// Generic multiple-state from N+1 sequential conditions: the single-term
// product of normalized per-interval two-states |psi_i><psi_{i+1}|/<...>.
// A vanishing consecutive overlap names the offending interval.
MultipleState make_generic_multi(const std::vector<Vec>& conditions, double eps = kEpsPhys);

// Sesquilinear extension of the per-interval inner product over terms.
Complex multi_inner(const MultipleState& m1, const MultipleState& m2);

// Expansion coefficient of m over the product basis element with label
// pair (a_i, b_i) at each interval; one TwoStateBasis per interval.
Complex multi_amplitude(const MultipleState& m, const std::vector<TwoStateBasis>& bases,
                        const std::vector<std::pair<Eigen::Index, Eigen::Index>>& labels);

}  // namespace tsqm

#endif  // TSQM_MULTISTATE_HPP
