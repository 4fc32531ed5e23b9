#include "tsqm/multistate.hpp"

namespace tsqm {

MultipleState::MultipleState(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw ValidationError("MultipleState: need at least one term");
  const std::size_t n = terms_.front().factors.size();
  if (n == 0) throw ValidationError("MultipleState: need at least one interval");
  dims_.reserve(n);
  for (const TwoState& f : terms_.front().factors) dims_.push_back(f.dim());
  for (const Term& t : terms_) {
    if (t.factors.size() != n) {
      throw DimensionError("MultipleState: terms disagree on interval count");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (t.factors[i].dim() != dims_[i]) {
        throw DimensionError("MultipleState: terms disagree on per-interval dimensions");
      }
    }
  }
}

Complex MultipleState::total_trace() const {
  Complex total = 0.0;
  for (const Term& t : terms_) {
    Complex p = t.coeff;
    for (const TwoState& f : t.factors) p *= f.trace();
    total += p;
  }
  return total;
}

MultipleState make_generic_multi(const std::vector<Vec>& conditions, double eps) {
  if (conditions.size() < 2) {
    throw ValidationError("make_generic_multi: need at least two conditions");
  }
  MultipleState::Term term;
  term.coeff = 1.0;
  term.factors.reserve(conditions.size() - 1);
  for (std::size_t i = 0; i + 1 < conditions.size(); ++i) {
    try {
      term.factors.push_back(make_generic(conditions[i], conditions[i + 1], nullptr, eps));
    } catch (const UnphysicalTwoStateError& e) {
      throw UnphysicalTwoStateError(
          "make_generic_multi: conditions at interval " + std::to_string(i) +
              " are orthogonal (" + e.what() + ")",
          e.overlap_magnitude());
    }
  }
  return MultipleState({std::move(term)});
}

Complex multi_inner(const MultipleState& m1, const MultipleState& m2) {
  if (m1.dims() != m2.dims()) throw DimensionError("multi_inner: shape mismatch");
  Complex total = 0.0;
  for (const auto& t1 : m1.terms()) {
    for (const auto& t2 : m2.terms()) {
      Complex p = std::conj(t1.coeff) * t2.coeff;
      for (std::size_t i = 0; i < t1.factors.size(); ++i) {
        p *= inner(t1.factors[i], t2.factors[i]);
      }
      total += p;
    }
  }
  return total;
}

Complex multi_amplitude(const MultipleState& m, const std::vector<TwoStateBasis>& bases,
                        const std::vector<std::pair<Eigen::Index, Eigen::Index>>& labels) {
  const std::size_t n = static_cast<std::size_t>(m.intervals());
  if (bases.size() != n || labels.size() != n) {
    throw ValidationError("multi_amplitude: need one basis and one label pair per interval");
  }
  // <E, m> / <E, E> factorizes over intervals for each term of m.
  Complex total = 0.0;
  for (const auto& t : m.terms()) {
    Complex p = t.coeff;
    for (std::size_t i = 0; i < n; ++i) {
      const TwoState e = bases[i].element(labels[i].first, labels[i].second);
      p *= inner(e, t.factors[i]) / bases[i].element_norm2(labels[i].first, labels[i].second);
    }
    total += p;
  }
  return total;
}

}  // namespace tsqm
