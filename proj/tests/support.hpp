#ifndef TSQM_TESTS_SUPPORT_HPP
#define TSQM_TESTS_SUPPORT_HPP

#include <cstdint>

#include "tsqm/linalg.hpp"
#include "tsqm/observables.hpp"
#include "tsqm/rng.hpp"
#include "tsqm/two_state.hpp"

namespace tsqm::test {

inline Mat random_matrix(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Mat m(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      m(r, c) = Complex(standard_normal(rng), standard_normal(rng));
    }
  }
  return m;
}

inline Mat random_hermitian(Eigen::Index dim, std::uint64_t seed) {
  const Mat x = random_matrix(dim, seed);
  return 0.5 * (x + x.adjoint());
}

inline std::vector<Vec> random_orthobasis(Eigen::Index dim, std::uint64_t seed) {
  return eig_hermitian(random_hermitian(dim, seed)).vectors;
}

// Two random states whose overlap is bounded away from zero, so the
// generic two-state is well conditioned.
inline std::pair<Vec, Vec> random_condition_pair(Eigen::Index dim, std::uint64_t seed,
                                                 double min_overlap = 0.05) {
  for (std::uint64_t k = 0;; ++k) {
    const Vec a = random_state(dim, seed_mix(seed, 2 * k));
    const Vec b = random_state(dim, seed_mix(seed, 2 * k + 1));
    if (std::abs(b.dot(a)) >= min_overlap) return {a, b};
  }
}

inline TwoState random_generic(Eigen::Index dim, std::uint64_t seed) {
  const auto [a, b] = random_condition_pair(dim, seed);
  return make_generic(a, b);
}

inline double dist_max_diff(const ProbDist& x, const ProbDist& y) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.labels.size(); ++i) {
    worst = std::max(worst, std::abs(x.probs[i] - y.prob_of(x.labels[i])));
  }
  for (std::size_t i = 0; i < y.labels.size(); ++i) {
    worst = std::max(worst, std::abs(y.probs[i] - x.prob_of(y.labels[i])));
  }
  return worst;
}

// 3-sigma binomial comparison of a sampled distribution against an exact one.
inline bool within_mc_error(const ProbDist& exact, const ProbDist& sampled, double trials,
                            double n_sigma = 3.0) {
  for (std::size_t i = 0; i < exact.labels.size(); ++i) {
    const double p = exact.probs[i];
    const double sigma = std::sqrt(std::max(p * (1.0 - p), 1e-12) / trials);
    if (std::abs(sampled.prob_of(exact.labels[i]) - p) > n_sigma * sigma + 2.0 / trials) {
      return false;
    }
  }
  return true;
}

}  // namespace tsqm::test

#endif
