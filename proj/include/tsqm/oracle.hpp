#ifndef TSQM_ORACLE_HPP
#define TSQM_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "tsqm/observables.hpp"
#include "tsqm/types.hpp"

namespace tsqm::oracle {

// A textbook pre-selected / post-selected measurement sequence: ordinary
// projective (Lueders) measurements, optional unitaries in between. This is
// the reference path the two-state machinery is checked against, so it
// keeps its own projection and normalization code.
struct MeasurementChain {
  Vec pre;
  struct Step {
    Mat observable;
    bool record = true;  // unrecorded outcomes are summed over
  };
  std::vector<Step> steps;
  Vec post;
  // When nonempty: size steps+1, applied before step 1, between consecutive
  // steps, and before the post-selection.
  std::vector<Mat> unitaries;
};

// Exact conditional distribution of the recorded outcomes given a
// successful post-selection, by summing path weights
// ||<post| U P ... P U |pre>||^2 over all outcome paths.
ProbDist enumerate_conditional(const MeasurementChain& chain);

// Rejection-sampled version: simulate each trial with Born-rule draws and
// discard trials that fail the post-selection, until `trials` acceptances.
// Aborts with a diagnostic when the acceptance rate falls below 1e-6.
ProbDist sample_conditional(const MeasurementChain& chain, std::int64_t trials,
                            std::uint64_t seed);

}  // namespace tsqm::oracle

#endif  // TSQM_ORACLE_HPP
