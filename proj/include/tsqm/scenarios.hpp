#ifndef TSQM_SCENARIOS_HPP
#define TSQM_SCENARIOS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tsqm/measurement.hpp"
#include "tsqm/observables.hpp"

namespace tsqm {

// Scenario engines expose only condition-setting and two-state queries;
// there is no state-update operation anywhere in this library, so no
// scenario can invoke one.

struct Assertion {
  std::string name;
  Complex expected;
  Complex actual;
  double tolerance = 0.0;
  bool relative = false;
  bool pass = false;
};

struct ScenarioResult {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::map<std::string, Complex> scalars;
  std::map<std::string, ProbDist> distributions;
  std::vector<Assertion> assertions;
  std::vector<std::string> notes;

  bool all_pass() const;
  Assertion& check(const std::string& name, Complex expected, Complex actual, double tolerance,
                   bool relative = false);
};

// EPR pair in a singlet: particle 1 found with `outcome1` along n1, query
// the distribution of particle 2 along n2. Probabilities come from the
// boundary-condition construction (rho_out against rho_in per candidate
// final condition) and are checked against standard singlet statistics and
// for invariance under the order local conditions are imposed in.
ScenarioResult epr_scenario(const std::array<double, 3>& n1, const std::array<double, 3>& n2,
                            int outcome1);

struct CollapseDetectorConfig {
  bool epr = false;            // false: single qubit prepared in |up_z>
  std::optional<Mat> disturbance;  // observable measured between the two couplings
  double pointer_width = 1.0;
  double g0 = 8.0;             // snapped internally to a grid multiple
  Eigen::Index grid_points = 512;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
};

// The collapse detector: one device coupled to sigma_z with opposite signs
// at -xi and +xi reads delta_pi = g0 (sigma_z(xi) - sigma_z(-xi)). An
// undisturbed interval forces delta_pi = 0 with probability 1; an
// intermediate incompatible measurement makes delta_pi != 0 likely; in the
// EPR mode a remote measurement on the partner never moves the detector.
ScenarioResult collapse_detector(const CollapseDetectorConfig& cfg);

struct RepeatedMeasurementsConfig {
  Mat a;
  Mat b;
  Vec initial;
  int final_bases = 5;
  std::uint64_t seed = 1;
};

// Two successive recorded measurements with delayed readout, described by
// three-interval condition chains. Verifies the one-condition sum rule
// (the Born distribution of the initial state, independent of the final
// basis) and that measuring the same observable twice forces identical
// outcomes because every mismatched chain has a vanishing overlap.
ScenarioResult repeated_measurements(const RepeatedMeasurementsConfig& cfg);

struct SpinIntermediateConfig {
  int n = 40;                  // total spin; 10..44
  Complex a_weight{1.0, 0.0};  // branch coefficients of rho = a rho_+ + b rho_-
  Complex b_weight{1.0, 0.0};
  double g0 = 0.0;
  double dq = 0.5;             // initial spread of the conjugate variable
  std::int64_t trials = 10000;
  std::uint64_t seed = 1;
};

// The large-spin two-scale experiment: pre a'|Lx=N> + b'|Lx=-N>, post
// |Ly=N>, observable (Lx+Ly)/sqrt(2). Reports exact weak values, branch
// weak values and weak moments, the regime classification, and the pointer
// readout appropriate to the coupling window (weak or intermediate).
ScenarioResult spin_intermediate(const SpinIntermediateConfig& cfg);

}  // namespace tsqm

#endif  // TSQM_SCENARIOS_HPP
