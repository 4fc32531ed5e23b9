#ifndef TSQM_MEASUREMENT_HPP
#define TSQM_MEASUREMENT_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "tsqm/observables.hpp"
#include "tsqm/pointer.hpp"
#include "tsqm/two_state.hpp"

namespace tsqm {

// Impulsive von Neumann coupling H = g0 delta(t) q A between the measured
// system and the pointer (finite-duration couplings are out of scope).
struct CouplingSpec {
  double g0 = 0.0;
  Mat observable;  // Hermitian
};

enum class Regime { Weak, Strong, Intermediate, Unresolved };

struct RegimeThresholds {
  double strong_ratio = 0.1;     // dpi/g0 below this fraction of the minimal gap
  double weak_criterion = 1e-3;  // g0^2 |Delta A_w^2| dq^2 below this
  double branch_criterion = 0.2; // per-branch version for the intermediate regime
};

struct RegimeReport {
  Regime regime = Regime::Unresolved;
  double strong_ratio = 0.0;               // (dpi/g0) / min eigenvalue gap
  double weak_criterion = 0.0;             // g0^2 |Delta A_w^2| dq^2
  std::vector<double> branch_criteria;     // one per decomposition branch
  RegimeThresholds thresholds;
};

const char* regime_name(Regime r);

// Exact post-selected pointer state after the impulsive coupling:
//   Phi_f(pi) proportional to sum_a <psi2|P_a|psi1> Phi0(pi - g0 a),
// with Phi0 resampled analytically at the shifted abscissae. Throws when
// the post-selection cancels the state to numerical noise.
PointerState pointer_final(const Vec& psi1, const Vec& psi2, const CouplingSpec& c,
                           const PointerState& p0);

// Strong readout: sample pi from |Phi_f|^2 and bin to the nearest g0*a.
// The regime condition dpi/g0 << min gap is reported, not enforced (sweeps
// cross it deliberately). Exact midpoints bin to the lower eigenvalue.
struct StrongReadout {
  ProbDist dist;
  double accuracy_ratio = 0.0;  // (dpi/g0) / min gap
  bool regime_ok = false;
};
StrongReadout strong_readout(const Vec& psi1, const Vec& psi2, const CouplingSpec& c,
                             const PointerState& p0, std::int64_t trials, std::uint64_t seed);

// Weak readout of the complex weak value from the two pointer quadratures:
//   estimate = (<pi>_f - <pi>_0)/g0 + i (<q>_f - <q>_0)/(g0 kappa)
// with kappa = 2 Var_q(Phi0), the calibration constant for which the
// identity observable reads exactly 1 + 0i.
struct WeakReadout {
  Complex estimate;
  double criterion = 0.0;  // g0^2 |Delta A_w^2| dq^2
  bool regime_ok = false;
  double kappa = 0.0;
};
// eps is the non-orthogonality cutoff for the boundary conditions; superweak
// setups (exponentially small but exactly known overlaps) may lower it.
WeakReadout weak_readout(const Vec& psi1, const Vec& psi2, const CouplingSpec& c,
                         const PointerState& p0, double eps = kEpsPhys);

// Measure the off-diagonal two-amplitude rho(a,b) by coupling through an
// auxiliary large spin (dimension 2*N_aux+1) pre-selected at Lz = N and
// post-selected at Lx = N. The highest-weight selection kills the raising
// path exactly, leaving an effective coupling to the non-Hermitian element
// probe; the exact auxiliary gain (L-)_w/(sqrt(2) N) is divided out.
struct OffdiagReadout {
  Complex estimate;
  double criterion = 0.0;
  bool regime_ok = false;
  Complex aux_gain;  // (L-)_w / (sqrt(2) N_aux)
};
OffdiagReadout offdiag_readout(const Vec& psi1, const Vec& psi2, const Vec& a, const Vec& b,
                               int n_aux, const CouplingSpec& c, const PointerState& p0);

// A decomposition of the system two-state into normalized branches,
// r = sum_k coeff_k * branch_k.
struct Branch {
  Complex coeff;
  TwoState state;
};

// Classify the coupling into weak / strong / intermediate / unresolved.
// Weak is checked first so the degenerate eigenstate case (Delta A_w^2 = 0)
// reports weak regardless of the coupling strength. Intermediate requires
// the global weak criterion to fail while every branch criterion passes.
RegimeReport classify_regime(const Vec& psi1, const Vec& psi2, const CouplingSpec& c,
                             const PointerState& p0,
                             const std::vector<Branch>& decomposition = {},
                             const RegimeThresholds& thresholds = {}, double eps = kEpsPhys);

// Intermediate-regime readout: Monte Carlo over branch selection with
// probability |coeff_k|^2 / sum, each trial sampling the pointer of its
// branch; the sample mean estimates the averaged weak value
// sum |a_k|^2 (A_w)_k / sum |a_k|^2, which is also returned in closed form.
// Branches must be generic two-states.
struct IntermediateReadout {
  double pointer_estimate = 0.0;
  Complex closed_form;
  bool regime_ok = false;
};
IntermediateReadout intermediate_readout(const Vec& psi1, const Vec& psi2, const CouplingSpec& c,
                                         const PointerState& p0,
                                         const std::vector<Branch>& decomposition,
                                         std::int64_t trials, std::uint64_t seed,
                                         double eps = kEpsPhys);

}  // namespace tsqm

#endif  // TSQM_MEASUREMENT_HPP
