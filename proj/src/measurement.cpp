#include "tsqm/measurement.hpp"

#include <limits>

#include "tsqm/linalg.hpp"
#include "tsqm/rng.hpp"
#include "tsqm/spin.hpp"

namespace tsqm {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Weak: return "weak";
    case Regime::Strong: return "strong";
    case Regime::Intermediate: return "intermediate";
    default: return "unresolved";
  }
}

namespace {

struct ShiftTerm {
  double eigenvalue;
  Complex weight;  // <psi2|P_a|psi1>
};

std::vector<ShiftTerm> shift_terms(const Vec& psi1, const Vec& psi2, const Mat& observable) {
  if (psi1.size() != psi2.size() || psi1.size() != observable.rows()) {
    throw DimensionError("pointer measurement: dimension mismatch");
  }
  std::vector<ShiftTerm> terms;
  for (const auto& space : eigenspaces(observable)) {
    terms.push_back({space.value, psi2.dot(space.projector * psi1)});
  }
  return terms;
}

double min_gap(const std::vector<ShiftTerm>& terms) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
    gap = std::min(gap, terms[i + 1].eigenvalue - terms[i].eigenvalue);
  }
  return gap;
}

}  // namespace

PointerState pointer_final(const Vec& psi1, const Vec& psi2, const CouplingSpec& c,
                           const PointerState& p0) {
  const auto terms = shift_terms(psi1, psi2, c.observable);

  Vec amps = Vec::Zero(p0.points());
  double weight_scale = 0.0;
  Complex weight_sum = 0.0;
  for (const auto& t : terms) {
    weight_scale += std::abs(t.weight);
    weight_sum += t.weight;
    if (t.weight == Complex(0.0, 0.0)) continue;
    for (Eigen::Index j = 0; j < p0.points(); ++j) {
      amps[j] += t.weight * p0.profile_at(p0.pi_at(j) - c.g0 * t.eigenvalue);
    }
  }
  // Strip the post-selection's irrelevant global phase when it is resolvable,
  // so a vanishing coupling returns Phi0 itself.
  if (std::abs(weight_sum) > 1e-12 * weight_scale) {
    amps *= std::conj(weight_sum) / std::abs(weight_sum);
  }
  const double norm = std::sqrt(amps.squaredNorm() * p0.dpi());
  // Relative to the incoherent scale of the contributions: below this the
  // post-selected state is pure cancellation noise.
  if (norm <= 1e-14 * weight_scale || weight_scale == 0.0) {
    throw ValidationError(
        "pointer_final: post-selection is incompatible (final pointer state vanishes)");
  }
  PointerState out(p0.points(), p0.dpi(), p0.grid_center(), std::move(amps));
  if (out.edge_fraction() > 1e-8) {
    throw ValidationError(
        "pointer_final: pointer grid too narrow for the shifted state (amplitude at the grid "
        "edge exceeds 1e-8 of the peak); widen the grid");
  }
  return out;
}

StrongReadout strong_readout(const Vec& psi1, const Vec& psi2, const CouplingSpec& c,
                             const PointerState& p0, std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw ValidationError("strong_readout: trials must be positive");
  if (c.g0 == 0.0) throw ValidationError("strong_readout: g0 must be nonzero");
  const auto terms = shift_terms(psi1, psi2, c.observable);
  const PointerState pf = pointer_final(psi1, psi2, c, p0);

  StrongReadout out;
  out.accuracy_ratio = (p0.profile_width() / std::abs(c.g0)) / min_gap(terms);
  out.regime_ok = out.accuracy_ratio < 0.1;

  std::vector<std::int64_t> counts(terms.size(), 0);
  const double center0 = p0.mean_pi();
  for (std::int64_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    const double shift = pf.sample(rng) - center0;
    // Nearest eigenvalue shift; ties within 1e-9 go to the lower eigenvalue.
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const double d = std::abs(shift - c.g0 * terms[k].eigenvalue);
      if (d < best_dist - 1e-9) {
        best_dist = d;
        best = k;
      }
    }
    ++counts[best];
  }
  for (std::size_t k = 0; k < terms.size(); ++k) {
    out.dist.labels.push_back({terms[k].eigenvalue});
    out.dist.probs.push_back(static_cast<double>(counts[k]) / static_cast<double>(trials));
  }
  return out;
}

WeakReadout weak_readout(const Vec& psi1, const Vec& psi2, const CouplingSpec& c,
                         const PointerState& p0, double eps) {
  if (c.g0 == 0.0) throw ValidationError("weak_readout: g0 must be nonzero");
  WeakReadout out;
  out.kappa = 2.0 * p0.var_q();

  const TwoState r = make_generic(psi1, psi2, nullptr, eps);
  out.criterion = c.g0 * c.g0 * std::abs(weak_moment(r, c.observable, 2)) * p0.var_q();
  out.regime_ok = out.criterion < 1e-3;

  const PointerState pf = pointer_final(psi1, psi2, c, p0);
  const double re = (pf.mean_pi() - p0.mean_pi()) / c.g0;
  const double im = (pf.mean_q() - p0.mean_q()) / (c.g0 * out.kappa);
  out.estimate = Complex(re, im);
  return out;
}

OffdiagReadout offdiag_readout(const Vec& psi1, const Vec& psi2, const Vec& a, const Vec& b,
                               int n_aux, const CouplingSpec& c, const PointerState& p0) {
  if (n_aux < 2) throw ValidationError("offdiag_readout: auxiliary spin must have N >= 2");
  if (a.size() != psi1.size() || b.size() != psi1.size()) {
    throw DimensionError("offdiag_readout: basis vector dimension mismatch");
  }
  const Vec an = a / a.norm();
  const Vec bn = b / b.norm();

  // Probe whose weak value is the two-amplitude rho(a,b) = <a|r|b><b|a>.
  const Complex overlap_ba = bn.dot(an);  // <b|a>
  if (std::abs(overlap_ba) <= kEpsPhys) {
    throw ValidationError("offdiag_readout: <b|a> vanishes, element is outside any valid basis");
  }
  const Mat probe = overlap_ba * (bn * an.adjoint());

  const SpinOps aux = spin_ops(n_aux);
  Vec aux_pre = Vec::Zero(aux.two_l_plus_1);
  aux_pre[aux.two_l_plus_1 - 1] = 1.0;  // Lz = +N
  const Vec aux_post = spin_eigenstate(aux.lx, aux.two_l_plus_1 - 1);  // Lx = +N

  const Complex aux_overlap = aux_post.dot(aux_pre);
  if (std::abs(aux_overlap) <= 1e-300) {
    throw ValidationError("offdiag_readout: auxiliary post-selection incompatible");
  }
  const Complex lminus_w = aux_post.dot(aux.lminus * aux_pre) / aux_overlap;

  const double scale = 1.0 / (std::sqrt(2.0) * static_cast<double>(n_aux));
  const Mat coupling_op =
      scale * (tensor(Mat(probe.adjoint()), aux.lplus) + tensor(probe, aux.lminus));

  const Vec joint_pre = tensor(Vec(psi1 / psi1.norm()), aux_pre);
  const Vec joint_post = tensor(Vec(psi2 / psi2.norm()), aux_post);

  // The joint overlap is exponentially small in N_aux by construction, so
  // the physicality cutoff is relaxed; conditioning shows up in the result.
  const WeakReadout wr = weak_readout(joint_pre, joint_post, {c.g0, coupling_op}, p0, 1e-14);

  OffdiagReadout out;
  out.aux_gain = scale * lminus_w;
  if (std::abs(out.aux_gain) <= 0.0) {
    throw ValidationError("offdiag_readout: auxiliary gain vanished");
  }
  out.estimate = wr.estimate / out.aux_gain;
  out.criterion = wr.criterion;
  out.regime_ok = wr.regime_ok;
  return out;
}

RegimeReport classify_regime(const Vec& psi1, const Vec& psi2, const CouplingSpec& c,
                             const PointerState& p0, const std::vector<Branch>& decomposition,
                             const RegimeThresholds& thresholds, double eps) {
  const TwoState r = make_generic(psi1, psi2, nullptr, eps);
  RegimeReport report;
  report.thresholds = thresholds;

  const auto terms = shift_terms(psi1, psi2, c.observable);
  const double gap = min_gap(terms);
  report.strong_ratio = c.g0 == 0.0 ? std::numeric_limits<double>::infinity()
                                    : (p0.profile_width() / std::abs(c.g0)) / gap;
  const double dq2 = p0.var_q();
  report.weak_criterion = c.g0 * c.g0 * std::abs(weak_moment(r, c.observable, 2)) * dq2;

  if (!decomposition.empty()) {
    Mat sum = Mat::Zero(r.dim(), r.dim());
    for (const auto& br : decomposition) sum += br.coeff * br.state.mat();
    const double scale = std::max(1.0, r.mat().cwiseAbs().maxCoeff());
    if ((sum - r.mat()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
      throw ValidationError("classify_regime: decomposition does not reconstruct the two-state");
    }
    for (const auto& br : decomposition) {
      report.branch_criteria.push_back(
          c.g0 * c.g0 * std::abs(weak_moment(br.state, c.observable, 2)) * dq2);
    }
  }

  if (report.weak_criterion < thresholds.weak_criterion) {
    report.regime = Regime::Weak;
  } else if (report.strong_ratio < thresholds.strong_ratio) {
    report.regime = Regime::Strong;
  } else if (!report.branch_criteria.empty()) {
    bool all_ok = true;
    for (const double q : report.branch_criteria) all_ok = all_ok && q < thresholds.branch_criterion;
    report.regime = all_ok ? Regime::Intermediate : Regime::Unresolved;
  }
  return report;
}

IntermediateReadout intermediate_readout(const Vec& psi1, const Vec& psi2, const CouplingSpec& c,
                                         const PointerState& p0,
                                         const std::vector<Branch>& decomposition,
                                         std::int64_t trials, std::uint64_t seed, double eps) {
  if (decomposition.empty()) throw ValidationError("intermediate_readout: empty decomposition");
  if (trials < 1) throw ValidationError("intermediate_readout: trials must be positive");
  if (c.g0 == 0.0) throw ValidationError("intermediate_readout: g0 must be nonzero");

  const RegimeReport report = classify_regime(psi1, psi2, c, p0, decomposition, {}, eps);

  IntermediateReadout out;
  out.regime_ok = report.regime == Regime::Intermediate;

  // Closed form: sum |a_k|^2 (A_w)_k / sum |a_k|^2.
  double wsum = 0.0;
  Complex avg = 0.0;
  std::vector<double> pick_weights;
  std::vector<PointerState> branch_pointers;
  pick_weights.reserve(decomposition.size());
  branch_pointers.reserve(decomposition.size());
  for (const auto& br : decomposition) {
    const double w = std::norm(br.coeff);
    const Complex aw = weak_value(br.state, c.observable).value;
    wsum += w;
    avg += w * aw;
    pick_weights.push_back(w);

    if (!is_generic(br.state)) {
      throw ValidationError("intermediate_readout: decomposition branches must be generic");
    }
    // Extract the branch boundary states to drive the pointer simulation;
    // overall phases drop out of |Phi_f|^2.
    const EigenSystem in = eig_hermitian(rho_in(br.state));
    const EigenSystem outd = eig_hermitian(rho_out(br.state));
    const Vec pre = in.vectors.back();
    const Vec post = outd.vectors.back();
    branch_pointers.push_back(pointer_final(pre, post, c, p0));
  }
  if (wsum <= 0.0) throw ValidationError("intermediate_readout: decomposition has zero weight");
  out.closed_form = avg / wsum;

  // Per trial: select the branch (probability |a_k|^2 / sum), then read one
  // pointer sample from it. Presized accumulation keeps the reduction
  // order-independent.
  std::vector<double> samples(static_cast<std::size_t>(trials));
  const double center0 = p0.mean_pi();
  for (std::int64_t t = 0; t < trials; ++t) {
    auto rng = trial_rng(seed, static_cast<std::uint64_t>(t));
    double u = uniform01(rng) * wsum;
    std::size_t k = pick_weights.size() - 1;
    for (std::size_t i = 0; i < pick_weights.size(); ++i) {
      if (u < pick_weights[i]) {
        k = i;
        break;
      }
      u -= pick_weights[i];
    }
    samples[static_cast<std::size_t>(t)] = branch_pointers[k].sample(rng) - center0;
  }
  double mean = 0.0;
  for (const double s : samples) mean += s;
  mean /= static_cast<double>(trials);
  out.pointer_estimate = mean / c.g0;
  return out;
}

}  // namespace tsqm
