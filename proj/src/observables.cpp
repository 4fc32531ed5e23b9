#include "tsqm/observables.hpp"

#include "tsqm/linalg.hpp"

namespace tsqm {

double ProbDist::prob_of(const std::vector<double>& label, double label_tol) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i].size() != label.size()) continue;
    bool match = true;
    for (std::size_t k = 0; k < label.size(); ++k) {
      if (std::abs(labels[i][k] - label[k]) > label_tol) {
        match = false;
        break;
      }
    }
    if (match) return probs[i];
  }
  return 0.0;
}

namespace {

ProbDist normalize_weights(std::vector<std::vector<double>> labels, std::vector<double> weights,
                           const char* who) {
  double total = 0.0;
  for (const double w : weights) total += w;
  if (total <= 0.0) {
    throw ValidationError(std::string(who) +
                          ": post-selection incompatible (all outcome amplitudes vanish)");
  }
  for (double& w : weights) w /= total;
  return ProbDist{std::move(labels), std::move(weights)};
}

}  // namespace

ProbDist abl_prob(const TwoState& r, const Mat& a) {
  if (a.rows() != r.dim()) throw DimensionError("abl_prob: dimension mismatch");
  if (!r.physical()) {
    throw UnphysicalTwoStateError("abl_prob: two-state is not physical", std::abs(r.trace()));
  }
  const auto spaces = eigenspaces(a);
  std::vector<std::vector<double>> labels;
  std::vector<double> weights;
  labels.reserve(spaces.size());
  weights.reserve(spaces.size());
  for (const auto& s : spaces) {
    const Complex amp = (s.projector * r.mat()).trace();  // rho(a,a)
    labels.push_back({s.value});
    weights.push_back(std::norm(amp));
  }
  return normalize_weights(std::move(labels), std::move(weights), "abl_prob");
}

double strong_expectation(const TwoState& r, const Mat& a) {
  const ProbDist dist = abl_prob(r, a);
  double mean = 0.0;
  for (std::size_t i = 0; i < dist.probs.size(); ++i) mean += dist.labels[i][0] * dist.probs[i];
  return mean;
}

ProbDist joint_prob(const TwoState& r, const Mat& a, const Mat& b) {
  if (a.rows() != r.dim() || b.rows() != r.dim()) {
    throw DimensionError("joint_prob: dimension mismatch");
  }
  if (!r.physical()) {
    throw UnphysicalTwoStateError("joint_prob: two-state is not physical", std::abs(r.trace()));
  }
  const auto sa = eigenspaces(a);
  const auto sb = eigenspaces(b);
  std::vector<std::vector<double>> labels;
  std::vector<double> weights;
  for (const auto& pa : sa) {
    const Mat left = pa.projector * r.mat();
    for (const auto& pb : sb) {
      const Complex amp = (left * pb.projector).trace();  // rho(a,b)
      labels.push_back({pa.value, pb.value});
      weights.push_back(std::norm(amp));
    }
  }
  return normalize_weights(std::move(labels), std::move(weights), "joint_prob");
}

ProbDist multi_prob(const MultipleState& m, const std::vector<IntervalObservables>& per_interval) {
  if (static_cast<int>(per_interval.size()) != m.intervals()) {
    throw ValidationError("multi_prob: need one observable set per interval");
  }
  std::size_t total_ops = 0;
  for (std::size_t i = 0; i < per_interval.size(); ++i) {
    const auto& ops = per_interval[i].ops;
    if (ops.size() > 2) throw ValidationError("multi_prob: at most two observables per interval");
    for (const Mat& op : ops) {
      if (op.rows() != m.dims()[i]) {
        throw DimensionError("multi_prob: observable dimension mismatch at interval " +
                             std::to_string(i));
      }
    }
    total_ops += ops.size();
  }
  if (total_ops == 0) throw ValidationError("multi_prob: empty observable set");

  // Per interval, the list of (label tuple, P_left, P_right) choices; a
  // single observable contributes the doubled label with P_left = P_right.
  struct Choice {
    std::vector<double> label;
    Mat left, right;
  };
  std::vector<std::vector<Choice>> choices(per_interval.size());
  for (std::size_t i = 0; i < per_interval.size(); ++i) {
    const auto& ops = per_interval[i].ops;
    if (ops.empty()) {
      choices[i].push_back({{}, Mat::Identity(m.dims()[i], m.dims()[i]),
                            Mat::Identity(m.dims()[i], m.dims()[i])});
      continue;
    }
    const auto sa = eigenspaces(ops.front());
    if (ops.size() == 1) {
      for (const auto& s : sa) choices[i].push_back({{s.value}, s.projector, s.projector});
    } else {
      const auto sb = eigenspaces(ops.back());
      for (const auto& pa : sa)
        for (const auto& pb : sb)
          choices[i].push_back({{pa.value, pb.value}, pa.projector, pb.projector});
    }
  }

  std::vector<std::vector<double>> labels;
  std::vector<double> weights;
  std::vector<std::size_t> idx(per_interval.size(), 0);
  while (true) {
    // amplitude = sum over terms of coeff * prod_i tr(P_left rho_i P_right)
    Complex amp = 0.0;
    for (const auto& t : m.terms()) {
      Complex p = t.coeff;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const Choice& c = choices[i][idx[i]];
        p *= (c.left * t.factors[i].mat() * c.right).trace();
      }
      amp += p;
    }
    std::vector<double> label;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      const auto& l = choices[i][idx[i]].label;
      label.insert(label.end(), l.begin(), l.end());
    }
    labels.push_back(std::move(label));
    weights.push_back(std::norm(amp));

    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < choices[i].size()) break;
      idx[i] = 0;
    }
    if (i == idx.size()) break;
  }
  return normalize_weights(std::move(labels), std::move(weights), "multi_prob");
}

ProbDist prob_one_condition(const TwoState& r, const Mat& a, Boundary side) {
  if (a.rows() != r.dim()) throw DimensionError("prob_one_condition: dimension mismatch");
  const Mat rho = side == Boundary::In ? rho_in(r) : rho_out(r);
  const auto spaces = eigenspaces(a);
  std::vector<std::vector<double>> labels;
  std::vector<double> weights;
  for (const auto& s : spaces) {
    labels.push_back({s.value});
    weights.push_back(std::max(0.0, std::real((s.projector * rho).trace())));
  }
  return normalize_weights(std::move(labels), std::move(weights), "prob_one_condition");
}

double transition_prob(const TwoState& r) {
  return std::real((rho_out(r) * rho_in(r)).trace());
}

WeakValue weak_value(const TwoState& r, const Mat& a, double eps) {
  if (a.rows() != r.dim()) throw DimensionError("weak_value: dimension mismatch");
  const Complex tr = r.trace();
  if (std::abs(tr) <= eps) {
    throw UnphysicalTwoStateError(
        "weak_value: conditions are (near-)orthogonal, weak value diverges", std::abs(tr));
  }
  return WeakValue{(a * r.mat()).trace() / tr, 1.0 / std::abs(tr)};
}

WeakValue weak_value_offdiag(const TwoState& r, const TwoStateBasis& basis, Eigen::Index a,
                             Eigen::Index b, double eps) {
  // The projection onto element (a,b) is the weak value of its adjoint,
  // scaled by the element norm: tr(E_ab^dag r)/tr(r) / <E_ab,E_ab>.
  const Mat probe = basis.element(a, b).mat().adjoint();
  WeakValue w = weak_value(r, probe, eps);
  w.value /= basis.element_norm2(a, b);
  return w;
}

Complex weak_moment(const TwoState& r, const Mat& a, int n, double eps) {
  if (n < 1) throw ValidationError("weak_moment: n must be >= 1");
  if (n == 1) return Complex(0.0, 0.0);
  Mat power = a;
  for (int k = 1; k < n; ++k) power = Mat(power * a);
  const Complex an_w = weak_value(r, power, eps).value;
  const Complex aw = weak_value(r, a, eps).value;
  return an_w - std::pow(aw, n);
}

}  // namespace tsqm
