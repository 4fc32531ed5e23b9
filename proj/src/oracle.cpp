#include "tsqm/oracle.hpp"

#include <map>

#include <Eigen/Eigenvalues>

#include "tsqm/rng.hpp"

namespace tsqm::oracle {

namespace {

// The oracle groups degenerate eigenvalues itself and projects with the
// stacked eigenvector matrix V (phi -> V V^dag phi) rather than reusing the
// two-state machinery's projector construction.
struct OutcomeSpace {
  double value;
  Mat vectors;  // columns span the eigenspace
};

std::vector<OutcomeSpace> outcome_spaces(const Mat& observable) {
  if (observable.rows() != observable.cols()) {
    throw DimensionError("oracle: observables must be square");
  }
  if ((observable - observable.adjoint()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, observable.cwiseAbs().maxCoeff())) {
    throw ValidationError("oracle: observables must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Mat> solver(observable);
  const RVec& vals = solver.eigenvalues();
  const double scale = std::max(1.0, vals[vals.size() - 1] - vals[0]);
  std::vector<OutcomeSpace> spaces;
  Eigen::Index k = 0;
  while (k < vals.size()) {
    Eigen::Index j = k;
    double sum = 0.0;
    while (j < vals.size() && vals[j] - vals[k] <= 1e-8 * scale) sum += vals[j++];
    spaces.push_back({sum / static_cast<double>(j - k),
                      solver.eigenvectors().middleCols(k, j - k)});
    k = j;
  }
  return spaces;
}

struct Prepared {
  Vec pre;
  Vec post;
  std::vector<std::vector<OutcomeSpace>> spaces;
  std::vector<bool> record;
  const std::vector<Mat>* unitaries;
};

Prepared prepare(const MeasurementChain& chain) {
  if (chain.pre.size() == 0 || chain.pre.size() != chain.post.size()) {
    throw DimensionError("oracle: pre/post dimension mismatch");
  }
  if (!chain.unitaries.empty() && chain.unitaries.size() != chain.steps.size() + 1) {
    throw ValidationError("oracle: need steps+1 unitaries (or none)");
  }
  Prepared p;
  p.pre = chain.pre / chain.pre.norm();
  p.post = chain.post / chain.post.norm();
  for (const auto& step : chain.steps) {
    if (step.observable.rows() != chain.pre.size()) {
      throw DimensionError("oracle: step dimension mismatch");
    }
    p.spaces.push_back(outcome_spaces(step.observable));
    p.record.push_back(step.record);
  }
  p.unitaries = &chain.unitaries;
  return p;
}

Vec apply_unitary(const Prepared& p, std::size_t slot, const Vec& phi) {
  if (p.unitaries->empty()) return phi;
  return (*p.unitaries)[slot] * phi;
}

using Key = std::vector<double>;

void enumerate_paths(const Prepared& p, std::size_t depth, const Vec& phi, Key& key,
                     std::map<Key, double>& weights) {
  if (depth == p.spaces.size()) {
    const Vec final_phi = apply_unitary(p, depth, phi);
    const double w = std::norm(p.post.dot(final_phi));
    weights[key] += w;
    return;
  }
  const Vec staged = apply_unitary(p, depth, phi);
  for (const auto& space : p.spaces[depth]) {
    const Vec projected = space.vectors * (space.vectors.adjoint() * staged);
    if (p.record[depth]) key.push_back(space.value);
    enumerate_paths(p, depth + 1, projected, key, weights);
    if (p.record[depth]) key.pop_back();
  }
}

ProbDist from_weights(const std::map<Key, double>& weights, const char* who) {
  double total = 0.0;
  for (const auto& [key, w] : weights) total += w;
  if (total <= 0.0) {
    throw ValidationError(std::string(who) + ": post-selection has zero total probability");
  }
  ProbDist dist;
  for (const auto& [key, w] : weights) {
    dist.labels.push_back(key);
    dist.probs.push_back(w / total);
  }
  return dist;
}

}  // namespace

ProbDist enumerate_conditional(const MeasurementChain& chain) {
  const Prepared p = prepare(chain);
  std::map<Key, double> weights;
  Key key;
  enumerate_paths(p, 0, p.pre, key, weights);
  return from_weights(weights, "enumerate_conditional");
}

ProbDist sample_conditional(const MeasurementChain& chain, std::int64_t trials,
                            std::uint64_t seed) {
  if (trials < 1) throw ValidationError("sample_conditional: trials must be positive");
  const Prepared p = prepare(chain);

  std::map<Key, double> counts;
  std::int64_t accepted = 0;
  std::int64_t proposals = 0;
  const std::int64_t kRateWindow = 2'000'000;

  while (accepted < trials) {
    if (proposals >= kRateWindow && accepted < proposals / 1'000'000) {
      throw std::runtime_error(
          "sample_conditional: acceptance rate below 1e-6 (" + std::to_string(accepted) +
          " acceptances in " + std::to_string(proposals) + " proposals); aborting");
    }
    auto rng = trial_rng(seed, static_cast<std::uint64_t>(proposals));
    ++proposals;

    Vec phi = p.pre;
    Key key;
    bool dead = false;
    for (std::size_t depth = 0; depth < p.spaces.size(); ++depth) {
      phi = apply_unitary(p, depth, phi);
      const double norm2 = phi.squaredNorm();
      if (norm2 <= 0.0) {
        dead = true;
        break;
      }
      double u = uniform01(rng) * norm2;
      std::size_t chosen = p.spaces[depth].size() - 1;
      Vec projected;
      for (std::size_t s = 0; s < p.spaces[depth].size(); ++s) {
        const auto& space = p.spaces[depth][s];
        Vec cand = space.vectors * (space.vectors.adjoint() * phi);
        const double w = cand.squaredNorm();
        if (u < w || s + 1 == p.spaces[depth].size()) {
          chosen = s;
          projected = std::move(cand);
          break;
        }
        u -= w;
      }
      if (p.record[depth]) key.push_back(p.spaces[depth][chosen].value);
      phi = std::move(projected);
    }
    if (dead) continue;
    phi = apply_unitary(p, p.spaces.size(), phi);
    const double norm2 = phi.squaredNorm();
    if (norm2 <= 0.0) continue;
    const double p_accept = std::norm(p.post.dot(phi)) / norm2;
    if (uniform01(rng) < p_accept) {
      counts[key] += 1.0;
      ++accepted;
    }
  }
  return from_weights(counts, "sample_conditional");
}

}  // namespace tsqm::oracle
