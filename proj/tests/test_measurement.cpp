#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "tsqm/measurement.hpp"
#include "tsqm/spin.hpp"

using namespace tsqm;

namespace {

Vec ket(std::initializer_list<Complex> amps) {
  Vec v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (const Complex c : amps) v[i++] = c;
  return v;
}

const double s = 1.0 / std::sqrt(2.0);
const Vec up_x = ket({s, s});
const Vec up_y = ket({s, Complex(0, 1) * s});
const Vec up_z = ket({1, 0});

PointerState standard_pointer(double width = 1.0, Eigen::Index m = 512, double tail = 10.0) {
  return PointerState::gaussian(m, 2.0 * tail * width / static_cast<double>(m), width);
}

}  // namespace

TEST_CASE("gaussian pointer moments") {
  const PointerState p = standard_pointer(0.7);
  CHECK(std::abs(p.mean_pi()) < 1e-10);
  CHECK(std::abs(p.var_pi() - 0.49) / 0.49 < 0.02);
  // conjugate spread of a minimum-uncertainty packet: var_q = 1/(4 w^2)
  CHECK(std::abs(p.var_q() - 1.0 / (4.0 * 0.49)) / (1.0 / (4.0 * 0.49)) < 0.02);
  CHECK(std::abs(p.mean_q()) < 1e-8);
  CHECK(p.edge_fraction() < 1e-8);
}

TEST_CASE("pointer sampling is deterministic per seed and matches the density") {
  const PointerState p = standard_pointer(1.0, 256, 8.0);
  auto rng1 = trial_rng(5, 0);
  auto rng2 = trial_rng(5, 0);
  CHECK(p.sample(rng1) == p.sample(rng2));
  double mean = 0.0;
  const int n = 20000;
  for (int t = 0; t < n; ++t) {
    auto rng = trial_rng(6, static_cast<std::uint64_t>(t));
    mean += p.sample(rng);
  }
  mean /= n;
  CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("pointer_final: eigenstate pre-selection rigidly shifts the packet") {
  const PointerState p0 = standard_pointer();
  const CouplingSpec c{0.5, sigma_z()};
  const PointerState pf = pointer_final(up_z, up_x, c, p0);
  CHECK(std::abs(pf.mean_pi() - 0.5) < 1e-9);
  CHECK(std::abs(pf.var_pi() - p0.var_pi()) < 1e-9);
}

TEST_CASE("pointer_final: zero coupling leaves the packet unchanged") {
  const PointerState p0 = standard_pointer();
  const PointerState pf = pointer_final(up_x, up_y, {0.0, sigma_z()}, p0);
  CHECK((pf.amps() - p0.amps()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("pointer_final rejects an incompatible post-selection") {
  // pre |up_z>, post |down_z>, coupling to sigma_z: every amplitude vanishes
  const PointerState p0 = standard_pointer();
  const Vec down_z = ket({0, 1});
  CHECK_THROWS_AS((void)pointer_final(up_z, down_z, {0.5, sigma_z()}, p0), ValidationError);
}

TEST_CASE("pointer_final flags a too-narrow grid") {
  const PointerState p0 = standard_pointer(1.0, 128, 4.0);  // little headroom
  CHECK_THROWS_WITH_AS((void)pointer_final(up_z, up_x, {3.5, sigma_z()}, p0),
                       doctest::Contains("grid too narrow"), ValidationError);
}

TEST_CASE("weak readout recovers the complex weak value to 1%") {
  const PointerState p0 = standard_pointer();
  const CouplingSpec c{1e-3, sigma_z()};
  // (sigma_z)_w = i for up_x -> up_y
  const WeakReadout wr = weak_readout(up_x, up_y, c, p0);
  CHECK(wr.regime_ok);
  CHECK(std::abs(wr.estimate.real()) < 0.01);
  CHECK(std::abs(wr.estimate.imag() - 1.0) < 0.01);

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto [psi1, psi2] = test::random_condition_pair(2, seed_mix(700, seed), 0.2);
    const Complex aw = weak_value(make_generic(psi1, psi2), sigma_z()).value;
    const WeakReadout r = weak_readout(psi1, psi2, c, p0);
    CHECK(std::abs(r.estimate - aw) < 0.01 * std::max(1.0, std::abs(aw)));
  }
}

TEST_CASE("identity coupling is the calibration fixed point") {
  const PointerState p0 = standard_pointer();
  const WeakReadout wr = weak_readout(up_x, up_y, {1e-3, Mat::Identity(2, 2)}, p0);
  CHECK(std::abs(wr.estimate - Complex(1, 0)) < 1e-9);
}

TEST_CASE("weak readout error falls at second order in g0") {
  const PointerState p0 = standard_pointer();
  const auto [psi1, psi2] = test::random_condition_pair(2, 11, 0.3);
  const Complex aw = weak_value(make_generic(psi1, psi2), sigma_z()).value;
  double err[3];
  double g = 4e-3;
  for (int k = 0; k < 3; ++k, g /= 2.0) {
    err[k] = std::abs(weak_readout(psi1, psi2, {g, sigma_z()}, p0).estimate - aw);
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.8);
  CHECK(std::log2(err[1] / err[2]) >= 1.8);
}

TEST_CASE("conjugate shift is proportional to the imaginary weak value") {
  const PointerState p0 = standard_pointer();
  const double g0 = 1e-3;
  const double kappa = 2.0 * p0.var_q();
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  int n = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [psi1, psi2] = test::random_condition_pair(2, seed_mix(800, seed), 0.2);
    const Complex aw = weak_value(make_generic(psi1, psi2), sigma_z()).value;
    const PointerState pf = pointer_final(psi1, psi2, {g0, sigma_z()}, p0);
    const double x = aw.imag();
    const double y = (pf.mean_q() - p0.mean_q()) / g0;
    sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double r2 = (n * sxy - sx * sy) * (n * sxy - sx * sy) /
                    ((n * sxx - sx * sx) * (n * syy - sy * sy));
  CHECK(r2 > 0.999);
  CHECK(std::abs(slope - kappa) / kappa < 0.01);
}

TEST_CASE("strong readout: eigenstate boundary gives a single bin") {
  const PointerState p0 = PointerState::gaussian(1024, 50.0 / 1024, 0.5);
  const StrongReadout sr = strong_readout(up_z, up_x, {20.0, sigma_z()}, p0, 2000, 3);
  CHECK(sr.regime_ok);
  CHECK(sr.dist.prob_of({1.0}) == doctest::Approx(1.0));
}

TEST_CASE("strong readout matches the ABL distribution on random qutrits") {
  const PointerState p0 = PointerState::gaussian(2048, 130.0 / 2048, 0.5);
  Mat a = Mat::Zero(3, 3);
  a(0, 0) = -1.0;
  a(2, 2) = 1.0;  // spectrum {-1, 0, 1}
  const std::vector<Vec> basis = test::random_orthobasis(3, 21);
  Mat u(3, 3);
  for (int k = 0; k < 3; ++k) u.col(k) = basis[static_cast<std::size_t>(k)];
  a = u * a * u.adjoint();

  const auto [psi1, psi2] = test::random_condition_pair(3, 22, 0.2);
  const ProbDist abl = abl_prob(make_generic(psi1, psi2), a);
  const std::int64_t trials = 100000;
  const StrongReadout sr = strong_readout(psi1, psi2, {20.0, a}, p0, trials, 23);
  CHECK(sr.regime_ok);
  CHECK(test::within_mc_error(abl, sr.dist, static_cast<double>(trials)));
}

TEST_CASE("strong readout outside the regime only warns") {
  const PointerState p0 = standard_pointer();
  const StrongReadout sr = strong_readout(up_x, up_y, {0.5, sigma_z()}, p0, 100, 5);
  CHECK_FALSE(sr.regime_ok);
  CHECK(sr.accuracy_ratio > 0.1);
}

TEST_CASE("two successive strong measurements of the same observable agree") {
  // Sequential pointer simulation: read the first pointer, collapse, then
  // measure again with a fresh pointer.
  const Eigen::Index m = 512;
  const PointerState p0 = PointerState::gaussian(m, 50.0 / static_cast<double>(m), 0.5);
  const double g0 = 20.0;
  const Mat a = test::random_hermitian(3, 31);
  const EigenSystem ea = eig_hermitian(a);
  const Vec psi = random_state(3, 32);

  auto measure_once = [&](const Vec& system, std::mt19937_64& rng) {
    // joint state (system x grid), impulsive coupling, then a position read
    Mat joint(3, m);
    for (Eigen::Index j = 0; j < m; ++j) joint.col(j) = system * p0.amps()[j];
    Mat shifted = Mat::Zero(3, m);
    for (std::size_t k = 0; k < ea.vectors.size(); ++k) {
      const Vec& v = ea.vectors[k];
      for (Eigen::Index j = 0; j < m; ++j) {
        const double target = p0.pi_at(j) - g0 * ea.values[static_cast<Eigen::Index>(k)];
        // resample the analytic profile at the shifted abscissa
        shifted.col(j) += (v * (v.dot(system))) * p0.profile_at(target);
      }
    }
    // sample the pointer position
    RVec w(m);
    for (Eigen::Index j = 0; j < m; ++j) w[j] = shifted.col(j).squaredNorm();
    const double total = w.sum();
    double u = uniform01(rng) * total;
    Eigen::Index hit = m - 1;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (u < w[j]) {
        hit = j;
        break;
      }
      u -= w[j];
    }
    // bin to the nearest eigenvalue shift and collapse the system
    const double x = p0.pi_at(hit);
    std::size_t best = 0;
    for (std::size_t k = 1; k < ea.vectors.size(); ++k) {
      if (std::abs(x - g0 * ea.values[static_cast<Eigen::Index>(k)]) <
          std::abs(x - g0 * ea.values[static_cast<Eigen::Index>(best)])) {
        best = k;
      }
    }
    Vec collapsed = shifted.col(hit);
    collapsed /= collapsed.norm();
    return std::make_pair(best, collapsed);
  };

  for (int trial = 0; trial < 100; ++trial) {
    auto rng = trial_rng(33, static_cast<std::uint64_t>(trial));
    const auto [first, state1] = measure_once(psi, rng);
    const auto [second, state2] = measure_once(state1, rng);
    CHECK(first == second);
  }
}

TEST_CASE("coupling disturbs the system by at most O(g0 dq)") {
  const PointerState p0 = standard_pointer();
  const Vec psi = up_x;
  const double dq = std::sqrt(p0.var_q());
  for (double g0 : {0.02, 0.05, 0.1, 0.2, 0.4}) {
    // reduced system state after coupling, before any post-selection:
    // rho(a,a') = psi(a) psi*(a') Gamma(g0(a-a')) with the pointer overlap
    auto gamma = [&](double d) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < p0.points(); ++j) {
        acc += p0.profile_at(p0.pi_at(j)) * p0.profile_at(p0.pi_at(j) - d) * p0.dpi();
      }
      return acc;
    };
    Mat rho(2, 2);
    const double evals[2] = {1.0, -1.0};  // sigma_z convention: psi in z basis
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        rho(i, j) = psi[i] * std::conj(psi[j]) * gamma(g0 * (evals[i] - evals[j]));
      }
    }
    const Mat delta = rho - psi * psi.adjoint();
    const EigenSystem es = eig_hermitian(Mat(0.5 * (delta + delta.adjoint())));
    double trace_dist = 0.0;
    for (double v : es.values) trace_dist += 0.5 * std::abs(v);
    CHECK(trace_dist <= g0 * dq);
  }
}

TEST_CASE("offdiag readout reduces to the projector weak value on the diagonal") {
  const PointerState p0 = standard_pointer();
  const auto [psi1, psi2] = test::random_condition_pair(2, 41, 0.3);
  const TwoState r = make_generic(psi1, psi2);
  const Vec a = test::random_orthobasis(2, 42)[0];
  const Mat proj = a * a.adjoint();
  const Complex expect = weak_value(r, proj).value;
  const OffdiagReadout od = offdiag_readout(psi1, psi2, a, a, 20, {0.02, Mat()}, p0);
  CHECK(std::abs(od.estimate - expect) < 0.05 * std::max(0.05, std::abs(expect)));
}

TEST_CASE("offdiag readout estimates the two-amplitude within 5%") {
  const PointerState p0 = standard_pointer();
  int tested = 0;
  for (std::uint64_t seed = 0; tested < 5 && seed < 50; ++seed) {
    const auto [psi1, psi2] = test::random_condition_pair(2, seed_mix(900, seed), 0.25);
    const TwoStateBasis basis(test::random_orthobasis(2, seed_mix(901, seed)),
                              test::random_orthobasis(2, seed_mix(902, seed)));
    const TwoState r = make_generic(psi1, psi2);
    const Complex amp = two_amplitude(r, basis, 0, 1);
    if (std::abs(amp) < 0.05) continue;  // relative tolerance needs signal
    ++tested;
    const OffdiagReadout od =
        offdiag_readout(psi1, psi2, basis.s1(0), basis.s2(1), 30, {0.02, Mat()}, p0);
    CHECK(std::abs(od.estimate - amp) < 0.05 * std::abs(amp));
    CHECK(od.regime_ok);
  }
  CHECK(tested == 5);
}

TEST_CASE("classify_regime: degenerate eigenstate case reports weak") {
  const PointerState p0 = standard_pointer(0.01, 512, 50.0);
  const RegimeReport rep = classify_regime(up_z, up_x, {1000.0, sigma_z()}, p0);
  CHECK(rep.regime == Regime::Weak);
  CHECK(rep.weak_criterion < 1e-12);
}

TEST_CASE("classify_regime: strong coupling") {
  const PointerState p0 = standard_pointer(0.01, 512, 50.0);
  const RegimeReport rep = classify_regime(up_x, up_y, {1000.0, sigma_z()}, p0);
  CHECK(rep.regime == Regime::Strong);
  CHECK(rep.strong_ratio < 0.1);
}

TEST_CASE("classify_regime validates the decomposition") {
  const PointerState p0 = standard_pointer();
  const TwoState r1 = test::random_generic(2, 51);
  const std::vector<Branch> bad = {{Complex(0.5, 0.0), r1}};
  CHECK_THROWS_AS(
      (void)classify_regime(up_x, up_y, {1e-3, sigma_z()}, p0, bad), ValidationError);
}

TEST_CASE("intermediate readout with a single branch is the plain weak value") {
  const PointerState p0 = standard_pointer();
  const auto [psi1, psi2] = test::random_condition_pair(2, 61, 0.3);
  const TwoState r = make_generic(psi1, psi2);
  const std::vector<Branch> decomp = {{1.0, r}};
  const CouplingSpec c{1e-3, sigma_z()};
  const IntermediateReadout ir = intermediate_readout(psi1, psi2, c, p0, decomp, 20000, 62);
  const Complex aw = weak_value(r, sigma_z()).value;
  CHECK(std::abs(ir.closed_form - aw) < 1e-12);
  // pointer estimate carries Monte Carlo noise of order width/(g0 sqrt(T))
  const double noise = 3.0 * 1.0 / (1e-3 * std::sqrt(20000.0));
  CHECK(std::abs(ir.pointer_estimate - aw.real()) < noise);
}
