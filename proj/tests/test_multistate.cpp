#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support.hpp"
#include "tsqm/multistate.hpp"

using namespace tsqm;

namespace {

Vec ket(std::initializer_list<Complex> amps) {
  Vec v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (const Complex c : amps) v[i++] = c;
  return v;
}

const double s = 1.0 / std::sqrt(2.0);

}  // namespace

TEST_CASE("single interval reduces to make_generic") {
  const auto [a, b] = test::random_condition_pair(2, 5);
  const MultipleState m = make_generic_multi({a, b});
  REQUIRE(m.intervals() == 1);
  REQUIRE(m.terms().size() == 1);
  const TwoState direct = make_generic(a, b);
  CHECK((m.terms()[0].factors[0].mat() - direct.mat()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two intervals from three conditions") {
  const Vec zero = ket({1, 0});
  const Vec up_x = ket({s, s});
  const MultipleState m = make_generic_multi({zero, up_x, zero});
  REQUIRE(m.intervals() == 2);
  for (const TwoState& f : m.terms()[0].factors) {
    CHECK(std::abs(f.trace() - Complex(1, 0)) < 1e-12);
  }
}

TEST_CASE("orthogonal consecutive conditions name the interval") {
  const Vec zero = ket({1, 0});
  const Vec one = ket({0, 1});
  try {
    (void)make_generic_multi({zero, one, zero});
    FAIL("expected an unphysical-state error");
  } catch (const UnphysicalTwoStateError& e) {
    CHECK(std::string(e.what()).find("interval 0") != std::string::npos);
  }
  try {
    (void)make_generic_multi({zero, ket({s, s}), ket({s, -s}), zero});
    FAIL("expected an unphysical-state error");
  } catch (const UnphysicalTwoStateError& e) {
    CHECK(std::string(e.what()).find("interval 1") != std::string::npos);
  }
}

TEST_CASE("multi_inner on one interval equals the two-state inner product") {
  const TwoState r1 = test::random_generic(3, 11);
  const TwoState r2 = test::random_generic(3, 12);
  const MultipleState m1({{1.0, {r1}}});
  const MultipleState m2({{1.0, {r2}}});
  CHECK(multi_inner(m1, m2) == inner(r1, r2));
}

TEST_CASE("generalized basis-element inner product for two intervals") {
  // Chain-shared bases: interval 1 uses (S_a, S_b), interval 2 (S_b, S_c).
  const auto sa = test::random_orthobasis(2, 21);
  const auto sb = test::random_orthobasis(2, 22);
  const auto sc = test::random_orthobasis(2, 23);
  const TwoStateBasis b1(sa, sb), b2(sb, sc);
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      for (Eigen::Index c = 0; c < 2; ++c) {
        const MultipleState m({{1.0, {b1.element(a, b), b2.element(b, c)}}});
        // <E,E> = 1/|<a|b><b|c>|^2, checked against direct trace arithmetic
        const double denom =
            std::norm(sb[static_cast<std::size_t>(b)].dot(sa[static_cast<std::size_t>(a)])) *
            std::norm(sc[static_cast<std::size_t>(c)].dot(sb[static_cast<std::size_t>(b)]));
        CHECK(std::abs(multi_inner(m, m) - Complex(1.0 / denom, 0.0)) < 1e-10);
        // distinct labels are orthogonal
        const MultipleState other(
            {{1.0, {b1.element(1 - a, b), b2.element(b, c)}}});
        CHECK(std::abs(multi_inner(other, m)) < 1e-12);
      }
    }
  }
}

TEST_CASE("multi_amplitude factorizes for generic multiple-states") {
  const Vec c0 = random_state(2, 31);
  const auto [c1, c2] = test::random_condition_pair(2, 32);
  // keep all consecutive overlaps away from zero
  if (std::abs(c1.dot(c0)) < 0.05) return;
  const MultipleState m = make_generic_multi({c0, c1, c2});

  const TwoStateBasis b1(test::random_orthobasis(2, 33), test::random_orthobasis(2, 34));
  const TwoStateBasis b2(test::random_orthobasis(2, 35), test::random_orthobasis(2, 36));
  const TwoState f1 = make_generic(c0, c1);
  const TwoState f2 = make_generic(c1, c2);
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      for (Eigen::Index c = 0; c < 2; ++c) {
        for (Eigen::Index d = 0; d < 2; ++d) {
          const Complex got = multi_amplitude(m, {b1, b2}, {{a, b}, {c, d}});
          const Complex want = two_amplitude(f1, b1, a, b) * two_amplitude(f2, b2, c, d);
          CHECK(std::abs(got - want) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("reconstruction of a correlated superposition, N = 2") {
  // Two-term correlated state; the expansion over basis elements resums to it.
  const MultipleState m({{Complex(0.7, 0.1),
                          {test::random_generic(2, 41), test::random_generic(2, 42)}},
                         {Complex(-0.3, 0.4),
                          {test::random_generic(2, 43), test::random_generic(2, 44)}}});
  const TwoStateBasis b1(test::random_orthobasis(2, 45), test::random_orthobasis(2, 46));
  const TwoStateBasis b2(test::random_orthobasis(2, 47), test::random_orthobasis(2, 48));

  // Resum each interval's matrix via the flattened tensor representation.
  Mat flat = Mat::Zero(4, 4);
  for (const auto& t : m.terms()) {
    flat += t.coeff * tensor(t.factors[0].mat(), t.factors[1].mat());
  }
  Mat resummed = Mat::Zero(4, 4);
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      for (Eigen::Index c = 0; c < 2; ++c) {
        for (Eigen::Index d = 0; d < 2; ++d) {
          const Complex amp = multi_amplitude(m, {b1, b2}, {{a, b}, {c, d}});
          resummed += amp * tensor(b1.element(a, b).mat(), b2.element(c, d).mat());
        }
      }
    }
  }
  CHECK((resummed - flat).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("amplitude round-trip on random states, N = 2 and 3") {
  for (int n = 2; n <= 3; ++n) {
    std::vector<TwoStateBasis> bases;
    std::vector<MultipleState::Term> terms;
    for (int t = 0; t < 2; ++t) {
      MultipleState::Term term;
      term.coeff = Complex(0.5 + t, 0.25 * t);
      for (int i = 0; i < n; ++i) {
        term.factors.push_back(
            test::random_generic(2, seed_mix(500 + 10 * n, static_cast<std::uint64_t>(2 * t + i))));
      }
      terms.push_back(std::move(term));
    }
    for (int i = 0; i < n; ++i) {
      bases.emplace_back(test::random_orthobasis(2, seed_mix(600 + 10 * n, static_cast<std::uint64_t>(i))),
                         test::random_orthobasis(2, seed_mix(700 + 10 * n, static_cast<std::uint64_t>(i))));
    }
    const MultipleState m(terms);

    // Round-trip through amplitudes: inner products against basis elements
    // of the resummed state match those of the original.
    std::vector<std::pair<Eigen::Index, Eigen::Index>> labels(static_cast<std::size_t>(n), {0, 0});
    double worst = 0.0;
    // enumerate all label tuples
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
      for (int i = 0; i < n; ++i) {
        labels[static_cast<std::size_t>(i)] = {idx[static_cast<std::size_t>(i)] / 2,
                                               idx[static_cast<std::size_t>(i)] % 2};
      }
      const Complex amp = multi_amplitude(m, bases, labels);
      // the projection of the resummed expansion onto this element is the
      // amplitude itself; verify through multi_inner against the element
      std::vector<TwoState> element_factors;
      for (int i = 0; i < n; ++i) {
        element_factors.push_back(bases[static_cast<std::size_t>(i)].element(
            labels[static_cast<std::size_t>(i)].first, labels[static_cast<std::size_t>(i)].second));
      }
      const MultipleState element({{1.0, element_factors}});
      double norm2 = 1.0;
      for (int i = 0; i < n; ++i) {
        norm2 *= bases[static_cast<std::size_t>(i)].element_norm2(
            labels[static_cast<std::size_t>(i)].first, labels[static_cast<std::size_t>(i)].second);
      }
      worst = std::max(worst, std::abs(multi_inner(element, m) / norm2 - amp));
      std::size_t i = 0;
      for (; i < idx.size(); ++i) {
        if (++idx[i] < 4) break;
        idx[i] = 0;
      }
      if (i == idx.size()) break;
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("generic multiple-states satisfy the per-factor generic criterion") {
  const Vec c0 = random_state(2, 61);
  const auto [c1, c2] = test::random_condition_pair(2, 62);
  if (std::abs(c1.dot(c0)) < 0.05) return;
  const MultipleState m = make_generic_multi({c0, c1, c2});
  for (const TwoState& f : m.terms()[0].factors) CHECK(is_generic(f));

  // A correlated two-term superposition flattens to a non-generic state.
  const MultipleState corr({{1.0, {test::random_generic(2, 63), test::random_generic(2, 64)}},
                            {1.0, {test::random_generic(2, 65), test::random_generic(2, 66)}}});
  Mat flat = Mat::Zero(4, 4);
  for (const auto& t : corr.terms()) {
    flat += t.coeff * tensor(t.factors[0].mat(), t.factors[1].mat());
  }
  CHECK_FALSE(is_generic(TwoState(flat)));
}

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(MultipleState({}), ValidationError);
  const TwoState r2 = test::random_generic(2, 71);
  const TwoState r3 = test::random_generic(3, 72);
  CHECK_THROWS_AS(MultipleState({{1.0, {r2}}, {1.0, {r3}}}), DimensionError);
  const MultipleState m1({{1.0, {r2}}});
  const MultipleState m2({{1.0, {r3}}});
  CHECK_THROWS_AS((void)multi_inner(m1, m2), DimensionError);
}
