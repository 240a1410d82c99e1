#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "bmatch/classify.hpp"
#include "bmatch/generators.hpp"
#include "bmatch/preferences.hpp"
#include "bmatch/rng.hpp"
#include "oracles.hpp"

using namespace bmatch;
using test::brute_has_cycle;
using test::four_peer_lists;
using test::matrix_m1;
using test::matrix_m1_plus_m2;
using test::matrix_m2;

namespace {

PreferenceInstance four_peer_instance() {
  return PreferenceInstance::from_lists(test::four_peer_lists());
}

// Random instance over a random acceptance graph with arbitrary list
// orders; may be cyclic, which makes it a good adversary for the
// peel-and-chase search.
PreferenceInstance random_arbitrary_instance(PeerId n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<PeerId>> lists(static_cast<std::size_t>(n));
  for (PeerId p = 0; p < n; ++p)
    for (PeerId q = p + 1; q < n; ++q)
      if (rng.uniform01() < 0.6) {
        lists[static_cast<std::size_t>(p)].push_back(q);
        lists[static_cast<std::size_t>(q)].push_back(p);
      }
  for (auto& list : lists) rng.shuffle(list);
  return PreferenceInstance::from_lists(std::move(lists));
}

}  // namespace

TEST_CASE("M1+M2 instance has exactly the cycle 0,1,2") {
  const auto L = preferences_from_marks(matrix_m1_plus_m2());
  const auto cycle = find_preference_cycle(L);
  REQUIRE(cycle.has_value());
  CHECK(cycle->peers == std::vector<PeerId>{0, 1, 2});
  CHECK(cycle_holds(*cycle, L));
  CHECK_FALSE(is_acyclic(L));
}

TEST_CASE("two-peer instances cannot contain a cycle") {
  const auto L = PreferenceInstance::from_lists({{1}, {0}});
  CHECK_FALSE(find_preference_cycle(L).has_value());
}

TEST_CASE("empty instance is acyclic") {
  CHECK(is_acyclic(PreferenceInstance::from_lists({})));
  CHECK(is_acyclic(PreferenceInstance::from_lists({{}, {}, {}})));
}

TEST_CASE("four-peer instance is acyclic") {
  CHECK(is_acyclic(four_peer_instance()));
}

TEST_CASE("random symmetric instances are acyclic; brute force agrees") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto L = preferences_from_marks(random_symmetric_marks(8, seed));
    CHECK_FALSE(find_preference_cycle(L).has_value());
    CHECK_FALSE(brute_has_cycle(L.lists()));
  }
}

TEST_CASE("cycle search agrees with exhaustive enumeration on adversarial instances") {
  int cyclic_seen = 0;
  for (std::uint64_t seed = 0; seed < 120; ++seed) {
    const auto L = random_arbitrary_instance(7, seed);
    const auto cycle = find_preference_cycle(L);
    CHECK(cycle.has_value() == brute_has_cycle(L.lists()));
    if (cycle) {
      CHECK(cycle_holds(*cycle, L));
      ++cyclic_seen;
    }
  }
  CHECK(cyclic_seen > 5);  // the family is genuinely adversarial
}

TEST_CASE("loving pairs of the fixtures") {
  CHECK(loving_pairs(four_peer_instance()) ==
        std::vector<LovingPair>{{0, 1}, {2, 3}});
  CHECK(loving_pairs(preferences_from_marks(matrix_m1_plus_m2())).empty());
  CHECK(loving_pairs(PreferenceInstance::from_lists({{1}, {0}})) ==
        std::vector<LovingPair>{{0, 1}});
}

TEST_CASE("every nontrivial acyclic instance admits a loving pair") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const PeerId n = 4 + static_cast<PeerId>(seed % 13);
    const auto L = preferences_from_marks(random_symmetric_marks(n, seed * 31 + 1));
    if (L.trivial()) continue;
    CHECK_FALSE(loving_pairs(L).empty());
  }
}

TEST_CASE("symmetrize_acyclic reproduces the four-peer instance with known marks") {
  const auto L = four_peer_instance();
  const auto result = symmetrize_acyclic(L);
  CHECK(result.iterations == 6);
  CHECK(result.marks.orientation() == Orientation::kLowerIsBetter);

  // lexicographic extraction: {0,1}=0 {2,3}=1 {0,2}=2 {0,3}=3 {1,2}=4 {1,3}=5
  auto at = [&](PeerId p, PeerId q) { return result.marks.at(p, q).value(); };
  CHECK(at(0, 1) == 0);
  CHECK(at(2, 3) == 1);
  CHECK(at(0, 2) == 2);
  CHECK(at(0, 3) == 3);
  CHECK(at(1, 2) == 4);
  CHECK(at(1, 3) == 5);
  CHECK(validate_marks(result.marks).symmetric);
  CHECK(preferences_from_marks(result.marks) == L);
}

TEST_CASE("symmetrize_acyclic of a single mutual pair") {
  const auto result = symmetrize_acyclic(PreferenceInstance::from_lists({{1}, {0}}));
  CHECK(result.marks.at(0, 1).value() == 0);
  CHECK(result.marks.at(1, 0).value() == 0);
  CHECK(result.iterations == 1);
}

TEST_CASE("symmetrize_acyclic round-trips random global instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto L = preferences_from_marks(global_marks(20, seed).matrix);
    const auto result = symmetrize_acyclic(L);
    CHECK(validate_marks(result.marks).symmetric);
    CHECK(preferences_from_marks(result.marks) == L);
    CHECK(result.iterations == L.pair_count());
  }
}

TEST_CASE("symmetrize_acyclic round-trips under random relabeling") {
  // relabeling permutes the extraction order; the output must keep
  // reproducing the instance regardless
  Rng rng(4242);
  for (int trial = 0; trial < 15; ++trial) {
    const auto base = preferences_from_marks(random_symmetric_marks(11, trial + 900));
    std::vector<PeerId> perm(11);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);

    std::vector<std::vector<PeerId>> lists(11);
    for (PeerId p = 0; p < 11; ++p) {
      auto& out = lists[static_cast<std::size_t>(perm[static_cast<std::size_t>(p)])];
      for (PeerId q : base.list(p))
        out.push_back(perm[static_cast<std::size_t>(q)]);
    }
    const auto L = PreferenceInstance::from_lists(std::move(lists));
    const auto result = symmetrize_acyclic(L);
    CHECK(preferences_from_marks(result.marks) == L);
    CHECK(result.iterations == L.pair_count());
  }
}

TEST_CASE("symmetrize_acyclic stays within its work bounds") {
  const auto L = preferences_from_marks(random_symmetric_marks(32, 5));
  const auto result = symmetrize_acyclic(L);
  CHECK(result.iterations <= L.pair_count());
  // worklist traffic: one initial consideration per peer, then at most
  // two pushes and one pop per extraction
  CHECK(result.probes <= 32 + 4 * L.pair_count());
}

TEST_CASE("symmetrize_acyclic rejects cyclic input with a witness") {
  const auto L = preferences_from_marks(matrix_m1_plus_m2());
  try {
    symmetrize_acyclic(L);
    FAIL("expected CyclicInstanceError");
  } catch (const CyclicInstanceError& e) {
    CHECK(cycle_holds(e.cycle(), L));
  }
}

TEST_CASE("the four-peer instance is not globally representable") {
  const auto fit = is_global_representable(four_peer_instance());
  REQUIRE_FALSE(fit.representable());
  const auto& conflict = *fit.conflict;

  const auto L = four_peer_instance();
  // the witness certifies itself: forward ranks a before b, reverse b before a
  REQUIRE(conflict.ranker_reverse >= 0);
  CHECK(L.rank(conflict.ranker_forward, conflict.peer_a) <
        L.rank(conflict.ranker_forward, conflict.peer_b));
  CHECK(L.rank(conflict.ranker_reverse, conflict.peer_b) <
        L.rank(conflict.ranker_reverse, conflict.peer_a));
}

TEST_CASE("M1 and M2 are globally representable with the expected orders") {
  const auto fit1 = is_global_representable(preferences_from_marks(matrix_m1()));
  REQUIRE(fit1.representable());
  const auto& v1 = fit1.marks->values;
  CHECK(v1[0] < v1[1]);
  CHECK(v1[1] < v1[2]);

  const auto fit2 = is_global_representable(preferences_from_marks(matrix_m2()));
  REQUIRE(fit2.representable());
  const auto& v2 = fit2.marks->values;
  CHECK(v2[2] < v2[1]);
  CHECK(v2[1] < v2[0]);
}

TEST_CASE("returned global marks reproduce the instance") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    auto marks = global_marks(12, seed).matrix;
    marks = restrict_marks(marks, er_acceptance(12, 0.5, seed + 100));
    const auto L = preferences_from_marks(marks);
    const auto fit = is_global_representable(L);
    REQUIRE(fit.representable());
    auto rebuilt = global_matrix(*fit.marks, Orientation::kLowerIsBetter);
    rebuilt = restrict_marks(rebuilt, L.acceptance());
    CHECK(preferences_from_marks(rebuilt) == L);
  }
}

TEST_CASE("trivial instances are globally representable") {
  CHECK(is_global_representable(PreferenceInstance::from_lists({{}})).representable());
  CHECK(is_global_representable(PreferenceInstance::from_lists({})).representable());
}

TEST_CASE("a conflict can need more than two rankers") {
  // rankers 3,4,5 order {0,1}, {1,2}, {2,0} cyclically; no single pair
  // is ranked oppositely by two peers
  const auto L = PreferenceInstance::from_lists(
      {{3, 5}, {3, 4}, {4, 5}, {0, 1}, {1, 2}, {2, 0}});
  const auto fit = is_global_representable(L);
  REQUIRE_FALSE(fit.representable());
  const auto& conflict = *fit.conflict;
  CHECK(conflict.ranker_reverse == -1);
  REQUIRE(conflict.chain.size() >= 3);
  for (std::size_t i = 0; i < conflict.chain.size(); ++i) {
    const PeerId q1 = conflict.chain[i];
    const PeerId q2 = conflict.chain[(i + 1) % conflict.chain.size()];
    const PeerId ranker = conflict.chain_rankers[i];
    CHECK(L.rank(ranker, q1) < L.rank(ranker, q2));
  }
}

TEST_CASE("linear_combine with lambda=1, mu=0 keeps the first operand's preferences") {
  const auto m1 = random_symmetric_marks(8, 3);
  const auto m2 = random_symmetric_marks(8, 4);
  const auto combined = linear_combine(m1, m2, 1.0, 0.0);
  CHECK(preferences_from_marks(combined) == preferences_from_marks(m1));
}

TEST_CASE("M1 + M2 is cyclic even though both operands are global") {
  const auto combined = linear_combine(matrix_m1(), matrix_m2(), 1.0, 1.0);
  CHECK(preferences_from_marks(combined) ==
        preferences_from_marks(matrix_m1_plus_m2()));
  const auto cycle = find_preference_cycle(preferences_from_marks(combined));
  REQUIRE(cycle.has_value());
  CHECK(cycle->peers == std::vector<PeerId>{0, 1, 2});
}

TEST_CASE("linear_combine rejects mismatched acceptance patterns") {
  auto m1 = random_symmetric_marks(6, 1);
  const auto m2 = restrict_marks(m1, er_acceptance(6, 0.5, 9));
  CHECK_THROWS_AS(linear_combine(m1, m2, 1.0, 1.0), StructuralError);
  CHECK_THROWS_AS(linear_combine(m1, random_symmetric_marks(5, 2), 1.0, 1.0),
                  StructuralError);
}

TEST_CASE("global plus symmetric combinations stay acyclic") {
  Rng rng(808);
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const auto g = global_marks(10, seed).matrix;
    const auto s = random_symmetric_marks(10, seed + 1000);
    const double lambda = rng.uniform(-2.0, 2.0);
    const double mu = rng.uniform(-2.0, 2.0);
    if (lambda == 0.0 || mu == 0.0) continue;
    const auto combined = linear_combine(g, s, lambda, mu);
    if (!validate_marks(combined).ok()) continue;  // ties void the guarantee
    CHECK(is_acyclic(preferences_from_marks(combined)));
  }
}

TEST_CASE("complementary_marks: frozen 3-peer example with a tie") {
  const GlobalMarkVector v{{5, 3, 1}};
  MarkMatrix c(3, Orientation::kLowerIsBetter);
  auto both = [&](PeerId p, PeerId q, double value) {
    c.set(p, q, Mark::finite(value));
    c.set(q, p, Mark::finite(value));
  };
  both(0, 1, 1);
  both(0, 2, 4);
  both(1, 2, 2);

  const auto m = complementary_marks(v, c);
  CHECK(m.orientation() == Orientation::kHigherIsBetter);
  CHECK(m.at(0, 1).value() == 2);
  CHECK(m.at(0, 2).value() == -3);
  CHECK(m.at(1, 0).value() == 4);
  CHECK(m.at(1, 2).value() == -1);
  CHECK(m.at(2, 0).value() == 1);
  CHECK(m.at(2, 1).value() == 1);

  const auto report = validate_marks(m);
  REQUIRE(report.ties.size() == 1);
  CHECK(report.ties[0].peer == 2);
}

TEST_CASE("complementary_marks degenerate cases") {
  SUBCASE("zero commonality reduces to global preferences, higher v first") {
    const GlobalMarkVector v{{0.3, 0.9, 0.1, 0.5}};
    MarkMatrix zero(4, Orientation::kLowerIsBetter);
    for (PeerId p = 0; p < 4; ++p)
      for (PeerId q = 0; q < 4; ++q)
        if (p != q) zero.set(p, q, Mark::finite(0.0));
    const auto m = complementary_marks(v, zero);
    CHECK(preferences_from_marks(m) ==
          preferences_from_marks(global_matrix(v, Orientation::kHigherIsBetter)));
  }
  SUBCASE("constant v reduces to symmetric preferences on c") {
    // m = const - c with higher-is-better: maximizing m minimizes the
    // commonality, so the least-common neighbor comes first
    const auto c = random_symmetric_marks(6, 17);
    const GlobalMarkVector v{std::vector<double>(6, 42.0)};
    const auto m = complementary_marks(v, c);
    CHECK(preferences_from_marks(m) == preferences_from_marks(c));
  }
  SUBCASE("asymmetric commonality is rejected") {
    MarkMatrix c(2, Orientation::kLowerIsBetter);
    c.set(0, 1, Mark::finite(1.0));
    c.set(1, 0, Mark::finite(2.0));
    CHECK_THROWS_AS(complementary_marks(GlobalMarkVector{{1, 2}}, c), StructuralError);
  }
}

TEST_CASE("tieless_combine: global ranks lexicographically refine Algorithm 1 marks") {
  const GlobalMarkVector ranks{{0, 1, 2, 3}};
  const auto m1 = global_matrix(ranks, Orientation::kLowerIsBetter);
  const auto m2 = symmetrize_acyclic(four_peer_instance()).marks;

  const auto combined = tieless_combine(m1, m2);
  CHECK(validate_marks(combined).ok());
  CHECK(is_acyclic(preferences_from_marks(combined)));
  // K = 1 + max|m2| = 6: peer 0's row is 6*rank + algorithm mark
  CHECK(combined.at(0, 1).value() == 6 * 1 + 0);
  CHECK(combined.at(0, 2).value() == 6 * 2 + 2);
  CHECK(combined.at(0, 3).value() == 6 * 3 + 3);
}

TEST_CASE("tieless_combine: all-zero m1 defers entirely to m2") {
  const auto m2 = symmetrize_acyclic(four_peer_instance()).marks;
  MarkMatrix zero(4, Orientation::kLowerIsBetter);
  for (PeerId p = 0; p < 4; ++p)
    for (PeerId q = 0; q < 4; ++q)
      if (p != q) zero.set(p, q, Mark::finite(0.0));
  const auto combined = tieless_combine(zero, m2);
  CHECK(preferences_from_marks(combined) == preferences_from_marks(m2));
}

TEST_CASE("tieless_combine: m2 breaks the ties of a tied global m1") {
  // global form with equal values for peers 0 and 1
  MarkMatrix m1(3, Orientation::kLowerIsBetter);
  const double column[3] = {5, 5, 7};
  for (PeerId i = 0; i < 3; ++i)
    for (PeerId p = 0; p < 3; ++p)
      if (i != p) m1.set(i, p, Mark::finite(column[p]));
  REQUIRE(is_global_form(m1));
  REQUIRE_FALSE(validate_marks(m1).ties.empty());

  MarkMatrix m2(3, Orientation::kLowerIsBetter);
  auto both = [&](PeerId p, PeerId q, double v) {
    m2.set(p, q, Mark::finite(v));
    m2.set(q, p, Mark::finite(v));
  };
  both(0, 1, 0);
  both(0, 2, 1);
  both(1, 2, 2);

  const auto combined = tieless_combine(m1, m2);
  CHECK(validate_marks(combined).ok());
  const auto L = preferences_from_marks(combined);
  CHECK(L.list(2) == std::vector<PeerId>{0, 1});  // m1 tie resolved by m2
}

TEST_CASE("tieless_combine rejects bad operands") {
  const auto m2 = symmetrize_acyclic(four_peer_instance()).marks;
  MarkMatrix frac(4, Orientation::kLowerIsBetter);
  for (PeerId p = 0; p < 4; ++p)
    for (PeerId q = 0; q < 4; ++q)
      if (p != q) frac.set(p, q, Mark::finite(0.5));
  CHECK_THROWS_AS(tieless_combine(frac, m2), StructuralError);

  // neither global nor symmetric
  const auto arbitrary = matrix_m1();
  MarkMatrix m1(3, Orientation::kLowerIsBetter);
  for (PeerId p = 0; p < 3; ++p)
    for (PeerId q = 0; q < 3; ++q)
      if (p != q) m1.set(p, q, Mark::finite(0.0));
  CHECK_THROWS_AS(tieless_combine(m1, arbitrary), StructuralError);
}

TEST_CASE("form predicates") {
  CHECK(is_global_form(global_marks(6, 5).matrix));
  CHECK_FALSE(is_global_form(test::four_peer_marks()));
  CHECK(is_symmetric_form(random_symmetric_marks(6, 5)));
  CHECK_FALSE(is_symmetric_form(matrix_m1()));
}
