#include <doctest.h>

#include <set>

#include "bmatch/classify.hpp"
#include "bmatch/dynamics.hpp"
#include "bmatch/generators.hpp"
#include "bmatch/preferences.hpp"
#include "bmatch/rng.hpp"
#include "oracles.hpp"

using namespace bmatch;
using test::k4_global_lists;
using test::matrix_m1_plus_m2;

namespace {

PreferenceInstance k4_global() {
  return PreferenceInstance::from_lists(k4_global_lists());
}

// Verifies a full trace by replaying it through apply_pair.
void audit_trace(const PreferenceInstance& L, const QuotaVector& b,
                 Configuration c, const DynamicsResult& result) {
  for (const StepRecord& record : result.trace) {
    const auto blocking = blocking_pairs(L, b, c);
    CHECK(std::find(blocking.begin(), blocking.end(), record.formed) !=
          blocking.end());
    CHECK(record.blocking_before == blocking.size());

    const ApplyResult replayed = apply_pair(L, b, c, record.formed);
    CHECK(replayed.record.dropped_by_a == record.dropped_by_a);
    CHECK(replayed.record.dropped_by_b == record.dropped_by_b);
    c = replayed.configuration;
    CHECK(respects_quotas(c, b, L.size()));

    // both endpoints strictly improve: anything dropped ranks worse
    // than the partner gained
    if (record.dropped_by_a)
      CHECK(L.prefers(record.formed.a, record.formed.b,
                      other_endpoint(*record.dropped_by_a, record.formed.a)));
    if (record.dropped_by_b)
      CHECK(L.prefers(record.formed.b, record.formed.a,
                      other_endpoint(*record.dropped_by_b, record.formed.b)));
  }
  CHECK(c == result.configuration);
}

}  // namespace

TEST_CASE("blocking_pairs: empty configuration blocks on every acceptance edge") {
  const auto L = k4_global();
  const auto blocking = blocking_pairs(L, QuotaVector::uniform(4, 1), Configuration());
  CHECK(blocking.size() == 6);
}

TEST_CASE("blocking_pairs: K4 global with crossed matching blocks only on {0,1}") {
  const auto L = k4_global();
  const Configuration crossed({{0, 2}, {1, 3}});
  const auto blocking = blocking_pairs(L, QuotaVector::uniform(4, 1), crossed);
  CHECK(blocking == std::vector<Edge>{{0, 1}});
}

TEST_CASE("blocking_pairs rejects a quota-violating configuration") {
  const auto L = k4_global();
  const Configuration too_many({{0, 1}, {0, 2}});
  CHECK_THROWS_AS(blocking_pairs(L, QuotaVector::uniform(4, 1), too_many), DomainError);
  const Configuration stranger({{0, 1}});
  CHECK_THROWS_AS(
      blocking_pairs(PreferenceInstance::from_lists({{}, {}}), QuotaVector::uniform(2, 1),
                     stranger),
      DomainError);
}

TEST_CASE("is_stable on the K4 global fixtures") {
  const auto L = k4_global();
  const QuotaVector b = QuotaVector::uniform(4, 1);
  CHECK(is_stable(L, b, Configuration({{0, 1}, {2, 3}})));
  CHECK_FALSE(is_stable(L, b, Configuration({{0, 2}, {1, 3}})));
  CHECK(is_stable(PreferenceInstance::from_lists({}), QuotaVector::uniform(0, 1),
                  Configuration()));
}

TEST_CASE("apply_pair with free quota adds without dropping") {
  const auto L = k4_global();
  const auto result =
      apply_pair(L, QuotaVector::uniform(4, 2), Configuration(), make_edge(2, 3));
  CHECK(result.configuration == Configuration({{2, 3}}));
  CHECK_FALSE(result.record.dropped_by_a.has_value());
  CHECK_FALSE(result.record.dropped_by_b.has_value());
}

TEST_CASE("apply_pair drops both worst links in the crossed K4") {
  const auto L = k4_global();
  const QuotaVector b = QuotaVector::uniform(4, 1);
  const auto result = apply_pair(L, b, Configuration({{0, 2}, {1, 3}}), make_edge(0, 1));
  CHECK(result.configuration == Configuration({{0, 1}}));
  CHECK(result.record.dropped_by_a == make_edge(0, 2));
  CHECK(result.record.dropped_by_b == make_edge(1, 3));
  // freed peers 2 and 3 now block with each other
  const auto blocking = blocking_pairs(L, b, result.configuration);
  CHECK(std::find(blocking.begin(), blocking.end(), make_edge(2, 3)) != blocking.end());
}

TEST_CASE("apply_pair rejects non-blocking pairs") {
  const auto L = k4_global();
  const QuotaVector b = QuotaVector::uniform(4, 1);
  CHECK_THROWS_AS(apply_pair(L, b, Configuration({{0, 1}, {2, 3}}), make_edge(0, 2)),
                  DomainError);
}

TEST_CASE("unbounded quotas only ever add links and end at C = E") {
  const auto L = preferences_from_marks(random_symmetric_marks(7, 11));
  const auto result = run_dynamics(L, QuotaVector::unbounded(7), Configuration(),
                                   ActivationPolicy::uniform(5), 0);
  CHECK(result.converged);
  CHECK(result.trace.size() == L.pair_count());
  CHECK(result.configuration.size() == L.pair_count());
  for (const auto& record : result.trace) {
    CHECK_FALSE(record.dropped_by_a.has_value());
    CHECK_FALSE(record.dropped_by_b.has_value());
  }
}

TEST_CASE("a stable starting point takes zero steps") {
  const auto L = k4_global();
  const auto result = run_dynamics(L, QuotaVector::uniform(4, 1),
                                   Configuration({{0, 1}, {2, 3}}),
                                   ActivationPolicy::uniform(1), 0);
  CHECK(result.converged);
  CHECK(result.trace.empty());
}

TEST_CASE("K4 global converges to the matched-by-rank configuration under any policy") {
  const auto L = k4_global();
  const QuotaVector b = QuotaVector::uniform(4, 1);
  const Configuration expected({{0, 1}, {2, 3}});

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto uniform =
        run_dynamics(L, b, Configuration(), ActivationPolicy::uniform(seed), 0);
    CHECK(uniform.converged);
    CHECK(uniform.configuration == expected);
    audit_trace(L, b, Configuration(), uniform);

    const auto round_robin =
        run_dynamics(L, b, Configuration(), ActivationPolicy::round_robin(seed), 0);
    CHECK(round_robin.configuration == expected);

    auto schedule = L.acceptance().edges();
    Rng rng(seed);
    rng.shuffle(schedule);
    const auto fixed =
        run_dynamics(L, b, Configuration(), ActivationPolicy::fixed(schedule), 0);
    CHECK(fixed.configuration == expected);
  }
}

TEST_CASE("dynamics is reproducible for a given seed") {
  const auto L = preferences_from_marks(random_symmetric_marks(12, 3));
  const QuotaVector b = QuotaVector::uniform(12, 2);
  const auto a = run_dynamics(L, b, Configuration(), ActivationPolicy::uniform(99), 0);
  const auto c = run_dynamics(L, b, Configuration(), ActivationPolicy::uniform(99), 0);
  CHECK(a.configuration == c.configuration);
  CHECK(a.trace.size() == c.trace.size());
}

TEST_CASE("traces replay cleanly on random acyclic instances") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto L = preferences_from_marks(random_symmetric_marks(9, seed + 50));
    const QuotaVector b = QuotaVector::uniform(9, 1 + static_cast<std::int64_t>(seed % 3));
    const auto result =
        run_dynamics(L, b, Configuration(), ActivationPolicy::uniform(seed), 0);
    CHECK(result.converged);
    CHECK(is_stable(L, b, result.configuration));
    audit_trace(L, b, Configuration(), result);
  }
}

TEST_CASE("step limit exhaustion reports unconverged without throwing") {
  const auto L = k4_global();
  const auto result = run_dynamics(L, QuotaVector::uniform(4, 1), Configuration(),
                                   ActivationPolicy::uniform(0), 1);
  CHECK_FALSE(result.converged);
  CHECK(result.trace.size() == 1);
}

TEST_CASE("the cyclic triangle never settles under b=1") {
  const auto L = preferences_from_marks(matrix_m1_plus_m2());
  CHECK_THROWS_AS(run_dynamics(L, QuotaVector::uniform(3, 1), Configuration(),
                               ActivationPolicy::uniform(1), 0),
                  DomainError);  // unbounded steps demand acyclicity

  const auto result = run_dynamics(L, QuotaVector::uniform(3, 1), Configuration(),
                                   ActivationPolicy::uniform(1), 100);
  CHECK_FALSE(result.converged);
  CHECK(result.trace.size() == 100);
}

TEST_CASE("fixed schedules only fire pairs they contain") {
  const auto L = k4_global();
  const QuotaVector b = QuotaVector::uniform(4, 1);
  // schedule mentions only {2,3}: after it fires once, {0,1} still blocks
  const auto result = run_dynamics(L, b, Configuration(),
                                   ActivationPolicy::fixed({make_edge(2, 3)}), 0);
  CHECK_FALSE(result.converged);
  CHECK(result.trace.size() == 1);
  CHECK(result.configuration == Configuration({{2, 3}}));
}

TEST_CASE("default step limit follows 50 n^2") {
  CHECK(default_step_limit(10) == 5000);
  CHECK(default_step_limit(3) == 450);
}
