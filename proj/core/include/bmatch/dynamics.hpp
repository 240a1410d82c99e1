#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bmatch/graph.hpp"
#include "bmatch/preferences.hpp"

namespace bmatch {

/// Chooses which blocking pair forms at each step. Policies only ever
/// select pairs that are blocking in the current configuration.
struct ActivationPolicy {
  enum class Kind {
    kUniformRandomBlockingPair,  // uniform over the current blocking set
    kRoundRobinPeer,             // cycle peers; active peer links its best blocking partner
    kFixedSchedule,              // walk a given pair sequence cyclically, skipping non-blocking
  };

  Kind kind = Kind::kUniformRandomBlockingPair;
  std::uint64_t seed = 0;
  std::vector<Edge> schedule;  // kFixedSchedule only

  static ActivationPolicy uniform(std::uint64_t seed) {
    return {Kind::kUniformRandomBlockingPair, seed, {}};
  }
  static ActivationPolicy round_robin(std::uint64_t seed) {
    return {Kind::kRoundRobinPeer, seed, {}};
  }
  static ActivationPolicy fixed(std::vector<Edge> schedule) {
    return {Kind::kFixedSchedule, 0, std::move(schedule)};
  }
};

const char* policy_name(ActivationPolicy::Kind kind);

/// One step of the dynamics: the pair that formed and the worst links
/// each endpoint dropped to stay within quota (at most one each).
struct StepRecord {
  std::size_t step = 0;
  Edge formed;
  std::optional<Edge> dropped_by_a;  // dropped by formed.a
  std::optional<Edge> dropped_by_b;  // dropped by formed.b
  std::size_t blocking_before = 0;
};

struct DynamicsResult {
  Configuration configuration;
  std::vector<StepRecord> trace;
  bool converged = false;
  ActivationPolicy::Kind policy = ActivationPolicy::Kind::kUniformRandomBlockingPair;
  std::uint64_t seed = 0;

  std::size_t steps() const { return trace.size(); }
};

/// Exactly the pairs {p,q} in E minus C where each endpoint has residual
/// quota or prefers the other to its worst current link.
/// C must be a b-matching over L's acceptance graph.
std::vector<Edge> blocking_pairs(const PreferenceInstance& L, const QuotaVector& b,
                                 const Configuration& c);

bool is_stable(const PreferenceInstance& L, const QuotaVector& b,
               const Configuration& c);

struct ApplyResult {
  Configuration configuration;
  StepRecord record;
};

/// Forms one blocking pair; endpoints at quota drop their single worst
/// link. Throws DomainError when the pair is not blocking.
ApplyResult apply_pair(const PreferenceInstance& L, const QuotaVector& b,
                       const Configuration& c, Edge pair);

/// Iterates apply_pair on policy-selected blocking pairs until stable or
/// step_limit steps. step_limit 0 means unbounded and requires an
/// acyclic instance. Never throws on exhaustion: converged stays false.
DynamicsResult run_dynamics(const PreferenceInstance& L, const QuotaVector& b,
                            const Configuration& c0, const ActivationPolicy& policy,
                            std::size_t step_limit);

/// 50 * n^2, the cap applied to cyclic instances when none is given.
std::size_t default_step_limit(PeerId n);

}  // namespace bmatch
