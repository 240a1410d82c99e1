#include "bmatch/dynamics.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <string>

#include "bmatch/classify.hpp"
#include "bmatch/rng.hpp"

namespace bmatch {

namespace {

// Mutable link state: per-peer neighbor sets ordered by rank, so the
// worst current link and the blocking test are O(log deg) and O(1).
class LinkState {
 public:
  LinkState(const PreferenceInstance& L, const QuotaVector& b, const Configuration& c)
      : L_(&L), b_(&b), neighbors_(static_cast<std::size_t>(L.size())) {
    if (b.size() != L.size())
      throw StructuralError("quota vector size does not match instance");
    for (const Edge& e : c.links()) {
      if (e.b >= L.size() || L.rank(e.a, e.b) < 0)
        throw DomainError("configuration link {" + std::to_string(e.a) + "," +
                          std::to_string(e.b) + "} is not an acceptance edge");
      link(e.a, e.b);
      link(e.b, e.a);
    }
    for (PeerId p = 0; p < L.size(); ++p)
      if (!b.is_unbounded(p) && degree(p) > b.at(p))
        throw DomainError("configuration violates quota of peer " + std::to_string(p));
  }

  std::int64_t degree(PeerId p) const {
    return static_cast<std::int64_t>(neighbors_[static_cast<std::size_t>(p)].size());
  }

  bool at_quota(PeerId p) const {
    return !b_->is_unbounded(p) && degree(p) >= b_->at(p);
  }

  PeerId worst_neighbor(PeerId p) const {
    const auto& set = neighbors_[static_cast<std::size_t>(p)];
    assert(!set.empty());
    return set.rbegin()->second;
  }

  // One side of the blocking condition: p has residual quota or prefers
  // q to its worst current link.
  bool side_gains(PeerId p, PeerId q) const {
    if (!at_quota(p)) return true;
    if (degree(p) == 0) return false;  // quota 0 cannot happen; guard anyway
    return L_->rank(p, q) < L_->rank(p, worst_neighbor(p));
  }

  bool blocking(PeerId p, PeerId q) const {
    if (linked(p, q)) return false;
    return side_gains(p, q) && side_gains(q, p);
  }

  bool linked(PeerId p, PeerId q) const {
    const auto r = L_->rank(p, q);
    if (r < 0) return false;
    return neighbors_[static_cast<std::size_t>(p)].count({r, q}) > 0;
  }

  void link(PeerId p, PeerId q) {
    neighbors_[static_cast<std::size_t>(p)].insert({L_->rank(p, q), q});
  }

  void unlink(PeerId p, PeerId q) {
    neighbors_[static_cast<std::size_t>(p)].erase({L_->rank(p, q), q});
  }

  // Forms a blocking pair, dropping each at-quota endpoint's worst link.
  StepRecord form(Edge pair, std::size_t step, std::size_t blocking_before) {
    StepRecord record;
    record.step = step;
    record.formed = pair;
    record.blocking_before = blocking_before;

    if (at_quota(pair.a)) {
      const PeerId w = worst_neighbor(pair.a);
      unlink(pair.a, w);
      unlink(w, pair.a);
      record.dropped_by_a = make_edge(pair.a, w);
    }
    if (at_quota(pair.b)) {
      const PeerId w = worst_neighbor(pair.b);
      unlink(pair.b, w);
      unlink(w, pair.b);
      record.dropped_by_b = make_edge(pair.b, w);
    }
    link(pair.a, pair.b);
    link(pair.b, pair.a);
    return record;
  }

  std::vector<Edge> blocking_set() const {
    std::vector<Edge> result;
    for (PeerId p = 0; p < L_->size(); ++p)
      for (PeerId q : L_->list(p))
        if (p < q && blocking(p, q)) result.push_back({p, q});
    return result;
  }

  Configuration configuration() const {
    std::vector<Edge> links;
    for (PeerId p = 0; p < L_->size(); ++p)
      for (const auto& [rank, q] : neighbors_[static_cast<std::size_t>(p)])
        if (p < q) links.push_back({p, q});
    return Configuration(std::move(links));
  }

 private:
  const PreferenceInstance* L_;
  const QuotaVector* b_;
  std::vector<std::set<std::pair<std::int32_t, PeerId>>> neighbors_;
};

// Selects the next pair to form, or nullopt when the policy cannot act.
class PairSelector {
 public:
  PairSelector(const ActivationPolicy& policy, const PreferenceInstance& L)
      : policy_(&policy), L_(&L), rng_(policy.seed) {
    if (policy.kind == ActivationPolicy::Kind::kRoundRobinPeer && L.size() > 0)
      next_peer_ = static_cast<PeerId>(policy.seed % static_cast<std::uint64_t>(L.size()));
    if (policy.kind == ActivationPolicy::Kind::kFixedSchedule && policy.schedule.empty())
      throw DomainError("fixed-schedule policy requires a nonempty schedule");
  }

  std::optional<Edge> select(const std::vector<Edge>& blocking, const LinkState& state) {
    if (blocking.empty()) return std::nullopt;
    switch (policy_->kind) {
      case ActivationPolicy::Kind::kUniformRandomBlockingPair:
        return blocking[rng_.below(blocking.size())];

      case ActivationPolicy::Kind::kRoundRobinPeer: {
        const PeerId n = L_->size();
        // most preferred blocking partner per peer, one pass
        std::vector<PeerId> best(static_cast<std::size_t>(n), -1);
        auto offer = [&](PeerId p, PeerId q) {
          auto& cur = best[static_cast<std::size_t>(p)];
          if (cur < 0 || L_->rank(p, q) < L_->rank(p, cur)) cur = q;
        };
        for (const Edge& e : blocking) {
          offer(e.a, e.b);
          offer(e.b, e.a);
        }
        for (PeerId scanned = 0; scanned < n; ++scanned) {
          const PeerId p = static_cast<PeerId>((next_peer_ + scanned) % n);
          if (best[static_cast<std::size_t>(p)] >= 0) {
            next_peer_ = static_cast<PeerId>((p + 1) % n);
            return make_edge(p, best[static_cast<std::size_t>(p)]);
          }
        }
        return std::nullopt;  // unreachable: blocking nonempty
      }

      case ActivationPolicy::Kind::kFixedSchedule: {
        const auto& schedule = policy_->schedule;
        for (std::size_t scanned = 0; scanned < schedule.size(); ++scanned) {
          const std::size_t i = (cursor_ + scanned) % schedule.size();
          const Edge e = schedule[i];
          if (state.blocking(e.a, e.b)) {
            cursor_ = (i + 1) % schedule.size();
            return e;
          }
        }
        return std::nullopt;  // schedule covers no current blocking pair
      }
    }
    return std::nullopt;
  }

 private:
  const ActivationPolicy* policy_;
  const PreferenceInstance* L_;
  Rng rng_;
  PeerId next_peer_ = 0;
  std::size_t cursor_ = 0;
};

}  // namespace

const char* policy_name(ActivationPolicy::Kind kind) {
  switch (kind) {
    case ActivationPolicy::Kind::kUniformRandomBlockingPair: return "uniform";
    case ActivationPolicy::Kind::kRoundRobinPeer: return "roundrobin";
    case ActivationPolicy::Kind::kFixedSchedule: return "fixed";
  }
  return "unknown";
}

std::vector<Edge> blocking_pairs(const PreferenceInstance& L, const QuotaVector& b,
                                 const Configuration& c) {
  return LinkState(L, b, c).blocking_set();
}

bool is_stable(const PreferenceInstance& L, const QuotaVector& b,
               const Configuration& c) {
  return blocking_pairs(L, b, c).empty();
}

ApplyResult apply_pair(const PreferenceInstance& L, const QuotaVector& b,
                       const Configuration& c, Edge pair) {
  LinkState state(L, b, c);
  pair = make_edge(pair.a, pair.b);
  if (pair.b >= L.size() || L.rank(pair.a, pair.b) < 0 || !state.blocking(pair.a, pair.b))
    throw DomainError("apply_pair: {" + std::to_string(pair.a) + "," +
                      std::to_string(pair.b) + "} is not a blocking pair");

  const std::size_t blocking_before = state.blocking_set().size();
  StepRecord record = state.form(pair, 0, blocking_before);
  return ApplyResult{state.configuration(), std::move(record)};
}

DynamicsResult run_dynamics(const PreferenceInstance& L, const QuotaVector& b,
                            const Configuration& c0, const ActivationPolicy& policy,
                            std::size_t step_limit) {
  if (step_limit == 0 && !is_acyclic(L))
    throw DomainError(
        "run_dynamics: unbounded steps are only permitted for acyclic instances");

  LinkState state(L, b, c0);
  PairSelector selector(policy, L);

  DynamicsResult result;
  result.policy = policy.kind;
  result.seed = policy.seed;

  const std::size_t limit =
      step_limit == 0 ? std::numeric_limits<std::size_t>::max() : step_limit;

  for (std::size_t step = 0; step < limit; ++step) {
    const std::vector<Edge> blocking = state.blocking_set();
    if (blocking.empty()) {
      result.converged = true;
      break;
    }
    const auto pair = selector.select(blocking, state);
    if (!pair) break;  // fixed schedule exhausted while pairs remain
    result.trace.push_back(state.form(*pair, step, blocking.size()));
  }
  if (!result.converged) result.converged = state.blocking_set().empty();

  result.configuration = state.configuration();
  return result;
}

std::size_t default_step_limit(PeerId n) {
  return 50 * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
}

}  // namespace bmatch
