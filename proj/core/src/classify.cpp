#include "bmatch/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace bmatch {

namespace {

// List-head view of an instance during loving-pair peeling. Heads only
// advance: a loving pair is mutually first, so extracting {a,b} consumes
// exactly the head entry of both lists. The residual relation stays
// symmetric, and a pair that becomes loving remains loving until it is
// extracted.
class PeelState {
 public:
  explicit PeelState(const PreferenceInstance& L)
      : L_(&L), head_(static_cast<std::size_t>(L.size()), 0) {}

  PeerId first(PeerId p) const {
    const auto& list = L_->list(p);
    const std::size_t h = head_[static_cast<std::size_t>(p)];
    return h < list.size() ? list[h] : -1;
  }

  bool loving(PeerId p, PeerId q) const { return first(p) == q && first(q) == p; }

  void advance(PeerId p) { ++head_[static_cast<std::size_t>(p)]; }

  bool exhausted() const {
    for (PeerId p = 0; p < L_->size(); ++p)
      if (first(p) >= 0) return false;
    return true;
  }

  // Follows first choices from the smallest live peer until one repeats
  // and returns the enclosed loop. Only valid when no loving pair
  // remains and some list is nonempty.
  PreferenceCycle chase_cycle() const {
    PeerId start = -1;
    for (PeerId p = 0; p < L_->size(); ++p)
      if (first(p) >= 0) {
        start = p;
        break;
      }
    assert(start >= 0);

    std::vector<PeerId> chain;
    std::vector<std::int32_t> pos(static_cast<std::size_t>(L_->size()), -1);
    PeerId cur = start;
    while (pos[static_cast<std::size_t>(cur)] < 0) {
      pos[static_cast<std::size_t>(cur)] = static_cast<std::int32_t>(chain.size());
      chain.push_back(cur);
      cur = first(cur);
      assert(cur >= 0);  // residual symmetry keeps successor lists nonempty
    }
    std::vector<PeerId> loop(chain.begin() + pos[static_cast<std::size_t>(cur)],
                             chain.end());

    // canonical rotation: smallest peer first
    auto min_it = std::min_element(loop.begin(), loop.end());
    std::rotate(loop.begin(), min_it, loop.end());
    return PreferenceCycle{std::move(loop)};
  }

 private:
  const PreferenceInstance* L_;
  std::vector<std::size_t> head_;
};

struct PeelOutcome {
  bool emptied = false;          // all lists consumed (acyclic)
  std::vector<Edge> extracted;   // loving pairs in extraction order
  std::size_t probes = 0;        // worklist pushes + pops
  PeelState state;
};

// Runs Algorithm 1's while-loop with a lexicographically ordered
// worklist. New candidates after extracting {a,b} can only be (a, new
// first of a) and (b, new first of b).
PeelOutcome peel_loving_pairs(const PreferenceInstance& L) {
  PeelOutcome out{false, {}, 0, PeelState(L)};
  PeelState& st = out.state;

  std::set<Edge> work;
  auto consider = [&](PeerId p) {
    const PeerId q = st.first(p);
    if (q >= 0 && st.first(q) == p) {
      work.insert(make_edge(p, q));
      ++out.probes;
    }
  };
  for (PeerId p = 0; p < L.size(); ++p) consider(p);

  while (!work.empty()) {
    const Edge e = *work.begin();
    work.erase(work.begin());
    ++out.probes;
    if (!st.loving(e.a, e.b)) continue;  // defensive; cannot go stale here
    st.advance(e.a);
    st.advance(e.b);
    out.extracted.push_back(e);
    consider(e.a);
    consider(e.b);
  }
  out.emptied = st.exhausted();
  return out;
}

MarkMatrix lower_is_better(const MarkMatrix& m) {
  return m.orientation() == Orientation::kLowerIsBetter ? m : negated(m);
}

}  // namespace

bool cycle_holds(const PreferenceCycle& cycle, const PreferenceInstance& L) {
  const auto& ps = cycle.peers;
  const std::size_t k = ps.size();
  if (k < 3) return false;

  std::set<PeerId> distinct(ps.begin(), ps.end());
  if (distinct.size() != k) return false;

  for (std::size_t i = 0; i < k; ++i) {
    const PeerId p = ps[i];
    const PeerId succ = ps[(i + 1) % k];
    const PeerId pred = ps[(i + k - 1) % k];
    if (p < 0 || p >= L.size()) return false;
    if (!L.accepts(p, succ) || !L.accepts(p, pred)) return false;
    if (!(L.rank(p, succ) < L.rank(p, pred))) return false;
  }
  return true;
}

std::optional<PreferenceCycle> find_preference_cycle(const PreferenceInstance& L) {
  auto outcome = peel_loving_pairs(L);
  if (outcome.emptied) return std::nullopt;

  PreferenceCycle cycle = outcome.state.chase_cycle();
  if (!cycle_holds(cycle, L))
    throw std::logic_error("constructed preference cycle fails its invariant");
  return cycle;
}

bool is_acyclic(const PreferenceInstance& L) {
  return !find_preference_cycle(L).has_value();
}

std::vector<LovingPair> loving_pairs(const PreferenceInstance& L) {
  std::vector<LovingPair> pairs;
  for (PeerId p = 0; p < L.size(); ++p) {
    const auto& list = L.list(p);
    if (list.empty()) continue;
    const PeerId q = list.front();
    if (q > p && !L.list(q).empty() && L.list(q).front() == p)
      pairs.push_back({p, q});
  }
  return pairs;
}

SymmetrizeResult symmetrize_acyclic(const PreferenceInstance& L) {
  auto outcome = peel_loving_pairs(L);
  if (!outcome.emptied) {
    PreferenceCycle cycle = outcome.state.chase_cycle();
    if (!cycle_holds(cycle, L))
      throw std::logic_error("constructed preference cycle fails its invariant");
    throw CyclicInstanceError(std::move(cycle));
  }

  MarkMatrix m(L.size(), Orientation::kLowerIsBetter);
  double next = 0.0;
  for (const Edge& e : outcome.extracted) {
    m.set(e.a, e.b, Mark::finite(next));
    m.set(e.b, e.a, Mark::finite(next));
    next += 1.0;
  }
  return SymmetrizeResult{std::move(m), outcome.extracted.size(), outcome.probes};
}

GlobalFit is_global_representable(const PreferenceInstance& L) {
  const PeerId n = L.size();

  // Constraint digraph over ranked peers from adjacent list positions;
  // transitivity makes non-adjacent pairs redundant. Each arc remembers
  // one inducing ranker.
  std::map<std::pair<PeerId, PeerId>, PeerId> arcs;
  for (PeerId p = 0; p < n; ++p) {
    const auto& list = L.list(p);
    for (std::size_t i = 0; i + 1 < list.size(); ++i)
      arcs.try_emplace({list[i], list[i + 1]}, p);
  }

  std::vector<std::vector<PeerId>> out(static_cast<std::size_t>(n));
  std::vector<int> indegree(static_cast<std::size_t>(n), 0);
  for (const auto& [arc, ranker] : arcs) {
    out[static_cast<std::size_t>(arc.first)].push_back(arc.second);
    ++indegree[static_cast<std::size_t>(arc.second)];
  }

  // Kahn with a min-ordered frontier for a deterministic order.
  std::set<PeerId> frontier;
  for (PeerId p = 0; p < n; ++p)
    if (indegree[static_cast<std::size_t>(p)] == 0) frontier.insert(p);

  std::vector<PeerId> order;
  order.reserve(static_cast<std::size_t>(n));
  while (!frontier.empty()) {
    const PeerId p = *frontier.begin();
    frontier.erase(frontier.begin());
    order.push_back(p);
    for (PeerId q : out[static_cast<std::size_t>(p)])
      if (--indegree[static_cast<std::size_t>(q)] == 0) frontier.insert(q);
  }

  GlobalFit fit;
  if (order.size() == static_cast<std::size_t>(n)) {
    GlobalMarkVector v;
    v.values.resize(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < order.size(); ++i)
      v.values[static_cast<std::size_t>(order[i])] = static_cast<double>(i);
    fit.marks = std::move(v);
    return fit;
  }

  // Extract one directed cycle among the unresolved nodes.
  std::vector<int> color(static_cast<std::size_t>(n), 0);  // 0 new, 1 open, 2 done
  std::vector<PeerId> stack;
  std::vector<PeerId> cycle;
  auto dfs = [&](auto&& self, PeerId u) -> bool {
    color[static_cast<std::size_t>(u)] = 1;
    stack.push_back(u);
    for (PeerId w : out[static_cast<std::size_t>(u)]) {
      if (indegree[static_cast<std::size_t>(w)] == 0) continue;  // resolved by Kahn
      if (color[static_cast<std::size_t>(w)] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        cycle.assign(it, stack.end());
        return true;
      }
      if (color[static_cast<std::size_t>(w)] == 0 && self(self, w)) return true;
    }
    stack.pop_back();
    color[static_cast<std::size_t>(u)] = 2;
    return false;
  };
  for (PeerId p = 0; p < n && cycle.empty(); ++p)
    if (indegree[static_cast<std::size_t>(p)] > 0 && color[static_cast<std::size_t>(p)] == 0)
      dfs(dfs, p);
  assert(!cycle.empty());

  GlobalConflict conflict;
  conflict.chain = cycle;
  conflict.chain_rankers.reserve(cycle.size());
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const PeerId q1 = cycle[i];
    const PeerId q2 = cycle[(i + 1) % cycle.size()];
    conflict.chain_rankers.push_back(arcs.at({q1, q2}));
  }

  // Prefer the two-ranker form: a chain arc q1->q2 some other peer
  // ranks the opposite way.
  conflict.peer_a = conflict.chain[0];
  conflict.peer_b = conflict.chain[1];
  conflict.ranker_forward = conflict.chain_rankers[0];
  for (std::size_t i = 0; i < conflict.chain.size() && conflict.ranker_reverse < 0; ++i) {
    const PeerId q1 = conflict.chain[i];
    const PeerId q2 = conflict.chain[(i + 1) % conflict.chain.size()];
    for (PeerId p = 0; p < n; ++p) {
      const auto r1 = L.rank(p, q1);
      const auto r2 = L.rank(p, q2);
      if (r1 >= 0 && r2 >= 0 && r2 < r1) {
        conflict.peer_a = q1;
        conflict.peer_b = q2;
        conflict.ranker_forward = conflict.chain_rankers[i];
        conflict.ranker_reverse = p;
        break;
      }
    }
  }

  fit.conflict = std::move(conflict);
  return fit;
}

MarkMatrix linear_combine(const MarkMatrix& m1, const MarkMatrix& m2, double lambda,
                          double mu) {
  if (m1.size() != m2.size())
    throw StructuralError("linear_combine: operand sizes differ");

  const MarkMatrix a = lower_is_better(m1);
  const MarkMatrix b = lower_is_better(m2);
  const PeerId n = a.size();

  MarkMatrix result(n, Orientation::kLowerIsBetter);
  for (PeerId p = 0; p < n; ++p) {
    for (PeerId q = 0; q < n; ++q) {
      if (p == q) continue;
      const bool f1 = a.finite(p, q);
      const bool f2 = b.finite(p, q);
      if (f1 != f2)
        throw StructuralError("linear_combine: acceptance patterns differ at (" +
                              std::to_string(p) + "," + std::to_string(q) + ")");
      if (f1)
        result.set(p, q,
                   Mark::finite(lambda * a.at(p, q).value() + mu * b.at(p, q).value()));
    }
  }
  return result;
}

MarkMatrix complementary_marks(const GlobalMarkVector& v, const MarkMatrix& c) {
  if (v.size() != c.size())
    throw StructuralError("complementary_marks: vector and matrix sizes differ");
  if (!is_symmetric_form(c))
    throw StructuralError("complementary_marks: commonality matrix must be symmetric");

  const PeerId n = c.size();
  MarkMatrix m(n, Orientation::kHigherIsBetter);
  for (PeerId i = 0; i < n; ++i)
    for (PeerId j = 0; j < n; ++j)
      if (i != j && c.finite(i, j))
        m.set(i, j, Mark::finite(v.values[static_cast<std::size_t>(j)] -
                                 c.at(i, j).value()));
  return m;
}

namespace {

bool integer_valued(const MarkMatrix& m) {
  for (PeerId p = 0; p < m.size(); ++p)
    for (PeerId q = 0; q < m.size(); ++q)
      if (p != q && m.finite(p, q)) {
        const double v = m.at(p, q).value();
        if (std::nearbyint(v) != v || std::abs(v) > 0x1p52) return false;
      }
  return true;
}

}  // namespace

MarkMatrix tieless_combine(const MarkMatrix& m1, const MarkMatrix& m2) {
  if (m1.size() != m2.size())
    throw StructuralError("tieless_combine: operand sizes differ");
  if (!integer_valued(m1) || !integer_valued(m2))
    throw StructuralError("tieless_combine: operands must be integer-valued");
  if (!is_global_form(m1) && !is_symmetric_form(m1))
    throw StructuralError("tieless_combine: first operand is neither global nor symmetric");
  if (!is_global_form(m2) && !is_symmetric_form(m2))
    throw StructuralError("tieless_combine: second operand is neither global nor symmetric");
  if (!validate_marks(m2).ties.empty())
    throw StructuralError("tieless_combine: second operand has in-row ties");

  const MarkMatrix a = lower_is_better(m1);
  const MarkMatrix b = lower_is_better(m2);
  const PeerId n = a.size();

  double max_abs = 0.0;
  for (PeerId p = 0; p < n; ++p)
    for (PeerId q = 0; q < n; ++q)
      if (p != q && b.finite(p, q))
        max_abs = std::max(max_abs, std::abs(b.at(p, q).value()));
  const double k = 1.0 + max_abs;

  MarkMatrix result = linear_combine(a, b, k, 1.0);
  if (!validate_marks(result).ties.empty())
    throw std::logic_error("tieless_combine: combination left residual ties");
  return result;
}

bool is_global_form(const MarkMatrix& m) {
  const PeerId n = m.size();
  for (PeerId p = 0; p < n; ++p) {
    bool seen = false;
    double column = 0.0;
    for (PeerId i = 0; i < n; ++i) {
      if (i == p || !m.finite(i, p)) continue;
      if (!seen) {
        column = m.at(i, p).value();
        seen = true;
      } else if (m.at(i, p).value() != column) {
        return false;
      }
    }
  }
  return true;
}

bool is_symmetric_form(const MarkMatrix& m) {
  const PeerId n = m.size();
  for (PeerId p = 0; p < n; ++p)
    for (PeerId q = p + 1; q < n; ++q) {
      if (m.finite(p, q) != m.finite(q, p)) return false;
      if (m.finite(p, q) && m.at(p, q).value() != m.at(q, p).value()) return false;
    }
  return true;
}

}  // namespace bmatch
