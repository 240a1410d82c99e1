#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bmatch/marks.hpp"
#include "bmatch/preferences.hpp"

namespace bmatch {

/// k >= 3 peers arranged cyclically, each strictly preferring its
/// successor to its predecessor. Stored starting at the smallest peer id.
struct PreferenceCycle {
  std::vector<PeerId> peers;

  friend bool operator==(const PreferenceCycle&, const PreferenceCycle&) = default;
};

/// Checks the cycle invariant against L. Returned cycles always pass.
bool cycle_holds(const PreferenceCycle& cycle, const PreferenceInstance& L);

/// Two peers that are each other's first choice.
struct LovingPair {
  PeerId a;
  PeerId b;

  friend auto operator<=>(const LovingPair&, const LovingPair&) = default;
};

/// Cyclic input where acyclicity is required; carries the witness.
class CyclicInstanceError : public DomainError {
 public:
  explicit CyclicInstanceError(PreferenceCycle cycle)
      : DomainError("preference instance contains a cycle"), cycle_(std::move(cycle)) {}

  const PreferenceCycle& cycle() const { return cycle_; }

 private:
  PreferenceCycle cycle_;
};

/// none iff L is acyclic. Peels loving pairs; if lists remain with no
/// loving pair, chases first choices until a peer repeats and returns
/// the enclosed cycle (which always satisfies the cycle invariant).
std::optional<PreferenceCycle> find_preference_cycle(const PreferenceInstance& L);

bool is_acyclic(const PreferenceInstance& L);

/// Exactly the pairs mutually ranked first. Nonempty for every
/// nontrivial acyclic instance.
std::vector<LovingPair> loving_pairs(const PreferenceInstance& L);

struct SymmetrizeResult {
  MarkMatrix marks;
  std::size_t iterations;  // loving pairs extracted; equals pair_count()
  std::size_t probes;      // worklist pushes + pops
};

/// Builds a symmetric lower-is-better integer matrix whose preferences
/// are exactly L, assigning marks 0..pair_count-1 in extraction order.
/// Extraction takes the lexicographically smallest loving pair first.
/// Throws CyclicInstanceError with the witness for cyclic input.
SymmetrizeResult symmetrize_acyclic(const PreferenceInstance& L);

/// Why an instance is not globally representable: rankers that order
/// the same two peers differently, plus the full constraint cycle.
struct GlobalConflict {
  PeerId peer_a = -1;
  PeerId peer_b = -1;
  PeerId ranker_forward = -1;  // ranks peer_a before peer_b
  PeerId ranker_reverse = -1;  // ranks peer_b before peer_a; -1 if only a longer chain exists
  // chain[i] was ranked before chain[(i+1) % len] by chain_rankers[i]
  std::vector<PeerId> chain;
  std::vector<PeerId> chain_rankers;
};

struct GlobalFit {
  std::optional<GlobalMarkVector> marks;    // lower value = universally preferred
  std::optional<GlobalConflict> conflict;

  bool representable() const { return marks.has_value(); }
};

/// Builds the relation q1 -> q2 whenever some peer ranks q1 before q2.
/// Acyclic relation: returns marks from a topological order (they
/// reproduce L). Otherwise returns the conflict witness.
GlobalFit is_global_representable(const PreferenceInstance& L);

/// Entrywise lambda*m1 + mu*m2 after canonicalizing both operands to
/// lower-is-better; infinity wherever either operand is infinite.
/// Requires equal size and identical acceptance patterns. The result is
/// acyclic when each operand is global or symmetric (and tie-free), but
/// carries no promise for arbitrary inputs.
MarkMatrix linear_combine(const MarkMatrix& m1, const MarkMatrix& m2, double lambda,
                          double mu);

/// Complementary marks m(i,j) = v(j) - c(i,j), higher-is-better.
/// c must be symmetric with matching size. Resulting in-row ties are
/// left for validate_marks to report.
MarkMatrix complementary_marks(const GlobalMarkVector& v, const MarkMatrix& c);

/// Tie-free combination of two integer matrices, each global or
/// symmetric: K*m1 + m2 with K = 1 + max finite |m2| entry, i.e. the
/// strict lexicographic order on (m1, m2). m2 must be tie-free in rows.
MarkMatrix tieless_combine(const MarkMatrix& m1, const MarkMatrix& m2);

/// Finite entries of every column agree (global form, m(i,p) = m(p)).
bool is_global_form(const MarkMatrix& m);
/// m(i,j) == m(j,i) on every finite pair and acceptance is mutual.
bool is_symmetric_form(const MarkMatrix& m);

}  // namespace bmatch
