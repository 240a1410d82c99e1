#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bmatch/graph.hpp"
#include "bmatch/marks.hpp"

namespace bmatch {

/// Per-peer strict ranked lists of acceptable neighbors, best first.
/// Lists are duplicate-free, never contain the owner, and satisfy
/// acceptance symmetry (q in L(p) iff p in L(q)).
class PreferenceInstance {
 public:
  /// Validates the list invariants; throws StructuralError on violation.
  static PreferenceInstance from_lists(std::vector<std::vector<PeerId>> lists);

  PeerId size() const { return n_; }

  const std::vector<PeerId>& list(PeerId p) const {
    return lists_[static_cast<std::size_t>(p)];
  }
  const std::vector<std::vector<PeerId>>& lists() const { return lists_; }

  bool accepts(PeerId p, PeerId q) const { return rank(p, q) >= 0; }

  /// Position of q in L(p), 0 = most preferred; -1 when unacceptable.
  std::int32_t rank(PeerId p, PeerId q) const {
    return ranks_[static_cast<std::size_t>(p) * n_ + q];
  }

  /// true iff p ranks q1 strictly before q2. Both must be acceptable to p.
  bool prefers(PeerId p, PeerId q1, PeerId q2) const;

  /// Number of unordered acceptable pairs (edges of the acceptance graph).
  std::size_t pair_count() const { return pair_count_; }

  bool trivial() const { return pair_count_ == 0; }

  AcceptanceGraph acceptance() const;

  friend bool operator==(const PreferenceInstance& x, const PreferenceInstance& y) {
    return x.lists_ == y.lists_;
  }

 private:
  PreferenceInstance() = default;

  PeerId n_ = 0;
  std::size_t pair_count_ = 0;
  std::vector<std::vector<PeerId>> lists_;
  std::vector<std::int32_t> ranks_;  // n*n, -1 = unacceptable
};

/// Outcome of validate_marks.
struct MarkValidation {
  struct Tie {
    PeerId peer;
    PeerId first;
    PeerId second;
    double value;
  };
  struct OneSided {
    PeerId from;  // m(from,to) finite
    PeerId to;    // m(to,from) infinite
  };

  std::vector<Tie> ties;
  std::vector<OneSided> one_sided;
  bool symmetric = true;  // m(p,q) == m(q,p) on every mutually finite pair

  bool ok() const { return ties.empty() && one_sided.empty(); }
  std::string describe() const;
};

/// Reports in-row ties among finite entries, mutual-acceptance violations,
/// and whether the matrix is symmetric. Passing = no ties, no violations.
MarkValidation validate_marks(const MarkMatrix& m);

/// Sorts each peer's finite marks best-first under the matrix orientation.
/// Throws StructuralError when validate_marks fails.
PreferenceInstance preferences_from_marks(const MarkMatrix& m);

/// Edge {p,q} present iff m(p,q) is finite. Requires validated marks.
AcceptanceGraph acceptance_from_marks(const MarkMatrix& m);

}  // namespace bmatch
