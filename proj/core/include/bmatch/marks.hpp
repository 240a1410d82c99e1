#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "bmatch/errors.hpp"

namespace bmatch {

using PeerId = std::int32_t;

/// Whether a smaller or a larger mark wins a comparison. Latency-like
/// marks are lower-is-better; complementary marks are higher-is-better.
enum class Orientation { kLowerIsBetter, kHigherIsBetter };

inline Orientation flipped(Orientation o) {
  return o == Orientation::kLowerIsBetter ? Orientation::kHigherIsBetter
                                          : Orientation::kLowerIsBetter;
}

/// An extended-real mark: a finite value or infinity (non-acceptance).
/// The wrapper keeps infinity out of accidental arithmetic; callers must
/// test is_finite() before touching value().
class Mark {
 public:
  constexpr Mark() = default;  // infinite

  static Mark finite(double v) {
    if (!std::isfinite(v)) throw DomainError("Mark::finite requires a finite value");
    Mark m;
    m.v_ = v;
    return m;
  }

  static constexpr Mark infinity() { return Mark{}; }

  bool is_finite() const { return std::isfinite(v_); }

  double value() const {
    assert(is_finite());
    return v_;
  }

  friend bool operator==(const Mark&, const Mark&) = default;

 private:
  double v_ = std::numeric_limits<double>::infinity();
};

/// n x n matrix of marks m(p,q). The diagonal is never consulted;
/// infinity encodes mutual non-acceptance.
class MarkMatrix {
 public:
  MarkMatrix(PeerId n, Orientation orientation)
      : n_(n), orientation_(orientation), cells_(static_cast<std::size_t>(n) * n) {
    if (n < 0) throw StructuralError("MarkMatrix: negative size");
  }

  PeerId size() const { return n_; }
  Orientation orientation() const { return orientation_; }

  Mark at(PeerId p, PeerId q) const { return cells_[index(p, q)]; }
  void set(PeerId p, PeerId q, Mark m) { cells_[index(p, q)] = m; }

  bool finite(PeerId p, PeerId q) const { return at(p, q).is_finite(); }

  /// true when mark value a beats b under this matrix's orientation.
  bool better(double a, double b) const {
    return orientation_ == Orientation::kLowerIsBetter ? a < b : a > b;
  }

  friend bool operator==(const MarkMatrix&, const MarkMatrix&) = default;

 private:
  std::size_t index(PeerId p, PeerId q) const {
    assert(p >= 0 && p < n_ && q >= 0 && q < n_);
    return static_cast<std::size_t>(p) * n_ + q;
  }

  PeerId n_;
  Orientation orientation_;
  std::vector<Mark> cells_;
};

/// One mark per peer, pairwise distinct; everyone agrees on each peer's worth.
struct GlobalMarkVector {
  std::vector<double> values;

  PeerId size() const { return static_cast<PeerId>(values.size()); }
};

/// Materializes global marks as a full matrix: m(i,p) = v(p), all pairs accepted.
MarkMatrix global_matrix(const GlobalMarkVector& v, Orientation orientation);

/// Negates every finite entry and flips the orientation flag.
/// The induced preferences are unchanged.
MarkMatrix negated(const MarkMatrix& m);

}  // namespace bmatch
