#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <limits>
#include <vector>

#include "bmatch/errors.hpp"
#include "bmatch/marks.hpp"

namespace bmatch {

/// Unordered peer pair stored canonically with a < b.
struct Edge {
  PeerId a = -1;
  PeerId b = -1;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(PeerId p, PeerId q) {
  if (p == q) throw DomainError("edge endpoints must differ");
  return p < q ? Edge{p, q} : Edge{q, p};
}

inline PeerId other_endpoint(const Edge& e, PeerId p) {
  assert(p == e.a || p == e.b);
  return p == e.a ? e.b : e.a;
}

namespace detail {
// Sorts, dedups, and checks ids against n (n < 0 skips the bound check).
std::vector<Edge> canonical_edges(std::vector<Edge> edges, PeerId n);
}  // namespace detail

/// Undirected graph of allowed collaborations.
class AcceptanceGraph {
 public:
  AcceptanceGraph(PeerId n, std::vector<Edge> edges)
      : n_(n), edges_(detail::canonical_edges(std::move(edges), n)) {}

  static AcceptanceGraph complete(PeerId n);
  static AcceptanceGraph empty(PeerId n) { return AcceptanceGraph(n, {}); }

  PeerId size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  bool contains(PeerId p, PeerId q) const {
    if (p == q) return false;
    return std::binary_search(edges_.begin(), edges_.end(), make_edge(p, q));
  }

  std::vector<std::vector<PeerId>> adjacency() const;

  friend bool operator==(const AcceptanceGraph&, const AcceptanceGraph&) = default;

 private:
  PeerId n_;
  std::vector<Edge> edges_;
};

/// A set of currently realized links; a b-matching once quotas hold.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Edge> links)
      : links_(detail::canonical_edges(std::move(links), -1)) {}

  const std::vector<Edge>& links() const { return links_; }
  std::size_t size() const { return links_.size(); }
  bool empty() const { return links_.empty(); }

  bool contains(PeerId p, PeerId q) const {
    if (p == q) return false;
    return std::binary_search(links_.begin(), links_.end(), make_edge(p, q));
  }

  std::vector<int> degrees(PeerId n) const;
  std::vector<std::vector<PeerId>> adjacency(PeerId n) const;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Edge> links_;
};

/// Per-peer link bound b(p), possibly unbounded.
class QuotaVector {
 public:
  static constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max();

  explicit QuotaVector(std::vector<std::int64_t> quotas) : quotas_(std::move(quotas)) {
    for (auto q : quotas_)
      if (q < 1) throw DomainError("quota must be at least 1");
  }

  static QuotaVector uniform(PeerId n, std::int64_t b) {
    return QuotaVector(std::vector<std::int64_t>(static_cast<std::size_t>(n), b));
  }

  static QuotaVector unbounded(PeerId n) { return uniform(n, kUnbounded); }

  PeerId size() const { return static_cast<PeerId>(quotas_.size()); }
  std::int64_t at(PeerId p) const { return quotas_[static_cast<std::size_t>(p)]; }
  bool is_unbounded(PeerId p) const { return at(p) == kUnbounded; }

 private:
  std::vector<std::int64_t> quotas_;
};

/// degree(p) <= b(p) for every peer.
bool respects_quotas(const Configuration& c, const QuotaVector& b, PeerId n);

}  // namespace bmatch
