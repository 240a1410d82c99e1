#include "bmatch/graph.hpp"

#include <algorithm>
#include <string>

namespace bmatch {

namespace detail {

std::vector<Edge> canonical_edges(std::vector<Edge> edges, PeerId n) {
  for (auto& e : edges) {
    if (e.a == e.b) throw StructuralError("self-loop edge " + std::to_string(e.a));
    if (e.a > e.b) std::swap(e.a, e.b);
    if (e.a < 0 || (n >= 0 && e.b >= n))
      throw StructuralError("edge endpoint out of range: " + std::to_string(e.a) +
                            " " + std::to_string(e.b));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace detail

AcceptanceGraph AcceptanceGraph::complete(PeerId n) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (PeerId p = 0; p < n; ++p)
    for (PeerId q = p + 1; q < n; ++q) edges.push_back({p, q});
  return AcceptanceGraph(n, std::move(edges));
}

std::vector<std::vector<PeerId>> AcceptanceGraph::adjacency() const {
  std::vector<std::vector<PeerId>> adj(static_cast<std::size_t>(n_));
  for (const auto& e : edges_) {
    adj[static_cast<std::size_t>(e.a)].push_back(e.b);
    adj[static_cast<std::size_t>(e.b)].push_back(e.a);
  }
  return adj;
}

std::vector<int> Configuration::degrees(PeerId n) const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& e : links_) {
    if (e.b >= n) throw StructuralError("configuration references peer " +
                                        std::to_string(e.b) + " outside 0.." +
                                        std::to_string(n - 1));
    ++deg[static_cast<std::size_t>(e.a)];
    ++deg[static_cast<std::size_t>(e.b)];
  }
  return deg;
}

std::vector<std::vector<PeerId>> Configuration::adjacency(PeerId n) const {
  std::vector<std::vector<PeerId>> adj(static_cast<std::size_t>(n));
  for (const auto& e : links_) {
    if (e.b >= n) throw StructuralError("configuration references peer " +
                                        std::to_string(e.b) + " outside 0.." +
                                        std::to_string(n - 1));
    adj[static_cast<std::size_t>(e.a)].push_back(e.b);
    adj[static_cast<std::size_t>(e.b)].push_back(e.a);
  }
  return adj;
}

bool respects_quotas(const Configuration& c, const QuotaVector& b, PeerId n) {
  auto deg = c.degrees(n);
  for (PeerId p = 0; p < n; ++p) {
    if (!b.is_unbounded(p) && deg[static_cast<std::size_t>(p)] > b.at(p)) return false;
  }
  return true;
}

}  // namespace bmatch
