#include "bmatch/graph_metrics.hpp"

#include <algorithm>
#include <queue>

namespace bmatch {

namespace {

// Adjacency as packed bit rows; common-neighbor tests are word-parallel.
class BitAdjacency {
 public:
  BitAdjacency(const Configuration& c, PeerId n)
      : n_(n), words_((static_cast<std::size_t>(n) + 63) / 64),
        bits_(static_cast<std::size_t>(n) * words_, 0) {
    for (const Edge& e : c.links()) {
      set(e.a, e.b);
      set(e.b, e.a);
    }
  }

  bool adjacent(PeerId p, PeerId q) const {
    return (row(p)[static_cast<std::size_t>(q) / 64] >>
            (static_cast<std::size_t>(q) % 64)) & 1u;
  }

  bool share_neighbor(PeerId p, PeerId q) const {
    const std::uint64_t* a = row(p);
    const std::uint64_t* b = row(q);
    for (std::size_t w = 0; w < words_; ++w)
      if (a[w] & b[w]) return true;
    return false;
  }

 private:
  void set(PeerId p, PeerId q) {
    bits_[static_cast<std::size_t>(p) * words_ + static_cast<std::size_t>(q) / 64] |=
        std::uint64_t{1} << (static_cast<std::size_t>(q) % 64);
  }

  const std::uint64_t* row(PeerId p) const {
    return bits_.data() + static_cast<std::size_t>(p) * words_;
  }

  PeerId n_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

// Eccentricity-style BFS: returns (max distance seen, vertices reached).
std::pair<int, std::size_t> bfs_far(const std::vector<std::vector<PeerId>>& adj,
                                    PeerId source, std::vector<int>& dist) {
  std::fill(dist.begin(), dist.end(), -1);
  std::queue<PeerId> queue;
  dist[static_cast<std::size_t>(source)] = 0;
  queue.push(source);
  int far = 0;
  std::size_t reached = 1;
  while (!queue.empty()) {
    const PeerId u = queue.front();
    queue.pop();
    for (PeerId v : adj[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] >= 0) continue;
      dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
      far = std::max(far, dist[static_cast<std::size_t>(v)]);
      ++reached;
      queue.push(v);
    }
  }
  return {far, reached};
}

}  // namespace

std::optional<double> clustering_coefficient(const Configuration& c, PeerId n) {
  BitAdjacency adj(c, n);
  std::size_t qualifying = 0;
  std::size_t linked = 0;
  for (PeerId p = 0; p < n; ++p)
    for (PeerId q = p + 1; q < n; ++q) {
      if (!adj.share_neighbor(p, q)) continue;
      ++qualifying;
      if (adj.adjacent(p, q)) ++linked;
    }
  if (qualifying == 0) return std::nullopt;
  return static_cast<double>(linked) / static_cast<double>(qualifying);
}

std::optional<double> watts_clustering(const Configuration& c, PeerId n) {
  BitAdjacency bits(c, n);
  const auto adj = c.adjacency(n);
  double sum = 0.0;
  std::size_t counted = 0;
  for (PeerId p = 0; p < n; ++p) {
    const auto& nbrs = adj[static_cast<std::size_t>(p)];
    if (nbrs.size() < 2) continue;
    std::size_t triangles = 0;
    for (std::size_t i = 0; i < nbrs.size(); ++i)
      for (std::size_t j = i + 1; j < nbrs.size(); ++j)
        if (bits.adjacent(nbrs[i], nbrs[j])) ++triangles;
    sum += 2.0 * static_cast<double>(triangles) /
           (static_cast<double>(nbrs.size()) * (static_cast<double>(nbrs.size()) - 1));
    ++counted;
  }
  if (counted == 0) return std::nullopt;
  return sum / static_cast<double>(counted);
}

std::optional<int> diameter(const Configuration& c, PeerId n) {
  if (n <= 0) return 0;
  const auto adj = c.adjacency(n);
  std::vector<int> dist(static_cast<std::size_t>(n));
  int best = 0;
  for (PeerId p = 0; p < n; ++p) {
    auto [far, reached] = bfs_far(adj, p, dist);
    if (reached != static_cast<std::size_t>(n)) return std::nullopt;
    best = std::max(best, far);
  }
  return best;
}

std::vector<std::vector<PeerId>> components(const Configuration& c, PeerId n) {
  const auto adj = c.adjacency(n);
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<std::vector<PeerId>> parts;
  for (PeerId start = 0; start < n; ++start) {
    if (seen[static_cast<std::size_t>(start)]) continue;
    std::vector<PeerId> part;
    std::queue<PeerId> queue;
    seen[static_cast<std::size_t>(start)] = true;
    queue.push(start);
    while (!queue.empty()) {
      const PeerId u = queue.front();
      queue.pop();
      part.push_back(u);
      for (PeerId v : adj[static_cast<std::size_t>(u)])
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          queue.push(v);
        }
    }
    std::sort(part.begin(), part.end());
    parts.push_back(std::move(part));
  }
  return parts;
}

std::map<int, int> degree_histogram(const Configuration& c, PeerId n) {
  std::map<int, int> histogram;
  for (int d : c.degrees(n)) ++histogram[d];
  return histogram;
}

MetricsReport compute_metrics(const Configuration& c, PeerId n) {
  MetricsReport report;
  report.diameter = diameter(c, n);
  report.clustering = clustering_coefficient(c, n);
  report.watts_clustering = watts_clustering(c, n);
  report.degree_histogram = degree_histogram(c, n);

  auto parts = components(c, n);
  report.component_count = parts.size();
  report.component_sizes.reserve(parts.size());
  for (const auto& part : parts) report.component_sizes.push_back(part.size());
  std::sort(report.component_sizes.rbegin(), report.component_sizes.rend());

  // Diameter of the largest component (first by size, then by smallest
  // contained vertex) gives the finite reading used by plots.
  if (report.diameter) {
    report.largest_component_diameter = *report.diameter;
  } else if (!parts.empty()) {
    const std::vector<PeerId>* largest = &parts.front();
    for (const auto& part : parts)
      if (part.size() > largest->size()) largest = &part;

    // restrict the configuration to that component and re-run BFS
    std::vector<int> index(static_cast<std::size_t>(n), -1);
    for (std::size_t i = 0; i < largest->size(); ++i)
      index[static_cast<std::size_t>((*largest)[i])] = static_cast<int>(i);
    std::vector<Edge> sub;
    for (const Edge& e : c.links())
      if (index[static_cast<std::size_t>(e.a)] >= 0 &&
          index[static_cast<std::size_t>(e.b)] >= 0)
        sub.push_back(make_edge(index[static_cast<std::size_t>(e.a)],
                                index[static_cast<std::size_t>(e.b)]));
    auto d = diameter(Configuration(std::move(sub)),
                      static_cast<PeerId>(largest->size()));
    report.largest_component_diameter = d.value_or(0);
  }
  return report;
}

}  // namespace bmatch
