#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bmatch/graph.hpp"

namespace bmatch {

/// Probability that two vertices with at least one common neighbor are
/// themselves linked (the pairwise definition). nullopt when no vertex
/// pair has a common neighbor.
std::optional<double> clustering_coefficient(const Configuration& c, PeerId n);

/// Watts-style average of local clustering over vertices of degree >= 2,
/// kept for comparison plots. nullopt when no such vertex exists.
std::optional<double> watts_clustering(const Configuration& c, PeerId n);

/// Max over vertex pairs of shortest-path length; nullopt when the graph
/// is disconnected (n >= 2). A single vertex has diameter 0.
std::optional<int> diameter(const Configuration& c, PeerId n);

/// Connected components; the union of the parts is all of 0..n-1.
std::vector<std::vector<PeerId>> components(const Configuration& c, PeerId n);

std::map<int, int> degree_histogram(const Configuration& c, PeerId n);

struct MetricsReport {
  std::optional<int> diameter;             // nullopt = infinite (disconnected)
  int largest_component_diameter = 0;      // finite reading for disconnected plots
  std::optional<double> clustering;        // pairwise definition
  std::optional<double> watts_clustering;
  std::size_t component_count = 0;
  std::vector<std::size_t> component_sizes;  // descending
  std::map<int, int> degree_histogram;
};

MetricsReport compute_metrics(const Configuration& c, PeerId n);

}  // namespace bmatch
