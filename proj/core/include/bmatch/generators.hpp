#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bmatch/graph.hpp"
#include "bmatch/marks.hpp"

namespace bmatch {

/// Seeded description of one experimental mark family.
struct GeneratorSpec {
  enum class Family { kGlobal, kRandomSymmetric, kMetricSpace, kComplementary };

  Family family = Family::kRandomSymmetric;
  PeerId n = 2;
  std::uint64_t seed = 0;
  int dim = 3;             // metric-space only, 2 or 3
  double value_lo = 0.0;   // complementary: range of v(p)
  double value_hi = 1.0;
  double common_lo = 0.0;  // complementary: range of c(i,j)
  double common_hi = 1.0;
};

const char* family_name(GeneratorSpec::Family family);
GeneratorSpec::Family family_from_name(const std::string& name);

struct GlobalMarks {
  GlobalMarkVector vector;
  MarkMatrix matrix;  // m(i,p) = v(p), lower-is-better, full acceptance
};

/// n distinct uniform values; the induced lists are identical across
/// peers up to removing self.
GlobalMarks global_marks(PeerId n, std::uint64_t seed);

/// i.i.d. uniform marks on the upper triangle, mirrored; resampled until
/// tie-free.
MarkMatrix random_symmetric_marks(PeerId n, std::uint64_t seed);

/// Pairwise Euclidean distances of n uniform points in the unit cube
/// (dim 2 or 3). Symmetric, satisfies the triangle inequality.
MarkMatrix metric_marks(PeerId n, int dim, std::uint64_t seed);

/// v(j) - c(i,j) over seeded v and symmetric c, higher-is-better,
/// resampled until tie-free.
MarkMatrix complementary_family(const GeneratorSpec& spec);

MarkMatrix generate(const GeneratorSpec& spec);

/// Erdos-Renyi G(n, p): each unordered pair kept independently with
/// probability p.
AcceptanceGraph er_acceptance(PeerId n, double p, std::uint64_t seed);

/// Entries outside g's edges become infinite; others are unchanged.
MarkMatrix restrict_marks(const MarkMatrix& m, const AcceptanceGraph& g);

/// Raw RTT grid: nullopt = missing measurement.
using LatencyGrid = std::vector<std::vector<std::optional<double>>>;

struct LatencyIngestOptions {
  enum class Reconcile { kMean, kMin, kMax };
  Reconcile reconcile = Reconcile::kMean;  // asymmetric pair resolution
  std::uint64_t dither_seed = 0;           // recorded with the output
};

/// Cleans a measured latency matrix into validated marks: missing or
/// zero off-diagonal entries become infinity, asymmetric pairs are
/// reconciled, and exact in-row ties are broken by rank-preserving
/// symmetric dithering (magnitude below half the smallest nonzero gap
/// of either affected row). Rejects non-square grids and negative RTTs.
MarkMatrix ingest_latency_matrix(const LatencyGrid& grid,
                                 const LatencyIngestOptions& options = {});

/// Text form: optional "n=<count>" header, then one whitespace-separated
/// row per line with "inf" (or "-") for missing entries.
LatencyGrid parse_latency_text(std::istream& in);

}  // namespace bmatch
