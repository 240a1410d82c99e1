#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bmatch/dynamics.hpp"
#include "bmatch/generators.hpp"
#include "bmatch/graph_metrics.hpp"

namespace bmatch {

/// How the acceptance graph of an experiment is chosen.
struct AcceptanceSpec {
  enum class Kind { kComplete, kErdosRenyi, kFile };

  Kind kind = Kind::kComplete;
  double er_p = 0.5;
  std::string path;

  static AcceptanceSpec parse(const std::string& text);  // complete | er:<p> | file:<path>
  std::string to_string() const;
};

/// One full sweep: a mark family evaluated over a list of uniform
/// quotas, several repetitions each. All randomness derives from seed.
struct ExperimentConfig {
  GeneratorSpec::Family family = GeneratorSpec::Family::kRandomSymmetric;
  PeerId n = 500;
  std::vector<std::int64_t> quotas{10};
  int reps = 5;
  std::uint64_t seed = 0;

  enum class Mode { kSolve, kSimulate };
  Mode mode = Mode::kSolve;

  ActivationPolicy::Kind policy = ActivationPolicy::Kind::kUniformRandomBlockingPair;
  std::size_t step_limit = 0;  // simulate mode; 0 = default cap

  AcceptanceSpec acceptance;
  int metric_dim = 3;
  double value_lo = 0.0, value_hi = 1.0;    // complementary family
  double common_lo = 0.0, common_hi = 1.0;

  /// Canonical one-line echo; identical configs produce identical text.
  std::string canonical_string() const;
  std::uint64_t config_hash() const;
};

/// One (family, b, repetition) cell.
struct ResultRow {
  std::string family;
  PeerId n = 0;
  std::int64_t b = 0;
  int rep = 0;
  std::uint64_t seed = 0;  // derived cell seed
  std::optional<int> diameter;
  int largest_component_diameter = 0;
  std::optional<double> clustering;
  std::size_t component_count = 0;
  std::optional<std::size_t> steps;  // simulate mode only
  double wall_ms = 0.0;              // reported in comments, never in the CSV body
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ResultRow> rows;  // sorted by (b, rep)
};

/// Runs all cells, in parallel up to BMATCH_THREADS (default: hardware
/// concurrency). Each cell owns a seed derived from (config seed, cell
/// index), so results are independent of scheduling.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Comment header (config echo, hash, per-cell timings) followed by the
/// CSV body. Bodies of identical configs are byte-identical.
void write_csv(std::ostream& out, const ExperimentResult& result);

/// The deterministic part alone: header row plus data rows.
std::string csv_body(const ExperimentResult& result);

}  // namespace bmatch
