#include "bmatch/generators.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <set>
#include <sstream>
#include <string>

#include "bmatch/classify.hpp"
#include "bmatch/preferences.hpp"
#include "bmatch/rng.hpp"

namespace bmatch {

const char* family_name(GeneratorSpec::Family family) {
  switch (family) {
    case GeneratorSpec::Family::kGlobal: return "global";
    case GeneratorSpec::Family::kRandomSymmetric: return "symmetric";
    case GeneratorSpec::Family::kMetricSpace: return "metric";
    case GeneratorSpec::Family::kComplementary: return "complementary";
  }
  return "unknown";
}

GeneratorSpec::Family family_from_name(const std::string& name) {
  if (name == "global") return GeneratorSpec::Family::kGlobal;
  if (name == "symmetric") return GeneratorSpec::Family::kRandomSymmetric;
  if (name == "metric") return GeneratorSpec::Family::kMetricSpace;
  if (name == "complementary") return GeneratorSpec::Family::kComplementary;
  throw DomainError("unknown mark family: " + name);
}

namespace {

bool pairwise_distinct(const std::vector<double>& values) {
  std::set<double> seen(values.begin(), values.end());
  return seen.size() == values.size();
}

std::vector<double> distinct_uniforms(Rng& rng, PeerId n, double lo, double hi) {
  std::vector<double> values(static_cast<std::size_t>(n));
  do {
    for (auto& v : values) v = rng.uniform(lo, hi);
  } while (!pairwise_distinct(values));
  return values;
}

}  // namespace

GlobalMarks global_marks(PeerId n, std::uint64_t seed) {
  if (n < 2) throw DomainError("global_marks requires n >= 2");
  Rng rng(seed);
  GlobalMarkVector v{distinct_uniforms(rng, n, 0.0, 1.0)};
  MarkMatrix m = global_matrix(v, Orientation::kLowerIsBetter);
  return GlobalMarks{std::move(v), std::move(m)};
}

MarkMatrix random_symmetric_marks(PeerId n, std::uint64_t seed) {
  if (n < 2) throw DomainError("random_symmetric_marks requires n >= 2");
  Rng rng(seed);
  for (;;) {
    MarkMatrix m(n, Orientation::kLowerIsBetter);
    for (PeerId p = 0; p < n; ++p)
      for (PeerId q = p + 1; q < n; ++q) {
        const Mark mark = Mark::finite(rng.uniform01());
        m.set(p, q, mark);
        m.set(q, p, mark);
      }
    if (validate_marks(m).ok()) return m;  // ties have probability zero
  }
}

MarkMatrix metric_marks(PeerId n, int dim, std::uint64_t seed) {
  if (n < 2) throw DomainError("metric_marks requires n >= 2");
  if (dim != 2 && dim != 3) throw DomainError("metric_marks requires dim 2 or 3");
  Rng rng(seed);
  for (;;) {
    std::vector<double> points(static_cast<std::size_t>(n) * dim);
    for (auto& x : points) x = rng.uniform01();

    MarkMatrix m(n, Orientation::kLowerIsBetter);
    for (PeerId p = 0; p < n; ++p)
      for (PeerId q = p + 1; q < n; ++q) {
        double sq = 0.0;
        for (int d = 0; d < dim; ++d) {
          const double delta = points[static_cast<std::size_t>(p) * dim + d] -
                               points[static_cast<std::size_t>(q) * dim + d];
          sq += delta * delta;
        }
        const Mark mark = Mark::finite(std::sqrt(sq));
        m.set(p, q, mark);
        m.set(q, p, mark);
      }
    if (validate_marks(m).ok()) return m;
  }
}

MarkMatrix complementary_family(const GeneratorSpec& spec) {
  if (spec.n < 2) throw DomainError("complementary_family requires n >= 2");
  Rng rng(spec.seed);
  for (;;) {
    GlobalMarkVector v{distinct_uniforms(rng, spec.n, spec.value_lo, spec.value_hi)};
    MarkMatrix c(spec.n, Orientation::kLowerIsBetter);
    for (PeerId p = 0; p < spec.n; ++p)
      for (PeerId q = p + 1; q < spec.n; ++q) {
        const Mark mark = Mark::finite(rng.uniform(spec.common_lo, spec.common_hi));
        c.set(p, q, mark);
        c.set(q, p, mark);
      }
    MarkMatrix m = complementary_marks(v, c);
    if (validate_marks(m).ok()) return m;
  }
}

MarkMatrix generate(const GeneratorSpec& spec) {
  switch (spec.family) {
    case GeneratorSpec::Family::kGlobal: return global_marks(spec.n, spec.seed).matrix;
    case GeneratorSpec::Family::kRandomSymmetric:
      return random_symmetric_marks(spec.n, spec.seed);
    case GeneratorSpec::Family::kMetricSpace:
      return metric_marks(spec.n, spec.dim, spec.seed);
    case GeneratorSpec::Family::kComplementary: return complementary_family(spec);
  }
  throw DomainError("unknown generator family");
}

AcceptanceGraph er_acceptance(PeerId n, double prob, std::uint64_t seed) {
  if (prob < 0.0 || prob > 1.0)
    throw DomainError("edge probability must lie in [0,1]");
  Rng rng(seed);
  std::vector<Edge> edges;
  for (PeerId p = 0; p < n; ++p)
    for (PeerId q = p + 1; q < n; ++q)
      if (rng.uniform01() < prob) edges.push_back({p, q});
  return AcceptanceGraph(n, std::move(edges));
}

MarkMatrix restrict_marks(const MarkMatrix& m, const AcceptanceGraph& g) {
  if (m.size() != g.size())
    throw StructuralError("restrict_marks: matrix and graph sizes differ");

  const PeerId n = m.size();
  std::vector<bool> allowed(static_cast<std::size_t>(n) * n, false);
  for (const Edge& e : g.edges()) {
    allowed[static_cast<std::size_t>(e.a) * n + e.b] = true;
    allowed[static_cast<std::size_t>(e.b) * n + e.a] = true;
  }

  MarkMatrix out(n, m.orientation());
  for (PeerId p = 0; p < n; ++p)
    for (PeerId q = 0; q < n; ++q)
      if (p != q && allowed[static_cast<std::size_t>(p) * n + q] && m.finite(p, q))
        out.set(p, q, m.at(p, q));
  return out;
}

namespace {

// Half the smallest nonzero gap between distinct finite values of a row;
// perturbations below it cannot reorder distinct entries.
std::vector<double> row_epsilons(const MarkMatrix& m) {
  const PeerId n = m.size();
  std::vector<double> eps(static_cast<std::size_t>(n));
  std::vector<double> row;
  for (PeerId p = 0; p < n; ++p) {
    row.clear();
    double largest = 1.0;
    for (PeerId q = 0; q < n; ++q)
      if (q != p && m.finite(p, q)) {
        row.push_back(m.at(p, q).value());
        largest = std::max(largest, std::abs(row.back()));
      }
    std::sort(row.begin(), row.end());
    double gap = 0.0;
    for (std::size_t i = 1; i < row.size(); ++i)
      if (row[i] != row[i - 1] && (gap == 0.0 || row[i] - row[i - 1] < gap))
        gap = row[i] - row[i - 1];
    eps[static_cast<std::size_t>(p)] = gap > 0.0 ? gap / 2.0 : largest * 1e-9;
  }
  return eps;
}

}  // namespace

MarkMatrix ingest_latency_matrix(const LatencyGrid& grid,
                                 const LatencyIngestOptions& options) {
  const PeerId n = static_cast<PeerId>(grid.size());
  for (const auto& row : grid)
    if (static_cast<PeerId>(row.size()) != n)
      throw StructuralError("latency matrix is not square");
  for (const auto& row : grid)
    for (const auto& cell : row)
      if (cell && *cell < 0.0)
        throw StructuralError("latency matrix contains a negative RTT");

  // A pair is acceptable only when both directions were measured
  // (zero counts as missing); the two directions are then reconciled.
  MarkMatrix m(n, Orientation::kLowerIsBetter);
  for (PeerId p = 0; p < n; ++p)
    for (PeerId q = p + 1; q < n; ++q) {
      const auto& forward = grid[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
      const auto& backward = grid[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)];
      if (!forward || *forward == 0.0 || !backward || *backward == 0.0) continue;
      double value = 0.0;
      switch (options.reconcile) {
        case LatencyIngestOptions::Reconcile::kMean: value = (*forward + *backward) / 2.0; break;
        case LatencyIngestOptions::Reconcile::kMin: value = std::min(*forward, *backward); break;
        case LatencyIngestOptions::Reconcile::kMax: value = std::max(*forward, *backward); break;
      }
      m.set(p, q, Mark::finite(value));
      m.set(q, p, Mark::finite(value));
    }

  // Break exact in-row ties by seeded symmetric dithering: both
  // directions of a tied pair move together, so the matrix stays
  // symmetric and the induced instance stays acyclic.
  Rng rng(options.dither_seed);
  for (int round = 0; round < 100; ++round) {
    auto report = validate_marks(m);
    if (report.ok()) return m;

    std::set<Edge> tied;
    for (const auto& tie : report.ties) {
      tied.insert(make_edge(tie.peer, tie.first));
      tied.insert(make_edge(tie.peer, tie.second));
    }
    const auto eps = row_epsilons(m);
    for (const Edge& e : tied) {
      const double bound = std::min(eps[static_cast<std::size_t>(e.a)],
                                    eps[static_cast<std::size_t>(e.b)]);
      const Mark dithered = Mark::finite(m.at(e.a, e.b).value() + rng.uniform01() * bound);
      m.set(e.a, e.b, dithered);
      m.set(e.b, e.a, dithered);
    }
  }
  throw StructuralError("latency dithering failed to break ties");
}

LatencyGrid parse_latency_text(std::istream& in) {
  LatencyGrid grid;
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> declared;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream tokens(line);
    std::string tok;
    if (!(tokens >> tok)) continue;  // blank line
    if (tok.rfind("n=", 0) == 0 && grid.empty() && !declared) {
      try {
        declared = std::stoul(tok.substr(2));
      } catch (const std::exception&) {
        throw ParseError("bad header in latency matrix", line_no);
      }
      continue;
    }
    std::vector<std::optional<double>> row;
    do {
      if (tok == "inf" || tok == "INF" || tok == "Inf" || tok == "-" || tok == "?") {
        row.push_back(std::nullopt);
      } else {
        try {
          std::size_t used = 0;
          const double v = std::stod(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
          row.push_back(v);
        } catch (const std::exception&) {
          throw ParseError("bad latency value '" + tok + "'", line_no);
        }
      }
    } while (tokens >> tok);
    grid.push_back(std::move(row));
  }
  if (declared && grid.size() != *declared)
    throw ParseError("latency matrix row count differs from declared n", line_no);
  return grid;
}

}  // namespace bmatch
