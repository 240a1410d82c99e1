#include "bmatch/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bmatch/classify.hpp"
#include "bmatch/io.hpp"
#include "bmatch/preferences.hpp"
#include "bmatch/rng.hpp"
#include "bmatch/solver.hpp"

namespace bmatch {

AcceptanceSpec AcceptanceSpec::parse(const std::string& text) {
  AcceptanceSpec spec;
  if (text == "complete") {
    spec.kind = Kind::kComplete;
  } else if (text.rfind("er:", 0) == 0) {
    spec.kind = Kind::kErdosRenyi;
    try {
      spec.er_p = std::stod(text.substr(3));
    } catch (const std::exception&) {
      throw DomainError("bad acceptance spec: " + text);
    }
    if (spec.er_p < 0.0 || spec.er_p > 1.0)
      throw DomainError("acceptance probability out of range: " + text);
  } else if (text.rfind("file:", 0) == 0) {
    spec.kind = Kind::kFile;
    spec.path = text.substr(5);
  } else {
    throw DomainError("acceptance must be complete, er:<p>, or file:<path>");
  }
  return spec;
}

std::string AcceptanceSpec::to_string() const {
  switch (kind) {
    case Kind::kComplete: return "complete";
    case Kind::kErdosRenyi: return "er:" + format_double(er_p);
    case Kind::kFile: return "file:" + path;
  }
  return "complete";
}

std::string ExperimentConfig::canonical_string() const {
  std::ostringstream out;
  out << "family=" << family_name(family) << " n=" << n << " b=";
  for (std::size_t i = 0; i < quotas.size(); ++i) {
    if (i) out << ',';
    out << quotas[i];
  }
  out << " reps=" << reps << " seed=" << seed
      << " mode=" << (mode == Mode::kSolve ? "solve" : "simulate")
      << " policy=" << policy_name(policy) << " step_limit=" << step_limit
      << " acceptance=" << acceptance.to_string() << " dim=" << metric_dim;
  if (family == GeneratorSpec::Family::kComplementary)
    out << " value=" << format_double(value_lo) << ':' << format_double(value_hi)
        << " common=" << format_double(common_lo) << ':' << format_double(common_hi);
  return out.str();
}

std::uint64_t ExperimentConfig::config_hash() const {
  return fnv1a64(canonical_string());
}

namespace {

std::size_t thread_budget(std::size_t cells) {
  std::size_t budget = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("BMATCH_THREADS")) {
    char* end = nullptr;
    const unsigned long parsed = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && parsed > 0) budget = parsed;
  }
  if (budget == 0) budget = 1;
  return std::min(budget, std::max<std::size_t>(cells, 1));
}

ResultRow run_cell(const ExperimentConfig& config, std::size_t cell_index,
                   std::int64_t b, int rep) {
  const auto started = std::chrono::steady_clock::now();

  const std::uint64_t cell_seed = derive_seed(config.seed, cell_index);
  const std::uint64_t marks_seed = derive_seed(cell_seed, 0);
  const std::uint64_t acceptance_seed = derive_seed(cell_seed, 1);
  const std::uint64_t policy_seed = derive_seed(cell_seed, 2);

  GeneratorSpec spec;
  spec.family = config.family;
  spec.n = config.n;
  spec.seed = marks_seed;
  spec.dim = config.metric_dim;
  spec.value_lo = config.value_lo;
  spec.value_hi = config.value_hi;
  spec.common_lo = config.common_lo;
  spec.common_hi = config.common_hi;

  MarkMatrix marks = generate(spec);
  switch (config.acceptance.kind) {
    case AcceptanceSpec::Kind::kComplete:
      break;
    case AcceptanceSpec::Kind::kErdosRenyi:
      marks = restrict_marks(marks,
                             er_acceptance(config.n, config.acceptance.er_p,
                                           acceptance_seed));
      break;
    case AcceptanceSpec::Kind::kFile: {
      Configuration edges = read_configuration_file(config.acceptance.path);
      marks = restrict_marks(marks, AcceptanceGraph(config.n, edges.links()));
      break;
    }
  }

  const PreferenceInstance L = preferences_from_marks(marks);
  const QuotaVector quota = QuotaVector::uniform(config.n, b);

  ResultRow row;
  row.family = family_name(config.family);
  row.n = config.n;
  row.b = b;
  row.rep = rep;
  row.seed = cell_seed;

  Configuration stable;
  if (config.mode == ExperimentConfig::Mode::kSolve) {
    stable = stable_configuration(L, quota);
  } else {
    ActivationPolicy policy;
    policy.kind = config.policy;
    policy.seed = policy_seed;
    if (policy.kind == ActivationPolicy::Kind::kFixedSchedule) {
      policy.schedule = L.acceptance().edges();
      Rng rng(policy_seed);
      rng.shuffle(policy.schedule);
    }
    DynamicsResult dyn = run_dynamics(L, quota, Configuration(), policy,
                                      config.step_limit);
    stable = std::move(dyn.configuration);
    row.steps = dyn.trace.size();
  }

  const MetricsReport metrics = compute_metrics(stable, config.n);
  row.diameter = metrics.diameter;
  row.largest_component_diameter = metrics.largest_component_diameter;
  row.clustering = metrics.clustering;
  row.component_count = metrics.component_count;

  if (!metrics.degree_histogram.empty() &&
      metrics.degree_histogram.rbegin()->first > b)
    throw std::logic_error("experiment cell produced a degree above the quota");

  row.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - started)
                    .count();
  return row;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  struct Cell {
    std::size_t index;
    std::int64_t b;
    int rep;
  };
  std::vector<Cell> cells;
  for (std::size_t bi = 0; bi < config.quotas.size(); ++bi)
    for (int rep = 0; rep < config.reps; ++rep)
      cells.push_back({bi * static_cast<std::size_t>(config.reps) +
                           static_cast<std::size_t>(rep),
                       config.quotas[bi], rep});

  ExperimentResult result;
  result.config = config;
  result.rows.resize(cells.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      try {
        result.rows[i] = run_cell(config, cells[i].index, cells[i].b, cells[i].rep);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const std::size_t threads = thread_budget(cells.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  return result;  // rows already ordered by (b index, rep)
}

namespace {

std::string csv_field(const std::optional<int>& v) {
  return v ? std::to_string(*v) : std::string("inf");
}

std::string csv_field(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("undef");
}

}  // namespace

std::string csv_body(const ExperimentResult& result) {
  std::ostringstream out;
  out << "family,n,b,rep,seed,diameter,largest_component_diameter,clustering,"
         "components,steps\n";
  for (const ResultRow& row : result.rows) {
    out << row.family << ',' << row.n << ',' << row.b << ',' << row.rep << ','
        << row.seed << ',' << csv_field(row.diameter) << ','
        << row.largest_component_diameter << ',' << csv_field(row.clustering) << ','
        << row.component_count << ','
        << (row.steps ? std::to_string(*row.steps) : std::string()) << "\n";
  }
  return out.str();
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(result.config.config_hash()));
  out << "# bmatch experiment\n";
  out << "# config: " << result.config.canonical_string() << "\n";
  out << "# config_hash: " << hash << "\n";
  // wall-clock timings stay in comments so the body is reproducible
  for (const ResultRow& row : result.rows)
    out << "# timing: b=" << row.b << " rep=" << row.rep
        << " wall_ms=" << format_double(row.wall_ms) << "\n";
  out << csv_body(result);
}

}  // namespace bmatch
