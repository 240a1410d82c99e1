// bmatch: marks, preference instances, stable b-matchings, and the
// experiment harness behind them, driven from the command line.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "bmatch/classify.hpp"
#include "bmatch/dynamics.hpp"
#include "bmatch/experiment.hpp"
#include "bmatch/generators.hpp"
#include "bmatch/graph_metrics.hpp"
#include "bmatch/io.hpp"
#include "bmatch/rng.hpp"
#include "bmatch/solver.hpp"

namespace {

using namespace bmatch;

constexpr int kExitParse = 2;
constexpr int kExitContract = 3;
constexpr int kExitIo = 4;

// Either a marks file or an instance file; sniffed from the first line
// unless --kind forces one.
struct LoadedInput {
  std::optional<MarkMatrix> marks;
  PreferenceInstance instance = PreferenceInstance::from_lists({});
};

std::string sniff_kind(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.rfind("n=", 0) == 0) return "marks";
    if (line.find(':') != std::string::npos) return "instance";
    break;
  }
  throw ParseError("cannot tell whether '" + path + "' is a marks or instance file", 1);
}

LoadedInput load_input(const std::string& path, std::string kind) {
  if (kind == "auto") kind = sniff_kind(path);
  LoadedInput input;
  if (kind == "marks") {
    input.marks = read_marks_file(path);
    input.instance = preferences_from_marks(*input.marks);
  } else {
    input.instance = read_instance_file(path);
  }
  return input;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos)
    throw DomainError("range must look like <lo>:<hi>: " + text);
  try {
    const double lo = std::stod(text.substr(0, colon));
    const double hi = std::stod(text.substr(colon + 1));
    if (!(lo < hi)) throw DomainError("range must have lo < hi: " + text);
    return {lo, hi};
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw DomainError("bad range: " + text);
  }
}

std::int64_t parse_quota(const std::string& text) {
  if (text == "inf") return QuotaVector::kUnbounded;
  try {
    return std::stoll(text);
  } catch (const std::exception&) {
    throw DomainError("bad quota: " + text);
  }
}

ActivationPolicy parse_policy(const std::string& text, std::uint64_t seed) {
  if (text == "uniform") return ActivationPolicy::uniform(seed);
  if (text == "roundrobin") return ActivationPolicy::round_robin(seed);
  if (text.rfind("fixed:", 0) == 0) {
    Configuration schedule = read_configuration_file(text.substr(6));
    auto policy = ActivationPolicy::fixed(schedule.links());
    policy.seed = seed;
    return policy;
  }
  throw DomainError("policy must be uniform, roundrobin, or fixed:<path>");
}

ActivationPolicy::Kind parse_policy_kind(const std::string& text) {
  if (text == "uniform") return ActivationPolicy::Kind::kUniformRandomBlockingPair;
  if (text == "roundrobin") return ActivationPolicy::Kind::kRoundRobinPeer;
  if (text == "fixed") return ActivationPolicy::Kind::kFixedSchedule;
  throw DomainError("policy must be uniform, roundrobin, or fixed");
}

int cmd_gen(const std::string& family, PeerId n, std::uint64_t seed, int dim,
            const std::string& acceptance, const std::string& value_range,
            const std::string& common_range, const std::string& out) {
  GeneratorSpec spec;
  spec.family = family_from_name(family);
  spec.n = n;
  spec.seed = seed;
  spec.dim = dim;
  std::tie(spec.value_lo, spec.value_hi) = parse_range(value_range);
  std::tie(spec.common_lo, spec.common_hi) = parse_range(common_range);

  MarkMatrix marks = generate(spec);
  const AcceptanceSpec acc = AcceptanceSpec::parse(acceptance);
  switch (acc.kind) {
    case AcceptanceSpec::Kind::kComplete: break;
    case AcceptanceSpec::Kind::kErdosRenyi:
      marks = restrict_marks(marks, er_acceptance(n, acc.er_p, derive_seed(seed, 1)));
      break;
    case AcceptanceSpec::Kind::kFile: {
      Configuration edges = read_configuration_file(acc.path);
      marks = restrict_marks(marks, AcceptanceGraph(n, edges.links()));
      break;
    }
  }

  std::ostringstream text;
  write_marks(text, marks);
  write_text(out, text.str());
  return 0;
}

int cmd_ingest(const std::string& path, const std::string& reconcile,
               std::uint64_t dither_seed, const std::string& out) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  const LatencyGrid grid = parse_latency_text(in);

  LatencyIngestOptions options;
  options.dither_seed = dither_seed;
  if (reconcile == "mean")
    options.reconcile = LatencyIngestOptions::Reconcile::kMean;
  else if (reconcile == "min")
    options.reconcile = LatencyIngestOptions::Reconcile::kMin;
  else if (reconcile == "max")
    options.reconcile = LatencyIngestOptions::Reconcile::kMax;
  else
    throw DomainError("reconcile must be mean, min, or max");

  const MarkMatrix marks = ingest_latency_matrix(grid, options);
  std::ostringstream text;
  write_marks(text, marks);
  write_text(out, text.str());
  if (!out.empty()) {
    std::cout << "n: " << marks.size() << "\n";
    std::cout << "pairs: " << acceptance_from_marks(marks).edge_count() << "\n";
    std::cout << "reconcile: " << reconcile << "\n";
    std::cout << "dither_seed: " << dither_seed << "\n";
  }
  return 0;
}

int cmd_check(const std::string& path, const std::string& kind) {
  std::string resolved = kind == "auto" ? sniff_kind(path) : kind;
  std::cout << "kind: " << resolved << "\n";

  std::optional<PreferenceInstance> instance;
  if (resolved == "marks") {
    MarkMatrix marks = read_marks_file(path);
    std::cout << "n: " << marks.size() << "\n";
    const MarkValidation report = validate_marks(marks);
    std::cout << "validation: " << (report.ok() ? "pass" : "fail") << "\n";
    std::cout << "symmetric: " << (report.symmetric ? "true" : "false") << "\n";
    for (const auto& tie : report.ties)
      std::cout << "tie: peer=" << tie.peer << " a=" << tie.first
                << " b=" << tie.second << " value=" << format_double(tie.value)
                << "\n";
    for (const auto& v : report.one_sided)
      std::cout << "one_sided: from=" << v.from << " to=" << v.to << "\n";
    if (!report.ok()) return 0;
    instance = preferences_from_marks(marks);
  } else {
    instance = read_instance_file(path);
    std::cout << "n: " << instance->size() << "\n";
  }

  const PreferenceInstance& L = *instance;
  std::cout << "pairs: " << L.pair_count() << "\n";

  const auto cycle = find_preference_cycle(L);
  std::cout << "acyclic: " << (cycle ? "false" : "true") << "\n";
  if (cycle) {
    std::cout << "cycle:";
    for (PeerId p : cycle->peers) std::cout << ' ' << p;
    std::cout << "\n";
  }

  const GlobalFit fit = is_global_representable(L);
  std::cout << "global: " << (fit.representable() ? "true" : "false") << "\n";
  if (fit.representable()) {
    // best-first peer order implied by the marks
    std::vector<std::pair<double, PeerId>> order;
    for (PeerId p = 0; p < L.size(); ++p)
      order.emplace_back(fit.marks->values[static_cast<std::size_t>(p)], p);
    std::sort(order.begin(), order.end());
    std::cout << "global_order:";
    for (const auto& [value, p] : order) std::cout << ' ' << p;
    std::cout << "\n";
  } else {
    const GlobalConflict& c = *fit.conflict;
    std::cout << "conflict_pair: " << c.peer_a << ' ' << c.peer_b << "\n";
    std::cout << "conflict_rankers: " << c.ranker_forward << ' ' << c.ranker_reverse
              << "\n";
    std::cout << "conflict_chain:";
    for (PeerId p : c.chain) std::cout << ' ' << p;
    std::cout << "\n";
  }

  const auto pairs = loving_pairs(L);
  std::cout << "loving_pairs: " << pairs.size() << "\n";
  if (!pairs.empty()) {
    std::cout << "loving:";
    for (const auto& lp : pairs) std::cout << " {" << lp.a << "," << lp.b << "}";
    std::cout << "\n";
  }
  return 0;
}

int cmd_symmetrize(const std::string& path, const std::string& kind,
                   const std::string& out) {
  const LoadedInput input = load_input(path, kind);
  const SymmetrizeResult result = symmetrize_acyclic(input.instance);

  std::ostringstream text;
  write_marks(text, result.marks);
  write_text(out, text.str());
  if (!out.empty()) {
    std::cout << "n: " << result.marks.size() << "\n";
    std::cout << "pairs: " << result.iterations << "\n";
  }
  return 0;
}

int cmd_solve(const std::string& path, const std::string& kind, const std::string& b,
              const std::string& out) {
  const LoadedInput input = load_input(path, kind);
  const QuotaVector quotas =
      QuotaVector::uniform(input.instance.size(), parse_quota(b));
  const Configuration stable = stable_configuration(input.instance, quotas);

  std::ostringstream text;
  write_configuration(text, stable);
  write_text(out, text.str());
  if (!out.empty()) std::cout << "links: " << stable.size() << "\n";
  return 0;
}

int cmd_simulate(const std::string& path, const std::string& kind,
                 const std::string& b, const std::string& policy_text,
                 std::uint64_t seed, std::size_t step_limit, bool limit_given,
                 const std::string& c0_path, const std::string& trace_path,
                 const std::string& out) {
  const LoadedInput input = load_input(path, kind);
  const PreferenceInstance& L = input.instance;
  const QuotaVector quotas = QuotaVector::uniform(L.size(), parse_quota(b));
  const Configuration c0 =
      c0_path.empty() ? Configuration() : read_configuration_file(c0_path);
  const ActivationPolicy policy = parse_policy(policy_text, seed);

  std::size_t limit = step_limit;
  if (!limit_given) limit = is_acyclic(L) ? 0 : default_step_limit(L.size());

  const DynamicsResult result = run_dynamics(L, quotas, c0, policy, limit);

  if (!trace_path.empty()) {
    std::ofstream trace(trace_path);
    if (!trace) throw IoError("cannot write " + trace_path);
    write_trace(trace, result);
  }
  std::ostringstream text;
  write_configuration(text, result.configuration);
  write_text(out, text.str());
  if (!out.empty()) {
    std::cout << "steps: " << result.steps() << "\n";
    std::cout << "converged: " << (result.converged ? "true" : "false") << "\n";
    std::cout << "links: " << result.configuration.size() << "\n";
  }
  return 0;
}

int cmd_metrics(const std::string& path, PeerId n, const std::string& dot_path) {
  const Configuration c = read_configuration_file(path);
  if (n <= 0) {
    for (const Edge& e : c.links()) n = std::max(n, static_cast<PeerId>(e.b + 1));
    if (n <= 0)
      throw DomainError("empty configuration: pass --n to set the vertex count");
  }

  const MetricsReport report = compute_metrics(c, n);
  std::cout << "n: " << n << "\n";
  std::cout << "links: " << c.size() << "\n";
  std::cout << "components: " << report.component_count << "\n";
  std::cout << "diameter: "
            << (report.diameter ? std::to_string(*report.diameter) : "inf") << "\n";
  std::cout << "largest_component_diameter: " << report.largest_component_diameter
            << "\n";
  std::cout << "clustering: "
            << (report.clustering ? format_double(*report.clustering) : "undef")
            << "\n";
  std::cout << "watts_clustering: "
            << (report.watts_clustering ? format_double(*report.watts_clustering)
                                        : "undef")
            << "\n";
  std::cout << "degrees:";
  for (const auto& [degree, count] : report.degree_histogram)
    std::cout << ' ' << degree << ':' << count;
  std::cout << "\n";

  if (!dot_path.empty()) write_text(dot_path, to_dot(c, n));
  return 0;
}

int cmd_experiment(const std::string& family, PeerId n, const std::string& b_list,
                   int reps, std::uint64_t seed, const std::string& mode,
                   const std::string& policy, std::size_t step_limit,
                   const std::string& acceptance, int dim,
                   const std::string& value_range, const std::string& common_range,
                   const std::string& out) {
  ExperimentConfig config;
  config.family = family_from_name(family);
  config.n = n;
  config.quotas.clear();
  std::istringstream quotas(b_list);
  std::string token;
  while (std::getline(quotas, token, ',')) config.quotas.push_back(parse_quota(token));
  if (config.quotas.empty()) throw DomainError("--b needs at least one quota");
  config.reps = reps;
  config.seed = seed;
  if (mode == "solve")
    config.mode = ExperimentConfig::Mode::kSolve;
  else if (mode == "simulate")
    config.mode = ExperimentConfig::Mode::kSimulate;
  else
    throw DomainError("mode must be solve or simulate");
  config.policy = parse_policy_kind(policy);
  config.step_limit = step_limit;
  config.acceptance = AcceptanceSpec::parse(acceptance);
  config.metric_dim = dim;
  std::tie(config.value_lo, config.value_hi) = parse_range(value_range);
  std::tie(config.common_lo, config.common_hi) = parse_range(common_range);

  const ExperimentResult result = run_experiment(config);
  std::ostringstream text;
  write_csv(text, result);
  write_text(out, text.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stable b-matching preference systems: generators, checks, solver, "
               "dynamics, and graph experiments"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a marks file from a seeded family");
  std::string gen_family = "symmetric", gen_acceptance = "complete";
  std::string gen_value = "0:1", gen_common = "0:1", gen_out;
  PeerId gen_n = 0;
  std::uint64_t gen_seed = 0;
  int gen_dim = 3;
  gen->add_option("--family", gen_family, "global|symmetric|metric|complementary")
      ->required();
  gen->add_option("--n", gen_n, "peer count")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--dim", gen_dim, "metric-space dimension (2 or 3)");
  gen->add_option("--acceptance", gen_acceptance, "complete | er:<p> | file:<path>");
  gen->add_option("--value-range", gen_value, "complementary v(p) range lo:hi");
  gen->add_option("--common-range", gen_common, "complementary c(i,j) range lo:hi");
  gen->add_option("--out", gen_out, "output marks file (default stdout)");

  // ingest
  auto* ingest = app.add_subcommand(
      "ingest", "turn a measured latency matrix into a validated marks file");
  std::string ing_input, ing_reconcile = "mean", ing_out;
  std::uint64_t ing_seed = 0;
  ingest->add_option("input", ing_input, "latency text file")->required();
  ingest->add_option("--reconcile", ing_reconcile,
                     "asymmetric pair rule: mean | min | max");
  ingest->add_option("--dither-seed", ing_seed, "seed for tie-breaking jitter");
  ingest->add_option("--out", ing_out, "output marks file (default stdout)");

  // check
  auto* check = app.add_subcommand(
      "check", "validate marks, test acyclicity and global representability");
  std::string check_input, check_kind = "auto";
  check->add_option("input", check_input, "marks or instance file")->required();
  check->add_option("--kind", check_kind, "auto|marks|instance");

  // symmetrize
  auto* symmetrize = app.add_subcommand(
      "symmetrize", "build a symmetric integer marks file reproducing an instance");
  std::string sym_input, sym_kind = "auto", sym_out;
  symmetrize->add_option("input", sym_input, "marks or instance file")->required();
  symmetrize->add_option("--kind", sym_kind, "auto|marks|instance");
  symmetrize->add_option("--out", sym_out, "output marks file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "compute the unique stable configuration");
  std::string solve_input, solve_kind = "auto", solve_b, solve_out;
  solve->add_option("input", solve_input, "marks or instance file")->required();
  solve->add_option("--kind", solve_kind, "auto|marks|instance");
  solve->add_option("--b", solve_b, "uniform quota (integer or inf)")->required();
  solve->add_option("--out", solve_out, "output configuration file (default stdout)");

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "run blocking-pair dynamics step by step");
  std::string sim_input, sim_kind = "auto", sim_b, sim_policy = "uniform";
  std::string sim_c0, sim_trace, sim_out;
  std::uint64_t sim_seed = 0;
  std::size_t sim_limit = 0;
  simulate->add_option("input", sim_input, "marks or instance file")->required();
  simulate->add_option("--kind", sim_kind, "auto|marks|instance");
  simulate->add_option("--b", sim_b, "uniform quota (integer or inf)")->required();
  simulate->add_option("--policy", sim_policy, "uniform | roundrobin | fixed:<path>");
  simulate->add_option("--seed", sim_seed, "policy seed");
  auto* limit_opt = simulate->add_option(
      "--step-limit", sim_limit, "max steps; 0 = unbounded (acyclic input only)");
  simulate->add_option("--c0", sim_c0, "initial configuration file (default empty)");
  simulate->add_option("--trace", sim_trace, "write JSONL step trace here");
  simulate->add_option("--out", sim_out, "output configuration file (default stdout)");

  // metrics
  auto* metrics =
      app.add_subcommand("metrics", "graph statistics of a configuration file");
  std::string met_input, met_dot;
  PeerId met_n = 0;
  metrics->add_option("input", met_input, "configuration file")->required();
  metrics->add_option("--n", met_n, "vertex count (default: max id + 1)");
  metrics->add_option("--dot", met_dot, "write DOT export here");

  // experiment
  auto* experiment = app.add_subcommand(
      "experiment", "quota sweep over a seeded family, CSV output");
  std::string exp_family, exp_b = "10", exp_mode = "solve", exp_policy = "uniform";
  std::string exp_acceptance = "complete", exp_value = "0:1", exp_common = "0:1";
  std::string exp_out;
  PeerId exp_n = 500;
  int exp_reps = 5, exp_dim = 3;
  std::uint64_t exp_seed = 0;
  std::size_t exp_limit = 0;
  experiment->add_option("--family", exp_family, "global|symmetric|metric|complementary")
      ->required();
  experiment->add_option("--n", exp_n, "peer count");
  experiment->add_option("--b", exp_b, "comma-separated quota list");
  experiment->add_option("--reps", exp_reps, "repetitions per quota");
  experiment->add_option("--seed", exp_seed, "experiment seed");
  experiment->add_option("--mode", exp_mode, "solve | simulate");
  experiment->add_option("--policy", exp_policy, "uniform | roundrobin | fixed");
  experiment->add_option("--step-limit", exp_limit, "simulate-mode step cap");
  experiment->add_option("--acceptance", exp_acceptance, "complete | er:<p> | file:<path>");
  experiment->add_option("--dim", exp_dim, "metric-space dimension");
  experiment->add_option("--value-range", exp_value, "complementary v(p) range lo:hi");
  experiment->add_option("--common-range", exp_common, "complementary c(i,j) range lo:hi");
  experiment->add_option("--out", exp_out, "output CSV file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(gen_family, gen_n, gen_seed, gen_dim, gen_acceptance, gen_value,
                     gen_common, gen_out);
    if (ingest->parsed())
      return cmd_ingest(ing_input, ing_reconcile, ing_seed, ing_out);
    if (check->parsed()) return cmd_check(check_input, check_kind);
    if (symmetrize->parsed()) return cmd_symmetrize(sym_input, sym_kind, sym_out);
    if (solve->parsed()) return cmd_solve(solve_input, solve_kind, solve_b, solve_out);
    if (simulate->parsed())
      return cmd_simulate(sim_input, sim_kind, sim_b, sim_policy, sim_seed, sim_limit,
                          limit_opt->count() > 0, sim_c0, sim_trace, sim_out);
    if (metrics->parsed()) return cmd_metrics(met_input, met_n, met_dot);
    if (experiment->parsed())
      return cmd_experiment(exp_family, exp_n, exp_b, exp_reps, exp_seed, exp_mode,
                            exp_policy, exp_limit, exp_acceptance, exp_dim, exp_value,
                            exp_common, exp_out);
  } catch (const CyclicInstanceError& e) {
    std::cerr << "error: contract: " << e.what() << "; cycle:";
    for (PeerId p : e.cycle().peers) std::cerr << ' ' << p;
    std::cerr << "\n";
    return kExitContract;
  } catch (const ParseError& e) {
    std::cerr << "error: parse: " << e.what() << "\n";
    return kExitParse;
  } catch (const StructuralError& e) {
    std::cerr << "error: structure: " << e.what() << "\n";
    return kExitParse;
  } catch (const DomainError& e) {
    std::cerr << "error: contract: " << e.what() << "\n";
    return kExitContract;
  } catch (const IoError& e) {
    std::cerr << "error: io: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
