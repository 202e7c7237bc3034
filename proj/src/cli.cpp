#include "pdptw/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <ostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pdptw/bench.hpp"
#include "pdptw/ga.hpp"
#include "pdptw/io.hpp"
#include "pdptw/oracle.hpp"

namespace pdptw::cli {

namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string instance_path;
  std::string solution_path;
  std::string out_path;
  std::string format = "text";
  std::string mode = "paper";
  std::optional<std::uint64_t> seed;
  GaParams ga;
  io::GeneratorParams generator;
  // oracle
  int max_nodes = 8;
  int max_vehicles = 1 << 20;
  double time_budget_s = 300.0;
  // bench
  std::vector<int> bench_n{20};
  std::vector<int> bench_pop{100, 500};
  int bench_k = 2;
  int bench_seeds = 10;
  int bench_instances = 5;
};

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("PDPTW_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const auto value = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return value;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("PDPTW_SEED is not an unsigned integer: ") + env);
  }
  return 0;
}

GaParams ga_params(const RunConfig& cfg) {
  GaParams params = cfg.ga;
  params.mode = parse_mode(cfg.mode);
  params.seed = resolve_seed(cfg);
  try {
    params.validate();
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
  return params;
}

Instance load_instance(const std::string& path) {
  const std::string text = io::read_file(path);
  const bool li_lim = path.size() >= 4 && path.compare(path.size() - 4, 4, ".txt") == 0;
  return li_lim ? io::parse_li_lim(text) : io::parse_native(text);
}

bool machine(const RunConfig& cfg) { return cfg.format == "machine"; }

int cmd_generate(const RunConfig& cfg, std::ostream& out) {
  io::GeneratorParams params = cfg.generator;
  params.seed = resolve_seed(cfg);
  try {
    params.validate();
  } catch (const InputError& e) {
    throw UsageError(e.what());
  }
  const Instance instance = io::generate_random(params);
  io::write_file(cfg.out_path, io::write_native(instance));
  if (machine(cfg)) {
    out << nlohmann::json{{"n_prime", instance.customer_count()},
                          {"k", instance.fleet_size()},
                          {"requests", instance.requests().size()},
                          {"seed", params.seed}}
               .dump()
        << "\n";
  } else {
    out << "wrote " << cfg.out_path << ": N'=" << instance.customer_count()
        << " K=" << instance.fleet_size() << " requests=" << instance.requests().size() << "\n";
  }
  return kOk;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const GaParams params = ga_params(cfg);
  const Instance instance = load_instance(cfg.instance_path);
  const auto started = std::chrono::steady_clock::now();
  const GaResult result = run_ga(instance, params);
  const std::chrono::duration<double> wall = std::chrono::steady_clock::now() - started;

  if (!cfg.out_path.empty()) {
    io::write_file(cfg.out_path, io::write_solution(result.best_solution, instance, params.mode));
  }
  if (machine(cfg)) {
    out << nlohmann::json{{"feasible", result.feasible},
                          {"best_fitness", result.best_fitness},
                          {"best_distance", result.best_distance},
                          {"best_penalized", result.best_penalized},
                          {"evaluations", result.evaluations},
                          {"seed", params.seed}}
               .dump()
        << "\n";
  } else {
    out << io::write_solution_summary(result.best_solution, instance, params.mode);
    out << std::fixed << std::setprecision(4);
    out << "best fitness: " << result.best_fitness << "\n"
        << "best distance: " << result.best_distance << "\n"
        << "evaluations: " << result.evaluations << "\n"
        << "wall time: " << wall.count() << " s\n";
    if (!result.feasible) out << "no feasible solution found; reporting best penalized\n";
  }
  return result.feasible ? kOk : kNoFeasible;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  const FeasibilityMode mode = parse_mode(cfg.mode);
  const Instance instance = load_instance(cfg.instance_path);
  const RoutedSolution solution = io::parse_solution(io::read_file(cfg.solution_path));
  const FeasibilityReport report = check_feasibility(solution, instance, mode);
  if (machine(cfg)) {
    for (const auto& v : report.violations) {
      out << nlohmann::json{{"tag", to_string(v.tag)},
                            {"node", v.node},
                            {"vehicle", v.vehicle},
                            {"magnitude", v.magnitude}}
                 .dump()
          << "\n";
    }
    out << nlohmann::json{{"feasible", report.feasible()},
                          {"violations", report.violations.size()}}
               .dump()
        << "\n";
  } else {
    out << "mode: " << to_string(mode) << "\n";
    out << (report.feasible() ? "feasible" : "infeasible") << "\n";
    for (const auto& v : report.violations) out << "  " << to_string(v) << "\n";
  }
  return report.feasible() ? kOk : kValidationFailed;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const FeasibilityMode mode = parse_mode(cfg.mode);
  const Instance instance = load_instance(cfg.instance_path);
  oracle::Limits limits;
  limits.max_nodes = cfg.max_nodes;
  limits.max_vehicles = cfg.max_vehicles;
  limits.time_budget = std::chrono::milliseconds(static_cast<long long>(cfg.time_budget_s * 1000));
  oracle::Result result;
  try {
    result = oracle::enumerate_optimal(instance, mode, limits);
  } catch (const oracle::LimitError& e) {
    err << "oracle refused: " << e.what() << " (explored " << e.explored << ", feasible "
        << e.feasible << ")\n";
    return kUsageError;
  }
  if (result.optimum && !cfg.out_path.empty()) {
    io::write_file(cfg.out_path, io::write_solution(*result.optimum, instance, mode));
  }
  if (machine(cfg)) {
    nlohmann::json record{{"feasible_count", result.feasible_count},
                          {"explored_count", result.explored_count}};
    record["optimal_fitness"] =
        result.optimal_fitness ? nlohmann::json(*result.optimal_fitness) : nlohmann::json(nullptr);
    out << record.dump() << "\n";
  } else {
    out << "explored: " << result.explored_count << "\nfeasible: " << result.feasible_count
        << "\n";
    if (result.optimum) {
      out << std::fixed << std::setprecision(4) << "optimal fitness: " << *result.optimal_fitness
          << "\n";
      out << io::write_solution_summary(*result.optimum, instance, mode);
    } else {
      out << "no feasible solution\n";
    }
  }
  return result.optimum ? kOk : kNoFeasible;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out) {
  BenchConfig bench;
  bench.n_primes = cfg.bench_n;
  bench.populations = cfg.bench_pop;
  bench.k = cfg.bench_k;
  bench.seeds = cfg.bench_seeds;
  bench.instances = cfg.bench_instances;
  bench.ga = ga_params(cfg);
  bench.base_seed = bench.ga.seed;
  bench.generator = cfg.generator;
  for (int n : bench.n_primes) {
    io::GeneratorParams probe = bench.generator;
    probe.n_prime = n;
    probe.k = bench.k;
    try {
      probe.validate();
    } catch (const InputError& e) {
      throw UsageError(e.what());
    }
  }
  for (int pop : bench.populations) {
    if (pop < 1 || bench.ga.elitism > pop) throw UsageError("invalid --pop value");
  }
  if (bench.seeds < 1 || bench.instances < 1) throw UsageError("--seeds and --instances must be >= 1");
  const auto rows = run_bench(bench);
  out << (machine(cfg) ? format_bench_machine(rows) : format_bench_text(rows));
  return kOk;
}

void add_ga_flags(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--pop", cfg.ga.population_size, "Population size n per population");
  cmd.add_option("--gens", cfg.ga.generations, "Generations");
  cmd.add_option("--xover", cfg.ga.crossover_rate, "Crossover probability");
  cmd.add_option("--mut", cfg.ga.mutation_rate, "Mutation probability");
  cmd.add_option("--elitism", cfg.ga.elitism, "Individuals kept unchanged per generation");
  cmd.add_option("--penalty", cfg.ga.infeasibility_penalty,
                 "Cost per unit violation (default 10 x max distance)");
  cmd.add_option("--workers", cfg.ga.workers, "Evaluation threads (0 = all cores)");
}

void add_common(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--seed", cfg.seed, "RNG seed (falls back to $PDPTW_SEED, then 0)");
  cmd.add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"text", "machine"}));
}

void add_mode(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--mode", cfg.mode, "Precedence semantics")->check(CLI::IsMember({"paper", "strict"}));
}

void add_generator_flags(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--area", cfg.generator.area, "Square side for coordinates");
  cmd.add_option("--capacity", cfg.generator.capacity, "Vehicle capacity Q");
  cmd.add_option("--horizon", cfg.generator.horizon, "Depot closing time (0 = open)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Pickup-and-delivery with time windows: genetic solver and tools", "pdptw"};
  app.require_subcommand(1);

  auto* generate = app.add_subcommand("generate", "Write a random instance");
  generate->add_option("--n", cfg.generator.n_prime, "Non-depot node count N' (even)");
  generate->add_option("--k", cfg.generator.k, "Fleet size");
  generate->add_option("-o,--out", cfg.out_path, "Output .pdptw.json")->required();
  add_generator_flags(*generate, cfg);
  add_common(*generate, cfg);

  auto* solve = app.add_subcommand("solve", "Run the genetic algorithm");
  solve->add_option("instance", cfg.instance_path, "Instance (.pdptw.json or Li & Lim .txt)")
      ->required();
  solve->add_option("-o,--out", cfg.out_path, "Solution report (.sol.json)");
  add_ga_flags(*solve, cfg);
  add_mode(*solve, cfg);
  add_common(*solve, cfg);

  auto* validate = app.add_subcommand("validate", "Check a solution against an instance");
  validate->add_option("instance", cfg.instance_path, "Instance file")->required();
  validate->add_option("solution", cfg.solution_path, "Solution report (.sol.json)")->required();
  add_mode(*validate, cfg);
  validate->add_option("--format", cfg.format, "Report format")
      ->check(CLI::IsMember({"text", "machine"}));

  auto* exact = app.add_subcommand("oracle", "Exhaustively solve a small instance");
  exact->add_option("instance", cfg.instance_path, "Instance file")->required();
  exact->add_option("-o,--out", cfg.out_path, "Write the optimum as a solution report");
  exact->add_option("--max-nodes", cfg.max_nodes, "Refuse instances with larger N'")
      ->check(CLI::Range(1, oracle::kMaxNodesCeiling));
  exact->add_option("--max-vehicles", cfg.max_vehicles, "Cap on routes enumerated");
  exact->add_option("--time-budget", cfg.time_budget_s, "Wall-clock cap in seconds");
  add_mode(*exact, cfg);
  exact->add_option("--format", cfg.format, "Report format")
      ->check(CLI::IsMember({"text", "machine"}));

  auto* bench = app.add_subcommand("bench", "Population-size sweep over generated instances");
  bench->add_option("--n", cfg.bench_n, "N' values")->delimiter(',');
  bench->add_option("--k", cfg.bench_k, "Fleet size");
  bench->add_option("--pop", cfg.bench_pop, "Population sizes")->delimiter(',');
  bench->add_option("--seeds", cfg.bench_seeds, "GA seeds per instance");
  bench->add_option("--instances", cfg.bench_instances, "Generated instances per cell");
  bench->add_option("--gens", cfg.ga.generations, "Generations");
  bench->add_option("--xover", cfg.ga.crossover_rate, "Crossover probability");
  bench->add_option("--mut", cfg.ga.mutation_rate, "Mutation probability");
  bench->add_option("--elitism", cfg.ga.elitism, "Individuals kept unchanged per generation");
  bench->add_option("--penalty", cfg.ga.infeasibility_penalty, "Cost per unit violation");
  bench->add_option("--workers", cfg.ga.workers, "Evaluation threads (0 = all cores)");
  add_generator_flags(*bench, cfg);
  add_mode(*bench, cfg);
  add_common(*bench, cfg);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  try {
    if (generate->parsed()) return cmd_generate(cfg, out);
    if (solve->parsed()) return cmd_solve(cfg, out);
    if (validate->parsed()) return cmd_validate(cfg, out);
    if (exact->parsed()) return cmd_oracle(cfg, out, err);
    if (bench->parsed()) return cmd_bench(cfg, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  }
  return kUsageError;
}

}  // namespace pdptw::cli
