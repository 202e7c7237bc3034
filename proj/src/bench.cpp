#include "pdptw/bench.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace pdptw {

std::uint64_t bench_instance_seed(std::uint64_t base_seed, int instance) {
  return base_seed * 7919 + static_cast<std::uint64_t>(instance);
}

std::uint64_t bench_run_seed(std::uint64_t base_seed, int instance, int seed_index) {
  return base_seed * 1000003 + static_cast<std::uint64_t>(instance) * 1009 +
         static_cast<std::uint64_t>(seed_index);
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  std::vector<BenchRow> rows;
  for (int n_prime : config.n_primes) {
    std::vector<Instance> instances;
    for (int i = 0; i < config.instances; ++i) {
      io::GeneratorParams gen = config.generator;
      gen.n_prime = n_prime;
      gen.k = config.k;
      gen.seed = bench_instance_seed(config.base_seed, i);
      instances.push_back(io::generate_random(gen));
    }
    for (int population : config.populations) {
      BenchRow row;
      row.n_prime = n_prime;
      row.population = population;
      row.k = config.k;
      row.min_distance = kInfinity;
      row.min_fitness = kInfinity;
      double distance_sum = 0.0;
      double fitness_sum = 0.0;
      for (int i = 0; i < config.instances; ++i) {
        double instance_sum = 0.0;
        for (int s = 0; s < config.seeds; ++s) {
          GaParams params = config.ga;
          params.population_size = population;
          params.seed = bench_run_seed(config.base_seed, i, s);
          const GaResult result = run_ga(instances[static_cast<std::size_t>(i)], params);
          ++row.runs;
          row.feasible_runs += result.feasible ? 1 : 0;
          row.min_distance = std::min(row.min_distance, result.best_distance);
          row.min_fitness = std::min(row.min_fitness, result.best_penalized);
          distance_sum += result.best_distance;
          fitness_sum += result.best_penalized;
          instance_sum += result.best_penalized;
        }
        row.instance_mean_fitness.push_back(config.seeds > 0 ? instance_sum / config.seeds : 0.0);
      }
      if (row.runs > 0) {
        row.mean_distance = distance_sum / row.runs;
        row.mean_fitness = fitness_sum / row.runs;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string format_bench_text(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof line, "%6s %6s %4s %6s %9s %14s %14s %14s %14s\n", "N'", "n", "k",
                "runs", "feasible", "min_dist", "mean_dist", "min_f", "mean_f");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%6d %6d %4d %6d %9d %14.2f %14.2f %14.2f %14.2f\n",
                  r.n_prime, r.population, r.k, r.runs, r.feasible_runs, r.min_distance,
                  r.mean_distance, r.min_fitness, r.mean_fitness);
    out << line;
  }
  return out.str();
}

std::string format_bench_machine(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  for (const auto& r : rows) {
    nlohmann::json record{{"n_prime", r.n_prime},         {"population", r.population},
                          {"k", r.k},                     {"runs", r.runs},
                          {"feasible_runs", r.feasible_runs}, {"min_distance", r.min_distance},
                          {"mean_distance", r.mean_distance}, {"min_fitness", r.min_fitness},
                          {"mean_fitness", r.mean_fitness},
                          {"instance_mean_fitness", r.instance_mean_fitness}};
    out << record.dump() << "\n";
  }
  return out.str();
}

}  // namespace pdptw
