#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pdptw/ga.hpp"
#include "pdptw/io.hpp"

namespace pdptw {

/// Population-size sweep over generated instances, one row per
/// (N', n, k) cell.
struct BenchConfig {
  std::vector<int> n_primes{20};
  int k = 2;
  std::vector<int> populations{100, 500};
  int instances = 5;
  int seeds = 10;
  std::uint64_t base_seed = 1;
  GaParams ga;  // population_size and seed are overwritten per run
  io::GeneratorParams generator;  // n_prime, k and seed are overwritten
};

struct BenchRow {
  int n_prime = 0;
  int population = 0;
  int k = 0;
  int runs = 0;
  int feasible_runs = 0;
  double min_distance = 0.0;
  double mean_distance = 0.0;
  double min_fitness = 0.0;  // best penalized score (plain cost when feasible)
  double mean_fitness = 0.0;
  std::vector<double> instance_mean_fitness;
};

std::uint64_t bench_instance_seed(std::uint64_t base_seed, int instance);
std::uint64_t bench_run_seed(std::uint64_t base_seed, int instance, int seed_index);

std::vector<BenchRow> run_bench(const BenchConfig& config);

std::string format_bench_text(const std::vector<BenchRow>& rows);
/// One JSON object per line.
std::string format_bench_machine(const std::vector<BenchRow>& rows);

}  // namespace pdptw
