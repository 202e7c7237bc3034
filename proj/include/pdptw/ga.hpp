#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "pdptw/model.hpp"

namespace pdptw {

using Rng = std::mt19937_64;

/// Visit order over all non-depot nodes (depot excluded from the genotype).
struct NodeChromosome {
  std::vector<NodeId> genes;

  bool operator==(const NodeChromosome&) const = default;
};

/// Number of nodes handed to each vehicle slot; floor(N'/2) slots.
struct VehicleChromosome {
  std::vector<int> counts;

  bool operator==(const VehicleChromosome&) const = default;
};

bool is_valid_permutation(const NodeChromosome& chrom, const Instance& instance);
bool is_valid_composition(const VehicleChromosome& chrom, const Instance& instance);
/// True when every supplier sits before its client in the flat order.
bool satisfies_precedence(const NodeChromosome& chrom, const Instance& instance);

/// Number of vehicle slots, floor(N'/2).
int vehicle_slots(const Instance& instance);

NodeChromosome random_node_chromosome(const Instance& instance, Rng& rng);
VehicleChromosome random_vehicle_chromosome(const Instance& instance, Rng& rng);

/// Scans left to right; a client met before its supplier gets the supplier
/// pulled in directly in front of it.
NodeChromosome repair_precedence(NodeChromosome chrom, const Instance& instance);

/// Treats the chromosome as one load stream against the largest fleet
/// capacity. At each overload the client of the most recently loaded
/// supplier (still unserved) is pulled in front of the overloading node.
/// Overloads with no such client are left for the penalty to handle.
NodeChromosome repair_capacity(NodeChromosome chrom, const Instance& instance);

/// One-point order crossover without repair: each child keeps its first
/// parent's prefix and completes it in the other parent's order.
std::pair<NodeChromosome, NodeChromosome> crossover_order(const NodeChromosome& p1,
                                                          const NodeChromosome& p2,
                                                          std::size_t point);
/// crossover_order followed by both repairs.
std::pair<NodeChromosome, NodeChromosome> crossover_nodes(const NodeChromosome& p1,
                                                          const NodeChromosome& p2,
                                                          std::size_t point,
                                                          const Instance& instance);

std::pair<VehicleChromosome, VehicleChromosome> crossover_vehicles(const VehicleChromosome& p1,
                                                                   const VehicleChromosome& p2,
                                                                   std::size_t point,
                                                                   const Instance& instance);

/// Swap positions i and j, then repair.
NodeChromosome swap_and_repair(NodeChromosome chrom, std::size_t i, std::size_t j,
                               const Instance& instance);
NodeChromosome mutate_nodes(NodeChromosome chrom, const Instance& instance, Rng& rng);
VehicleChromosome mutate_vehicles(VehicleChromosome chrom, const Instance& instance, Rng& rng);

/// Splits the permutation sequentially; the j-th non-empty slot becomes a
/// route on fleet vehicle j.
RoutedSolution decode(const NodeChromosome& nodes, const VehicleChromosome& vehicles);

struct GaParams {
  int population_size = 100;
  int generations = 50;
  double crossover_rate = 0.9;
  double mutation_rate = 0.3;
  int elitism = 1;
  std::uint64_t seed = 0;
  FeasibilityMode mode = FeasibilityMode::PaperLiteral;
  // Cost per unit of violation magnitude; unset means 10 x max d_ij.
  std::optional<double> infeasibility_penalty;
  // Threads for the combination sweep; 0 means hardware concurrency.
  int workers = 0;

  /// Throws InputError when a field is out of range.
  void validate() const;
  double penalty_for(const Instance& instance) const;
};

double penalized_fitness(const RoutedSolution& solution, const Instance& instance,
                         const GaParams& params);

struct PairScore {
  double penalized = 0.0;
  double fitness = 0.0;
  bool feasible = false;
};

/// Allocation-free scorer for (node, vehicle) chromosome pairs. Produces the
/// same numbers as penalized_fitness(decode(nodes, vehicles)).
class PairEvaluator {
 public:
  PairEvaluator(const Instance& instance, FeasibilityMode mode, double penalty);

  PairScore operator()(std::span<const NodeId> genes, std::span<const int> counts) const;

 private:
  const Instance& instance_;
  FeasibilityMode mode_;
  double penalty_;
};

struct GenerationEvaluation {
  std::size_t best_node = 0;
  std::size_t best_vehicle = 0;
  PairScore best;
  // Row-major: scores[a * vehicles + b] for node chromosome a, vehicle b.
  std::vector<PairScore> scores;
};

/// Scores every (node, vehicle) pair of the cross product and returns the
/// argmin (lowest index on ties).
GenerationEvaluation evaluate_generation(std::span<const NodeChromosome> node_population,
                                         std::span<const VehicleChromosome> vehicle_population,
                                         const Instance& instance, const GaParams& params);

struct GenerationStats {
  double best = 0.0;  // best penalized score in this generation's product
  double mean = 0.0;
};

struct GaResult {
  RoutedSolution best_solution;
  NodeChromosome best_nodes;
  VehicleChromosome best_vehicles;
  double best_fitness = 0.0;
  double best_distance = 0.0;
  double best_penalized = 0.0;
  bool feasible = false;
  std::vector<GenerationStats> history;
  std::uint64_t evaluations = 0;

  bool operator==(const GaResult& other) const;
};

GaResult run_ga(const Instance& instance, const GaParams& params);

}  // namespace pdptw
