#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "pdptw/model.hpp"

namespace pdptw::oracle {

struct Limits {
  int max_nodes = 8;
  int max_vehicles = 1 << 20;
  std::chrono::milliseconds time_budget{std::chrono::minutes(5)};
};

struct Result {
  std::optional<RoutedSolution> optimum;
  std::optional<double> optimal_fitness;
  std::uint64_t feasible_count = 0;
  std::uint64_t explored_count = 0;
};

/// Thrown when an instance exceeds the limits or the time budget runs out.
/// Carries the counts reached so far.
class LimitError : public std::runtime_error {
 public:
  LimitError(const std::string& what, std::uint64_t explored, std::uint64_t feasible)
      : std::runtime_error(what), explored(explored), feasible(feasible) {}

  std::uint64_t explored;
  std::uint64_t feasible;
};

/// Hard ceiling on N' regardless of Limits::max_nodes.
inline constexpr int kMaxNodesCeiling = 10;

/// Enumerates every ordered list of 1..min(K, max_vehicles) non-empty routes
/// (route j on vehicle j) and keeps the cheapest feasible one. Shapes are
/// visited in lexicographic order and permutations lexicographically within
/// a shape; the first of equal-cost optima wins.
Result enumerate_optimal(const Instance& instance,
                         FeasibilityMode mode = FeasibilityMode::PaperLiteral,
                         const Limits& limits = {});

/// Independent feasibility verdict; shares no code with check_feasibility.
FeasibilityReport cross_check(const RoutedSolution& solution, const Instance& instance,
                              FeasibilityMode mode = FeasibilityMode::PaperLiteral);

/// Number of ordered lists of 1..max_routes non-empty sequences covering
/// `nodes` distinct items: sum_r nodes! * C(nodes - 1, r - 1).
std::uint64_t ordered_partition_count(int nodes, int max_routes);

}  // namespace pdptw::oracle
