#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "pdptw/ga.hpp"

namespace pdptw {

namespace {

constexpr double kTolerance = 1e-9;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Rng stream_for(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

double lenient_distance(const RoutedSolution& solution, const Instance& instance) {
  double total = 0.0;
  for (const auto& route : solution.routes) {
    NodeId prev = 0;
    for (NodeId v : route.visits) {
      if (instance.valid_node(v) && !instance.arc_blocked(prev, v)) {
        total += instance.arc_length(prev, v);
      }
      prev = instance.valid_node(v) ? v : prev;
    }
    if (!instance.arc_blocked(prev, 0)) total += instance.arc_length(prev, 0);
  }
  return total;
}

// Survivor selection over a pool of 2n individuals scored by their best
// pairing. Elites come first (the argmin pair member leads), the rest are
// drawn without replacement with linear rank weights.
template <typename Chromosome>
std::vector<Chromosome> select_survivors(const std::vector<Chromosome>& pool,
                                         const std::vector<double>& score, std::size_t leader,
                                         std::size_t survivors, std::size_t elitism, Rng& rng) {
  std::vector<std::size_t> order(pool.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });

  std::vector<char> taken(pool.size(), 0);
  std::vector<Chromosome> next;
  next.reserve(survivors);
  auto take = [&](std::size_t idx) {
    taken[idx] = 1;
    next.push_back(pool[idx]);
  };
  if (elitism > 0) take(leader);
  for (std::size_t idx : order) {
    if (next.size() >= std::min(elitism, survivors)) break;
    if (!taken[idx]) take(idx);
  }

  // Weight of rank r (0 = best) is pool.size() - r.
  std::vector<double> weight(pool.size(), 0.0);
  for (std::size_t r = 0; r < order.size(); ++r) {
    weight[order[r]] = static_cast<double>(order.size() - r);
  }
  double remaining = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (!taken[i]) remaining += weight[i];
  }
  while (next.size() < survivors) {
    double target = uniform01(rng) * remaining;
    std::size_t chosen = pool.size();
    for (std::size_t idx : order) {
      if (taken[idx]) continue;
      chosen = idx;
      target -= weight[idx];
      if (target < 0.0) break;
    }
    remaining -= weight[chosen];
    take(chosen);
  }
  return next;
}

}  // namespace

void GaParams::validate() const {
  if (population_size < 1) throw InputError("population size must be >= 1");
  if (generations < 1) throw InputError("generations must be >= 1");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw InputError("crossover rate must lie in [0, 1]");
  }
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw InputError("mutation rate must lie in [0, 1]");
  }
  if (elitism < 0 || elitism > population_size) {
    throw InputError("elitism must lie in [0, population size]");
  }
  if (infeasibility_penalty && !(*infeasibility_penalty >= 0.0)) {
    throw InputError("infeasibility penalty must be >= 0");
  }
  if (workers < 0) throw InputError("workers must be >= 0");
}

double GaParams::penalty_for(const Instance& instance) const {
  return infeasibility_penalty.value_or(10.0 * instance.max_finite_distance());
}

double penalized_fitness(const RoutedSolution& solution, const Instance& instance,
                         const GaParams& params) {
  const auto report = check_feasibility(solution, instance, params.mode);
  const double base = lenient_fitness(solution, instance);
  if (report.feasible()) return base;
  return base + params.penalty_for(instance) * report.total_magnitude();
}

PairEvaluator::PairEvaluator(const Instance& instance, FeasibilityMode mode, double penalty)
    : instance_(instance), mode_(mode), penalty_(penalty) {}

PairScore PairEvaluator::operator()(std::span<const NodeId> genes,
                                    std::span<const int> counts) const {
  thread_local std::vector<double> departure;
  thread_local std::vector<int> route_of;
  thread_local std::vector<int> position_of;
  const auto node_count = instance_.nodes().size();
  departure.assign(node_count, kNaN);
  route_of.resize(node_count);
  position_of.resize(node_count);

  const auto& fleet = instance_.fleet();
  const double depot_close = instance_.depot().window_close;
  const bool depot_bounded = std::isfinite(depot_close);

  double cost = 0.0;
  double magnitude = 0.0;
  std::size_t offset = 0;
  int route = 0;
  for (int count : counts) {
    if (count <= 0) continue;
    const auto visits = genes.subspan(offset, static_cast<std::size_t>(count));
    const int k = route;
    for (std::size_t p = 0; p < visits.size(); ++p) {
      route_of[static_cast<std::size_t>(visits[p])] = route;
      position_of[static_cast<std::size_t>(visits[p])] = static_cast<int>(offset + p);
    }
    offset += visits.size();
    ++route;
    if (k >= static_cast<int>(fleet.size())) {
      magnitude += 1.0;  // DEPOT: no such vehicle
      continue;
    }
    const VehicleSpec& vehicle = fleet[static_cast<std::size_t>(k)];

    double length = 0.0;
    NodeId prev = 0;
    for (NodeId v : visits) {
      if (!instance_.arc_blocked(prev, v)) length += instance_.arc_length(prev, v);
      prev = v;
    }
    if (!instance_.arc_blocked(prev, 0)) length += instance_.arc_length(prev, 0);
    cost += vehicle.cost_coefficient * length;

    double load = 0.0;
    for (NodeId v : visits) {
      load += instance_.node(v).quantity;
      if (load < -kTolerance) {
        magnitude += -load;
        break;
      }
      if (load > vehicle.capacity + kTolerance) {
        magnitude += load - vehicle.capacity;
        break;
      }
    }

    double clock = 0.0;
    prev = 0;
    bool failed = false;
    for (NodeId v : visits) {
      if (instance_.arc_blocked(prev, v)) {
        magnitude += 1.0;
        failed = true;
        break;
      }
      const Node& node = instance_.node(v);
      const double arrival = clock + instance_.arc_length(prev, v) / vehicle.speed;
      const double start = std::max(arrival, node.window_open);
      const double finish = start + node.service_time;
      if (finish > node.window_close + kTolerance) {
        magnitude += finish - node.window_close;
        failed = true;
        break;
      }
      departure[static_cast<std::size_t>(v)] = finish;
      clock = finish;
      prev = v;
    }
    if (!failed) {
      if (instance_.arc_blocked(prev, 0)) {
        magnitude += 1.0;
      } else {
        const double back = clock + instance_.arc_length(prev, 0) / vehicle.speed;
        if (depot_bounded && back > depot_close + kTolerance) magnitude += back - depot_close;
      }
    }
  }

  for (const Request& req : instance_.requests()) {
    const auto s = static_cast<std::size_t>(req.supplier);
    const auto c = static_cast<std::size_t>(req.client);
    const bool timed = !std::isnan(departure[s]) && !std::isnan(departure[c]);
    const double gap = timed ? departure[s] - departure[c] : 0.0;
    if (mode_ == FeasibilityMode::StrictPairing) {
      if (route_of[s] != route_of[c] || position_of[s] > position_of[c]) {
        magnitude += 1.0 + std::max(0.0, gap);
      }
    } else if (timed && gap > kTolerance) {
      magnitude += gap;
    }
  }

  PairScore score;
  score.fitness = cost;
  score.feasible = magnitude == 0.0;
  score.penalized = score.feasible ? cost : cost + penalty_ * magnitude;
  return score;
}

GenerationEvaluation evaluate_generation(std::span<const NodeChromosome> node_population,
                                         std::span<const VehicleChromosome> vehicle_population,
                                         const Instance& instance, const GaParams& params) {
  const PairEvaluator evaluate(instance, params.mode, params.penalty_for(instance));
  const std::size_t rows = node_population.size();
  const std::size_t cols = vehicle_population.size();

  GenerationEvaluation result;
  result.scores.resize(rows * cols);
  auto sweep = [&](std::size_t begin, std::size_t end) {
    for (std::size_t a = begin; a < end; ++a) {
      for (std::size_t b = 0; b < cols; ++b) {
        result.scores[a * cols + b] =
            evaluate(node_population[a].genes, vehicle_population[b].counts);
      }
    }
  };

  const auto workers =
      std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(params.workers)), rows);
  if (workers <= 1) {
    sweep(0, rows);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(sweep, rows * w / workers, rows * (w + 1) / workers);
    }
  }

  if (result.scores.empty()) return result;
  std::size_t best = 0;
  for (std::size_t i = 1; i < result.scores.size(); ++i) {
    if (result.scores[i].penalized < result.scores[best].penalized) best = i;
  }
  result.best_node = best / cols;
  result.best_vehicle = best % cols;
  result.best = result.scores[best];
  return result;
}

bool GaResult::operator==(const GaResult& other) const {
  if (history.size() != other.history.size()) return false;
  for (std::size_t g = 0; g < history.size(); ++g) {
    if (history[g].best != other.history[g].best || history[g].mean != other.history[g].mean) {
      return false;
    }
  }
  return best_solution == other.best_solution && best_nodes == other.best_nodes &&
         best_vehicles == other.best_vehicles && best_fitness == other.best_fitness &&
         best_distance == other.best_distance && best_penalized == other.best_penalized &&
         feasible == other.feasible && evaluations == other.evaluations;
}

GaResult run_ga(const Instance& instance, const GaParams& params) {
  params.validate();
  const auto n = static_cast<std::size_t>(params.population_size);
  const auto elitism = static_cast<std::size_t>(params.elitism);
  const std::size_t genome_length = static_cast<std::size_t>(instance.customer_count());
  const std::size_t slots = static_cast<std::size_t>(vehicle_slots(instance));

  Rng init = stream_for(params.seed, 0);
  std::vector<NodeChromosome> nodes;
  std::vector<VehicleChromosome> vehicles;
  nodes.reserve(2 * n);
  vehicles.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(random_node_chromosome(instance, init));
  for (std::size_t i = 0; i < n; ++i) {
    vehicles.push_back(random_vehicle_chromosome(instance, init));
  }

  GaResult result;
  std::optional<std::pair<NodeChromosome, VehicleChromosome>> best_feasible;
  std::pair<NodeChromosome, VehicleChromosome> best_any;
  double best_feasible_fitness = kInfinity;
  double best_any_score = kInfinity;
  PairScore best_feasible_score;
  PairScore best_any_pair;

  for (int generation = 0; generation < params.generations; ++generation) {
    Rng rng = stream_for(params.seed, static_cast<std::uint64_t>(generation) + 1);

    // Offspring: n per population, appended after the parents.
    for (std::size_t made = 0; made < n;) {
      const auto& a = nodes[uniform_index(rng, n)];
      const auto& b = nodes[uniform_index(rng, n)];
      std::pair<NodeChromosome, NodeChromosome> kids{a, b};
      if (genome_length >= 2 && uniform01(rng) < params.crossover_rate) {
        const std::size_t point = 1 + uniform_index(rng, genome_length - 1);
        kids = crossover_nodes(a, b, point, instance);
      }
      for (NodeChromosome* kid : {&kids.first, &kids.second}) {
        if (made == n) break;
        if (uniform01(rng) < params.mutation_rate) {
          *kid = mutate_nodes(std::move(*kid), instance, rng);
        }
        nodes.push_back(std::move(*kid));
        ++made;
      }
    }
    for (std::size_t made = 0; made < n;) {
      const auto& a = vehicles[uniform_index(rng, n)];
      const auto& b = vehicles[uniform_index(rng, n)];
      std::pair<VehicleChromosome, VehicleChromosome> kids{a, b};
      if (slots >= 2 && uniform01(rng) < params.crossover_rate) {
        const std::size_t point = 1 + uniform_index(rng, slots - 1);
        kids = crossover_vehicles(a, b, point, instance);
      }
      for (VehicleChromosome* kid : {&kids.first, &kids.second}) {
        if (made == n) break;
        if (uniform01(rng) < params.mutation_rate) {
          *kid = mutate_vehicles(std::move(*kid), instance, rng);
        }
        vehicles.push_back(std::move(*kid));
        ++made;
      }
    }

    const auto eval = evaluate_generation(nodes, vehicles, instance, params);
    const std::size_t cols = vehicles.size();
    result.evaluations += eval.scores.size();

    double total = 0.0;
    std::optional<std::size_t> feasible_best;
    for (std::size_t i = 0; i < eval.scores.size(); ++i) {
      const auto& s = eval.scores[i];
      total += s.penalized;
      if (s.feasible && (!feasible_best || s.fitness < eval.scores[*feasible_best].fitness)) {
        feasible_best = i;
      }
    }
    result.history.push_back(
        GenerationStats{eval.best.penalized, total / static_cast<double>(eval.scores.size())});

    if (feasible_best && eval.scores[*feasible_best].fitness < best_feasible_fitness) {
      best_feasible_fitness = eval.scores[*feasible_best].fitness;
      best_feasible_score = eval.scores[*feasible_best];
      best_feasible.emplace(nodes[*feasible_best / cols], vehicles[*feasible_best % cols]);
    }
    if (eval.best.penalized < best_any_score) {
      best_any_score = eval.best.penalized;
      best_any_pair = eval.best;
      best_any = {nodes[eval.best_node], vehicles[eval.best_vehicle]};
    }

    std::vector<double> node_score(nodes.size(), kInfinity);
    std::vector<double> vehicle_score(vehicles.size(), kInfinity);
    for (std::size_t a = 0; a < nodes.size(); ++a) {
      for (std::size_t b = 0; b < cols; ++b) {
        const double s = eval.scores[a * cols + b].penalized;
        node_score[a] = std::min(node_score[a], s);
        vehicle_score[b] = std::min(vehicle_score[b], s);
      }
    }
    nodes = select_survivors(nodes, node_score, eval.best_node, n, elitism, rng);
    vehicles = select_survivors(vehicles, vehicle_score, eval.best_vehicle, n, elitism, rng);
    nodes.reserve(2 * n);
    vehicles.reserve(2 * n);
  }

  if (best_feasible) {
    std::tie(result.best_nodes, result.best_vehicles) = *best_feasible;
    result.best_solution = decode(result.best_nodes, result.best_vehicles);
    result.feasible = true;
    result.best_fitness = fitness(result.best_solution, instance);
    result.best_distance = solution_distance(result.best_solution, instance);
    result.best_penalized = best_feasible_score.penalized;
  } else {
    std::tie(result.best_nodes, result.best_vehicles) = best_any;
    result.best_solution = decode(result.best_nodes, result.best_vehicles);
    result.feasible = false;
    result.best_fitness = lenient_fitness(result.best_solution, instance);
    result.best_distance = lenient_distance(result.best_solution, instance);
    result.best_penalized = best_any_pair.penalized;
  }
  return result;
}

}  // namespace pdptw
