#include <algorithm>
#include <numeric>

#include "pdptw/ga.hpp"

namespace pdptw {

namespace {

constexpr double kLoadTolerance = 1e-9;

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

int positive_slots(const std::vector<int>& counts) {
  return static_cast<int>(std::count_if(counts.begin(), counts.end(), [](int c) { return c > 0; }));
}

// Brings a vehicle vector back to sum N' with at most K positive slots.
void renormalize(std::vector<int>& counts, int total, int max_positive) {
  if (counts.empty()) return;
  const int sum = std::accumulate(counts.begin(), counts.end(), 0);
  if (sum != total) {
    auto last = static_cast<int>(counts.size()) - 1;
    while (last > 0 && counts[static_cast<std::size_t>(last)] <= 0) --last;
    counts[static_cast<std::size_t>(last)] += total - sum;
    // Clamp at zero and carry the deficit to the preceding positive slot.
    for (int i = last; i >= 0 && counts[static_cast<std::size_t>(i)] < 0;) {
      const int deficit = counts[static_cast<std::size_t>(i)];
      counts[static_cast<std::size_t>(i)] = 0;
      int j = i - 1;
      while (j >= 0 && counts[static_cast<std::size_t>(j)] <= 0) --j;
      if (j < 0) break;
      counts[static_cast<std::size_t>(j)] += deficit;
      i = j;
    }
  }
  // Fold surplus routes into the last permitted one.
  std::vector<std::size_t> positive;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) positive.push_back(i);
  }
  const auto keep = static_cast<std::size_t>(std::max(max_positive, 1));
  if (positive.size() > keep) {
    const std::size_t target = positive[keep - 1];
    for (std::size_t p = keep; p < positive.size(); ++p) {
      counts[target] += counts[positive[p]];
      counts[positive[p]] = 0;
    }
  }
}

}  // namespace

int vehicle_slots(const Instance& instance) { return instance.customer_count() / 2; }

bool is_valid_permutation(const NodeChromosome& chrom, const Instance& instance) {
  const int n = instance.customer_count();
  if (static_cast<int>(chrom.genes.size()) != n) return false;
  std::vector<char> seen(static_cast<std::size_t>(n) + 1, 0);
  for (NodeId g : chrom.genes) {
    if (g < 1 || g > n || seen[static_cast<std::size_t>(g)]) return false;
    seen[static_cast<std::size_t>(g)] = 1;
  }
  return true;
}

bool is_valid_composition(const VehicleChromosome& chrom, const Instance& instance) {
  if (static_cast<int>(chrom.counts.size()) != vehicle_slots(instance)) return false;
  if (std::any_of(chrom.counts.begin(), chrom.counts.end(), [](int c) { return c < 0; })) {
    return false;
  }
  const int sum = std::accumulate(chrom.counts.begin(), chrom.counts.end(), 0);
  return sum == instance.customer_count() && positive_slots(chrom.counts) <= instance.fleet_size();
}

bool satisfies_precedence(const NodeChromosome& chrom, const Instance& instance) {
  std::vector<int> position(instance.nodes().size(), -1);
  for (std::size_t p = 0; p < chrom.genes.size(); ++p) {
    position[static_cast<std::size_t>(chrom.genes[p])] = static_cast<int>(p);
  }
  return std::all_of(instance.requests().begin(), instance.requests().end(), [&](const Request& r) {
    const int s = position[static_cast<std::size_t>(r.supplier)];
    const int c = position[static_cast<std::size_t>(r.client)];
    return s >= 0 && c >= 0 && s < c;
  });
}

NodeChromosome random_node_chromosome(const Instance& instance, Rng& rng) {
  NodeChromosome chrom;
  chrom.genes.resize(static_cast<std::size_t>(instance.customer_count()));
  std::iota(chrom.genes.begin(), chrom.genes.end(), 1);
  std::shuffle(chrom.genes.begin(), chrom.genes.end(), rng);
  return repair_capacity(repair_precedence(std::move(chrom), instance), instance);
}

VehicleChromosome random_vehicle_chromosome(const Instance& instance, Rng& rng) {
  const int total = instance.customer_count();
  const int slots = vehicle_slots(instance);
  const int max_routes = std::min(instance.fleet_size(), slots);
  const int routes = std::uniform_int_distribution<int>(1, max_routes)(rng);

  // Random composition of N' into `routes` positive parts via distinct cuts.
  std::vector<int> cuts(static_cast<std::size_t>(total - 1));
  std::iota(cuts.begin(), cuts.end(), 1);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(static_cast<std::size_t>(routes - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(total);

  std::vector<int> slot_order(static_cast<std::size_t>(slots));
  std::iota(slot_order.begin(), slot_order.end(), 0);
  std::shuffle(slot_order.begin(), slot_order.end(), rng);
  slot_order.resize(static_cast<std::size_t>(routes));
  std::sort(slot_order.begin(), slot_order.end());

  VehicleChromosome chrom;
  chrom.counts.assign(static_cast<std::size_t>(slots), 0);
  int previous = 0;
  for (std::size_t r = 0; r < cuts.size(); ++r) {
    chrom.counts[static_cast<std::size_t>(slot_order[r])] = cuts[r] - previous;
    previous = cuts[r];
  }
  return chrom;
}

NodeChromosome repair_precedence(NodeChromosome chrom, const Instance& instance) {
  auto& genes = chrom.genes;
  for (std::size_t i = 0; i < genes.size(); ++i) {
    const NodeId v = genes[i];
    if (!instance.is_client(v)) continue;
    const NodeId supplier = instance.partner(v);
    const auto it = std::find(genes.begin() + static_cast<std::ptrdiff_t>(i) + 1, genes.end(),
                              supplier);
    if (it == genes.end()) continue;
    std::rotate(genes.begin() + static_cast<std::ptrdiff_t>(i), it, it + 1);
    // genes[i] is now the supplier and genes[i + 1] the client.
    ++i;
  }
  return chrom;
}

NodeChromosome repair_capacity(NodeChromosome chrom, const Instance& instance) {
  auto& genes = chrom.genes;
  const double capacity = instance.max_capacity();
  std::vector<int> position(instance.nodes().size(), -1);
  auto reindex = [&] {
    for (std::size_t p = 0; p < genes.size(); ++p) {
      position[static_cast<std::size_t>(genes[p])] = static_cast<int>(p);
    }
  };
  reindex();

  double load = 0.0;
  std::size_t i = 0;
  while (i < genes.size()) {
    const double here = instance.node(genes[i]).quantity;
    if (load + here <= capacity + kLoadTolerance) {
      load += here;
      ++i;
      continue;
    }
    std::ptrdiff_t pick = -1;
    for (std::size_t s = i; s-- > 0;) {
      const NodeId v = genes[s];
      if (!instance.is_supplier(v)) continue;
      const int client_at = position[static_cast<std::size_t>(instance.partner(v))];
      if (client_at > static_cast<int>(i)) {
        pick = client_at;
        break;
      }
    }
    if (pick < 0) {
      load += here;
      ++i;
      continue;
    }
    std::rotate(genes.begin() + static_cast<std::ptrdiff_t>(i), genes.begin() + pick,
                genes.begin() + pick + 1);
    reindex();
  }
  return chrom;
}

std::pair<NodeChromosome, NodeChromosome> crossover_order(const NodeChromosome& p1,
                                                          const NodeChromosome& p2,
                                                          std::size_t point) {
  if (p1.genes.size() != p2.genes.size()) throw InputError("crossover parents differ in length");
  if (point < 1 || point >= p1.genes.size()) {
    throw InputError("crossover point " + std::to_string(point) + " outside [1, N')");
  }
  auto child_of = [point](const NodeChromosome& head, const NodeChromosome& tail) {
    NodeChromosome child;
    child.genes.assign(head.genes.begin(), head.genes.begin() + static_cast<std::ptrdiff_t>(point));
    const NodeId largest = *std::max_element(head.genes.begin(), head.genes.end());
    std::vector<char> used(static_cast<std::size_t>(largest) + 1, 0);
    for (NodeId g : child.genes) used[static_cast<std::size_t>(g)] = 1;
    for (NodeId g : tail.genes) {
      if (g >= 0 && g <= largest && !used[static_cast<std::size_t>(g)]) {
        used[static_cast<std::size_t>(g)] = 1;
        child.genes.push_back(g);
      }
    }
    return child;
  };
  return {child_of(p1, p2), child_of(p2, p1)};
}

std::pair<NodeChromosome, NodeChromosome> crossover_nodes(const NodeChromosome& p1,
                                                          const NodeChromosome& p2,
                                                          std::size_t point,
                                                          const Instance& instance) {
  auto [a, b] = crossover_order(p1, p2, point);
  return {repair_capacity(repair_precedence(std::move(a), instance), instance),
          repair_capacity(repair_precedence(std::move(b), instance), instance)};
}

std::pair<VehicleChromosome, VehicleChromosome> crossover_vehicles(const VehicleChromosome& p1,
                                                                   const VehicleChromosome& p2,
                                                                   std::size_t point,
                                                                   const Instance& instance) {
  if (p1.counts.size() != p2.counts.size()) throw InputError("crossover parents differ in length");
  if (point < 1 || point >= p1.counts.size()) {
    throw InputError("crossover point " + std::to_string(point) + " outside [1, K_max)");
  }
  VehicleChromosome a = p1;
  VehicleChromosome b = p2;
  std::swap_ranges(a.counts.begin() + static_cast<std::ptrdiff_t>(point), a.counts.end(),
                   b.counts.begin() + static_cast<std::ptrdiff_t>(point));
  renormalize(a.counts, instance.customer_count(), instance.fleet_size());
  renormalize(b.counts, instance.customer_count(), instance.fleet_size());
  return {std::move(a), std::move(b)};
}

NodeChromosome swap_and_repair(NodeChromosome chrom, std::size_t i, std::size_t j,
                               const Instance& instance) {
  if (i >= chrom.genes.size() || j >= chrom.genes.size()) {
    throw InputError("swap position out of range");
  }
  std::swap(chrom.genes[i], chrom.genes[j]);
  return repair_capacity(repair_precedence(std::move(chrom), instance), instance);
}

NodeChromosome mutate_nodes(NodeChromosome chrom, const Instance& instance, Rng& rng) {
  const std::size_t n = chrom.genes.size();
  if (n < 2) return repair_capacity(repair_precedence(std::move(chrom), instance), instance);
  const std::size_t i = uniform_index(rng, n);
  std::size_t j = uniform_index(rng, n - 1);
  if (j >= i) ++j;
  return swap_and_repair(std::move(chrom), i, j, instance);
}

VehicleChromosome mutate_vehicles(VehicleChromosome chrom, const Instance& instance, Rng& rng) {
  auto& counts = chrom.counts;
  std::vector<std::size_t> sources;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) sources.push_back(i);
  }
  if (sources.empty() || counts.size() < 2) return chrom;
  const bool at_limit = static_cast<int>(sources.size()) >= instance.fleet_size();

  // Enumerate every legal (source, destination) move, then pick one.
  std::vector<std::pair<std::size_t, std::size_t>> moves;
  for (std::size_t src : sources) {
    for (std::size_t dst = 0; dst < counts.size(); ++dst) {
      if (dst == src) continue;
      const bool opens_route = counts[dst] == 0 && counts[src] > 1;
      if (opens_route && at_limit) continue;
      moves.emplace_back(src, dst);
    }
  }
  if (moves.empty()) return chrom;
  const auto [src, dst] = moves[uniform_index(rng, moves.size())];
  --counts[src];
  ++counts[dst];
  return chrom;
}

RoutedSolution decode(const NodeChromosome& nodes, const VehicleChromosome& vehicles) {
  const int sum = std::accumulate(vehicles.counts.begin(), vehicles.counts.end(), 0);
  if (sum != static_cast<int>(nodes.genes.size()) ||
      std::any_of(vehicles.counts.begin(), vehicles.counts.end(), [](int c) { return c < 0; })) {
    throw InputError("vehicle counts do not split the node chromosome");
  }
  RoutedSolution solution;
  auto cursor = nodes.genes.begin();
  for (int count : vehicles.counts) {
    if (count == 0) continue;
    Route route;
    route.vehicle = static_cast<VehicleIndex>(solution.routes.size());
    route.visits.assign(cursor, cursor + count);
    cursor += count;
    solution.routes.push_back(std::move(route));
  }
  return solution;
}

}  // namespace pdptw
