#include "pdptw/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pdptw::oracle {

// Everything below reads only the raw instance data (coordinates, windows,
// quantities, the blocked-arc list) so that a bug in the core checker or the
// cached distance matrix cannot confirm itself here.

namespace {

constexpr double kEps = 1e-9;

struct Leg {
  bool blocked;
  double length;
};

Leg leg(const Instance& inst, NodeId from, NodeId to) {
  for (const auto& arc : inst.blocked_arcs()) {
    if (arc.first == from && arc.second == to) return {true, 0.0};
  }
  const Node& a = inst.nodes()[static_cast<std::size_t>(from)];
  const Node& b = inst.nodes()[static_cast<std::size_t>(to)];
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return {false, std::sqrt(dx * dx + dy * dy)};
}

}  // namespace

FeasibilityReport cross_check(const RoutedSolution& solution, const Instance& inst,
                              FeasibilityMode mode) {
  FeasibilityReport report;
  const int n_nodes = static_cast<int>(inst.nodes().size());
  const int n_vehicles = static_cast<int>(inst.fleet().size());

  std::vector<int> count(static_cast<std::size_t>(n_nodes), 0);
  std::vector<int> home_route(static_cast<std::size_t>(n_nodes), -1);
  std::vector<int> home_pos(static_cast<std::size_t>(n_nodes), -1);
  std::vector<double> dep(static_cast<std::size_t>(n_nodes), -1.0);
  std::vector<char> has_dep(static_cast<std::size_t>(n_nodes), 0);
  std::vector<int> used(static_cast<std::size_t>(n_vehicles), 0);

  for (int r = 0; r < static_cast<int>(solution.routes.size()); ++r) {
    const Route& route = solution.routes[static_cast<std::size_t>(r)];
    const int k = route.vehicle;
    bool ok = true;
    if (k < 0 || k >= n_vehicles) {
      report.violations.push_back({ConstraintTag::Depot, -1, k, 1.0});
      ok = false;
    } else {
      used[static_cast<std::size_t>(k)] += 1;
      if (used[static_cast<std::size_t>(k)] > 1) {
        report.violations.push_back({ConstraintTag::Depot, -1, k, 1.0});
      }
    }
    for (int p = 0; p < static_cast<int>(route.visits.size()); ++p) {
      const int v = route.visits[static_cast<std::size_t>(p)];
      if (v == 0) {
        report.violations.push_back({ConstraintTag::Flow, 0, k, 1.0});
        ok = false;
        continue;
      }
      if (v < 0 || v >= n_nodes) {
        report.violations.push_back({ConstraintTag::Coverage, v, k, 1.0});
        ok = false;
        continue;
      }
      count[static_cast<std::size_t>(v)] += 1;
      if (count[static_cast<std::size_t>(v)] > 1) {
        report.violations.push_back({ConstraintTag::Coverage, v, k, 1.0});
      } else {
        home_route[static_cast<std::size_t>(v)] = r;
        home_pos[static_cast<std::size_t>(v)] = p;
      }
    }
    if (!ok) continue;

    const VehicleSpec& veh = inst.fleet()[static_cast<std::size_t>(k)];

    // Load: running sum of q, must stay inside [0, Q].
    double y = 0.0;
    for (int v : route.visits) {
      y += inst.nodes()[static_cast<std::size_t>(v)].quantity;
      if (y < -kEps) {
        report.violations.push_back({ConstraintTag::Load, v, k, -y});
        break;
      }
      if (y > veh.capacity + kEps) {
        report.violations.push_back({ConstraintTag::Load, v, k, y - veh.capacity});
        break;
      }
    }

    // Time: leave the depot at 0, wait for window openings, finish service
    // before the window closes.
    double t = 0.0;
    int at = 0;
    bool broke = false;
    for (int p = 0; p < static_cast<int>(route.visits.size()); ++p) {
      const int v = route.visits[static_cast<std::size_t>(p)];
      const Leg l = leg(inst, at, v);
      if (l.blocked) {
        report.violations.push_back({ConstraintTag::BlockedArc, v, k, 1.0});
        broke = true;
        break;
      }
      const Node& nd = inst.nodes()[static_cast<std::size_t>(v)];
      double begin = t + l.length / veh.speed;
      if (begin < nd.window_open) begin = nd.window_open;
      const double end = begin + nd.service_time;
      if (end > nd.window_close + kEps) {
        report.violations.push_back({ConstraintTag::TimeWindow, v, k, end - nd.window_close});
        broke = true;
        break;
      }
      if (home_route[static_cast<std::size_t>(v)] == r && home_pos[static_cast<std::size_t>(v)] == p) {
        dep[static_cast<std::size_t>(v)] = end;
        has_dep[static_cast<std::size_t>(v)] = 1;
      }
      t = end;
      at = v;
    }
    if (!broke) {
      const Leg l = leg(inst, at, 0);
      if (l.blocked) {
        report.violations.push_back({ConstraintTag::BlockedArc, 0, k, 1.0});
      } else {
        const double close = inst.nodes()[0].window_close;
        const double back = t + l.length / veh.speed;
        if (close != kInfinity && back > close + kEps) {
          report.violations.push_back({ConstraintTag::TimeWindow, 0, k, back - close});
        }
      }
    }
  }

  for (int v = 1; v < n_nodes; ++v) {
    if (count[static_cast<std::size_t>(v)] == 0) {
      report.violations.push_back({ConstraintTag::Coverage, v, -1, 1.0});
    }
  }

  for (const Request& rq : inst.requests()) {
    const auto s = static_cast<std::size_t>(rq.supplier);
    const auto c = static_cast<std::size_t>(rq.client);
    if (count[s] == 0 || count[c] == 0) continue;
    const int k = solution.routes[static_cast<std::size_t>(home_route[c])].vehicle;
    double gap = 0.0;
    if (has_dep[s] && has_dep[c]) gap = dep[s] - dep[c];
    if (mode == FeasibilityMode::StrictPairing) {
      const bool same = home_route[s] == home_route[c];
      if (!same || home_pos[s] >= home_pos[c]) {
        report.violations.push_back({ConstraintTag::Precedence, rq.client, k, 1.0 + std::max(0.0, gap)});
      }
    } else if (has_dep[s] && has_dep[c] && gap > kEps) {
      report.violations.push_back({ConstraintTag::Precedence, rq.client, k, gap});
    }
  }
  return report;
}

std::uint64_t ordered_partition_count(int nodes, int max_routes) {
  if (nodes <= 0) return 0;
  std::uint64_t factorial = 1;
  for (int i = 2; i <= nodes; ++i) factorial *= static_cast<std::uint64_t>(i);
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(nodes - 1, r - 1)
  for (int r = 1; r <= std::min(nodes, max_routes); ++r) {
    total += factorial * binom;
    binom = binom * static_cast<std::uint64_t>(nodes - r) / static_cast<std::uint64_t>(r);
  }
  return total;
}

namespace {

// Advances `parts` (positive, summing to the same total) to the next
// composition in lexicographic order. Returns false after the last one.
bool next_composition(std::vector<int>& parts) {
  const std::size_t m = parts.size();
  if (m < 2) return false;
  // The last composition is [total - m + 1, 1, ..., 1].
  // Find the rightmost position (excluding the last) that can grow by taking
  // from the suffix.
  for (std::size_t i = m - 1; i-- > 0;) {
    int suffix = 0;
    for (std::size_t j = i + 1; j < m; ++j) suffix += parts[j];
    const auto slots_after = static_cast<int>(m - i - 1);
    if (suffix > slots_after) {
      parts[i] += 1;
      suffix -= 1;
      for (std::size_t j = i + 1; j + 1 < m; ++j) parts[j] = 1;
      parts[m - 1] = suffix - (slots_after - 1);
      return true;
    }
  }
  return false;
}

double route_cost(const Instance& inst, const std::vector<int>& visits, int vehicle) {
  double length = 0.0;
  int at = 0;
  for (int v : visits) {
    length += leg(inst, at, v).length;
    at = v;
  }
  length += leg(inst, at, 0).length;
  return inst.fleet()[static_cast<std::size_t>(vehicle)].cost_coefficient * length;
}

}  // namespace

Result enumerate_optimal(const Instance& inst, FeasibilityMode mode, const Limits& limits) {
  const int n = static_cast<int>(inst.nodes().size()) - 1;
  if (limits.max_nodes > kMaxNodesCeiling) {
    throw LimitError("max_nodes may not exceed " + std::to_string(kMaxNodesCeiling), 0, 0);
  }
  if (n > limits.max_nodes) {
    throw LimitError("instance has N' = " + std::to_string(n) + " > limit " +
                         std::to_string(limits.max_nodes),
                     0, 0);
  }
  const int max_routes =
      std::min({static_cast<int>(inst.fleet().size()), limits.max_vehicles, n});
  const auto started = std::chrono::steady_clock::now();

  Result result;
  RoutedSolution candidate;
  for (int routes = 1; routes <= max_routes; ++routes) {
    std::vector<int> shape(static_cast<std::size_t>(routes), 1);
    shape.back() = n - (routes - 1);
    do {
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 1);
      do {
        ++result.explored_count;
        if ((result.explored_count & 0x3ff) == 0 &&
            std::chrono::steady_clock::now() - started > limits.time_budget) {
          throw LimitError("oracle time budget exhausted", result.explored_count,
                           result.feasible_count);
        }
        candidate.routes.resize(static_cast<std::size_t>(routes));
        std::size_t cursor = 0;
        for (int r = 0; r < routes; ++r) {
          auto& route = candidate.routes[static_cast<std::size_t>(r)];
          route.vehicle = r;
          route.visits.assign(order.begin() + static_cast<std::ptrdiff_t>(cursor),
                              order.begin() + static_cast<std::ptrdiff_t>(cursor) +
                                  shape[static_cast<std::size_t>(r)]);
          cursor += static_cast<std::size_t>(shape[static_cast<std::size_t>(r)]);
        }
        if (!cross_check(candidate, inst, mode).feasible()) continue;
        ++result.feasible_count;
        double cost = 0.0;
        for (const auto& route : candidate.routes) cost += route_cost(inst, route.visits, route.vehicle);
        if (!result.optimal_fitness || cost < *result.optimal_fitness) {
          result.optimal_fitness = cost;
          result.optimum = candidate;
        }
      } while (std::next_permutation(order.begin(), order.end()));
    } while (next_composition(shape));
  }
  return result;
}

}  // namespace pdptw::oracle
