#pragma once

// Shared fixtures and hand-rolled generators for the test suites.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "pdptw/ga.hpp"
#include "pdptw/io.hpp"
#include "pdptw/model.hpp"

namespace pdptw::testing {

inline Node make_node(NodeId id, double x, double y, double quantity, double open = 0.0,
                      double close = 1e6, double service = 0.0) {
  return Node{id, x, y, open, close, service, quantity};
}

/// Ten-node fixture used by the repair and decode figures: couples
/// (client, supplier) = (1,5), (2,8), (9,7), (10,3), (4,6); every supplier
/// carries +20 and every client -20; two vehicles of capacity 60.
inline Instance figure_fixture() {
  const std::vector<std::pair<NodeId, NodeId>> couples{{1, 5}, {2, 8}, {9, 7}, {10, 3}, {4, 6}};
  std::vector<Node> nodes{make_node(0, 50, 50, 0)};
  const double xs[] = {12, 80, 33, 71, 25, 90, 64, 18, 47, 58};
  const double ys[] = {40, 15, 77, 62, 9, 55, 30, 86, 21, 93};
  for (int i = 1; i <= 10; ++i) {
    nodes.push_back(make_node(i, xs[i - 1], ys[i - 1], 0.0));
  }
  std::vector<Request> requests;
  for (const auto& [client, supplier] : couples) {
    nodes[static_cast<std::size_t>(supplier)].quantity = 20;
    nodes[static_cast<std::size_t>(client)].quantity = -20;
    requests.push_back(Request{supplier, client});
  }
  return Instance(nodes, requests, {VehicleSpec{60, 1, 1}, VehicleSpec{60, 1, 1}});
}

/// One request: supplier 1 at (3,4), client 2 at (6,8).
inline Instance single_request(int vehicles = 1) {
  std::vector<Node> nodes{make_node(0, 0, 0, 0), make_node(1, 3, 4, 10), make_node(2, 6, 8, -10)};
  return Instance(nodes, {Request{1, 2}},
                  std::vector<VehicleSpec>(static_cast<std::size_t>(vehicles), VehicleSpec{60, 1, 1}));
}

/// Two requests on a square around the depot: 1 -> 2 and 3 -> 4 with
/// generous windows and capacity.
inline Instance square_instance() {
  std::vector<Node> nodes{make_node(0, 0, 0, 0), make_node(1, 10, 0, 10),
                          make_node(2, 0, 10, -10), make_node(3, -10, 0, 10),
                          make_node(4, 0, -10, -10)};
  return Instance(nodes, {Request{1, 2}, Request{3, 4}}, {VehicleSpec{60, 1, 1}, VehicleSpec{60, 1, 1}});
}

inline io::GeneratorParams small_params(int n_prime, int k, std::uint64_t seed) {
  io::GeneratorParams p;
  p.n_prime = n_prime;
  p.k = k;
  p.seed = seed;
  return p;
}

/// Random instance with a few blocked arcs and, sometimes, a finite depot
/// window; exercises every branch of the checkers.
inline Instance random_instance(std::mt19937_64& rng, int n_prime, int k) {
  auto params = small_params(n_prime, k, rng());
  params.window_width_range = {20.0, 160.0};
  params.quantity_range = {5.0, 40.0};
  const Instance base = io::generate_random(params);
  std::vector<Node> nodes = base.nodes();
  std::vector<Arc> blocked;
  std::uniform_int_distribution<int> pick(0, n_prime);
  const int arcs = std::uniform_int_distribution<int>(0, 3)(rng);
  for (int a = 0; a < arcs; ++a) {
    const int i = pick(rng);
    const int j = pick(rng);
    if (i != j) blocked.emplace_back(i, j);
  }
  if (rng() % 3 == 0) {
    // Three decimals keeps the instance on the native format's 6-digit grid.
    nodes[0].window_close =
        std::round(std::uniform_real_distribution<double>(100, 600)(rng) * 1000) / 1000;
  }
  std::vector<VehicleSpec> fleet = base.fleet();
  for (auto& v : fleet) {
    v.capacity = std::uniform_int_distribution<int>(30, 80)(rng);
    v.speed = (rng() % 2 == 0) ? 1.0 : 1.5;
    v.cost_coefficient = std::uniform_int_distribution<int>(1, 3)(rng);
  }
  return Instance(nodes, base.requests(), fleet, blocked);
}

/// Random routed solution, deliberately malformed some of the time
/// (duplicate or missing nodes, reused or unknown vehicles, stray depot).
inline RoutedSolution random_solution(std::mt19937_64& rng, const Instance& instance) {
  const int n = instance.customer_count();
  const int k = instance.fleet_size();
  std::vector<NodeId> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);

  RoutedSolution sol;
  const int routes = std::uniform_int_distribution<int>(1, std::max(1, std::min(k, n)))(rng);
  std::vector<int> cuts(static_cast<std::size_t>(n - 1));
  std::iota(cuts.begin(), cuts.end(), 1);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(static_cast<std::size_t>(routes - 1));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(n);
  int prev = 0;
  for (int r = 0; r < routes; ++r) {
    Route route;
    route.vehicle = r;
    route.visits.assign(order.begin() + prev, order.begin() + cuts[static_cast<std::size_t>(r)]);
    prev = cuts[static_cast<std::size_t>(r)];
    sol.routes.push_back(std::move(route));
  }

  const auto corrupt = rng() % 10;
  auto& first = sol.routes.front().visits;
  if (corrupt == 0 && !first.empty()) {
    first.push_back(first.front());  // duplicate
  } else if (corrupt == 1 && !first.empty()) {
    first.pop_back();  // missing
  } else if (corrupt == 2) {
    sol.routes.push_back(Route{0, {}});  // vehicle reused
  } else if (corrupt == 3) {
    sol.routes.back().vehicle = k + 2;  // unknown vehicle
  } else if (corrupt == 4) {
    first.insert(first.begin(), 0);  // depot inside a route
  }
  return sol;
}

}  // namespace pdptw::testing
