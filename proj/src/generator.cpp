#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "pdptw/io.hpp"

namespace pdptw::io {

namespace {

double round_to(double value, double scale) { return std::round(value * scale) / scale; }
double floor6(double value) { return std::floor(value * 1e6) / 1e6; }
double ceil6(double value) { return std::ceil(value * 1e6) / 1e6; }

void require_range(const std::pair<double, double>& range, const char* name) {
  if (!(range.first >= 0.0 && range.first <= range.second && std::isfinite(range.second))) {
    throw InputError(std::string(name) + " must be a non-negative [lo, hi] range");
  }
}

}  // namespace

void GeneratorParams::validate() const {
  if (n_prime < 2 || n_prime % 2 != 0) throw InputError("n_prime must be even and >= 2");
  if (k < 1) throw InputError("k must be >= 1");
  if (!(area > 0.0)) throw InputError("area must be > 0");
  if (!(capacity > 0.0)) throw InputError("capacity must be > 0");
  require_range(window_width_range, "window_width_range");
  require_range(service_time_range, "service_time_range");
  require_range(quantity_range, "quantity_range");
  if (!(quantity_range.first >= 1.0)) throw InputError("quantity_range must be >= 1");
  if (quantity_range.second > capacity) throw InputError("quantity_range exceeds capacity");
  if (!(horizon >= 0.0)) throw InputError("horizon must be >= 0");
}

GeneratedInstance generate_with_witness(const GeneratorParams& params) {
  params.validate();
  std::mt19937_64 rng(params.seed);
  auto uniform = [&rng](double lo, double hi) {
    return lo == hi ? lo : std::uniform_real_distribution<double>(lo, hi)(rng);
  };

  const int customers = params.n_prime;
  std::vector<Node> nodes(static_cast<std::size_t>(customers) + 1);
  nodes[0].x = round_to(params.area / 2.0, 1e3);
  nodes[0].y = round_to(params.area / 2.0, 1e3);
  for (int i = 1; i <= customers; ++i) {
    Node& node = nodes[static_cast<std::size_t>(i)];
    node.id = i;
    node.x = round_to(uniform(0.0, params.area), 1e3);
    node.y = round_to(uniform(0.0, params.area), 1e3);
    node.service_time = round_to(uniform(params.service_time_range.first,
                                         params.service_time_range.second), 1e3);
  }

  // Consecutive nodes pair up: (1, 2), (3, 4), ...
  std::vector<Request> requests;
  const auto q_lo = static_cast<int>(std::ceil(params.quantity_range.first));
  const auto q_hi = std::max(q_lo, static_cast<int>(std::floor(params.quantity_range.second)));
  for (int r = 0; r < customers / 2; ++r) {
    const int supplier = 2 * r + 1;
    const int client = 2 * r + 2;
    const double q = std::uniform_int_distribution<int>(q_lo, q_hi)(rng);
    nodes[static_cast<std::size_t>(supplier)].quantity = q;
    nodes[static_cast<std::size_t>(client)].quantity = -q;
    requests.push_back(Request{supplier, client});
  }

  // Seed tour: shuffled requests dealt to random vehicles, each served as an
  // adjacent pickup-delivery pair so load never exceeds one quantity.
  std::vector<int> order(requests.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<NodeId>> tours(static_cast<std::size_t>(params.k));
  for (int r : order) {
    const auto v = std::uniform_int_distribution<std::size_t>(0, tours.size() - 1)(rng);
    tours[v].push_back(requests[static_cast<std::size_t>(r)].supplier);
    tours[v].push_back(requests[static_cast<std::size_t>(r)].client);
  }

  // Widen windows around the seed tour's service times (no waiting on it).
  double latest_return = 0.0;
  for (const auto& tour : tours) {
    double clock = 0.0;
    NodeId prev = 0;
    for (NodeId v : tour) {
      Node& node = nodes[static_cast<std::size_t>(v)];
      const Node& from = nodes[static_cast<std::size_t>(prev)];
      const double dx = from.x - node.x;
      const double dy = from.y - node.y;
      const double arrival = clock + std::sqrt(dx * dx + dy * dy);
      const double width = std::max(
          uniform(params.window_width_range.first, params.window_width_range.second),
          node.service_time);
      const double slack = uniform(0.0, width - node.service_time);
      node.window_open = std::max(0.0, floor6(arrival - slack));
      node.window_close = std::max(ceil6(node.window_open + width),
                                   ceil6(arrival + node.service_time));
      clock = std::max(arrival, node.window_open) + node.service_time;
      prev = v;
    }
    const Node& last = nodes[static_cast<std::size_t>(prev)];
    const double dx = last.x - nodes[0].x;
    const double dy = last.y - nodes[0].y;
    latest_return = std::max(latest_return, clock + std::sqrt(dx * dx + dy * dy));
  }
  if (params.horizon > 0.0) nodes[0].window_close = std::max(params.horizon, ceil6(latest_return));

  std::vector<VehicleSpec> fleet(static_cast<std::size_t>(params.k),
                                 VehicleSpec{params.capacity, 1.0, 1.0});
  GeneratedInstance out{Instance(std::move(nodes), std::move(requests), std::move(fleet)), {}};
  for (auto& tour : tours) {
    if (tour.empty()) continue;
    out.witness.routes.push_back(
        Route{static_cast<VehicleIndex>(out.witness.routes.size()), std::move(tour)});
  }
  return out;
}

Instance generate_random(const GeneratorParams& params) {
  return generate_with_witness(params).instance;
}

}  // namespace pdptw::io
