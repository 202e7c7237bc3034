#include "pdptw/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pdptw {

namespace {

// Absolute slack for load and time comparisons; generated data carries
// six decimals, so sums may drift by a few ulps.
constexpr double kTolerance = 1e-9;

void require(bool condition, const std::string& message) {
  if (!condition) throw InputError(message);
}

std::string node_label(NodeId id) { return "node " + std::to_string(id); }

}  // namespace

Instance::Instance(std::vector<Node> nodes, std::vector<Request> requests,
                   std::vector<VehicleSpec> fleet, std::vector<Arc> blocked_arcs)
    : nodes_(std::move(nodes)),
      requests_(std::move(requests)),
      fleet_(std::move(fleet)),
      blocked_arcs_(std::move(blocked_arcs)) {
  require(!nodes_.empty(), "instance has no depot");
  const auto n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Node& node = nodes_[i];
    const std::string label = node_label(static_cast<NodeId>(i));
    require(node.id == static_cast<NodeId>(i), label + ": ids must be contiguous from 0");
    require(std::isfinite(node.x) && std::isfinite(node.y), label + ": non-finite coordinates");
    require(!std::isnan(node.window_open) && !std::isnan(node.window_close),
            label + ": window is NaN");
    require(node.window_open <= node.window_close, label + ": window_open > window_close");
    require(node.service_time >= 0.0 && std::isfinite(node.service_time),
            label + ": service_time must be finite and >= 0");
    require(std::isfinite(node.quantity), label + ": non-finite quantity");
    if (i == 0) {
      require(node.quantity == 0.0, "depot must have quantity 0");
    } else {
      require(node.quantity != 0.0, label + ": non-depot node with quantity 0");
    }
  }

  const int customers = customer_count();
  require(customers >= 2 && customers % 2 == 0,
          "N' must be even and >= 2 (got " + std::to_string(customers) + ")");

  request_of_.assign(n, -1);
  for (std::size_t r = 0; r < requests_.size(); ++r) {
    const Request& req = requests_[r];
    for (NodeId id : {req.supplier, req.client}) {
      require(id >= 1 && id <= customers, "request " + std::to_string(r) + " references invalid " +
                                              node_label(id));
      require(request_of_[static_cast<std::size_t>(id)] == -1,
              node_label(id) + " belongs to more than one request");
      request_of_[static_cast<std::size_t>(id)] = static_cast<int>(r);
    }
    require(nodes_[static_cast<std::size_t>(req.supplier)].quantity > 0.0,
            "supplier " + node_label(req.supplier) + " must have quantity > 0");
    require(nodes_[static_cast<std::size_t>(req.client)].quantity < 0.0,
            "client " + node_label(req.client) + " must have quantity < 0");
  }

  require(static_cast<int>(requests_.size()) * 2 == customers,
          "expected " + std::to_string(customers / 2) + " requests, got " +
              std::to_string(requests_.size()));

  require(!fleet_.empty(), "fleet is empty");
  for (std::size_t k = 0; k < fleet_.size(); ++k) {
    const VehicleSpec& v = fleet_[k];
    const std::string label = "vehicle " + std::to_string(k);
    require(v.capacity > 0.0 && std::isfinite(v.capacity), label + ": capacity must be > 0");
    require(v.cost_coefficient >= 0.0 && std::isfinite(v.cost_coefficient),
            label + ": cost_coefficient must be >= 0");
    require(v.speed > 0.0 && std::isfinite(v.speed), label + ": speed must be > 0");
    max_capacity_ = std::max(max_capacity_, v.capacity);
  }

  std::sort(blocked_arcs_.begin(), blocked_arcs_.end());
  blocked_arcs_.erase(std::unique(blocked_arcs_.begin(), blocked_arcs_.end()), blocked_arcs_.end());
  blocked_.assign(n * n, 0);
  for (const auto& [i, j] : blocked_arcs_) {
    require(valid_node(i) && valid_node(j),
            "blocked arc (" + std::to_string(i) + "," + std::to_string(j) + ") has invalid ids");
    require(i != j, "blocked arc on " + node_label(i) + " is a self-loop");
    blocked_[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)] = 1;
  }

  distances_.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (blocked_[i * n + j]) {
        distances_[i * n + j] = kInfinity;
        continue;
      }
      const double dx = nodes_[i].x - nodes_[j].x;
      const double dy = nodes_[i].y - nodes_[j].y;
      const double d = std::sqrt(dx * dx + dy * dy);
      distances_[i * n + j] = d;
      max_finite_distance_ = std::max(max_finite_distance_, d);
    }
  }
}

NodeId Instance::partner(NodeId id) const {
  const Request& req = requests_[static_cast<std::size_t>(request_of(id))];
  return req.supplier == id ? req.client : req.supplier;
}

std::string to_string(ConstraintTag tag) {
  switch (tag) {
    case ConstraintTag::Coverage: return "COVERAGE";
    case ConstraintTag::Depot: return "DEPOT";
    case ConstraintTag::Flow: return "FLOW";
    case ConstraintTag::Load: return "LOAD";
    case ConstraintTag::Precedence: return "PRECEDENCE";
    case ConstraintTag::TimeWindow: return "TIME_WINDOW";
    case ConstraintTag::BlockedArc: return "BLOCKED_ARC";
  }
  return "UNKNOWN";
}

std::string to_string(const Violation& v) {
  std::ostringstream out;
  out << to_string(v.tag);
  if (v.vehicle >= 0) out << " vehicle=" << v.vehicle;
  if (v.node >= 0) out << " node=" << v.node;
  out << " magnitude=" << v.magnitude;
  return out.str();
}

double FeasibilityReport::total_magnitude() const {
  double total = 0.0;
  for (const auto& v : violations) total += v.magnitude;
  return total;
}

std::string to_string(FeasibilityMode mode) {
  return mode == FeasibilityMode::PaperLiteral ? "paper" : "strict";
}

FeasibilityMode parse_mode(const std::string& text) {
  if (text == "paper") return FeasibilityMode::PaperLiteral;
  if (text == "strict") return FeasibilityMode::StrictPairing;
  throw InputError("unknown feasibility mode '" + text + "' (expected paper|strict)");
}

std::optional<double> distance(const Instance& instance, NodeId i, NodeId j) {
  require(instance.valid_node(i), "invalid " + node_label(i));
  require(instance.valid_node(j), "invalid " + node_label(j));
  if (instance.arc_blocked(i, j)) return std::nullopt;
  return instance.arc_length(i, j);
}

std::optional<double> travel_time(const Instance& instance, VehicleIndex k, NodeId i, NodeId j) {
  require(k >= 0 && k < instance.fleet_size(), "invalid vehicle " + std::to_string(k));
  const auto d = distance(instance, i, j);
  if (!d) return std::nullopt;
  return *d / instance.fleet()[static_cast<std::size_t>(k)].speed;
}

namespace {

void require_route_shape(const Route& route, const Instance& instance) {
  require(route.vehicle >= 0 && route.vehicle < instance.fleet_size(),
          "invalid vehicle " + std::to_string(route.vehicle));
  for (NodeId v : route.visits) {
    require(instance.valid_node(v) && v != 0, "route visits invalid " + node_label(v));
  }
}

}  // namespace

ScheduleResult propagate_schedule(const Route& route, const Instance& instance) {
  require_route_shape(route, instance);
  const double speed = instance.fleet()[static_cast<std::size_t>(route.vehicle)].speed;

  ScheduleResult result;
  auto& stops = result.schedule.stops;
  stops.reserve(route.visits.size() + 1);
  stops.push_back(Stop{0, 0.0, 0.0, 0.0, 0.0});

  NodeId prev = 0;
  double clock = 0.0;
  for (NodeId j : route.visits) {
    if (instance.arc_blocked(prev, j)) {
      result.violation = Violation{ConstraintTag::BlockedArc, j, route.vehicle, 1.0};
      return result;
    }
    const Node& node = instance.node(j);
    const double arrival = clock + instance.arc_length(prev, j) / speed;
    const double start = std::max(arrival, node.window_open);
    const double finish = start + node.service_time;
    if (finish > node.window_close + kTolerance) {
      result.violation =
          Violation{ConstraintTag::TimeWindow, j, route.vehicle, finish - node.window_close};
      return result;
    }
    stops.push_back(Stop{j, arrival, start, finish, start - arrival});
    clock = finish;
    prev = j;
  }

  if (instance.arc_blocked(prev, 0)) {
    result.violation = Violation{ConstraintTag::BlockedArc, 0, route.vehicle, 1.0};
    return result;
  }
  const double back = clock + instance.arc_length(prev, 0) / speed;
  const double depot_close = instance.depot().window_close;
  if (std::isfinite(depot_close) && back > depot_close + kTolerance) {
    result.violation = Violation{ConstraintTag::TimeWindow, 0, route.vehicle, back - depot_close};
    return result;
  }
  result.schedule.return_arrival = back;
  return result;
}

LoadResult load_profile(const Route& route, const Instance& instance) {
  require_route_shape(route, instance);
  const double capacity = instance.fleet()[static_cast<std::size_t>(route.vehicle)].capacity;

  LoadResult result;
  result.loads.reserve(route.visits.size());
  double load = 0.0;
  for (NodeId j : route.visits) {
    load += instance.node(j).quantity;
    result.loads.push_back(load);
    if (load < -kTolerance) {
      result.violation = Violation{ConstraintTag::Load, j, route.vehicle, -load};
      return result;
    }
    if (load > capacity + kTolerance) {
      result.violation = Violation{ConstraintTag::Load, j, route.vehicle, load - capacity};
      return result;
    }
  }
  return result;
}

FeasibilityReport check_feasibility(const RoutedSolution& solution, const Instance& instance,
                                    FeasibilityMode mode) {
  FeasibilityReport report;
  auto& out = report.violations;
  const auto node_count = instance.nodes().size();
  const int fleet_size = instance.fleet_size();

  std::vector<int> seen(node_count, 0);
  std::vector<int> route_of(node_count, -1);
  std::vector<int> position_of(node_count, -1);
  std::vector<std::optional<double>> departure(node_count);
  std::vector<int> vehicle_uses(static_cast<std::size_t>(fleet_size), 0);

  for (std::size_t r = 0; r < solution.routes.size(); ++r) {
    const Route& route = solution.routes[r];
    const VehicleIndex k = route.vehicle;
    bool simulate = true;
    if (k < 0 || k >= fleet_size) {
      out.push_back(Violation{ConstraintTag::Depot, -1, k, 1.0});
      simulate = false;
    } else if (vehicle_uses[static_cast<std::size_t>(k)]++ > 0) {
      // Eqs. (4)-(5): each vehicle leaves and re-enters the depot once.
      out.push_back(Violation{ConstraintTag::Depot, -1, k, 1.0});
    }

    for (std::size_t p = 0; p < route.visits.size(); ++p) {
      const NodeId v = route.visits[p];
      if (v == 0) {
        out.push_back(Violation{ConstraintTag::Flow, 0, k, 1.0});
        simulate = false;
      } else if (!instance.valid_node(v)) {
        out.push_back(Violation{ConstraintTag::Coverage, v, k, 1.0});
        simulate = false;
      } else if (seen[static_cast<std::size_t>(v)]++ > 0) {
        out.push_back(Violation{ConstraintTag::Coverage, v, k, 1.0});
      } else {
        route_of[static_cast<std::size_t>(v)] = static_cast<int>(r);
        position_of[static_cast<std::size_t>(v)] = static_cast<int>(p);
      }
    }
    if (!simulate) continue;

    if (auto load = load_profile(route, instance); load.violation) out.push_back(*load.violation);
    auto timing = propagate_schedule(route, instance);
    if (timing.violation) out.push_back(*timing.violation);
    const auto& stops = timing.schedule.stops;
    for (std::size_t s = 1; s < stops.size(); ++s) {
      const auto v = static_cast<std::size_t>(stops[s].node);
      if (route_of[v] == static_cast<int>(r) && position_of[v] == static_cast<int>(s - 1)) {
        departure[v] = stops[s].departure;
      }
    }
  }

  for (NodeId v = 1; v < static_cast<NodeId>(node_count); ++v) {
    if (seen[static_cast<std::size_t>(v)] == 0) {
      out.push_back(Violation{ConstraintTag::Coverage, v, -1, 1.0});
    }
  }

  for (const Request& req : instance.requests()) {
    const auto s = static_cast<std::size_t>(req.supplier);
    const auto c = static_cast<std::size_t>(req.client);
    if (seen[s] == 0 || seen[c] == 0) continue;
    const VehicleIndex client_vehicle =
        solution.routes[static_cast<std::size_t>(route_of[c])].vehicle;
    const bool timed = departure[s].has_value() && departure[c].has_value();
    const double gap = timed ? *departure[s] - *departure[c] : 0.0;
    if (mode == FeasibilityMode::StrictPairing) {
      const bool paired = route_of[s] == route_of[c] && position_of[s] < position_of[c];
      if (!paired) {
        out.push_back(Violation{ConstraintTag::Precedence, req.client, client_vehicle,
                                1.0 + std::max(0.0, gap)});
      }
    } else if (timed && gap > kTolerance) {
      out.push_back(Violation{ConstraintTag::Precedence, req.client, client_vehicle, gap});
    }
  }
  return report;
}

double route_distance(const Route& route, const Instance& instance) {
  double total = 0.0;
  NodeId prev = 0;
  auto leg = [&](NodeId next) {
    const auto d = distance(instance, prev, next);
    require(d.has_value(), "route uses blocked arc (" + std::to_string(prev) + "," +
                               std::to_string(next) + ")");
    total += *d;
    prev = next;
  };
  for (NodeId v : route.visits) leg(v);
  leg(0);
  return total;
}

double solution_distance(const RoutedSolution& solution, const Instance& instance) {
  double total = 0.0;
  for (const auto& route : solution.routes) total += route_distance(route, instance);
  return total;
}

double fitness(const RoutedSolution& solution, const Instance& instance) {
  double total = 0.0;
  for (const auto& route : solution.routes) {
    require(route.vehicle >= 0 && route.vehicle < instance.fleet_size(),
            "invalid vehicle " + std::to_string(route.vehicle));
    total += instance.fleet()[static_cast<std::size_t>(route.vehicle)].cost_coefficient *
             route_distance(route, instance);
  }
  return total;
}

double lenient_fitness(const RoutedSolution& solution, const Instance& instance) {
  double total = 0.0;
  for (const auto& route : solution.routes) {
    if (route.vehicle < 0 || route.vehicle >= instance.fleet_size()) continue;
    const bool valid = std::all_of(route.visits.begin(), route.visits.end(),
                                   [&](NodeId v) { return instance.valid_node(v); });
    if (!valid) continue;
    double length = 0.0;
    NodeId prev = 0;
    for (NodeId v : route.visits) {
      if (!instance.arc_blocked(prev, v)) length += instance.arc_length(prev, v);
      prev = v;
    }
    if (!instance.arc_blocked(prev, 0)) length += instance.arc_length(prev, 0);
    total += instance.fleet()[static_cast<std::size_t>(route.vehicle)].cost_coefficient * length;
  }
  return total;
}

}  // namespace pdptw
