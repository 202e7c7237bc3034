#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "pdptw/io.hpp"

namespace pdptw::io {

using nlohmann::json;

namespace {

double round6(double value) {
  if (!std::isfinite(value)) return value;
  const double r = std::round(value * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // no "-0.0"
}

json number(double value) {
  if (!std::isfinite(value)) return nullptr;
  return round6(value);
}

// Position of byte `offset` as "line L".
std::string line_of(std::string_view text, std::size_t offset) {
  const auto end = std::min(offset, text.size());
  const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n');
  return "line " + std::to_string(line);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line_of(text, e.byte) + ": " + e.what());
  }
}

class Reader {
 public:
  Reader(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  void allow_only(std::initializer_list<std::string_view> keys) const {
    if (!value_.is_object()) fail("expected an object");
    const std::set<std::string_view> allowed(keys);
    for (const auto& item : value_.items()) {
      if (!allowed.count(item.key())) {
        throw ParseError(path_ + ": unknown field '" + item.key() + "'");
      }
    }
  }

  bool has(const std::string& key) const { return value_.contains(key); }

  Reader at(const std::string& key) const {
    if (!value_.is_object() || !value_.contains(key)) fail("missing field '" + key + "'");
    return Reader(value_.at(key), path_ + "." + key);
  }
  Reader at(std::size_t index) const {
    return Reader(value_.at(index), path_ + "[" + std::to_string(index) + "]");
  }

  std::size_t array_size() const {
    if (!value_.is_array()) fail("expected an array");
    return value_.size();
  }

  double number(double null_value = kInfinity) const {
    if (value_.is_null()) return null_value;
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }

  int integer() const {
    if (!value_.is_number_integer()) fail("expected an integer");
    return value_.get<int>();
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(path_ + ": " + message); }

 private:
  const json& value_;
  std::string path_;
};

json route_report(const Route& route, std::size_t index, const Instance& instance) {
  json out;
  out["vehicle"] = route.vehicle;
  out["visits"] = route.visits;
  out["index"] = index;
  const bool simulable = route.vehicle >= 0 && route.vehicle < instance.fleet_size() &&
                         std::all_of(route.visits.begin(), route.visits.end(), [&](NodeId v) {
                           return v > 0 && instance.valid_node(v);
                         });
  json stops = json::array();
  json distance_value = nullptr;
  json return_arrival = nullptr;
  if (simulable) {
    const auto timing = propagate_schedule(route, instance);
    const auto load = load_profile(route, instance);
    const auto& sched = timing.schedule.stops;
    for (std::size_t s = 1; s < sched.size(); ++s) {
      json stop;
      stop["node"] = sched[s].node;
      stop["arrival"] = number(sched[s].arrival);
      stop["service_start"] = number(sched[s].service_start);
      stop["departure"] = number(sched[s].departure);
      stop["wait"] = number(sched[s].wait);
      stop["load"] = s - 1 < load.loads.size() ? number(load.loads[s - 1]) : json(nullptr);
      stops.push_back(std::move(stop));
    }
    if (timing.schedule.return_arrival) return_arrival = number(*timing.schedule.return_arrival);
    try {
      distance_value = number(route_distance(route, instance));
    } catch (const InputError&) {
      distance_value = nullptr;  // blocked arc on the route
    }
  }
  out["stops"] = std::move(stops);
  out["distance"] = std::move(distance_value);
  out["return_arrival"] = std::move(return_arrival);
  return out;
}

double report_distance(const RoutedSolution& solution, const Instance& instance) {
  try {
    return solution_distance(solution, instance);
  } catch (const InputError&) {
    return kInfinity;
  }
}

double report_fitness(const RoutedSolution& solution, const Instance& instance) {
  try {
    return fitness(solution, instance);
  } catch (const InputError&) {
    return kInfinity;
  }
}

}  // namespace

Instance parse_native(std::string_view text) {
  const json doc = parse_json(text);
  const Reader root(doc, "$");
  root.allow_only({"nodes", "requests", "fleet", "blocked_arcs", "depot_window"});

  std::vector<Node> nodes;
  const Reader node_list = root.at("nodes");
  for (std::size_t i = 0; i < node_list.array_size(); ++i) {
    const Reader item = node_list.at(i);
    Node node;
    if (i == 0) {
      item.allow_only({"id", "x", "y"});
    } else {
      item.allow_only({"id", "x", "y", "window_open", "window_close", "service_time", "quantity"});
      node.window_open = item.at("window_open").number();
      node.window_close = item.at("window_close").number();
      node.service_time = item.at("service_time").number();
      node.quantity = item.at("quantity").number();
    }
    node.id = item.at("id").integer();
    node.x = item.at("x").number();
    node.y = item.at("y").number();
    nodes.push_back(node);
  }
  if (nodes.empty()) root.at("nodes").fail("needs at least the depot");

  if (root.has("depot_window")) {
    const Reader window = root.at("depot_window");
    if (window.array_size() != 2) window.fail("expected [open, close]");
    nodes.front().window_open = window.at(0).number();
    nodes.front().window_close = window.at(1).number();
  }

  std::vector<Request> requests;
  const Reader request_list = root.at("requests");
  for (std::size_t i = 0; i < request_list.array_size(); ++i) {
    const Reader item = request_list.at(i);
    item.allow_only({"supplier", "client"});
    requests.push_back(Request{item.at("supplier").integer(), item.at("client").integer()});
  }

  std::vector<VehicleSpec> fleet;
  const Reader fleet_list = root.at("fleet");
  for (std::size_t i = 0; i < fleet_list.array_size(); ++i) {
    const Reader item = fleet_list.at(i);
    item.allow_only({"capacity", "cost_coefficient", "speed"});
    VehicleSpec spec;
    spec.capacity = item.at("capacity").number();
    if (item.has("cost_coefficient")) spec.cost_coefficient = item.at("cost_coefficient").number();
    if (item.has("speed")) spec.speed = item.at("speed").number();
    fleet.push_back(spec);
  }

  std::vector<Arc> blocked;
  if (root.has("blocked_arcs")) {
    const Reader arcs = root.at("blocked_arcs");
    for (std::size_t i = 0; i < arcs.array_size(); ++i) {
      const Reader pair = arcs.at(i);
      if (pair.array_size() != 2) pair.fail("expected [from, to]");
      blocked.emplace_back(pair.at(0).integer(), pair.at(1).integer());
    }
  }

  try {
    return Instance(std::move(nodes), std::move(requests), std::move(fleet), std::move(blocked));
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ParseError(std::string("invalid instance: ") + e.what());
  }
}

std::string write_native(const Instance& instance) {
  json doc;
  json nodes = json::array();
  for (const Node& node : instance.nodes()) {
    json item;
    item["id"] = node.id;
    item["x"] = number(node.x);
    item["y"] = number(node.y);
    if (node.id != 0) {
      item["window_open"] = number(node.window_open);
      item["window_close"] = number(node.window_close);
      item["service_time"] = number(node.service_time);
      item["quantity"] = number(node.quantity);
    }
    nodes.push_back(std::move(item));
  }
  doc["nodes"] = std::move(nodes);
  doc["depot_window"] = json::array({number(instance.depot().window_open),
                                     number(instance.depot().window_close)});

  json requests = json::array();
  for (const Request& r : instance.requests()) {
    requests.push_back(json{{"supplier", r.supplier}, {"client", r.client}});
  }
  doc["requests"] = std::move(requests);

  json fleet = json::array();
  for (const VehicleSpec& v : instance.fleet()) {
    fleet.push_back(json{{"capacity", number(v.capacity)},
                         {"cost_coefficient", number(v.cost_coefficient)},
                         {"speed", number(v.speed)}});
  }
  doc["fleet"] = std::move(fleet);

  json arcs = json::array();
  for (const auto& [i, j] : instance.blocked_arcs()) arcs.push_back(json::array({i, j}));
  doc["blocked_arcs"] = std::move(arcs);
  return doc.dump(2) + "\n";
}

std::string write_solution(const RoutedSolution& solution, const Instance& instance,
                           FeasibilityMode mode) {
  json doc;
  json routes = json::array();
  for (std::size_t r = 0; r < solution.routes.size(); ++r) {
    routes.push_back(route_report(solution.routes[r], r, instance));
  }
  doc["routes"] = std::move(routes);
  doc["total_distance"] = number(report_distance(solution, instance));
  doc["fitness"] = number(report_fitness(solution, instance));

  const auto report = check_feasibility(solution, instance, mode);
  doc["mode"] = to_string(mode);
  doc["feasible"] = report.feasible();
  json violations = json::array();
  for (const auto& v : report.violations) {
    violations.push_back(json{{"tag", to_string(v.tag)},
                              {"node", v.node},
                              {"vehicle", v.vehicle},
                              {"magnitude", number(v.magnitude)}});
  }
  doc["violations"] = std::move(violations);
  return doc.dump(2) + "\n";
}

std::string write_solution_summary(const RoutedSolution& solution, const Instance& instance,
                                   FeasibilityMode mode) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  for (std::size_t r = 0; r < solution.routes.size(); ++r) {
    const Route& route = solution.routes[r];
    out << "route " << r << " (vehicle " << route.vehicle << "): 0";
    for (NodeId v : route.visits) out << " -> " << v;
    out << " -> 0\n";
    const bool simulable = route.vehicle >= 0 && route.vehicle < instance.fleet_size() &&
                           std::all_of(route.visits.begin(), route.visits.end(), [&](NodeId v) {
                             return v > 0 && instance.valid_node(v);
                           });
    if (!simulable) {
      out << "  (not simulated: malformed route)\n";
      continue;
    }
    const auto timing = propagate_schedule(route, instance);
    const auto load = load_profile(route, instance);
    out << "  depot  depart 0.00\n";
    const auto& stops = timing.schedule.stops;
    for (std::size_t s = 1; s < stops.size(); ++s) {
      out << "  node " << stops[s].node << "  arrive " << stops[s].arrival << "  start "
          << stops[s].service_start << "  depart " << stops[s].departure << "  wait "
          << stops[s].wait;
      if (s - 1 < load.loads.size()) out << "  load " << load.loads[s - 1];
      out << "\n";
    }
    if (timing.schedule.return_arrival) {
      out << "  depot  arrive " << *timing.schedule.return_arrival << "\n";
    }
  }
  out << "total distance: " << report_distance(solution, instance) << "\n";
  out << "fitness: " << report_fitness(solution, instance) << "\n";
  const auto report = check_feasibility(solution, instance, mode);
  out << "feasible (" << to_string(mode) << "): " << (report.feasible() ? "yes" : "no") << "\n";
  for (const auto& v : report.violations) out << "  " << to_string(v) << "\n";
  return out.str();
}

RoutedSolution parse_solution(std::string_view text) {
  const json doc = parse_json(text);
  const Reader root(doc, "$");
  RoutedSolution solution;
  const Reader routes = root.at("routes");
  for (std::size_t r = 0; r < routes.array_size(); ++r) {
    const Reader item = routes.at(r);
    Route route;
    route.vehicle = item.at("vehicle").integer();
    const Reader visits = item.at("visits");
    for (std::size_t p = 0; p < visits.array_size(); ++p) {
      route.visits.push_back(visits.at(p).integer());
    }
    solution.routes.push_back(std::move(route));
  }
  return solution;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << contents;
  if (!out) throw InputError("write failed for " + path);
}

}  // namespace pdptw::io
