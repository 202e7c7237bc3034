#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pdptw {

using NodeId = int;
using VehicleIndex = int;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised for malformed problem data or out-of-range ids.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node {
  NodeId id = 0;
  double x = 0.0;
  double y = 0.0;
  double window_open = 0.0;
  double window_close = kInfinity;
  double service_time = 0.0;
  // > 0 supplier (pickup), < 0 client (delivery), 0 only at the depot.
  double quantity = 0.0;

  bool operator==(const Node&) const = default;
};

struct Request {
  NodeId supplier = 0;
  NodeId client = 0;

  bool operator==(const Request&) const = default;
};

struct VehicleSpec {
  double capacity = 0.0;
  double cost_coefficient = 1.0;
  double speed = 1.0;

  bool operator==(const VehicleSpec&) const = default;
};

using Arc = std::pair<NodeId, NodeId>;

/// Immutable problem statement. Construction validates every invariant and
/// precomputes the distance matrix, so an Instance can be shared freely
/// between threads.
class Instance {
 public:
  /// Node 0 is the depot; its window is the depot window ([0, inf) unless
  /// given otherwise). Throws InputError on any invariant violation.
  Instance(std::vector<Node> nodes, std::vector<Request> requests,
           std::vector<VehicleSpec> fleet, std::vector<Arc> blocked_arcs = {});

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Request>& requests() const { return requests_; }
  const std::vector<VehicleSpec>& fleet() const { return fleet_; }
  const std::vector<Arc>& blocked_arcs() const { return blocked_arcs_; }

  const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const Node& depot() const { return nodes_.front(); }

  /// N' (number of non-depot nodes).
  int customer_count() const { return static_cast<int>(nodes_.size()) - 1; }
  int fleet_size() const { return static_cast<int>(fleet_.size()); }
  double max_capacity() const { return max_capacity_; }

  bool valid_node(NodeId id) const {
    return id >= 0 && id < static_cast<int>(nodes_.size());
  }
  bool is_supplier(NodeId id) const { return node(id).quantity > 0.0; }
  bool is_client(NodeId id) const { return node(id).quantity < 0.0; }

  /// Index into requests() of the request containing a non-depot node.
  int request_of(NodeId id) const { return request_of_[static_cast<std::size_t>(id)]; }
  /// The other node of the request containing `id`.
  NodeId partner(NodeId id) const;

  /// Unchecked matrix access; blocked arcs report +inf here.
  double arc_length(NodeId i, NodeId j) const {
    return distances_[static_cast<std::size_t>(i) * nodes_.size() + static_cast<std::size_t>(j)];
  }
  bool arc_blocked(NodeId i, NodeId j) const {
    return blocked_[static_cast<std::size_t>(i) * nodes_.size() + static_cast<std::size_t>(j)] != 0;
  }
  /// Largest finite d_ij; used to scale the default infeasibility penalty.
  double max_finite_distance() const { return max_finite_distance_; }

  bool operator==(const Instance& other) const {
    return nodes_ == other.nodes_ && requests_ == other.requests_ && fleet_ == other.fleet_ &&
           blocked_arcs_ == other.blocked_arcs_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Request> requests_;
  std::vector<VehicleSpec> fleet_;
  std::vector<Arc> blocked_arcs_;
  std::vector<int> request_of_;
  std::vector<double> distances_;
  std::vector<std::uint8_t> blocked_;
  double max_capacity_ = 0.0;
  double max_finite_distance_ = 0.0;
};

struct Route {
  VehicleIndex vehicle = 0;
  std::vector<NodeId> visits;  // depot implicit at both ends

  bool operator==(const Route&) const = default;
};

struct RoutedSolution {
  std::vector<Route> routes;

  bool operator==(const RoutedSolution&) const = default;
};

struct Stop {
  NodeId node = 0;
  double arrival = 0.0;
  double service_start = 0.0;
  double departure = 0.0;
  double wait = 0.0;
};

/// stops.front() is the depot start (departure 0). `return_arrival` is set
/// only when the whole route, including the leg home, was simulated.
struct Schedule {
  std::vector<Stop> stops;
  std::optional<double> return_arrival;
};

enum class ConstraintTag { Coverage, Depot, Flow, Load, Precedence, TimeWindow, BlockedArc };

std::string to_string(ConstraintTag tag);

struct Violation {
  ConstraintTag tag = ConstraintTag::Coverage;
  NodeId node = -1;
  VehicleIndex vehicle = -1;
  double magnitude = 0.0;

  bool operator==(const Violation&) const = default;
};

std::string to_string(const Violation& v);

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }
  double total_magnitude() const;
};

enum class FeasibilityMode { PaperLiteral, StrictPairing };

std::string to_string(FeasibilityMode mode);
FeasibilityMode parse_mode(const std::string& text);

/// Outcome of simulating one route in time. On failure the schedule holds
/// the stops reached before the failing node and `violation` says why.
struct ScheduleResult {
  Schedule schedule;
  std::optional<Violation> violation;

  bool feasible() const { return !violation.has_value(); }
};

struct LoadResult {
  std::vector<double> loads;  // load after departing each visited node
  std::optional<Violation> violation;

  bool feasible() const { return !violation.has_value(); }
};

/// Euclidean distance, or nullopt when the arc is blocked.
std::optional<double> distance(const Instance& instance, NodeId i, NodeId j);
std::optional<double> travel_time(const Instance& instance, VehicleIndex k, NodeId i, NodeId j);

ScheduleResult propagate_schedule(const Route& route, const Instance& instance);
LoadResult load_profile(const Route& route, const Instance& instance);

FeasibilityReport check_feasibility(const RoutedSolution& solution, const Instance& instance,
                                    FeasibilityMode mode = FeasibilityMode::PaperLiteral);

/// Depot-to-depot length of one route. Throws InputError on a blocked leg.
double route_distance(const Route& route, const Instance& instance);
double solution_distance(const RoutedSolution& solution, const Instance& instance);
/// Sum over routes of C_k times the route length.
double fitness(const RoutedSolution& solution, const Instance& instance);

/// Like fitness(), but blocked legs and unknown vehicles contribute nothing.
double lenient_fitness(const RoutedSolution& solution, const Instance& instance);

}  // namespace pdptw
