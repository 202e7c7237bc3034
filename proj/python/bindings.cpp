#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "pdptw/ga.hpp"
#include "pdptw/io.hpp"
#include "pdptw/model.hpp"
#include "pdptw/oracle.hpp"

namespace py = pybind11;
using namespace pdptw;

namespace {

template <typename T>
std::string repr_of(const char* name, const T& fields) {
  std::ostringstream out;
  out << name << "(" << fields << ")";
  return out.str();
}

}  // namespace

PYBIND11_MODULE(pdptw, m) {
  m.doc() = "Pickup-and-delivery routing with time windows: model, genetic solver, exact oracle";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<oracle::LimitError>(m, "LimitError", PyExc_RuntimeError);

  py::class_<Node>(m, "Node")
      .def(py::init([](NodeId id, double x, double y, double window_open, double window_close,
                       double service_time, double quantity) {
             return Node{id, x, y, window_open, window_close, service_time, quantity};
           }),
           py::arg("id"), py::arg("x"), py::arg("y"), py::arg("window_open") = 0.0,
           py::arg("window_close") = kInfinity, py::arg("service_time") = 0.0,
           py::arg("quantity") = 0.0)
      .def_readwrite("id", &Node::id)
      .def_readwrite("x", &Node::x)
      .def_readwrite("y", &Node::y)
      .def_readwrite("window_open", &Node::window_open)
      .def_readwrite("window_close", &Node::window_close)
      .def_readwrite("service_time", &Node::service_time)
      .def_readwrite("quantity", &Node::quantity)
      .def("__eq__", [](const Node& a, const Node& b) { return a == b; })
      .def("__repr__", [](const Node& n) {
        std::ostringstream f;
        f << "id=" << n.id << ", x=" << n.x << ", y=" << n.y << ", q=" << n.quantity;
        return repr_of("Node", f.str());
      });

  py::class_<Request>(m, "Request")
      .def(py::init([](NodeId s, NodeId c) { return Request{s, c}; }), py::arg("supplier"),
           py::arg("client"))
      .def_readwrite("supplier", &Request::supplier)
      .def_readwrite("client", &Request::client)
      .def("__eq__", [](const Request& a, const Request& b) { return a == b; });

  py::class_<VehicleSpec>(m, "VehicleSpec")
      .def(py::init([](double q, double c, double s) { return VehicleSpec{q, c, s}; }),
           py::arg("capacity"), py::arg("cost_coefficient") = 1.0, py::arg("speed") = 1.0)
      .def_readwrite("capacity", &VehicleSpec::capacity)
      .def_readwrite("cost_coefficient", &VehicleSpec::cost_coefficient)
      .def_readwrite("speed", &VehicleSpec::speed);

  py::class_<Instance>(m, "Instance")
      .def(py::init<std::vector<Node>, std::vector<Request>, std::vector<VehicleSpec>,
                    std::vector<Arc>>(),
           py::arg("nodes"), py::arg("requests"), py::arg("fleet"),
           py::arg("blocked_arcs") = std::vector<Arc>{})
      .def_property_readonly("nodes", &Instance::nodes)
      .def_property_readonly("requests", &Instance::requests)
      .def_property_readonly("fleet", &Instance::fleet)
      .def_property_readonly("blocked_arcs", &Instance::blocked_arcs)
      .def_property_readonly("customer_count", &Instance::customer_count)
      .def_property_readonly("fleet_size", &Instance::fleet_size)
      .def("distance", [](const Instance& inst, NodeId i, NodeId j) { return distance(inst, i, j); })
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; });

  py::class_<Route>(m, "Route")
      .def(py::init([](VehicleIndex v, std::vector<NodeId> visits) {
             return Route{v, std::move(visits)};
           }),
           py::arg("vehicle"), py::arg("visits"))
      .def_readwrite("vehicle", &Route::vehicle)
      .def_readwrite("visits", &Route::visits)
      .def("__eq__", [](const Route& a, const Route& b) { return a == b; })
      .def("__repr__", [](const Route& r) {
        std::ostringstream f;
        f << "vehicle=" << r.vehicle << ", visits=[";
        for (std::size_t i = 0; i < r.visits.size(); ++i) f << (i ? ", " : "") << r.visits[i];
        f << "]";
        return repr_of("Route", f.str());
      });

  py::class_<RoutedSolution>(m, "RoutedSolution")
      .def(py::init([](std::vector<Route> routes) { return RoutedSolution{std::move(routes)}; }),
           py::arg("routes"))
      .def_readwrite("routes", &RoutedSolution::routes)
      .def("__eq__", [](const RoutedSolution& a, const RoutedSolution& b) { return a == b; });

  py::enum_<ConstraintTag>(m, "ConstraintTag")
      .value("COVERAGE", ConstraintTag::Coverage)
      .value("DEPOT", ConstraintTag::Depot)
      .value("FLOW", ConstraintTag::Flow)
      .value("LOAD", ConstraintTag::Load)
      .value("PRECEDENCE", ConstraintTag::Precedence)
      .value("TIME_WINDOW", ConstraintTag::TimeWindow)
      .value("BLOCKED_ARC", ConstraintTag::BlockedArc);

  py::enum_<FeasibilityMode>(m, "FeasibilityMode")
      .value("PAPER_LITERAL", FeasibilityMode::PaperLiteral)
      .value("STRICT_PAIRING", FeasibilityMode::StrictPairing);

  py::class_<Violation>(m, "Violation")
      .def_readonly("tag", &Violation::tag)
      .def_readonly("node", &Violation::node)
      .def_readonly("vehicle", &Violation::vehicle)
      .def_readonly("magnitude", &Violation::magnitude)
      .def("__repr__", [](const Violation& v) { return to_string(v); });

  py::class_<FeasibilityReport>(m, "FeasibilityReport")
      .def_readonly("violations", &FeasibilityReport::violations)
      .def_property_readonly("feasible", &FeasibilityReport::feasible)
      .def_property_readonly("total_magnitude", &FeasibilityReport::total_magnitude);

  m.def("check_feasibility", &check_feasibility, py::arg("solution"), py::arg("instance"),
        py::arg("mode") = FeasibilityMode::PaperLiteral);
  m.def("fitness", &fitness, py::arg("solution"), py::arg("instance"));
  m.def("solution_distance", &solution_distance, py::arg("solution"), py::arg("instance"));

  // Chromosome operators work on plain lists.
  m.def(
      "repair_precedence",
      [](std::vector<NodeId> genes, const Instance& inst) {
        return repair_precedence(NodeChromosome{std::move(genes)}, inst).genes;
      },
      py::arg("genes"), py::arg("instance"));
  m.def(
      "repair_capacity",
      [](std::vector<NodeId> genes, const Instance& inst) {
        return repair_capacity(NodeChromosome{std::move(genes)}, inst).genes;
      },
      py::arg("genes"), py::arg("instance"));
  m.def(
      "decode",
      [](std::vector<NodeId> genes, std::vector<int> counts) {
        return decode(NodeChromosome{std::move(genes)}, VehicleChromosome{std::move(counts)});
      },
      py::arg("genes"), py::arg("counts"));

  py::class_<GaParams>(m, "GaParams")
      .def(py::init<>())
      .def_readwrite("population_size", &GaParams::population_size)
      .def_readwrite("generations", &GaParams::generations)
      .def_readwrite("crossover_rate", &GaParams::crossover_rate)
      .def_readwrite("mutation_rate", &GaParams::mutation_rate)
      .def_readwrite("elitism", &GaParams::elitism)
      .def_readwrite("seed", &GaParams::seed)
      .def_readwrite("mode", &GaParams::mode)
      .def_readwrite("infeasibility_penalty", &GaParams::infeasibility_penalty)
      .def_readwrite("workers", &GaParams::workers);

  py::class_<GenerationStats>(m, "GenerationStats")
      .def_readonly("best", &GenerationStats::best)
      .def_readonly("mean", &GenerationStats::mean);

  py::class_<GaResult>(m, "GaResult")
      .def_readonly("best_solution", &GaResult::best_solution)
      .def_property_readonly("best_nodes", [](const GaResult& r) { return r.best_nodes.genes; })
      .def_property_readonly("best_vehicles",
                             [](const GaResult& r) { return r.best_vehicles.counts; })
      .def_readonly("best_fitness", &GaResult::best_fitness)
      .def_readonly("best_distance", &GaResult::best_distance)
      .def_readonly("best_penalized", &GaResult::best_penalized)
      .def_readonly("feasible", &GaResult::feasible)
      .def_readonly("history", &GaResult::history)
      .def_readonly("evaluations", &GaResult::evaluations);

  m.def("run_ga", &run_ga, py::arg("instance"), py::arg("params") = GaParams{},
        py::call_guard<py::gil_scoped_release>());

  py::class_<oracle::Result>(m, "OracleResult")
      .def_readonly("optimum", &oracle::Result::optimum)
      .def_readonly("optimal_fitness", &oracle::Result::optimal_fitness)
      .def_readonly("feasible_count", &oracle::Result::feasible_count)
      .def_readonly("explored_count", &oracle::Result::explored_count);

  m.def(
      "enumerate_optimal",
      [](const Instance& inst, FeasibilityMode mode, int max_nodes) {
        oracle::Limits limits;
        limits.max_nodes = max_nodes;
        return oracle::enumerate_optimal(inst, mode, limits);
      },
      py::arg("instance"), py::arg("mode") = FeasibilityMode::PaperLiteral,
      py::arg("max_nodes") = 8, py::call_guard<py::gil_scoped_release>());
  m.def("cross_check", &oracle::cross_check, py::arg("solution"), py::arg("instance"),
        py::arg("mode") = FeasibilityMode::PaperLiteral);

  py::class_<io::GeneratorParams>(m, "GeneratorParams")
      .def(py::init<>())
      .def_readwrite("n_prime", &io::GeneratorParams::n_prime)
      .def_readwrite("k", &io::GeneratorParams::k)
      .def_readwrite("area", &io::GeneratorParams::area)
      .def_readwrite("capacity", &io::GeneratorParams::capacity)
      .def_readwrite("window_width_range", &io::GeneratorParams::window_width_range)
      .def_readwrite("service_time_range", &io::GeneratorParams::service_time_range)
      .def_readwrite("quantity_range", &io::GeneratorParams::quantity_range)
      .def_readwrite("horizon", &io::GeneratorParams::horizon)
      .def_readwrite("seed", &io::GeneratorParams::seed);

  m.def("generate_random", &io::generate_random, py::arg("params"));
  m.def(
      "generate_with_witness",
      [](const io::GeneratorParams& p) {
        auto g = io::generate_with_witness(p);
        return py::make_tuple(std::move(g.instance), std::move(g.witness));
      },
      py::arg("params"));
  m.def("parse_native", &io::parse_native, py::arg("text"));
  m.def("write_native", &io::write_native, py::arg("instance"));
  m.def("parse_li_lim", &io::parse_li_lim, py::arg("text"));
  m.def("write_solution", &io::write_solution, py::arg("solution"), py::arg("instance"),
        py::arg("mode") = FeasibilityMode::PaperLiteral);
  m.def("parse_solution", &io::parse_solution, py::arg("text"));
}
