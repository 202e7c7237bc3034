#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "pdptw/model.hpp"

namespace pdptw::io {

/// Malformed document. The message names the line or the field path.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

/// Native JSON instance (.pdptw.json). Top-level keys: nodes, requests,
/// fleet, blocked_arcs, depot_window. Unknown keys are rejected.
Instance parse_native(std::string_view text);
/// Canonical form: sorted keys, numbers rounded to 6 fractional digits.
std::string write_native(const Instance& instance);

/// Li & Lim style text: header `K Q speed`, then one row per node
/// `id x y demand earliest latest service pickup-sibling delivery-sibling`.
Instance parse_li_lim(std::string_view text);

struct GeneratorParams {
  int n_prime = 20;
  int k = 2;
  double area = 100.0;
  double capacity = 60.0;
  std::pair<double, double> window_width_range{60.0, 240.0};
  std::pair<double, double> service_time_range{1.0, 5.0};
  std::pair<double, double> quantity_range{5.0, 30.0};
  // Depot closing time; 0 leaves the depot window open-ended.
  double horizon = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct GeneratedInstance {
  Instance instance;
  // The tour the windows were widened around; feasible in both modes.
  RoutedSolution witness;
};

GeneratedInstance generate_with_witness(const GeneratorParams& params);
Instance generate_random(const GeneratorParams& params);

/// Machine-readable solution report (.sol.json): per-route visits, stop
/// times, loads and distances, plus totals and the feasibility verdict.
std::string write_solution(const RoutedSolution& solution, const Instance& instance,
                           FeasibilityMode mode = FeasibilityMode::PaperLiteral);
/// Human-readable route listing of the same data.
std::string write_solution_summary(const RoutedSolution& solution, const Instance& instance,
                                   FeasibilityMode mode = FeasibilityMode::PaperLiteral);
/// Reads the routes back from a .sol.json report (derived fields ignored).
RoutedSolution parse_solution(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace pdptw::io
