#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "pdptw/ga.hpp"
#include "support/fixtures.hpp"

using namespace pdptw;
using pdptw::testing::make_node;

namespace {

// Two heavy requests that overflow a 60-unit vehicle when both suppliers
// are loaded first.
Instance heavy_pair() {
  std::vector<Node> nodes{make_node(0, 0, 0, 0), make_node(1, 3, 4, 40), make_node(2, 6, 8, 40),
                          make_node(3, 6, 4, -40), make_node(4, 3, 8, -40)};
  return Instance(nodes, {Request{1, 3}, Request{2, 4}}, {VehicleSpec{60, 1, 1}});
}

VehicleChromosome random_counts(std::mt19937_64& rng, int n_prime, int slots, int max_positive) {
  std::vector<int> counts(static_cast<std::size_t>(slots), 0);
  const int positives = std::uniform_int_distribution<int>(1, std::min(max_positive, n_prime))(rng);
  std::vector<int> idx(static_cast<std::size_t>(slots));
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  int left = n_prime;
  for (int p = 0; p < positives; ++p) {
    const int remaining_slots = positives - p - 1;
    const int take = p + 1 == positives
                         ? left
                         : std::uniform_int_distribution<int>(1, left - remaining_slots)(rng);
    counts[static_cast<std::size_t>(idx[static_cast<std::size_t>(p)])] = take;
    left -= take;
  }
  return VehicleChromosome{counts};
}

}  // namespace

TEST_CASE("GaParams validation") {
  GaParams p;
  CHECK_NOTHROW(p.validate());
  p.population_size = 0;
  CHECK_THROWS_AS(p.validate(), InputError);
  p = GaParams{};
  p.crossover_rate = 1.5;
  CHECK_THROWS_AS(p.validate(), InputError);
  p = GaParams{};
  p.mutation_rate = -0.1;
  CHECK_THROWS_AS(p.validate(), InputError);
  p = GaParams{};
  p.generations = 0;
  CHECK_THROWS_AS(p.validate(), InputError);
  p = GaParams{};
  p.infeasibility_penalty = -1.0;
  CHECK_THROWS_AS(p.validate(), InputError);
}

TEST_CASE("penalized_fitness adds the weighted violation magnitude") {
  const Instance inst = heavy_pair();
  GaParams params;
  params.infeasibility_penalty = 10.0;
  const RoutedSolution overloaded{{Route{0, {1, 2, 3, 4}}}};
  const auto report = check_feasibility(overloaded, inst);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].tag == ConstraintTag::Load);
  CHECK(report.violations[0].magnitude == doctest::Approx(20.0));
  const double plain = solution_distance(overloaded, inst);
  CHECK(penalized_fitness(overloaded, inst, params) == doctest::Approx(plain + 200.0));

  const RoutedSolution fine{{Route{0, {1, 3, 2, 4}}}};
  CHECK(penalized_fitness(fine, inst, params) == doctest::Approx(fitness(fine, inst)));

  GaParams defaults;
  CHECK(defaults.penalty_for(inst) == doctest::Approx(10.0 * inst.max_finite_distance()));
}

TEST_CASE("PairEvaluator matches penalized_fitness on hand cases") {
  const Instance inst = heavy_pair();
  const PairEvaluator eval(inst, FeasibilityMode::PaperLiteral, 10.0);
  const std::vector<NodeId> genes{1, 2, 3, 4};
  const std::vector<int> counts{4, 0};
  const auto s = eval(genes, counts);
  CHECK_FALSE(s.feasible);
  GaParams params;
  params.infeasibility_penalty = 10.0;
  CHECK(s.penalized ==
        doctest::Approx(penalized_fitness(decode({genes}, {counts}), inst, params)));
}

TEST_CASE("property: PairEvaluator equals penalized_fitness(decode) in both modes") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 600; ++trial) {
    const int n_prime = 2 * std::uniform_int_distribution<int>(1, 6)(rng);
    const int k = std::uniform_int_distribution<int>(1, 4)(rng);
    const Instance inst = pdptw::testing::random_instance(rng, n_prime, k);
    const int slots = vehicle_slots(inst);

    NodeChromosome nodes;
    if (trial % 3 == 0) {
      nodes.genes.resize(static_cast<std::size_t>(n_prime));
      std::iota(nodes.genes.begin(), nodes.genes.end(), 1);
      std::shuffle(nodes.genes.begin(), nodes.genes.end(), rng);
    } else {
      nodes = random_node_chromosome(inst, rng);
    }
    // Occasionally more non-empty slots than vehicles.
    const int max_positive = trial % 5 == 0 ? slots : std::min(slots, k);
    const auto vehicles = random_counts(rng, n_prime, slots, max_positive);

    for (auto mode : {FeasibilityMode::PaperLiteral, FeasibilityMode::StrictPairing}) {
      GaParams params;
      params.mode = mode;
      const PairEvaluator eval(inst, mode, params.penalty_for(inst));
      const auto score = eval(nodes.genes, vehicles.counts);
      const auto solution = decode(nodes, vehicles);
      const double expected = penalized_fitness(solution, inst, params);
      const bool feasible = check_feasibility(solution, inst, mode).feasible();
      INFO("trial " << trial << " mode " << to_string(mode));
      REQUIRE(score.feasible == feasible);
      REQUIRE(score.penalized == doctest::Approx(expected).epsilon(1e-9));
      if (feasible) REQUIRE(score.fitness == doctest::Approx(fitness(solution, inst)));
    }
  }
}

TEST_CASE("evaluate_generation covers the full product") {
  const Instance inst = pdptw::testing::square_instance();
  GaParams params;
  params.workers = 1;
  const std::vector<NodeChromosome> one_node{NodeChromosome{{1, 2, 3, 4}}};
  const std::vector<VehicleChromosome> one_vehicle{VehicleChromosome{{4, 0}}};
  CHECK(evaluate_generation(one_node, one_vehicle, inst, params).scores.size() == 1);

  // n = 1 after offspring: 2 x 2 = 4 evaluations.
  const std::vector<NodeChromosome> nodes{NodeChromosome{{3, 1, 4, 2}}, NodeChromosome{{1, 2, 3, 4}}};
  const std::vector<VehicleChromosome> vehicles{VehicleChromosome{{1, 3}}, VehicleChromosome{{4, 0}}};
  const auto eval = evaluate_generation(nodes, vehicles, inst, params);
  CHECK(eval.scores.size() == 4);
  CHECK(eval.best_node == 1);
  CHECK(eval.best_vehicle == 1);
  CHECK(eval.best.penalized == doctest::Approx(20.0 + 30.0 * std::sqrt(2.0)));

  // Ties resolve to the lowest row-major index.
  const std::vector<NodeChromosome> twins{nodes[1], nodes[1]};
  const std::vector<VehicleChromosome> twin_v{vehicles[1], vehicles[1]};
  const auto tie = evaluate_generation(twins, twin_v, inst, params);
  CHECK(tie.best_node == 0);
  CHECK(tie.best_vehicle == 0);
}

TEST_CASE("evaluate_generation is independent of the worker count") {
  std::mt19937_64 rng(5);
  const Instance inst = pdptw::testing::random_instance(rng, 12, 3);
  Rng draw(6);
  std::vector<NodeChromosome> nodes;
  std::vector<VehicleChromosome> vehicles;
  for (int i = 0; i < 17; ++i) nodes.push_back(random_node_chromosome(inst, draw));
  for (int i = 0; i < 13; ++i) vehicles.push_back(random_vehicle_chromosome(inst, draw));
  GaParams one;
  one.workers = 1;
  GaParams many;
  many.workers = 8;
  const auto a = evaluate_generation(nodes, vehicles, inst, one);
  const auto b = evaluate_generation(nodes, vehicles, inst, many);
  REQUIRE(a.scores.size() == b.scores.size());
  for (std::size_t i = 0; i < a.scores.size(); ++i) {
    REQUIRE(a.scores[i].penalized == b.scores[i].penalized);
  }
  CHECK(a.best_node == b.best_node);
  CHECK(a.best_vehicle == b.best_vehicle);
}

TEST_CASE("run_ga solves the single-request instance") {
  const Instance inst = pdptw::testing::single_request(2);
  GaParams params;
  params.population_size = 4;
  params.generations = 5;
  params.seed = 1;
  const auto result = run_ga(inst, params);
  CHECK(result.feasible);
  CHECK(result.best_fitness == doctest::Approx(20.0));
  CHECK(result.best_nodes.genes == std::vector<NodeId>{1, 2});
  CHECK(result.evaluations == 5u * 8u * 8u);
  CHECK(result.history.size() == 5);
}

TEST_CASE("run_ga finds the unique single-vehicle optimum in the first generation") {
  const Instance inst = pdptw::testing::single_request(1);
  GaParams params;
  params.population_size = 2;
  params.generations = 1;
  const auto result = run_ga(inst, params);
  REQUIRE(result.history.size() == 1);
  CHECK(result.history[0].best == doctest::Approx(20.0));
  CHECK(result.feasible);
  CHECK(result.best_solution == RoutedSolution{{Route{0, {1, 2}}}});
}

TEST_CASE("run_ga reaches the square optimum") {
  const Instance inst = pdptw::testing::square_instance();
  GaParams params;
  params.population_size = 10;
  params.generations = 20;
  params.seed = 3;
  const auto result = run_ga(inst, params);
  CHECK(result.feasible);
  CHECK(result.best_fitness == doctest::Approx(20.0 + 30.0 * std::sqrt(2.0)));
  CHECK(check_feasibility(result.best_solution, inst).feasible());
}

TEST_CASE("run_ga is deterministic for a seed and worker-count independent") {
  const Instance inst = io::generate_random(pdptw::testing::small_params(12, 2, 77));
  GaParams params;
  params.population_size = 8;
  params.generations = 6;
  params.seed = 42;
  params.workers = 1;
  const auto a = run_ga(inst, params);
  const auto b = run_ga(inst, params);
  CHECK(a == b);
  params.workers = 8;
  const auto c = run_ga(inst, params);
  CHECK(a == c);
  params.seed = 43;
  params.workers = 1;
  const auto d = run_ga(inst, params);
  CHECK_FALSE(a.history.empty());
  CHECK(d.evaluations == a.evaluations);
}

TEST_CASE("property: best-so-far never regresses with elitism") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    std::mt19937_64 rng(100 + s);
    const Instance inst = pdptw::testing::random_instance(rng, 8, 2);
    GaParams params;
    params.population_size = 6;
    params.generations = 10;
    params.seed = s;
    params.workers = 1;
    const auto result = run_ga(inst, params);
    for (std::size_t g = 1; g < result.history.size(); ++g) {
      REQUIRE(result.history[g].best <= result.history[g - 1].best + 1e-9);
    }
    for (const auto& h : result.history) REQUIRE(h.best <= h.mean + 1e-9);
    if (result.feasible) {
      REQUIRE(check_feasibility(result.best_solution, inst).feasible());
      REQUIRE(result.best_fitness == doctest::Approx(fitness(result.best_solution, inst)));
    }
    // The reported pair decodes to the reported solution.
    REQUIRE(decode(result.best_nodes, result.best_vehicles) == result.best_solution);
  }
}

TEST_CASE("run_ga accepts a population of one") {
  const Instance inst = pdptw::testing::square_instance();
  GaParams params;
  params.population_size = 1;
  params.generations = 3;
  params.elitism = 1;
  const auto result = run_ga(inst, params);
  CHECK(result.evaluations == 3u * 4u);
}
