// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "pdptw/bench.hpp"
#include "pdptw/cli.hpp"
#include "pdptw/ga.hpp"
#include "pdptw/io.hpp"
#include "pdptw/oracle.hpp"
#include "support/fixtures.hpp"

using namespace pdptw;
using Clock = std::chrono::steady_clock;

namespace {

// Relative tolerance for "GA fitness equals oracle optimum".
constexpr double kFitnessTolerance = 1e-6;

// Generations used for the population-size trend; chosen so the 100-run
// sweep stays inside its time allowance on a single core.
constexpr int kTrendGenerations = 30;

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, double limit_s, const std::function<Verdict()>& check) {
  const auto started = Clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - started).count();
  if (limit_s > 0 && seconds > limit_s) {
    v.pass = false;
    v.detail += " (over time limit " + std::to_string(limit_s) + " s)";
  }
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.1f s", seconds);
  std::cout << (v.pass ? "PASS " : "FAIL ") << name << ": " << v.detail << " [" << timing << "]"
            << std::endl;
  if (!v.pass) ++failures;
}

bool close_to(double a, double b) {
  return std::abs(a - b) <= kFitnessTolerance * std::max(1.0, std::abs(b));
}

std::string join(const std::vector<NodeId>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

Verdict oracle_equivalence() {
  const int n_primes[] = {4, 6, 8};
  int matched = 0;
  int beaten = 0;
  int runs = 0;
  std::ostringstream misses;
  for (int i = 0; i < 20; ++i) {
    const int n = n_primes[i % 3];
    const int k = 1 + (i / 3) % 2;
    const Instance inst =
        io::generate_random(pdptw::testing::small_params(n, k, 5000 + static_cast<std::uint64_t>(i)));
    const auto exact = oracle::enumerate_optimal(inst);
    if (!exact.optimal_fitness) return {false, "instance " + std::to_string(i) + " has no feasible solution"};

    GaParams params;
    params.population_size = 100;
    params.generations = 50;
    params.seed = 100 + static_cast<std::uint64_t>(i);
    const auto ga = run_ga(inst, params);
    ++runs;
    if (!ga.feasible) {
      misses << " #" << i << "(infeasible)";
      continue;
    }
    if (ga.best_fitness < *exact.optimal_fitness - kFitnessTolerance * std::max(1.0, *exact.optimal_fitness)) {
      ++beaten;
      misses << " #" << i << "(beats oracle)";
    } else if (close_to(ga.best_fitness, *exact.optimal_fitness)) {
      ++matched;
    } else {
      misses << " #" << i << "(" << ga.best_fitness << " vs " << *exact.optimal_fitness << ")";
    }
  }
  const double rate = static_cast<double>(matched) / runs;
  std::ostringstream detail;
  detail << matched << "/" << runs << " runs hit the optimum (need >= 90%), " << beaten
         << " beat it (need 0)";
  if (!misses.str().empty()) detail << "; misses:" << misses.str();
  return {rate >= 0.9 && beaten == 0, detail.str()};
}

Verdict table_trend() {
  BenchConfig cfg;
  cfg.n_primes = {20};
  cfg.k = 2;
  cfg.populations = {100, 500};
  cfg.instances = 5;
  cfg.seeds = 10;
  cfg.base_seed = 1;
  cfg.ga.generations = kTrendGenerations;
  const auto rows = run_bench(cfg);
  const BenchRow& small = rows.at(0);
  const BenchRow& large = rows.at(1);
  std::ostringstream detail;
  detail.precision(2);
  detail << std::fixed << "mean best penalized fitness n=500: " << large.mean_fitness
         << " vs n=100: " << small.mean_fitness << " (gens=" << kTrendGenerations
         << "); feasible runs " << large.feasible_runs << "/" << large.runs << " vs "
         << small.feasible_runs << "/" << small.runs << "; per instance:";
  for (std::size_t i = 0; i < small.instance_mean_fitness.size(); ++i) {
    detail << " " << large.instance_mean_fitness[i] << "<" << small.instance_mean_fitness[i] << "?";
  }
  return {large.mean_fitness < small.mean_fitness, detail.str()};
}

Verdict repair_regression() {
  const Instance inst = pdptw::testing::figure_fixture();
  const auto prec = repair_precedence(NodeChromosome{{3, 2, 6, 8, 1, 4, 5, 9, 10, 7}}, inst);
  const std::vector<NodeId> prec_expected{3, 8, 2, 6, 5, 1, 4, 7, 9, 10};
  const auto cap = repair_capacity(NodeChromosome{{5, 8, 7, 3, 1, 2, 4, 9, 6, 10}}, inst);
  const std::vector<NodeId> cap_expected{5, 8, 7, 9, 3, 1, 2, 4, 6, 10};
  const bool ok = prec.genes == prec_expected && cap.genes == cap_expected;
  return {ok, "precedence " + join(prec.genes) + ", capacity " + join(cap.genes)};
}

Verdict decode_regression() {
  const auto sol = decode(NodeChromosome{{5, 8, 2, 6, 4, 3, 10, 7, 9, 1}},
                          VehicleChromosome{{6, 4, 0, 0, 0}});
  const bool ok = sol.routes.size() == 2 && sol.routes[0].vehicle == 0 &&
                  sol.routes[1].vehicle == 1 &&
                  sol.routes[0].visits == std::vector<NodeId>{5, 8, 2, 6, 4, 3} &&
                  sol.routes[1].visits == std::vector<NodeId>{10, 7, 9, 1};
  std::string detail;
  for (const auto& r : sol.routes) detail += "V" + std::to_string(r.vehicle + 1) + "=" + join(r.visits) + " ";
  return {ok, detail};
}

Verdict invariant_suite() {
  std::mt19937_64 rng(20240601);
  int disagreements = 0;
  int feasible = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 * static_cast<int>(1 + rng() % 5);
    const int k = static_cast<int>(1 + rng() % 3);
    RoutedSolution sol;
    Instance inst = pdptw::testing::square_instance();
    if (trial % 4 == 0) {
      auto generated = io::generate_with_witness(pdptw::testing::small_params(n, k, rng()));
      inst = generated.instance;
      sol = generated.witness;
    } else {
      inst = pdptw::testing::random_instance(rng, n, k);
      sol = pdptw::testing::random_solution(rng, inst);
    }
    for (auto mode : {FeasibilityMode::PaperLiteral, FeasibilityMode::StrictPairing}) {
      const bool core = check_feasibility(sol, inst, mode).feasible();
      const bool independent = oracle::cross_check(sol, inst, mode).feasible();
      disagreements += core != independent ? 1 : 0;
      feasible += core ? 1 : 0;
    }
  }

  int repair_failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 * static_cast<int>(1 + rng() % 5);
    const Instance inst = pdptw::testing::random_instance(rng, n, 2);
    NodeChromosome c;
    c.genes.resize(static_cast<std::size_t>(n));
    std::iota(c.genes.begin(), c.genes.end(), 1);
    std::shuffle(c.genes.begin(), c.genes.end(), rng);

    // Independent predicate: position of each supplier below its client's.
    std::vector<int> pos(static_cast<std::size_t>(n) + 1);
    auto ordered = [&](const NodeChromosome& x) {
      for (std::size_t p = 0; p < x.genes.size(); ++p) pos[static_cast<std::size_t>(x.genes[p])] = static_cast<int>(p);
      for (const auto& r : inst.requests()) {
        if (pos[static_cast<std::size_t>(r.supplier)] > pos[static_cast<std::size_t>(r.client)]) return false;
      }
      return true;
    };
    if (satisfies_precedence(c, inst) != ordered(c)) ++repair_failures;
    const auto once = repair_precedence(c, inst);
    if (!ordered(once) || !is_valid_permutation(once, inst) || repair_precedence(once, inst) != once) {
      ++repair_failures;
    }
    const auto cap = repair_capacity(once, inst);
    if (!ordered(cap) || !is_valid_permutation(cap, inst) || repair_capacity(cap, inst) != cap) {
      ++repair_failures;
    }
    Rng draw(rng());
    if (!ordered(random_node_chromosome(inst, draw))) ++repair_failures;
  }
  std::ostringstream detail;
  detail << disagreements << " verdict disagreements over 2000 checks (" << feasible
         << " feasible), " << repair_failures << " repair/predicate failures over 1000 chromosomes";
  return {disagreements == 0 && repair_failures == 0 && feasible > 0, detail.str()};
}

Verdict determinism() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("pdptw-acceptance-" + std::to_string(std::random_device{}()));
  std::filesystem::create_directories(dir);
  const auto inst_path = (dir / "i.pdptw.json").string();
  io::write_file(inst_path, io::write_native(io::generate_random(pdptw::testing::small_params(20, 2, 7))));

  auto solve = [&](const std::string& out, const std::string& workers, std::string& stdout_text) {
    std::ostringstream o, e;
    const int status = cli::run({"solve", inst_path, "--seed", "7", "--pop", "30", "--gens", "20",
                                 "--workers", workers, "--format", "machine", "-o", out},
                                o, e);
    stdout_text = o.str();
    return status;
  };
  std::string s1, s2, s3;
  const auto a = (dir / "a.sol.json").string();
  const auto b = (dir / "b.sol.json").string();
  const auto c = (dir / "c.sol.json").string();
  const int st1 = solve(a, "1", s1);
  const int st2 = solve(b, "1", s2);
  const int st3 = solve(c, "8", s3);
  const bool reports_equal = io::read_file(a) == io::read_file(b) && s1 == s2;
  const bool workers_equal = io::read_file(a) == io::read_file(c) && s1 == s3;

  GaParams params;
  params.population_size = 40;
  params.generations = 15;
  params.seed = 7;
  const Instance inst = io::parse_native(io::read_file(inst_path));
  params.workers = 1;
  const auto serial = run_ga(inst, params);
  params.workers = 8;
  const auto parallel = run_ga(inst, params);
  std::filesystem::remove_all(dir);

  const bool statuses = st1 == st2 && st2 == st3 && (st1 == 0 || st1 == 3);
  std::ostringstream detail;
  detail << "seed 7 reports byte-identical: " << (reports_equal ? "yes" : "no")
         << "; workers 1 vs 8 reports: " << (workers_equal ? "same" : "differ")
         << "; GaResult workers 1 vs 8: " << (serial == parallel ? "same" : "differ");
  return {statuses && reports_equal && workers_equal && serial == parallel, detail.str()};
}

Verdict evaluation_count() {
  const Instance inst = io::generate_random(pdptw::testing::small_params(10, 2, 3));
  std::ostringstream detail;
  bool ok = true;
  for (int n : {1, 5, 10}) {
    GaParams params;
    params.population_size = n;
    params.generations = 7;
    params.elitism = 1;
    const auto result = run_ga(inst, params);
    const std::uint64_t expected = 7ull * static_cast<std::uint64_t>(2 * n) * static_cast<std::uint64_t>(2 * n);
    ok = ok && result.evaluations == expected;
    detail << "n=" << n << ": " << result.evaluations << "/" << expected << " ";
  }
  return {ok, detail.str()};
}

Verdict format_round_trips() {
  std::mt19937_64 rng(8);
  bool native_ok = true;
  bool solution_ok = true;
  for (int i = 0; i < 20; ++i) {
    const Instance inst = pdptw::testing::random_instance(rng, 2 + 2 * (i % 10), 1 + i % 3);
    const std::string text = io::write_native(inst);
    const Instance back = io::parse_native(text);
    native_ok = native_ok && back == inst && io::write_native(back) == text;
    const RoutedSolution sol = pdptw::testing::random_solution(rng, inst);
    solution_ok = solution_ok && io::parse_solution(io::write_solution(sol, inst)) == sol;
  }

  using pdptw::testing::make_node;
  std::vector<Node> nodes{make_node(0, 35, 35, 0, 0, 230, 0), make_node(1, 41, 49, 10, 0, 204, 10),
                          make_node(2, 35, 17, -10, 0, 202, 10)};
  const Instance expected(nodes, {Request{1, 2}},
                          std::vector<VehicleSpec>(3, VehicleSpec{200, 1, 1}));
  const Instance parsed =
      io::parse_li_lim(io::read_file(PDPTW_TEST_DATA_DIR "/li_lim_one_request.txt"));
  const bool li_lim_ok = parsed == expected;
  std::ostringstream detail;
  detail << "native instance: " << (native_ok ? "identical" : "MISMATCH")
         << "; solution: " << (solution_ok ? "identical" : "MISMATCH")
         << "; Li & Lim fixture: " << (li_lim_ok ? "expected 1-request instance" : "MISMATCH");
  return {native_ok && solution_ok && li_lim_ok, detail.str()};
}

}  // namespace

int main() {
  report("oracle equivalence", 120, oracle_equivalence);
  report("population trend (N'=20, k=2, n=500 vs n=100)", 300, table_trend);
  report("repair regression", 0, repair_regression);
  report("decode regression", 0, decode_regression);
  report("feasibility invariant suite", 60, invariant_suite);
  report("determinism", 0, determinism);
  report("evaluation count", 0, evaluation_count);
  report("format round trips", 0, format_round_trips);
  std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
            << std::endl;
  return failures == 0 ? 0 : 1;
}
