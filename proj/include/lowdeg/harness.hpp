#ifndef LOWDEG_HARNESS_HPP
#define LOWDEG_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lowdeg/bounds.hpp"
#include "lowdeg/generators.hpp"

namespace lowdeg {

// One learner trial. sq_error is exact (Parseval between the sparse target
// and the sparse hypothesis); success is sq_error <= budget. wall_time_ms
// is measured only when timing is requested, so that default report files
// are byte-identical across reruns.
struct ExperimentRecord {
  GenSpec genspec;
  std::string learner;
  std::uint64_t queries_used = 0;
  double sq_error = 0.0;
  double budget = 0.0;
  bool success = false;
  std::uint64_t seed = 0;
  int rank_reached = -1;  // randomized exact learner only
  std::optional<double> wall_time_ms;

  nlohmann::json to_json() const;
};

// Worker count for trial pools: min(hardware, LOWDEG_THREADS when set).
int worker_count();

// Runs fn(0..count-1), possibly in parallel; results must be written to
// per-index slots by the caller. The overload with an explicit worker
// count ignores the environment cap.
void run_trials(int count, const std::function<void(int)>& fn);
void run_trials(int count, const std::function<void(int)>& fn, int workers);

struct LearnArgs {
  int n = 0;
  int d = 0;
  double eps = 0.1;
  double delta = 0.1;
  double m = 1.0;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string learner = "sparse";  // sparse | lmn
  std::string target = "gen:walsh";
  std::string format = "json";  // json | csv
  std::string out;              // empty -> stdout
  std::optional<double> budget;  // success threshold override
  int sparsity = 3;
  int junta_k = 0;
  double junta_eta = 0.0;
  bool timing = false;
};

struct ExactArgs {
  int n = 0;
  int d = 0;
  int target_d = 0;  // generator degree; 0 means d (set higher to exercise
                     // the degree-violation failure path)
  double delta = 0.1;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string mode = "queries";  // queries | random
  double budget_constant = 4.0;
  std::string target = "gen:sparse_poly";
  std::string format = "json";
  std::string out;
  int sparsity = 3;
  bool timing = false;
};

struct PackArgs {
  int n = 0;
  int d = 0;
  double eps = 0.25;
  std::uint64_t seed = 0;
  std::string verify = "formula";  // formula | exhaustive
  std::string format = "json";
  std::string out;
};

struct BoundsArgs {
  BoundParams params;
  std::string profile;  // "" (constants as given) | "plausible"
  std::vector<std::string> kinds;  // empty -> all evaluable
  std::string format = "json";
  std::string out;
};

struct BenchArgs {
  int d = 2;
  double eps = 0.1;
  double delta = 0.1;
  double m = 1.0;
  std::vector<int> n_grid;
  int trials = 200;
  std::uint64_t seed = 0;
  std::uint64_t q_start = 64;  // first doubling rung
  std::string format = "csv";
  std::string out;
};

// Exit code 0 iff the failure fraction over all trials is <= delta.
int cmd_learn(const LearnArgs& args);

// queries mode: asserts the distinct-query count equals q_exact(n,d) and
// sq_error < 1e-18 per trial. random mode: aggregates the success rate
// against 1 - delta. Exit code 0 iff the aggregate passes.
int cmd_exact(const ExactArgs& args);

// Writes a packing certificate; exhaustive verification recomputes all
// pairwise distances on the relevant variables. Exit code 0 on success.
int cmd_pack(const PackArgs& args);

// Prints a (kind, value, constants-profile) table.
int cmd_bounds(const BoundsArgs& args);

// Per grid point: theoretical sample budget and the empirical minimal
// sample count found by doubling search with one bisection refinement.
int cmd_bench_scaling(const BenchArgs& args);

// Resolved experiment target (generated or loaded from file).
struct TargetSource {
  std::string descriptor;
  bool from_file = false;
  SparsePoly file_poly;  // when from_file

  // Target for trial i (file targets ignore the trial seed).
  Target instantiate(const LearnArgs& args, std::uint64_t trial_seed) const;
  static TargetSource parse(const std::string& descriptor);
};

// Failure fraction of the thresholded learner at an explicit sample count;
// stops early once more than max_failures have occurred (the verdict is
// already decided). Returns the failure count observed.
int bench_rung_failures(int n, int d, double eps, double delta, double m,
                        std::uint64_t sample_count, int trials,
                        std::uint64_t seed, int max_failures);

// One grid point of the scaling search: theory budget plus the doubling /
// single-bisection empirical minimum. q_empirical is 0 when no rung within
// 4x the theory budget passed.
struct BenchPoint {
  int n = 0;
  std::uint64_t q_theory = 0;
  std::uint64_t q_empirical = 0;
  std::uint64_t resolution = 0;
};
BenchPoint bench_search_point(const BenchArgs& args, int n);

}  // namespace lowdeg

#endif  // LOWDEG_HARNESS_HPP
