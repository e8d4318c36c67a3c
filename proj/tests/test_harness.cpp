#include <doctest.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <nlohmann/json.hpp>

#include "lowdeg/harness.hpp"

using namespace lowdeg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("lowdeg_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

}  // namespace

TEST_CASE("cmd_learn writes reproducible reports and aggregates") {
  TempDir dir;
  LearnArgs args;
  args.n = 16;
  args.d = 2;
  args.m = 1.0;
  args.trials = 8;
  args.seed = 5;
  args.target = "gen:walsh";
  args.out = (dir.path / "a.json").string();
  CHECK(cmd_learn(args) == 0);

  const auto j = nlohmann::json::parse(slurp(dir.path / "a.json"));
  CHECK(j.at("records").size() == 8);
  CHECK(j.at("aggregate").at("failure_fraction").get<double>() <= 0.1);
  for (const auto& rec : j.at("records")) {
    CHECK(rec.contains("genspec"));
    CHECK(rec.at("learner") == "sparse");
    CHECK(rec.at("queries_used").is_number_unsigned());
    CHECK(rec.at("sq_error").is_number());
    CHECK(rec.at("success").is_boolean());
    CHECK(rec.at("seed").is_number_unsigned());
    CHECK(rec.at("wall_time_ms").is_null());  // timing off by default
  }

  // Byte-identical rerun.
  args.out = (dir.path / "b.json").string();
  CHECK(cmd_learn(args) == 0);
  CHECK(slurp(dir.path / "a.json") == slurp(dir.path / "b.json"));

  // Seed order in the report is trial order.
  std::uint64_t expect = 5;
  for (const auto& rec : j.at("records"))
    CHECK(rec.at("seed").get<std::uint64_t>() == expect++);
}

TEST_CASE("cmd_learn on a zero-function file target") {
  TempDir dir;
  const auto target_path = dir.path / "zero.json";
  {
    std::ofstream out(target_path);
    out << R"({"n": 8, "coeffs": []})";
  }
  LearnArgs args;
  args.n = 8;
  args.d = 2;
  args.m = 1.0;
  args.trials = 3;
  args.target = "file:" + target_path.string();
  args.format = "csv";
  args.out = (dir.path / "zero.csv").string();
  CHECK(cmd_learn(args) == 0);
  const auto csv = slurp(dir.path / "zero.csv");
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line ==
        "row,seed,learner,target,n,d,queries,sq_error,budget,success,"
        "wall_time_ms");
  int trial_rows = 0;
  while (std::getline(lines, line)) {
    if (line.rfind("trial,", 0) == 0) {
      ++trial_rows;
      // sq_error 0, budget 0.1, success 1
      CHECK(line.find(",0,0.1,1,") != std::string::npos);
    }
  }
  CHECK(trial_rows == 3);
}

TEST_CASE("cmd_exact query mode pins the exact count") {
  TempDir dir;
  ExactArgs args;
  args.n = 5;
  args.d = 2;
  args.trials = 4;
  args.seed = 11;
  args.mode = "queries";
  args.target = "gen:sparse_poly";
  args.out = (dir.path / "exact.json").string();
  CHECK(cmd_exact(args) == 0);
  const auto j = nlohmann::json::parse(slurp(dir.path / "exact.json"));
  for (const auto& rec : j.at("records")) {
    CHECK(rec.at("queries_used") == 16);
    CHECK(rec.at("success") == true);
  }
  CHECK(j.at("aggregate").at("expected_queries") == 16);
}

TEST_CASE("cmd_exact random mode succeeds within budget") {
  TempDir dir;
  ExactArgs args;
  args.n = 6;
  args.d = 2;
  args.delta = 0.1;
  args.trials = 10;
  args.seed = 2;
  args.mode = "random";
  args.target = "gen:tree";
  args.out = (dir.path / "rand.json").string();
  CHECK(cmd_exact(args) == 0);
  const auto j = nlohmann::json::parse(slurp(dir.path / "rand.json"));
  CHECK(j.at("aggregate").at("success_rate").get<double>() >= 0.9);
  CHECK(j.at("aggregate").contains("failure_bound_at_budget"));
  for (const auto& rec : j.at("records"))
    CHECK(rec.at("rank_reached").get<int>() == 22);  // full rank at n=6,d=2
}

TEST_CASE("cmd_exact flags degree-violating targets") {
  TempDir dir;
  ExactArgs args;
  args.n = 8;
  args.d = 1;
  args.target_d = 3;  // generated trees exceed the learner's degree cap
  args.trials = 3;
  args.seed = 4;
  args.mode = "queries";
  args.target = "gen:tree";
  args.out = (dir.path / "viol.json").string();
  CHECK(cmd_exact(args) == 1);
  const auto j = nlohmann::json::parse(slurp(dir.path / "viol.json"));
  int detected = 0;
  for (const auto& rec : j.at("records"))
    if (rec.at("success") == false) ++detected;
  CHECK(detected == 3);
}

TEST_CASE("cmd_pack formula and exhaustive verification agree") {
  TempDir dir;
  PackArgs args;
  args.n = 32;
  args.d = 2;
  args.eps = 0.5;
  args.seed = 7;
  args.verify = "exhaustive";
  args.out = (dir.path / "pack.json").string();
  CHECK(cmd_pack(args) == 0);
  const auto j = nlohmann::json::parse(slurp(dir.path / "pack.json"));
  CHECK(j.at("verified") == true);
  CHECK(j.at("max_formula_gap").get<double>() <= 1e-12);
  CHECK(j.at("min_sq_distance").get<double>() >= 2.0 * 0.5);
  CHECK(j.at("sigmas").size() == j.at("size").get<std::size_t>());
}

TEST_CASE("cmd_bounds emits the table") {
  TempDir dir;
  BoundsArgs args;
  args.params.n = 64;
  args.params.d = 2;
  args.params.eps = 0.1;
  args.params.delta = 0.1;
  args.params.m = 1.0;
  args.params.k = 3;
  args.params.s = 50.0;
  args.params.eta = 0.2;
  args.profile = "plausible";
  args.format = "csv";
  args.out = (dir.path / "bounds.csv").string();
  CHECK(cmd_bounds(args) == 0);
  const auto csv = slurp(dir.path / "bounds.csv");
  CHECK(csv.find("kind,value,profile") == 0);
  CHECK(csv.find("lmn,") != std::string::npos);
  CHECK(csv.find("thresholded,") != std::string::npos);
  CHECK(csv.find("lower_det,") != std::string::npos);
  CHECK(csv.find("exact_det,") != std::string::npos);
  CHECK(csv.find("plausible") != std::string::npos);

  // Explicitly requested kind without its constant must fail loudly.
  BoundsArgs strict;
  strict.params = args.params;
  strict.kinds = {"robust"};
  CHECK_THROWS_AS(cmd_bounds(strict), MissingConstant);
}

TEST_CASE("cmd_bench on a small grid") {
  TempDir dir;
  BenchArgs args;
  args.d = 2;
  args.eps = 0.1;
  args.delta = 0.1;
  args.m = 1.0;
  args.n_grid = {64, 128};
  args.trials = 25;
  args.seed = 3;
  args.q_start = 64;
  args.out = (dir.path / "bench.csv").string();
  CHECK(cmd_bench_scaling(args) == 0);
  const auto csv = slurp(dir.path / "bench.csv");
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "n,ln_n,q_theory,q_empirical,search_resolution");
  std::string row;
  int rows = 0;
  while (std::getline(lines, row)) {
    ++rows;
    std::istringstream fields(row);
    std::string n_str, ln_str, qt_str, qe_str;
    std::getline(fields, n_str, ',');
    std::getline(fields, ln_str, ',');
    std::getline(fields, qt_str, ',');
    std::getline(fields, qe_str, ',');
    CHECK(std::stoull(qe_str) <= std::stoull(qt_str));
    CHECK(std::stoull(qe_str) > 0);
  }
  CHECK(rows == 2);

  // Determinism of the whole search.
  args.out = (dir.path / "bench2.csv").string();
  CHECK(cmd_bench_scaling(args) == 0);
  CHECK(slurp(dir.path / "bench.csv") == slurp(dir.path / "bench2.csv"));
}

TEST_CASE("worker pool respects LOWDEG_THREADS") {
  ::setenv("LOWDEG_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  ::unsetenv("LOWDEG_THREADS");
  CHECK(worker_count() >= 1);
}

TEST_CASE("trial pool covers every index once and surfaces exceptions") {
  std::vector<std::atomic<int>> hits(100);
  run_trials(
      100, [&](int i) { hits[i].fetch_add(1); }, 4);
  for (const auto& h : hits) CHECK(h.load() == 1);

  CHECK_THROWS_AS(run_trials(
                      50,
                      [&](int i) {
                        if (i == 13) throw std::runtime_error("boom");
                      },
                      4),
                  std::runtime_error);
}
