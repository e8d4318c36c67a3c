#include "lowdeg/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "lowdeg/combinatorics.hpp"
#include "lowdeg/exact_learners.hpp"
#include "lowdeg/packing.hpp"
#include "lowdeg/random_learners.hpp"
#include "spectrum_scan.hpp"

namespace lowdeg {

namespace {

using nlohmann::json;

// Embedded in every report so a record can be tied to the code that
// produced it.
constexpr const char* kVersion = "lowdeg 1.0.0";

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

// Fixed formatting for CSV floats: shortest round-trip form, locale-free
// (same convention the JSON writer uses).
std::string fmt_double(double v) {
  char buf[40];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

std::string csv_timing(const std::optional<double>& wall_time_ms) {
  return wall_time_ms ? fmt_double(*wall_time_ms) : std::string();
}

QueryOracle oracle_for(const SparsePoly& poly, QueryAccounting accounting) {
  return QueryOracle(
      poly.n(), [poly](const CubePoint& x) { return poly.evaluate(x); },
      accounting);
}

json records_json(const std::vector<ExperimentRecord>& records) {
  json arr = json::array();
  for (const auto& r : records) arr.push_back(r.to_json());
  return arr;
}

}  // namespace

json ExperimentRecord::to_json() const {
  json j{{"genspec", genspec.to_json()},
         {"learner", learner},
         {"queries_used", queries_used},
         {"sq_error", sq_error},
         {"budget", budget},
         {"success", success},
         {"seed", seed},
         {"wall_time_ms", wall_time_ms ? json(*wall_time_ms) : json(nullptr)}};
  if (rank_reached >= 0) j["rank_reached"] = rank_reached;
  return j;
}

int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("LOWDEG_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < hw)
      hw = static_cast<unsigned>(cap);
  }
  return static_cast<int>(hw);
}

void run_trials(int count, const std::function<void(int)>& fn) {
  run_trials(count, fn, worker_count());
}

void run_trials(int count, const std::function<void(int)>& fn, int workers) {
  workers = std::min(count, workers);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);  // drain remaining work
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

TargetSource TargetSource::parse(const std::string& descriptor) {
  TargetSource src;
  src.descriptor = descriptor;
  if (descriptor.rfind("file:", 0) == 0) {
    src.from_file = true;
    const std::string path = descriptor.substr(5);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read target file: " + path);
    json j = json::parse(in);
    src.file_poly = SparsePoly::from_json(j);
    return src;
  }
  if (descriptor.rfind("gen:", 0) != 0)
    throw std::invalid_argument("target must be gen:<kind> or file:<path>");
  const std::string kind = descriptor.substr(4);
  if (kind != "walsh" && kind != "tree" && kind != "sparse_poly" &&
      kind != "junta")
    throw std::invalid_argument("unknown generator kind: " + kind);
  return src;
}

Target TargetSource::instantiate(const LearnArgs& args,
                                 std::uint64_t trial_seed) const {
  if (from_file) {
    Target t;
    t.spec.kind = "file";
    t.spec.n = file_poly.n();
    t.spec.d = file_poly.degree();
    t.spec.seed = trial_seed;
    t.poly = file_poly;
    return t;
  }
  GenSpec spec;
  spec.kind = descriptor.substr(4);
  spec.n = args.n;
  spec.d = args.d;
  spec.sparsity = args.sparsity;
  spec.junta_k = args.junta_k;
  spec.junta_eta = args.junta_eta;
  spec.seed = trial_seed;
  return generate(spec);
}

int cmd_learn(const LearnArgs& args) {
  if (args.trials < 1) throw std::invalid_argument("learn: trials >= 1");
  if (args.learner != "sparse" && args.learner != "lmn")
    throw std::invalid_argument("learn: learner must be sparse or lmn");
  const TargetSource source = TargetSource::parse(args.target);

  double success_budget = args.eps;
  if (!source.from_file && source.descriptor == "gen:junta")
    success_budget = 2.0 * args.junta_eta + args.eps;
  if (args.budget) success_budget = *args.budget;

  std::vector<ExperimentRecord> records(args.trials);
  run_trials(args.trials, [&](int i) {
    const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(i);
    const Target target = source.instantiate(args, seed);
    QueryOracle oracle = oracle_for(target.poly, QueryAccounting::kPerCall);

    const double t0 = args.timing ? now_ms() : 0.0;
    LearnReport report;
    if (args.learner == "sparse") {
      ThresholdConfig cfg;
      cfg.n = args.n;
      cfg.d = args.d;
      cfg.m = args.m;
      cfg.eps = args.eps;
      cfg.delta = args.delta;
      report = learn_sparse(oracle, cfg, seed);
    } else {
      report = learn_lowdegree_lmn(oracle, args.n, args.d, args.eps,
                                   args.delta, seed);
    }

    ExperimentRecord rec;
    rec.genspec = target.spec;
    rec.learner = args.learner;
    rec.queries_used = oracle.queries();
    rec.sq_error = (report.hypothesis - target.poly).parseval_mass();
    rec.budget = success_budget;
    rec.success = rec.sq_error <= success_budget;
    rec.seed = seed;
    if (args.timing) rec.wall_time_ms = now_ms() - t0;
    records[i] = std::move(rec);
  });

  int failures = 0;
  double query_total = 0.0;
  for (const auto& r : records) {
    if (!r.success) ++failures;
    query_total += static_cast<double>(r.queries_used);
  }
  const double failure_fraction =
      static_cast<double>(failures) / static_cast<double>(args.trials);
  const bool pass = failure_fraction <= args.delta;

  if (args.format == "json") {
    json out{{"command", "learn"},
             {"version", kVersion},
             {"config",
              {{"n", args.n},
               {"d", args.d},
               {"eps", args.eps},
               {"delta", args.delta},
               {"m", args.m},
               {"learner", args.learner},
               {"target", args.target},
               {"trials", args.trials},
               {"seed", args.seed},
               {"success_budget", success_budget}}},
             {"records", records_json(records)},
             {"aggregate",
              {{"failures", failures},
               {"failure_fraction", failure_fraction},
               {"mean_queries", query_total / args.trials},
               {"pass", pass}}}};
    write_output(args.out, out.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "row,seed,learner,target,n,d,queries,sq_error,budget,success,"
           "wall_time_ms\n";
    for (const auto& r : records)
      csv << "trial," << r.seed << ',' << r.learner << ',' << r.genspec.kind
          << ',' << r.genspec.n << ',' << r.genspec.d << ',' << r.queries_used
          << ',' << fmt_double(r.sq_error) << ',' << fmt_double(r.budget)
          << ',' << (r.success ? 1 : 0) << ',' << csv_timing(r.wall_time_ms)
          << '\n';
    csv << "aggregate," << args.seed << ',' << args.learner << ','
        << args.target << ',' << args.n << ',' << args.d << ','
        << fmt_double(query_total / args.trials) << ','
        << fmt_double(failure_fraction) << ',' << fmt_double(args.delta) << ','
        << (pass ? 1 : 0) << ",\n";
    write_output(args.out, csv.str());
  }
  return pass ? 0 : 1;
}

int cmd_exact(const ExactArgs& args) {
  if (args.mode != "queries" && args.mode != "random")
    throw std::invalid_argument("exact: mode must be queries or random");
  if (args.trials < 1) throw std::invalid_argument("exact: trials >= 1");

  LearnArgs target_args;  // reuse the generator plumbing
  target_args.n = args.n;
  target_args.d = args.target_d > 0 ? args.target_d : args.d;
  target_args.sparsity = args.sparsity;
  const TargetSource source = TargetSource::parse(args.target);

  const std::uint64_t expected_queries = q_exact(args.n, args.d);
  const std::uint64_t budget =
      args.mode == "random"
          ? exact_random_budget(args.n, args.d, args.delta, args.budget_constant)
          : 0;

  std::vector<ExperimentRecord> records(args.trials);
  run_trials(args.trials, [&](int i) {
    const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(i);
    const Target target = source.instantiate(target_args, seed);

    ExperimentRecord rec;
    rec.genspec = target.spec;
    rec.seed = seed;
    const double t0 = args.timing ? now_ms() : 0.0;
    if (args.mode == "queries") {
      rec.learner = "exact_queries";
      QueryOracle oracle =
          oracle_for(target.poly, QueryAccounting::kPerDistinctPoint);
      rec.budget = 1e-18;
      try {
        const SparsePoly h = exact_learn_queries(oracle, args.n, args.d);
        // A degree-violating target surfaces here: the learner returns the
        // unique low-degree interpolant of the ball values, which then
        // fails the exact-match gate against the known target.
        rec.sq_error = (h - target.poly).parseval_mass();
        rec.queries_used = oracle.queries();
        rec.success =
            rec.queries_used == expected_queries && rec.sq_error < rec.budget;
      } catch (const DegreeViolation&) {
        rec.queries_used = oracle.queries();
        rec.sq_error = std::numeric_limits<double>::infinity();
        rec.success = false;
      }
    } else {
      rec.learner = "exact_random";
      QueryOracle oracle = oracle_for(target.poly, QueryAccounting::kPerCall);
      const ExactRandomOutcome outcome = exact_learn_random(
          oracle, args.n, args.d, args.delta, seed, budget);
      rec.queries_used = outcome.queries_used;
      rec.rank_reached = outcome.rank_reached;
      rec.budget = 1e-18;
      if (outcome.ok()) {
        rec.sq_error = (*outcome.poly - target.poly).parseval_mass();
        rec.success = rec.sq_error < rec.budget;
      } else {
        rec.sq_error = std::numeric_limits<double>::infinity();
        rec.success = false;
      }
    }
    if (args.timing) rec.wall_time_ms = now_ms() - t0;
    records[i] = std::move(rec);
  });

  int successes = 0;
  for (const auto& r : records) successes += r.success ? 1 : 0;
  const double success_rate =
      static_cast<double>(successes) / static_cast<double>(args.trials);
  const bool pass = args.mode == "queries"
                        ? successes == args.trials
                        : success_rate >= 1.0 - args.delta;

  json aggregate{{"successes", successes},
                 {"success_rate", success_rate},
                 {"pass", pass}};
  if (args.mode == "random") {
    aggregate["budget"] = budget;
    aggregate["failure_bound_at_budget"] =
        exact_random_failure_bound(budget, expected_queries, args.d);
  } else {
    aggregate["expected_queries"] = expected_queries;
  }

  if (args.format == "json") {
    json out{{"command", "exact"},
             {"version", kVersion},
             {"config",
              {{"n", args.n},
               {"d", args.d},
               {"delta", args.delta},
               {"mode", args.mode},
               {"budget_constant", args.budget_constant},
               {"target", args.target},
               {"trials", args.trials},
               {"seed", args.seed}}},
             {"records", records_json(records)},
             {"aggregate", aggregate}};
    write_output(args.out, out.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "row,seed,learner,target,n,d,queries,rank_reached,sq_error,success,"
           "wall_time_ms\n";
    for (const auto& r : records) {
      csv << "trial," << r.seed << ',' << r.learner << ',' << r.genspec.kind
          << ',' << r.genspec.n << ',' << r.genspec.d << ',' << r.queries_used
          << ',';
      if (r.rank_reached >= 0) csv << r.rank_reached;
      csv << ',' << fmt_double(r.sq_error) << ',' << (r.success ? 1 : 0)
          << ',' << csv_timing(r.wall_time_ms) << '\n';
    }
    csv << "aggregate," << args.seed << ',' << args.mode << ',' << args.target
        << ',' << args.n << ',' << args.d << ',' << expected_queries << ",,"
        << fmt_double(success_rate) << ',' << (pass ? 1 : 0) << ",\n";
    write_output(args.out, csv.str());
  }
  return pass ? 0 : 1;
}

int cmd_pack(const PackArgs& args) {
  if (args.verify != "formula" && args.verify != "exhaustive")
    throw std::invalid_argument("pack: verify must be formula or exhaustive");
  const PackingCertificate cert =
      packing_family(args.n, args.d, args.eps, args.seed);

  bool verified = true;
  double max_formula_gap = 0.0;
  if (args.verify == "exhaustive") {
    // Recompute every pairwise distance from the actual tree functions,
    // expanded on their relevant variables.
    std::vector<SparsePoly> funcs;
    funcs.reserve(cert.family.members.size());
    for (const auto& sigma : cert.family.members)
      funcs.push_back(sigma_tree(sigma, args.d, args.n).spectrum(args.n));
    for (std::size_t i = 0; i < funcs.size(); ++i)
      for (std::size_t j = i + 1; j < funcs.size(); ++j) {
        const double exact = (funcs[i] - funcs[j]).parseval_mass();
        const double closed = tree_pair_sq_distance(cert.family.members[i],
                                                    cert.family.members[j],
                                                    args.d);
        max_formula_gap = std::max(max_formula_gap, std::abs(exact - closed));
        if (std::abs(exact - closed) > 1e-12) verified = false;
      }
  }

  json out = cert.to_json();
  out["version"] = kVersion;
  out["verify"] = args.verify;
  out["verified"] = verified;
  if (args.verify == "exhaustive") out["max_formula_gap"] = max_formula_gap;

  if (args.format == "json") {
    write_output(args.out, out.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "n,d,eps,seed,size,size_bound,min_sq_distance,verify,verified\n"
        << args.n << ',' << args.d << ',' << fmt_double(args.eps) << ','
        << args.seed << ',' << cert.family.members.size() << ','
        << cert.size_bound << ',' << fmt_double(cert.min_sq_distance) << ','
        << args.verify << ',' << (verified ? 1 : 0) << '\n';
    write_output(args.out, csv.str());
  }
  return verified ? 0 : 1;
}

int cmd_bounds(const BoundsArgs& args) {
  BoundParams params = args.params;
  if (args.profile == "plausible") {
    // Non-normative profile: every universal constant 1, B_d the best known
    // shape with its constant set to 1.
    for (const char* name : {"C_ei", "C_robust", "C_robust_boolean",
                             "C_circuits", "C_dfko", "C_exact_rand"})
      params.constants.emplace(name, 1.0);
    if (params.bh_const < 1.0 && params.d >= 1)
      params.bh_const = std::exp(
          std::sqrt(params.d * std::log(std::max(2.0, double(params.d)))));
  } else if (!args.profile.empty()) {
    throw std::invalid_argument("bounds: unknown profile " + args.profile);
  }

  std::vector<std::string> kinds = args.kinds;
  const bool all = kinds.empty();
  if (all)
    kinds = {"lmn",    "ei",       "ei2",           "thresholded",
             "junta",  "boolean",  "robust",        "robust_boolean",
             "circuits", "dfko_remark", "exact_rand"};

  const std::string profile_label =
      args.profile.empty() ? "custom" : args.profile;
  std::vector<std::pair<std::string, double>> rows;
  for (const auto& kind : kinds) {
    try {
      rows.emplace_back(kind, q_upper(kind, params));
    } catch (const std::exception&) {
      if (!all) throw;  // explicit request: surface the error
    }
  }
  try {
    rows.emplace_back("lower_det", q_lower(params, false));
    rows.emplace_back("lower_rand", q_lower(params, true));
  } catch (const std::exception&) {
    if (!all) throw;
  }
  try {
    rows.emplace_back("exact_det",
                      static_cast<double>(q_exact(params.n, params.d)));
  } catch (const std::exception&) {
  }

  if (args.format == "json") {
    json arr = json::array();
    for (const auto& [kind, value] : rows)
      arr.push_back(
          {{"kind", kind}, {"value", value}, {"profile", profile_label}});
    json out{{"command", "bounds"},
             {"version", kVersion},
             {"profile", profile_label},
             {"n", params.n},
             {"d", params.d},
             {"rows", arr}};
    write_output(args.out, out.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "kind,value,profile\n";
    for (const auto& [kind, value] : rows)
      csv << kind << ',' << fmt_double(value) << ',' << profile_label << '\n';
    write_output(args.out, csv.str());
  }
  return 0;
}

int bench_rung_failures(int n, int d, double eps, double delta, double m,
                        std::uint64_t sample_count, int trials,
                        std::uint64_t seed, int max_failures) {
  ThresholdConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.m = m;
  cfg.eps = eps;
  cfg.delta = delta;
  const double b = cfg.b();
  // Once the selection exceeds this cap, ||h|| alone exceeds 1 + sqrt(eps),
  // so ||h - f||^2 > eps for every target with ||f||_2 <= 1 and the trial
  // is a certain failure; stopping the scan there changes no verdict but
  // keeps low-sample rungs from materializing millions of noise survivors.
  const double sqrt_eps = std::sqrt(eps);
  const std::size_t cap = static_cast<std::size_t>(
      std::ceil((1.0 + sqrt_eps) * (1.0 + sqrt_eps) / (4.0 * b * b))) + 1;

  std::atomic<int> failures{0};
  const int workers = std::min(trials, worker_count());
  // Fixed-size chunks keep the early-stop decision independent of the
  // worker count; the verdict (failures > max_failures) is monotone.
  const int chunk = std::max(workers, 8);
  for (int start = 0; start < trials && failures.load() <= max_failures;
       start += chunk) {
    const int end = std::min(trials, start + chunk);
    run_trials(end - start, [&](int offset) {
      const int i = start + offset;
      const std::uint64_t trial_seed = seed + static_cast<std::uint64_t>(i);
      const SparsePoly target = random_walsh(n, d, trial_seed);

      // Same sample sequence and selection rule as the learner; the error
      // is computed straight from the survivors instead of materializing a
      // hypothesis polynomial.
      const auto samples = draw_samples(n, sample_count, trial_seed);
      std::vector<double> values;
      values.reserve(samples.size());
      for (const auto& x : samples) values.push_back(target.evaluate(x));
      const auto scan =
          internal::scan_select(n, d, samples, values, 2.0 * b, cap);
      bool failed = scan.overflow;
      if (!failed) {
        double sq_error = 0.0;
        double selected_target_mass = 0.0;
        for (const auto& [s, alpha] : scan.survivors) {
          const double truth = target.coeff(s);
          sq_error += (alpha - truth) * (alpha - truth);
          selected_target_mass += truth * truth;
        }
        sq_error += target.parseval_mass() - selected_target_mass;
        failed = sq_error > eps;
      }
      if (failed) failures.fetch_add(1);
    });
  }
  return failures.load();
}

BenchPoint bench_search_point(const BenchArgs& args, int n) {
  ThresholdConfig cfg;
  cfg.n = n;
  cfg.d = args.d;
  cfg.m = args.m;
  cfg.eps = args.eps;
  cfg.delta = args.delta;
  BenchPoint point;
  point.n = n;
  point.q_theory = required_samples(cfg.b(), n, args.d, args.delta);

  const int max_failures =
      static_cast<int>(std::floor(args.delta * args.trials));
  const auto rung_passes = [&](std::uint64_t q) {
    return bench_rung_failures(n, args.d, args.eps, args.delta, args.m, q,
                               args.trials, args.seed,
                               max_failures) <= max_failures;
  };

  // Doubling ladder, then one bisection refinement.
  const std::uint64_t cap = 4 * point.q_theory;
  std::uint64_t q_lo = 0, q_hi = 0;
  for (std::uint64_t q = std::max<std::uint64_t>(1, args.q_start); q <= cap;
       q *= 2) {
    if (rung_passes(q)) {
      q_hi = q;
      break;
    }
    q_lo = q;
  }
  if (q_hi != 0) {
    point.q_empirical = q_hi;
    point.resolution = q_hi - q_lo;
    if (q_lo != 0) {
      const std::uint64_t mid = (q_lo + q_hi) / 2;
      if (mid > q_lo && mid < q_hi) {
        if (rung_passes(mid)) point.q_empirical = mid;
        point.resolution = q_hi - mid;
      }
    }
  }
  return point;
}

int cmd_bench_scaling(const BenchArgs& args) {
  if (args.n_grid.empty()) throw std::invalid_argument("bench: empty n grid");
  if (args.trials < 1) throw std::invalid_argument("bench: trials >= 1");

  std::vector<BenchPoint> rows;
  bool all_ok = true;
  for (int n : args.n_grid) {
    rows.push_back(bench_search_point(args, n));
    if (rows.back().q_empirical == 0) all_ok = false;
  }

  if (args.format == "json") {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back({{"n", r.n},
                     {"ln_n", std::log(static_cast<double>(r.n))},
                     {"q_theory", r.q_theory},
                     {"q_empirical", r.q_empirical},
                     {"search_resolution", r.resolution}});
    json out{{"command", "bench"},
             {"version", kVersion},
             {"config",
              {{"d", args.d},
               {"eps", args.eps},
               {"delta", args.delta},
               {"m", args.m},
               {"trials", args.trials},
               {"seed", args.seed},
               {"q_start", args.q_start}}},
             {"rows", arr}};
    write_output(args.out, out.dump(2) + "\n");
  } else {
    std::ostringstream csv;
    csv << "n,ln_n,q_theory,q_empirical,search_resolution\n";
    for (const auto& r : rows)
      csv << r.n << ',' << fmt_double(std::log(static_cast<double>(r.n)))
          << ',' << r.q_theory << ',' << r.q_empirical << ',' << r.resolution
          << '\n';
    write_output(args.out, csv.str());
  }
  return all_ok ? 0 : 1;
}

}  // namespace lowdeg
