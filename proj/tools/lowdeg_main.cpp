// Command-line front end: learn / exact / pack / bounds / bench.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lowdeg/harness.hpp"

namespace {

void add_format_out(CLI::App* cmd, std::string& format, std::string& out) {
  cmd->add_option("--format", format, "Output format (json|csv)")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", out, "Output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning and packing experiments for bounded low-degree "
               "functions on the hypercube"};
  app.require_subcommand(1);

  lowdeg::LearnArgs learn;
  auto* learn_cmd = app.add_subcommand(
      "learn", "Run random-example learners against generated or file targets");
  learn_cmd->add_option("--n", learn.n, "Dimension")->required();
  learn_cmd->add_option("--d", learn.d, "Max degree")->required();
  learn_cmd->add_option("--eps", learn.eps, "Accuracy budget");
  learn_cmd->add_option("--delta", learn.delta, "Confidence");
  learn_cmd->add_option("--m", learn.m, "Concentration-family size bound");
  learn_cmd->add_option("--trials", learn.trials, "Independent trials");
  learn_cmd->add_option("--seed", learn.seed, "Base seed; trial i uses seed+i");
  learn_cmd->add_option("--learner", learn.learner, "sparse | lmn")
      ->check(CLI::IsMember({"sparse", "lmn"}));
  learn_cmd->add_option("--target", learn.target,
                        "gen:{walsh|tree|sparse_poly|junta} or file:<path>");
  learn_cmd->add_option("--budget", learn.budget,
                        "Success threshold override on squared error");
  learn_cmd->add_option("--sparsity", learn.sparsity, "Generator sparsity");
  learn_cmd->add_option("--junta-k", learn.junta_k, "Junta arity");
  learn_cmd->add_option("--junta-eta", learn.junta_eta, "Junta eta");
  learn_cmd->add_flag("--timing", learn.timing,
                      "Record wall times (makes reports non-reproducible)");
  add_format_out(learn_cmd, learn.format, learn.out);

  lowdeg::ExactArgs exact;
  auto* exact_cmd =
      app.add_subcommand("exact", "Zero-error learners for degree <= d targets");
  exact_cmd->add_option("--n", exact.n, "Dimension")->required();
  exact_cmd->add_option("--d", exact.d, "Max degree")->required();
  exact_cmd->add_option("--target-d", exact.target_d,
                        "Generator degree (default: --d)");
  exact_cmd->add_option("--delta", exact.delta, "Confidence (random mode)");
  exact_cmd->add_option("--trials", exact.trials, "Independent trials");
  exact_cmd->add_option("--seed", exact.seed, "Base seed");
  exact_cmd->add_option("--mode", exact.mode, "queries | random")
      ->check(CLI::IsMember({"queries", "random"}));
  exact_cmd->add_option("--budget-constant", exact.budget_constant,
                        "Constant C in the random draw budget");
  exact_cmd->add_option("--target", exact.target,
                        "gen:{tree|sparse_poly|walsh} or file:<path>");
  exact_cmd->add_option("--sparsity", exact.sparsity, "Generator sparsity");
  exact_cmd->add_flag("--timing", exact.timing, "Record wall times");
  add_format_out(exact_cmd, exact.format, exact.out);

  lowdeg::PackArgs pack;
  auto* pack_cmd = app.add_subcommand(
      "pack", "Build and verify a separated decision-tree family");
  pack_cmd->add_option("--n", pack.n, "Dimension")->required();
  pack_cmd->add_option("--d", pack.d, "Tree depth")->required();
  pack_cmd->add_option("--eps", pack.eps, "Separation parameter");
  pack_cmd->add_option("--seed", pack.seed, "Seed");
  pack_cmd->add_option("--verify", pack.verify, "formula | exhaustive")
      ->check(CLI::IsMember({"formula", "exhaustive"}));
  add_format_out(pack_cmd, pack.format, pack.out);

  lowdeg::BoundsArgs bounds;
  auto* bounds_cmd =
      app.add_subcommand("bounds", "Evaluate closed-form query bounds");
  bounds_cmd->add_option("--n", bounds.params.n, "Dimension")->required();
  bounds_cmd->add_option("--d", bounds.params.d, "Degree")->required();
  bounds_cmd->add_option("--eps", bounds.params.eps, "Accuracy");
  bounds_cmd->add_option("--delta", bounds.params.delta, "Confidence");
  bounds_cmd->add_option("--eta", bounds.params.eta, "Concentration eta");
  bounds_cmd->add_option("--t", bounds.params.t, "Tail mass t");
  bounds_cmd->add_option("--m", bounds.params.m, "Family size bound");
  bounds_cmd->add_option("--k", bounds.params.k, "Junta arity");
  bounds_cmd->add_option("--s", bounds.params.s, "Circuit size");
  bounds_cmd->add_option("--bh-const", bounds.params.bh_const,
                         "Bohnenblust-Hille constant estimate");
  std::vector<std::string> const_args;
  bounds_cmd->add_option("--const", const_args,
                         "Universal constant, name=value (repeatable)");
  bounds_cmd->add_option("--profile", bounds.profile,
                         "Constants profile (plausible: all universal constants 1; non-normative)");
  bounds_cmd->add_option("--kind", bounds.kinds,
                         "Bound kinds to evaluate (default: all evaluable)");
  add_format_out(bounds_cmd, bounds.format, bounds.out);

  lowdeg::BenchArgs bench;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Sample-count scaling across dimensions (doubling search)");
  bench_cmd->add_option("--d", bench.d, "Max degree");
  bench_cmd->add_option("--eps", bench.eps, "Accuracy budget");
  bench_cmd->add_option("--delta", bench.delta, "Confidence");
  bench_cmd->add_option("--m", bench.m, "Family size bound");
  bench_cmd->add_option("--n-grid", bench.n_grid, "Dimensions to test")
      ->required();
  bench_cmd->add_option("--trials", bench.trials, "Trials per rung");
  bench_cmd->add_option("--seed", bench.seed, "Base seed");
  bench_cmd->add_option("--q-start", bench.q_start, "First doubling rung");
  add_format_out(bench_cmd, bench.format, bench.out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (learn_cmd->parsed()) return lowdeg::cmd_learn(learn);
    if (exact_cmd->parsed()) return lowdeg::cmd_exact(exact);
    if (pack_cmd->parsed()) return lowdeg::cmd_pack(pack);
    if (bounds_cmd->parsed()) {
      for (const auto& kv : const_args) {
        const auto pos = kv.find('=');
        if (pos == std::string::npos)
          throw std::invalid_argument("--const expects name=value");
        bounds.params.constants[kv.substr(0, pos)] =
            std::stod(kv.substr(pos + 1));
      }
      return lowdeg::cmd_bounds(bounds);
    }
    if (bench_cmd->parsed()) return lowdeg::cmd_bench_scaling(bench);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
