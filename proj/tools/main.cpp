#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace sparse_moments::cli;

int main(int argc, char** argv) {
  CLI::App app{"Identify k-coin mixtures from 2k-snapshot histograms"};
  app.require_subcommand(1);

  SampleArgs sample;
  auto* sample_cmd = app.add_subcommand("sample", "Draw a histogram of m-snapshots from a model");
  sample_cmd->add_option("model", sample.model_file, "Model JSON")->required();
  sample_cmd->add_option("-m,--m", sample.m, "Snapshot length (must be 2k)")->required();
  sample_cmd->add_option("-s,--s", sample.s, "Number of snapshots")->required();
  sample_cmd->add_option("--seed", sample.seed, "RNG seed");
  sample_cmd->add_option("-o,--out", sample.out_file, "Histogram JSON to write")->required();

  LearnArgs learn;
  auto* learn_cmd = app.add_subcommand("learn", "Recover a k-coin model from a histogram");
  learn_cmd->add_option("histogram", learn.histogram_file, "Histogram JSON")->required();
  learn_cmd->add_option("--k", learn.k, "Number of coins")->required();
  learn_cmd->add_option("--zeta", learn.zeta, "Separation lower bound")->required();
  learn_cmd->add_option("--wmin", learn.w_min, "Weight lower bound")->required();
  learn_cmd->add_option("--gamma", learn.gamma, "Target accuracy exponent (2^-gamma)")->required();
  learn_cmd->add_option("--delta", learn.delta, "Failure probability")->capture_default_str();
  learn_cmd->add_option("-o,--out", learn.out_file, "LearnReport JSON to write")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Compare a learned model with the truth");
  eval_cmd->add_option("true_model", eval.true_model_file, "True model JSON")->required();
  eval_cmd->add_option("learned_model", eval.learned_model_file, "Learned model JSON")->required();
  eval_cmd->add_flag("--wasserstein-only", eval.wasserstein_only,
                     "Only print the Wasserstein distance (allows different k)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Seeded sweep over k and sample size");
  bench_cmd->add_option("--k-list", bench.k_list, "Model orders")->required()->delimiter(',');
  bench_cmd->add_option("--zeta", bench.zeta, "Separation of generated models")->capture_default_str();
  bench_cmd->add_option("--wmin", bench.w_min, "Minimum weight of generated models")->capture_default_str();
  bench_cmd->add_option("--s-list", bench.s_list, "Sample sizes")->required()->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials, "Trials per (k, s)")->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed, "Master seed")->capture_default_str();
  bench_cmd->add_option("--gamma", bench.gamma, "Accuracy exponent")->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads, "Worker threads")->capture_default_str();
  bench_cmd->add_flag("--omit-timing", bench.omit_timing,
                      "Write learn_time_ns = 0 so output is byte-reproducible");
  bench_cmd->add_option("-o,--out", bench.out_csv, "CSV to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  if (*sample_cmd) return cmd_sample(sample, std::cerr);
  if (*learn_cmd) return cmd_learn(learn, std::cerr);
  if (*eval_cmd) return cmd_eval(eval, std::cout, std::cerr);
  if (*bench_cmd) return cmd_bench(bench, std::cerr);
  return kUsage;
}
