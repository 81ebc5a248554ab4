#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "sparse_moments/io.hpp"

namespace sparse_moments::cli {

double tolerance_floor_from_env() {
  const char* raw = std::getenv(kFloorEnvVar);
  if (raw == nullptr || *raw == '\0') return kDefaultToleranceFloor;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !(value > 0.0) || !std::isfinite(value)) {
    throw_invalid(std::string(kFloorEnvVar) + " must be a positive number, got \"" + raw + "\"");
  }
  return value;
}

std::string status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegreeDeficient:
      return "degree_deficient";
    case ErrorKind::DegenerateNodes:
      return "degenerate_nodes";
    default:
      return "convergence_failure";
  }
}

int cmd_sample(const SampleArgs& args, std::ostream& err) {
  try {
    const auto model = io::model_from_json(io::read_json_file(args.model_file));
    if (args.m != 2 * model.k()) {
      err << "error: snapshot length must satisfy m = 2k (model has k = " << model.k()
          << ", got m = " << args.m << ")\n";
      return kUsage;
    }
    if (args.s == 0) {
      err << "error: sample size s must be >= 1\n";
      return kUsage;
    }
    const auto h = sample_histogram(model, args.m, args.s, CounterRng(args.seed));
    io::write_json_file(args.out_file, io::to_json(h));
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int cmd_learn(const LearnArgs& args, std::ostream& err) {
  LearnConfig cfg;
  std::optional<Histogram> h;
  try {
    h = io::histogram_from_json(io::read_json_file(args.histogram_file));
    cfg.k = args.k;
    cfg.zeta = args.zeta;
    cfg.w_min = args.w_min;
    cfg.gamma = args.gamma;
    cfg.delta = args.delta;
    cfg.tolerance_floor = tolerance_floor_from_env();
    cfg.validate();
    if (h->m() != 2 * cfg.k) {
      err << "error: histogram has m = " << h->m() << " but k = " << cfg.k
          << " requires m = 2k = " << 2 * cfg.k << '\n';
      return kUsage;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    const auto report = learn_coin_mixture(cfg, *h);
    if (report.diagnostics.tolerance_clamped) {
      err << "note: tolerances clamped to floor (eps1 = " << report.diagnostics.eps1
          << ", eps2 = " << report.diagnostics.eps2 << ")\n";
    }
    io::write_json_file(args.out_file, io::report_to_json(report.model, report.diagnostics, "ok"));
    return kOk;
  } catch (const LearnError& e) {
    err << "solver failure: " << e.what() << '\n';
    try {
      io::write_json_file(args.out_file, io::report_to_json(std::nullopt, e.diagnostics(),
                                                            status_for(e.kind()), e.stage(),
                                                            e.what()));
    } catch (const Error& write_error) {
      err << "error: " << write_error.what() << '\n';
      return kUsage;
    }
    return kSolverFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

namespace {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  try {
    const auto truth = io::model_from_json(io::read_json_file(args.true_model_file));
    const auto learned = io::model_from_json(io::read_json_file(args.learned_model_file));
    if (args.wasserstein_only) {
      out << format_double(wasserstein(truth, learned)) << '\n';
      return kOk;
    }
    if (truth.k() != learned.k()) {
      err << "error: matching distance needs equal k (" << truth.k() << " vs " << learned.k()
          << "); pass --wasserstein-only to compare models of different size\n";
      return kUsage;
    }
    const auto errors = compare_models(truth, learned);
    out << format_double(errors.alpha_err_inf) << ',' << format_double(errors.w_err_inf) << ','
        << format_double(errors.wasserstein) << '\n';
    return kOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

void validate(const BenchArgs& args) {
  if (args.k_list.empty()) throw_invalid("k-list is empty");
  if (args.s_list.empty()) throw_invalid("s-list is empty");
  for (auto k : args.k_list) {
    LearnConfig cfg;
    cfg.k = k;
    cfg.zeta = args.zeta;
    cfg.w_min = args.w_min;
    cfg.gamma = args.gamma;
    cfg.validate();
  }
  for (auto s : args.s_list)
    if (s == 0) throw_invalid("s-list values must be positive");
}

namespace {

BenchRow run_trial(const BenchArgs& args, std::size_t k, std::uint64_t s, std::size_t trial,
                   double floor) {
  BenchRow row;
  row.k = k;
  row.zeta = args.zeta;
  row.w_min = args.w_min;
  row.s = s;
  row.seed = CounterRng(args.seed).substream({k, s, trial})();

  const CounterRng rng(row.seed);
  CounterRng model_rng = rng.substream({1});
  const auto truth = random_model(k, args.zeta, args.w_min, model_rng);
  const auto h = sample_histogram(truth, 2 * k, s, rng.substream({2}));

  LearnConfig cfg;
  cfg.k = k;
  cfg.zeta = args.zeta;
  cfg.w_min = args.w_min;
  cfg.gamma = args.gamma;
  cfg.tolerance_floor = floor;

  const auto start = std::chrono::steady_clock::now();
  try {
    const auto report = learn_coin_mixture(cfg, h);
    const auto stop = std::chrono::steady_clock::now();
    const auto errors = compare_models(truth, report.model);
    row.alpha_err_inf = errors.alpha_err_inf;
    row.w_err_inf = errors.w_err_inf;
    row.wasserstein = errors.wasserstein;
    row.status = "ok";
    row.learn_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
  } catch (const Error& e) {
    const auto stop = std::chrono::steady_clock::now();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.alpha_err_inf = row.w_err_inf = row.wasserstein = nan;
    row.status = status_for(e.kind());
    row.learn_time_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
  }
  if (args.omit_timing) row.learn_time_ns = 0;
  return row;
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchArgs& args) {
  validate(args);
  const double floor = tolerance_floor_from_env();

  struct Job {
    std::size_t k;
    std::uint64_t s;
    std::size_t trial;
  };
  std::vector<Job> jobs;
  for (auto k : args.k_list)
    for (auto s : args.s_list)
      for (std::size_t t = 0; t < args.trials; ++t) jobs.push_back({k, s, t});

  std::vector<BenchRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++)
      rows[i] = run_trial(args, jobs[i].k, jobs[i].s, jobs[i].trial, floor);
  };
  const std::size_t threads = std::clamp<std::size_t>(args.threads, 1, std::max<std::size_t>(1, jobs.size()));
  std::vector<std::jthread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  return rows;
}

std::string format_bench_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << kBenchSchemaComment << '\n' << kBenchHeader << '\n';
  for (const auto& r : rows) {
    out << r.k << ',' << format_double(r.zeta) << ',' << format_double(r.w_min) << ',' << r.s
        << ',' << r.seed << ',' << format_double(r.alpha_err_inf) << ','
        << format_double(r.w_err_inf) << ',' << format_double(r.wasserstein) << ','
        << r.learn_time_ns << ',' << r.status << '\n';
  }
  return out.str();
}

int cmd_bench(const BenchArgs& args, std::ostream& err) {
  std::vector<BenchRow> rows;
  try {
    rows = run_bench(args);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  std::ofstream out(args.out_csv, std::ios::binary | std::ios::trunc);
  if (!out) {
    err << "error: cannot write " << args.out_csv.string() << '\n';
    return kUsage;
  }
  out << format_bench_csv(rows);
  return out ? kOk : kUsage;
}

}  // namespace sparse_moments::cli
