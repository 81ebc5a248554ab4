#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "doctest.h"
#include "sparse_moments/io.hpp"

using namespace sparse_moments;
using namespace sparse_moments::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& f) const { return path / f; }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SPARSE_MOMENTS_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_model(const fs::path& p, const MixtureModel& m) { io::write_json_file(p, io::to_json(m)); }

}  // namespace

TEST_CASE("sample: counts, determinism, m = 2k") {
  TempDir dir("sparse_moments_cli_sample");
  write_model(dir / "m.json", MixtureModel({0.25, 0.75}, {0.5, 0.5}));
  std::ostringstream err;

  SampleArgs args{dir / "m.json", 4, 1000, 5, dir / "h1.json"};
  CHECK(cmd_sample(args, err) == kOk);
  CHECK(io::histogram_from_json(io::read_json_file(dir / "h1.json")).s() == 1000);

  args.out_file = dir / "h2.json";
  CHECK(cmd_sample(args, err) == kOk);
  CHECK(slurp(dir / "h1.json") == slurp(dir / "h2.json"));

  args.m = 3;
  err.str("");
  CHECK(cmd_sample(args, err) == kUsage);
  CHECK(err.str().find("m = 2k") != std::string::npos);

  args.m = 4;
  args.model_file = dir / "missing.json";
  CHECK(cmd_sample(args, err) == kUsage);
}

TEST_CASE("learn: noiseless recovery, delta source, bad input") {
  TempDir dir("sparse_moments_cli_learn");
  std::ostringstream err;
  const MixtureModel truth({0.25, 0.75}, {0.5, 0.5});

  // counts proportional to the exact pmf (multiples of 1/256)
  io::write_json_file(dir / "h.json", io::to_json(Histogram(4, {41, 60, 54, 60, 41})));
  LearnArgs args;
  args.histogram_file = dir / "h.json";
  args.k = 2;
  args.zeta = 0.5;
  args.w_min = 0.5;
  args.gamma = 20;
  args.out_file = dir / "r.json";
  CHECK(cmd_learn(args, err) == kOk);
  const auto report = io::read_json_file(dir / "r.json");
  CHECK(report.at("status") == "ok");
  const auto learned = io::model_from_json(report.at("model"));
  const auto e = compare_models(truth, learned);
  CHECK(e.alpha_err_inf <= 1e-7);
  CHECK(e.w_err_inf <= 1e-7);

  SUBCASE("all mass at j = 0") {
    io::write_json_file(dir / "d.json", io::to_json(Histogram(4, {100, 0, 0, 0, 0})));
    args.histogram_file = dir / "d.json";
    const int code = cmd_learn(args, err);
    const auto r = io::read_json_file(dir / "r.json");
    if (code == kOk) {
      CHECK(io::model_from_json(r.at("model")).alpha()[0] == doctest::Approx(0.0));
    } else {
      CHECK(code == kSolverFailure);
      CHECK(r.at("status") == "degree_deficient");
      CHECK(r.at("model").is_null());
    }
  }
  SUBCASE("k = 1 on a delta source") {
    io::write_json_file(dir / "d1.json", io::to_json(Histogram(2, {100, 0, 0})));
    args.histogram_file = dir / "d1.json";
    args.k = 1;
    args.zeta = 1.0;
    args.w_min = 1.0;
    CHECK(cmd_learn(args, err) == kOk);
    const auto m = io::model_from_json(io::read_json_file(dir / "r.json").at("model"));
    CHECK(m.alpha()[0] == doctest::Approx(0.0));
  }
  SUBCASE("length mismatch") {
    args.k = 3;
    args.zeta = 0.3;
    args.w_min = 0.2;
    CHECK(cmd_learn(args, err) == kUsage);
  }
  SUBCASE("truncated file") {
    std::ofstream(dir / "t.json") << "{\"m\": 4, \"s\": 3";
    args.histogram_file = dir / "t.json";
    CHECK(cmd_learn(args, err) == kUsage);
  }
}

TEST_CASE("eval prints alpha/w/Wasserstein errors") {
  TempDir dir("sparse_moments_cli_eval");
  write_model(dir / "a.json", MixtureModel({0.2, 0.8}, {0.5, 0.5}));
  write_model(dir / "b.json", MixtureModel({0.25, 0.8}, {0.5, 0.5}));
  write_model(dir / "c.json", MixtureModel({0.5}, {1.0}));
  std::ostringstream out, err;

  CHECK(cmd_eval({dir / "a.json", dir / "a.json"}, out, err) == kOk);
  CHECK(out.str() == "0,0,0\n");

  out.str("");
  CHECK(cmd_eval({dir / "a.json", dir / "b.json"}, out, err) == kOk);
  double alpha_err, w_err, w1;
  char comma;
  std::istringstream parse(out.str());
  parse >> alpha_err >> comma >> w_err >> comma >> w1;
  CHECK(alpha_err == doctest::Approx(0.05));
  CHECK(w_err == doctest::Approx(0.0));
  CHECK(w1 == doctest::Approx(0.025));

  CHECK(cmd_eval({dir / "a.json", dir / "c.json"}, out, err) == kUsage);
  out.str("");
  CHECK(cmd_eval({dir / "a.json", dir / "c.json", true}, out, err) == kOk);
  CHECK(std::stod(out.str()) == doctest::Approx(0.3));

  std::ofstream(dir / "bad.json") << "not json";
  CHECK(cmd_eval({dir / "a.json", dir / "bad.json"}, out, err) == kUsage);
}

TEST_CASE("bench rows, ordering and determinism") {
  BenchArgs args;
  args.k_list = {2};
  args.s_list = {10000};
  args.trials = 3;
  args.zeta = 0.3;
  args.w_min = 0.2;
  args.seed = 7;
  const auto rows = run_bench(args);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) {
    CHECK(r.status == "ok");
    CHECK(r.k == 2);
    CHECK(r.s == 10000);
  }

  args.omit_timing = true;
  args.k_list = {2, 3};
  args.s_list = {1000, 5000};
  const auto serial = format_bench_csv(run_bench(args));
  args.threads = 4;
  CHECK(format_bench_csv(run_bench(args)) == serial);
  CHECK(serial.rfind(kBenchSchemaComment, 0) == 0);

  args.trials = 0;
  const auto empty = format_bench_csv(run_bench(args));
  CHECK(empty == std::string(kBenchSchemaComment) + "\n" + kBenchHeader + "\n");

  args.trials = 1;
  args.k_list = {3};
  args.zeta = 0.9;
  CHECK_THROWS_AS(run_bench(args), Error);
}

TEST_CASE("bench median error falls with sample size") {
  BenchArgs args;
  args.k_list = {3};
  args.s_list = {10000, 100000, 1000000};
  args.trials = 15;
  args.zeta = 0.3;
  args.w_min = 0.2;
  args.seed = 3;
  args.threads = 4;
  const auto rows = run_bench(args);
  std::vector<double> medians;
  for (std::size_t block = 0; block < 3; ++block) {
    std::vector<double> errs;
    for (std::size_t t = 0; t < args.trials; ++t) {
      const auto& r = rows[block * args.trials + t];
      errs.push_back(r.status == "ok" ? r.alpha_err_inf : INFINITY);
    }
    std::nth_element(errs.begin(), errs.begin() + errs.size() / 2, errs.end());
    medians.push_back(errs[errs.size() / 2]);
  }
  CHECK(medians[1] <= medians[0]);
  CHECK(medians[2] <= medians[1]);
}

TEST_CASE("tolerance floor from the environment") {
  ::unsetenv(kFloorEnvVar);
  CHECK(tolerance_floor_from_env() == kDefaultToleranceFloor);
  ::setenv(kFloorEnvVar, "1e-10", 1);
  CHECK(tolerance_floor_from_env() == 1e-10);
  ::setenv(kFloorEnvVar, "banana", 1);
  CHECK_THROWS_AS(tolerance_floor_from_env(), Error);
  ::unsetenv(kFloorEnvVar);
}

TEST_CASE("CLI binary exit codes") {
  TempDir dir("sparse_moments_cli_binary");
  write_model(dir / "m.json", MixtureModel({0.25, 0.75}, {0.5, 0.5}));
  const std::string m = (dir / "m.json").string();
  const std::string h = (dir / "h.json").string();
  const std::string r = (dir / "r.json").string();
  CHECK(run_cli("sample " + m + " -m 4 -s 200000 --seed 1 -o " + h) == 0);
  CHECK(run_cli("sample " + m + " -m 3 -s 10 -o " + h + ".bad") == 2);
  CHECK(run_cli("learn " + h + " --k 2 --zeta 0.5 --wmin 0.5 --gamma 20 -o " + r) == 0);
  CHECK(run_cli("learn " + h + " --k 2 --zeta 0.5 --wmin 0.5") == 2);
  CHECK(run_cli("eval " + m + " " + m) == 0);
  CHECK(run_cli("bench --k-list 3 --zeta 0.9 --s-list 100 -o " + (dir / "b.csv").string()) == 2);
  CHECK(run_cli("bench --k-list 2 --s-list 100 --trials 0 -o " + (dir / "b.csv").string()) == 0);
  CHECK(run_cli("frobnicate") == 2);

  // degenerate input: a point mass read with k = 2
  io::write_json_file(dir / "p.json", io::to_json(Histogram(4, {0, 0, 0, 0, 50})));
  const int code = run_cli("learn " + (dir / "p.json").string() + " --k 2 --zeta 0.5 --wmin 0.5 --gamma 20 -o " + r);
  CHECK(code == 3);
  CHECK(io::read_json_file(r).at("status") != "ok");
}
