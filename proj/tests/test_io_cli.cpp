#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>
#include <sys/wait.h>

#include "gapmm/matrix_io.hpp"
#include "gapmm/minmax.hpp"
#include "gapmm/random_pencils.hpp"

using namespace gapmm;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

// Runs the CLI inside `dir` so relative artifact prefixes land there.
RunResult run_cli(const fs::path& dir, const std::string& args) {
  const std::string cmd = "cd " + dir.string() + " && " + GAPMM_CLI_PATH + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) res.output.append(buf, n);
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("gapmm_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kData = GAPMM_EXAMPLE_DIR;

}  // namespace

TEST_CASE("split-operator text format round-trips") {
  Rng rng(33);
  GapPencilSpec spec;
  spec.dim_plus = 4;
  spec.dim_minus = 3;
  const SplitOperator op = random_gap_operator(rng, spec);

  for (bool csv : {false, true}) {
    std::stringstream ss;
    write_split_operator(ss, op, csv, true);
    const SplitOperator back = read_split_operator(ss);
    CHECK((back.full_a() - op.full_a()).norm() < 1e-13 * op.full_a().norm());
    CHECK((back.full_s() - op.full_s()).norm() < 1e-13 * op.full_s().norm());
    CHECK(back.dim_plus() == 4);
  }

  // Without the Gram block the reader substitutes the identity.
  std::stringstream ss;
  write_split_operator(ss, op, false, false);
  const SplitOperator back = read_split_operator(ss);
  CHECK(back.full_s().isIdentity(1e-14));
}

TEST_CASE("split-operator reader rejects malformed files") {
  CHECK_THROWS_AS((void)load_split_operator(kData + "/truncated.mat"), std::runtime_error);
  CHECK_THROWS_AS((void)load_split_operator("no_such_file.mat"), std::runtime_error);
  std::stringstream no_header("# only comments\n");
  CHECK_THROWS_AS((void)read_split_operator(no_header), std::runtime_error);
  std::stringstream bad_dims("0 2\n1 2\n3 4\n");
  CHECK_THROWS_AS((void)read_split_operator(bad_dims), std::runtime_error);
}

TEST_CASE("example files load with their documented shapes") {
  const SplitOperator sqrt2 = load_split_operator(kData + "/sqrt2.mat");
  CHECK(sqrt2.dim_plus() == 1);
  CHECK(solve_level(sqrt2, 1, 1e-12).lambda == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));

  const SplitOperator gram3 = load_split_operator(kData + "/gram3.mat");
  CHECK(gram3.dim_plus() == 2);
  CHECK(gram3.s_pp(0, 0) == doctest::Approx(2.0));
  CHECK(gram3.a_pm(0, 0) == doctest::Approx(0.1));
}

TEST_CASE("cli: matrix subcommand solves and reports through exit codes") {
  const fs::path dir = fresh_dir("matrix");
  const RunResult ok = run_cli(dir, "matrix " + kData + "/sqrt2.mat");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("1.41421356") != std::string::npos);
  CHECK(fs::exists(dir / "matrix-run.json"));
  CHECK(fs::exists(dir / "matrix-run.manifest.json"));

  // Failed hypothesis: the report is still written, the exit code flips to 2.
  const RunResult bad = run_cli(dir, "matrix " + kData + "/sunk.mat --out sunk");
  CHECK(bad.exit_code == 2);
  CHECK(fs::exists(dir / "sunk.json"));
  const auto j = nlohmann::json::parse(slurp(dir / "sunk.json"));
  CHECK_FALSE(j["hypothesis"]["pass"].get<bool>());
  CHECK(j["levels"].empty());
}

TEST_CASE("cli: solve writes artifacts only on success and is deterministic") {
  const fs::path d1 = fresh_dir("solve1");
  const fs::path d2 = fresh_dir("solve2");
  const std::string args =
      "solve --nu 0.5 --kappa -1 --intervals 48 --r-max 60 --kmax 1 --out run";
  const RunResult r1 = run_cli(d1, args);
  REQUIRE(r1.exit_code == 0);
  const RunResult r2 = run_cli(d2, args);
  REQUIRE(r2.exit_code == 0);
  CHECK(slurp(d1 / "run.json") == slurp(d2 / "run.json"));
  CHECK(slurp(d1 / "run.levels.dat") == slurp(d2 / "run.levels.dat"));

  const auto j = nlohmann::json::parse(slurp(d1 / "run.json"));
  CHECK(j["levels"][0]["in_gap"].get<bool>());
  CHECK(j["levels"][0]["abs_error"].get<double>() < 1e-6);
  CHECK(j["splitting"] == "talman");

  // Free channel: the level sits above the gap edge, nothing is written.
  const RunResult none =
      run_cli(d1, "solve --nu 0 --intervals 24 --r-max 40 --out empty");
  CHECK(none.exit_code == 2);
  CHECK(none.output.find("no gap eigenvalue bracket") != std::string::npos);
  CHECK_FALSE(fs::exists(d1 / "empty.json"));
  CHECK_FALSE(fs::exists(d1 / "empty.levels.dat"));
  CHECK_FALSE(fs::exists(d1 / "empty.manifest.json"));
}

TEST_CASE("cli: exported operator reproduces the channel level") {
  const fs::path dir = fresh_dir("export");
  const RunResult r = run_cli(
      dir, "solve --nu 0.5 --intervals 40 --r-max 60 --export-matrix chan.mat --out run");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "run.json"));
  const double lambda = j["levels"][0]["lambda"].get<double>();

  const SplitOperator op = load_split_operator((dir / "chan.mat").string());
  CHECK(solve_level(op, 1, 1e-11).lambda == doctest::Approx(lambda).epsilon(1e-8));
}

TEST_CASE("cli: config file sets channel options and flags win") {
  const fs::path dir = fresh_dir("config");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "nu=0.3\nintervals=40\nr-max=60\n";
  }
  const RunResult r = run_cli(dir, "solve --config run.cfg --out a");
  REQUIRE(r.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "a.json"));
  CHECK(j["channel"]["nu"].get<double>() == doctest::Approx(0.3));
  CHECK(j["channel"]["grid"]["intervals"].get<int>() == 40);
  CHECK(j["channel"]["grid"]["r_max"].get<double>() == doctest::Approx(60.0));

  const RunResult r2 = run_cli(dir, "solve --config run.cfg --nu 0.5 --out b");
  REQUIRE(r2.exit_code == 0);
  j = nlohmann::json::parse(slurp(dir / "b.json"));
  CHECK(j["channel"]["nu"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("cli: usage errors exit with 1") {
  const fs::path dir = fresh_dir("usage");
  CHECK(run_cli(dir, "").exit_code == 1);
  CHECK(run_cli(dir, "frobnicate").exit_code == 1);
  CHECK(run_cli(dir, "solve --no-such-flag").exit_code == 1);
  CHECK(run_cli(dir, "solve --nu 1.5").exit_code == 1);  // supercritical coupling
  CHECK(run_cli(dir, "sweep").exit_code == 1);
  CHECK(run_cli(dir, "sweep --nu-grid 0:0.4:0.2").exit_code == 1);  // missing --eps
  CHECK(run_cli(dir, "sweep --refine").exit_code == 1);  // missing --eps-list
  CHECK(run_cli(dir, "verify").exit_code == 1);
  CHECK(run_cli(dir, "hardy --family nope").exit_code == 1);
  CHECK(run_cli(dir, "matrix").exit_code == 1);
  CHECK(run_cli(dir, "report missing.json").exit_code == 1);
}

TEST_CASE("cli: verify distinguishes hypothesis failures from fuzz runs") {
  const fs::path dir = fresh_dir("verify");
  const RunResult fuzz = run_cli(dir, "verify --fuzz 25 --out fz");
  CHECK(fuzz.exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "fz.json"));
  CHECK(j["fuzz"]["pass"].get<bool>());
  CHECK(j["fuzz"]["instances"].get<int>() == 25);

  const RunResult hyp = run_cli(dir, "verify --matrix " + kData + "/sunk.mat --out hy");
  CHECK(hyp.exit_code == 3);
  CHECK(fs::exists(dir / "hy.json"));
}

TEST_CASE("cli: sweep produces a complete table and summary") {
  const fs::path dir = fresh_dir("sweep");
  const RunResult r = run_cli(
      dir, "sweep --nu-grid 0:0.4:0.2 --eps 0.1 --intervals 32 --r-max 40 --out sw");
  REQUIRE(r.exit_code == 0);
  const std::string csv = slurp(dir / "sw.csv");
  CHECK(csv.rfind("nu,epsilon,lambda1,a_nu,pass\n", 0) == 0);
  int rows = 0;
  for (char c : csv) rows += c == '\n';
  CHECK(rows == 4);  // header + three grid points
  const auto j = nlohmann::json::parse(slurp(dir / "sw.summary.json"));
  CHECK(j["pass"].get<bool>());
  CHECK(j["mode"] == "nu-sweep");

  const RunResult ref = run_cli(
      dir,
      "sweep --refine --nu 0.5 --eps-list 0.1,0.05,0.02 --intervals 32 --r-max 40 --out rf");
  REQUIRE(ref.exit_code == 0);
  const auto jr = nlohmann::json::parse(slurp(dir / "rf.summary.json"));
  CHECK(jr["mode"] == "epsilon-refine");
  CHECK(jr["monotone_nonincreasing"].get<bool>());
}

TEST_CASE("cli: hardy margins and report rendering") {
  const fs::path dir = fresh_dir("hardy");
  const RunResult r = run_cli(dir, "hardy --family bumps --out hb");
  REQUIRE(r.exit_code == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "hb.summary.json"));
  CHECK(j["pass"].get<bool>());
  const std::string csv = slurp(dir / "hb.csv");
  CHECK(csv.find("margin") != std::string::npos);

  const RunResult rep = run_cli(dir, "report hb.summary.json");
  CHECK(rep.exit_code == 0);
  CHECK(rep.output.find("pass") != std::string::npos);
}
