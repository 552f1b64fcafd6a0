#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using namespace std::string_literals;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

std::string cli_binary() {
  const char* env = std::getenv("SYNERGY_CLI");
  REQUIRE_MESSAGE(env != nullptr, "SYNERGY_CLI must point at the CLI binary");
  return env;
}

RunResult run(const std::string& args) {
  const std::string cmd = cli_binary() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult res;
  std::array<char, 4096> buf;
  while (std::fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
  const int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "synergy_cli_test";
  fs::create_directories(dir);
  return dir;
}

// Tiny configuration so the full pipeline runs in seconds.
fs::path small_config() {
  const fs::path path = work_dir() / "small.cfg";
  std::ofstream out(path);
  out << "exploration.min_jerk_count = 6\n"
      << "exploration.random_count = 6\n"
      << "reduction.n_proto_tasks = 2\n"
      << "reduction.grid_angles = 6\n"
      << "reduction.grid_radii = 3\n"
      << "compare.n_subsets = 4\n"
      << "compare.subset_size = 2\n"
      << "output_dir = " << (work_dir() / "out").string() << "\n";
  return path;
}

}  // namespace

TEST_CASE("bare invocation fails with usage information") {
  const RunResult res = run("");
  CHECK(res.exit_code != 0);
  CHECK(res.output.find("subcommand") != std::string::npos);
}

TEST_CASE("missing archive file yields a typed JSON error and exit 1") {
  const RunResult res =
      run("solve13 --archive " + (work_dir() / "nope.json").string());
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("\"error\"") != std::string::npos);
  CHECK(res.output.find("\"message\"") != std::string::npos);
}

TEST_CASE("full pipeline: explore, solve13, reduce, compare, solve") {
  const fs::path cfg = small_config();
  const fs::path out = work_dir() / "out";
  fs::remove_all(out);

  const RunResult explore = run("explore --config " + cfg.string());
  CHECK(explore.exit_code == 0);
  CHECK(explore.output.find("explore:") != std::string::npos);
  const fs::path minjerk = out / "minjerk_archive.json";
  const fs::path random = out / "random_archive.json";
  REQUIRE(fs::exists(minjerk));
  REQUIRE(fs::exists(random));
  CHECK(fs::exists(out / "explore_minjerk_ee.csv"));
  CHECK(fs::exists(out / "explore_random_ee.csv"));

  const RunResult solve13 = run("solve13 --config " + cfg.string() +
                                " --archive " + random.string());
  CHECK(solve13.exit_code == 0);
  CHECK(solve13.output.find("err_P=") != std::string::npos);
  CHECK(fs::exists(out / "solve13_random_summary.csv"));

  const RunResult reduce =
      run("reduce --config " + cfg.string() + " --archive " + random.string());
  CHECK(reduce.exit_code == 0);
  REQUIRE(fs::exists(out / "reduced_basis.json"));
  CHECK(fs::exists(out / "proto_tasks.json"));

  const RunResult compare =
      run("compare --config " + cfg.string() + " --archive " + random.string() +
          " --basis " + (out / "reduced_basis.json").string());
  CHECK(compare.exit_code == 0);
  CHECK(fs::exists(out / "compare.csv"));
  CHECK(fs::exists(out / "compare_summary.json"));

  const fs::path task = work_dir() / "task.json";
  {
    std::ofstream t(task);
    t << R"({"target": [0.10, 0.40]})";
  }
  const RunResult solve = run("solve --config " + cfg.string() + " --basis " +
                              (out / "reduced_basis.json").string() + " --task " +
                              task.string());
  CHECK(solve.exit_code == 0);
  CHECK(solve.output.find("err_I=") != std::string::npos);
}

TEST_CASE("solve requires a basis or an archive") {
  const fs::path task = work_dir() / "task2.json";
  {
    std::ofstream t(task);
    t << R"({"target": [0.10, 0.40]})";
  }
  const RunResult res = run("solve --task " + task.string());
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("\"error\"") != std::string::npos);
}

TEST_CASE("unreachable solve target reports a reachability error") {
  const fs::path cfg = small_config();
  const fs::path out = work_dir() / "out";
  REQUIRE(fs::exists(out / "random_archive.json"));
  const fs::path task = work_dir() / "task_far.json";
  {
    std::ofstream t(task);
    t << R"({"target": [9.0, 9.0]})";
  }
  const RunResult res =
      run("solve --config " + cfg.string() + " --archive " +
          (out / "random_archive.json").string() + " --task " + task.string());
  CHECK(res.exit_code == 1);
  CHECK(res.output.find("reachability") != std::string::npos);
}
