#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string cli() {
  const char* path = std::getenv("PKIRCH_CLI");
  REQUIRE_MESSAGE(path != nullptr, "PKIRCH_CLI is not set");
  return path;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pkirch_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = cli() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run("--help") == 0);
  CHECK(run("--p 3.5 --q 4 regimes") == 1);      // validation
  CHECK(run("--no-such-flag regimes") == 1);    // usage
  CHECK(run("") == 1);                          // no subcommand
  const fs::path out = scratch_dir("codes");
  // Mass-critical, below c_crit: f has no interior minimum, a solver failure.
  CHECK(run("--p 2 --q 3.3333333333333335 --c 1 --out " + out.string() + " explicit") == 2);
}

TEST_CASE("ground-state writes the profile and the record") {
  const fs::path out = scratch_dir("gs");
  REQUIRE(run("--p 2 --q 3 --out " + out.string() + " ground-state") == 0);
  CHECK(fs::exists(out / "Q.csv"));
  const auto j = nlohmann::json::parse(slurp(out / "Q.json"));
  CHECK(j.dump().find("s0") != std::string::npos);
}

TEST_CASE("thresholds output is reproducible and correct") {
  const fs::path a = scratch_dir("thr_a"), b = scratch_dir("thr_b"), cache = scratch_dir("thr_cache");
  REQUIRE(run("--p 2 --q 4 --cache " + cache.string() + " --out " + a.string() + " thresholds") == 0);
  REQUIRE(run("--p 2 --q 4 --cache " + cache.string() + " --out " + b.string() + " thresholds") == 0);
  const std::string ta = slurp(a / "thresholds.json");
  CHECK(ta == slurp(b / "thresholds.json"));
  CHECK_FALSE(fs::is_empty(cache));
  const std::string s = nlohmann::json::parse(ta).dump();
  CHECK(s.find("Intermediate") != std::string::npos);
}

TEST_CASE("config file") {
  const fs::path dir = scratch_dir("cfg");
  fs::create_directories(dir);
  std::ofstream(dir / "run.ini") << "p = 3.5\nq = 4\n";
  CHECK(run("--config " + (dir / "run.ini").string() + " regimes") == 1);
  std::ofstream(dir / "ok.ini") << "p = 2\nq = 5\n";
  CHECK(run("--config " + (dir / "ok.ini").string() + " --out " + (dir / "o").string() + " regimes") == 0);
  CHECK(slurp(dir / "o" / "regimes.json").find("Supercritical") != std::string::npos);
}
