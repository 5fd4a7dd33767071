// End-to-end checks of the fasep binary: exit codes, output shape, and
// byte-level reproducibility. The binary path comes from the build system.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = FASEP_CLI_PATH;

int run(const std::string& args) {
  const auto status = std::system((kCli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("fasep_cli_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static inline int counter = 0;
};

}  // namespace

TEST_CASE("bad arguments exit with the spec error code") {
  CHECK(run("") == 2);
  CHECK(run("simulate --topology ring --L 8") == 2);       // no stop rule
  CHECK(run("simulate --L 8 --N 2 --t-end -1") == 2);      // bad time
  CHECK(run("bogus-subcommand") == 2);
  CHECK(run("--config /nonexistent.toml verify --quick") == 2);
}

TEST_CASE("simulate writes deterministic run files") {
  TempDir a, b;
  const std::string args =
      "simulate --topology ring --L 24 --N 7 --p 0.5 --scheme site "
      "--runs 4 --to-frozen --seed 99 --out-dir ";
  CHECK(run(args + a.path.string()) == 0);
  CHECK(run(args + b.path.string()) == 0);
  const auto file_a = slurp(a.path / "runs.jsonl");
  CHECK(file_a == slurp(b.path / "runs.jsonl"));
  CHECK(file_a.find("\"spec_hash\"") != std::string::npos);
  CHECK(file_a.find("\"final\"") != std::string::npos);
  // header + one record per seed
  CHECK(std::count(file_a.begin(), file_a.end(), '\n') == 5);
}

TEST_CASE("simulate to absorption on an overfilled ring exits 3") {
  TempDir t;
  CHECK(run("simulate --topology ring --L 8 --N 5 --to-frozen --max-events 5000 "
            "--out-dir " + t.path.string()) == 3);
}

TEST_CASE("single particles freeze immediately") {
  TempDir t;
  CHECK(run("simulate --topology ring --L 4 --N 1 --to-frozen --runs 1 "
            "--out-dir " + t.path.string()) == 0);
  const auto text = slurp(t.path / "runs.jsonl");
  CHECK(text.find("\"events\":0") != std::string::npos);
}

TEST_CASE("exact emits distributions and a p-independence verdict") {
  TempDir t;
  CHECK(run("exact --L 8 --N 3 --p 1/4 --p 3/4 --out-dir " + t.path.string()) ==
        0);
  CHECK(fs::exists(t.path / "exact_L8_N3_p1_4.csv"));
  CHECK(fs::exists(t.path / "exact_L8_N3_p3_4.csv"));
  const auto verdict = slurp(t.path / "exact_verdict.json");
  CHECK(verdict.find("\"pass\": true") != std::string::npos);
  // identical distributions regardless of p
  auto strip_header = [](std::string s) {
    return s.substr(s.find('\n') + 1);
  };
  CHECK(strip_header(slurp(t.path / "exact_L8_N3_p1_4.csv")) ==
        strip_header(slurp(t.path / "exact_L8_N3_p3_4.csv")));
}

TEST_CASE("exact handles the high-density stationary regime") {
  TempDir t;
  CHECK(run("exact --L 6 --N 4 --out-dir " + t.path.string()) == 0);
  CHECK(fs::exists(t.path / "stationary_L6_N4_p1_2.csv"));
  const auto csv = slurp(t.path / "stationary_L6_N4_p1_2.csv");
  CHECK(csv.find(",1,9\n") != std::string::npos);  // uniform over 9 states
}

TEST_CASE("exact beyond the enumeration cap exits 4") {
  TempDir t;
  CHECK(run("exact --L 20 --N 6 --out-dir " + t.path.string()) == 4);
}

TEST_CASE("gaps produces histogram, law table and verdict") {
  TempDir t;
  CHECK(run("gaps --rho 0.25 --p 1 --window 2000 --target-gaps 2000 --seed 7 "
            "--out-dir " + t.path.string()) == 0);
  CHECK(fs::exists(t.path / "gaps_hist.csv"));
  CHECK(fs::exists(t.path / "gap_law.csv"));
  const auto verdict = slurp(t.path / "gaps_verdict.json");
  CHECK(verdict.find("\"samples\"") != std::string::npos);
  const auto hist = slurp(t.path / "gaps_hist.csv");
  CHECK(hist.rfind("# fasep ", 0) == 0);
}

TEST_CASE("couple writes snapshots and a summary") {
  TempDir t;
  CHECK(run("couple --L-hat 20 --N-hat 8 --p 0.6 --t-end 5 --seed 3 "
            "--out-dir " + t.path.string()) == 0);
  const auto summary = slurp(t.path / "couple_summary.json");
  CHECK(summary.find("\"invariant_violations\": 0") != std::string::npos);
  CHECK(fs::exists(t.path / "couple.jsonl"));
}

TEST_CASE("cylinders verdict at reduced scale") {
  TempDir t;
  CHECK(run("cylinders --L 200 --rho 0.7 --snapshots 60 --seed 11 --out-dir " +
            t.path.string()) == 0);
  CHECK(fs::exists(t.path / "cylinders_emp_m4.csv"));
  CHECK(fs::exists(t.path / "cylinders_model_m4.csv"));
  CHECK(fs::exists(t.path / "cylinders_verdict.json"));
}

TEST_CASE("config file drives a run") {
  TempDir t;
  const auto cfg = t.path / "exp.toml";
  {
    std::ofstream out(cfg);
    out << "out-dir = \"" << (t.path / "cfgout").string() << "\"\n"
        << "seed = 5\n"
        << "[gaps]\n"
        << "rho = 0.3\n"
        << "p = 0.5\n"
        << "window = 1500\n"
        << "target-gaps = 1000\n";
  }
  CHECK(run("--config " + cfg.string() + " gaps") == 0);
  CHECK(fs::exists(t.path / "cfgout" / "gaps_hist.csv"));
}
