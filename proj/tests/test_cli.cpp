// End-to-end checks of the command-line tool: exit codes, file outputs,
// determinism, and the gen -> solve -> gap round trip. Takes the binary path
// as argv[1].

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace {

int failures = 0;

#define REQUIRE_MSG(cond, msg)                                                      \
  do {                                                                              \
    if (!(cond)) {                                                                  \
      std::cerr << "[FAIL] " << __FILE__ << ":" << __LINE__ << " " << msg << "\n"; \
      ++failures;                                                                   \
    }                                                                               \
  } while (0)

std::string g_binary;
std::filesystem::path g_dir;

int run(const std::string& args, const std::string& stdout_file = "") {
  std::string cmd = g_binary + " " + args + " 2>/dev/null";
  if (!stdout_file.empty()) cmd += " > " + stdout_file;
  else cmd += " > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string path(const std::string& name) { return (g_dir / name).string(); }

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: test_cli <vrgames-binary>\n";
    return 2;
  }
  g_binary = argv[1];
  g_dir = std::filesystem::temp_directory_path() / "vrgames_cli_test";
  std::filesystem::remove_all(g_dir);
  std::filesystem::create_directories(g_dir);

  // gen: reproducible by seed
  REQUIRE_MSG(run("gen -m 4 -n 4 --density 1 --seed 7 --out " + path("a.mtx")) == 0,
              "gen exits 0");
  REQUIRE_MSG(run("gen -m 4 -n 4 --density 1 --seed 7 --out " + path("b.mtx")) == 0,
              "gen exits 0 again");
  REQUIRE_MSG(slurp(path("a.mtx")) == slurp(path("b.mtx")),
              "same seed gives byte-identical instances");
  REQUIRE_MSG(!slurp(path("a.mtx")).empty(), "generated file is non-empty");
  REQUIRE_MSG(run("gen -m 4 -n 4 --density 0 --out " + path("bad.mtx")) == 1,
              "invalid density exits 1");

  // a tiny identity instance for the solve checks
  {
    std::ofstream id(path("identity2.mtx"));
    id << "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n2 2 1.0\n";
  }

  // solve: happy path with report, trace, and final point
  const std::string solve_cmd = "solve --setup l1l1 --eps 0.01 --seed 5 --out " +
                                path("report.json") + " --trace " + path("trace.csv") +
                                " --point-out " + path("point.json") + " " +
                                path("identity2.mtx");
  REQUIRE_MSG(run(solve_cmd, path("solve_out.txt")) == 0, "solve exits 0 at gap <= eps");
  const std::string summary = slurp(path("solve_out.txt"));
  REQUIRE_MSG(summary.rfind("gap=", 0) == 0, "solve prints the one-line summary");
  REQUIRE_MSG(summary.find("work=") != std::string::npos, "summary includes work");
  REQUIRE_MSG(summary.find("K=") != std::string::npos, "summary includes K");
  REQUIRE_MSG(slurp(path("trace.csv")).rfind("k,work,gap\n", 0) == 0,
              "trace carries the mandated header");

  // determinism: identical invocation + seed twice -> byte-identical trace
  REQUIRE_MSG(run("solve --setup l1l1 --eps 0.01 --seed 5 --trace " + path("trace2.csv") +
                  " " + path("identity2.mtx")) == 0,
              "second identical solve exits 0");
  REQUIRE_MSG(slurp(path("trace.csv")) == slurp(path("trace2.csv")),
              "identical seeds give byte-identical traces");

  // invalid configuration
  REQUIRE_MSG(run("solve --setup l1l1 --eps 0.01 --K 0 " + path("identity2.mtx")) == 1,
              "K = 0 is a config error (exit 1)");
  REQUIRE_MSG(run("solve --setup nope --eps 0.01 " + path("identity2.mtx")) == 1,
              "unknown setup exits 1");
  REQUIRE_MSG(run("solve --setup l1l1 --eps 0.01 missing.mtx") == 2,
              "missing instance exits 2");

  // budget exhaustion surfaces as exit 3
  REQUIRE_MSG(run("gen -m 32 -n 32 --density 1 --seed 3 --out " + path("dense.mtx")) == 0,
              "gen dense instance");
  REQUIRE_MSG(run("solve --setup l1l1 --eps 1e-9 --theorem-mode " + path("dense.mtx")) == 3,
              "inner-step cap refusal exits 3");

  // gen -> solve -> gap round trip: the gap tool reproduces the report's gap
  REQUIRE_MSG(run("solve --setup l1l1 --eps 0.05 --seed 9 --out " + path("r2.json") +
                  " --point-out " + path("p2.json") + " " + path("dense.mtx")) == 0,
              "dense solve exits 0");
  REQUIRE_MSG(run("gap --setup l1l1 --point " + path("p2.json") + " " + path("dense.mtx"),
                  path("gap_out.txt")) == 0,
              "gap exits 0 on the solver's final point");
  {
    const double printed = std::stod(slurp(path("gap_out.txt")));
    const std::string report = slurp(path("r2.json"));
    const std::string key = "\"gap\": ";
    const size_t pos = report.find(key);
    REQUIRE_MSG(pos != std::string::npos, "report carries the measured gap");
    const double reported = std::stod(report.substr(pos + key.size()));
    REQUIRE_MSG(std::abs(printed - reported) <= 1e-12,
                "round trip reproduces the measured gap to 1e-12 (got " +
                    std::to_string(printed - reported) + ")");
  }

  // gap of the uniform point on the identity instance is zero
  {
    std::ofstream p(path("uniform.json"));
    p << "{\"x\": [0.5, 0.5], \"y\": [0.5, 0.5]}\n";
  }
  REQUIRE_MSG(run("gap --setup l1l1 --point " + path("uniform.json") + " " +
                  path("identity2.mtx"),
                  path("gap0.txt")) == 0,
              "gap on the uniform point exits 0");
  REQUIRE_MSG(slurp(path("gap0.txt")).rfind("0.000000000000", 0) == 0,
              "uniform point on the identity game prints a zero gap");

  // infeasible point file: y sums to 1.5
  {
    std::ofstream p(path("infeasible.json"));
    p << "{\"x\": [0.5, 0.5], \"y\": [1.0, 0.5]}\n";
  }
  REQUIRE_MSG(run("gap --setup l1l1 --point " + path("infeasible.json") + " " +
                  path("identity2.mtx")) == 1,
              "infeasible point exits 1");

  // bench: two methods, budgets canonicalized ascending, both groups present
  REQUIRE_MSG(run("bench --setup l1l1 --eps 0.02 --methods vr,mirror-prox "
                  "--budgets 50000,1000,200000 --seeds 1,2 --csv " +
                  path("bench.csv") + " --out " + path("bench.json") + " " +
                  path("dense.mtx")) == 0,
              "bench exits 0");
  {
    const std::string csv = slurp(path("bench.csv"));
    REQUIRE_MSG(csv.rfind("instance_id,method,seed,work,gap\n", 0) == 0,
                "bench csv header");
    REQUIRE_MSG(csv.find(",vr,") != std::string::npos, "vr rows present");
    REQUIRE_MSG(csv.find(",mirror-prox,") != std::string::npos,
                "mirror-prox rows present");
    const std::string json = slurp(path("bench.json"));
    const size_t b1 = json.find("\"budget\": 1000");
    const size_t b2 = json.find("\"budget\": 50000");
    const size_t b3 = json.find("\"budget\": 200000");
    REQUIRE_MSG(b1 != std::string::npos && b2 != std::string::npos &&
                    b3 != std::string::npos && b1 < b2 && b2 < b3,
                "budgets are sorted ascending in the output");
  }
  REQUIRE_MSG(run("bench --setup l1l1 --budgets 1000 missing.mtx") == 2,
              "bench with a missing instance exits 2");

  if (failures == 0) {
    std::cout << "test_cli: all checks passed\n";
    return 0;
  }
  std::cerr << "test_cli: " << failures << " failures\n";
  return 1;
}
