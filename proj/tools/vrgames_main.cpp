// Command-line front end: load or generate game instances, run the
// variance-reduced solver or the baselines, evaluate duality gaps, and emit
// reports, traces, and benchmark tables.
//
// Exit codes: 0 success (solve: gap <= eps), 1 invalid config or infeasible
// point, 2 I/O error, 3 budget exhaustion.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vrgames/baselines.hpp"
#include "vrgames/benchmark.hpp"
#include "vrgames/gap.hpp"
#include "vrgames/matrix_market.hpp"
#include "vrgames/serialize.hpp"
#include "vrgames/solvers.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitBudget = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("VRGAMES_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw CLI::ValidationError("VRGAMES_SEED", "must be an unsigned integer");
    }
  }
  return 0;
}

vrgames::SetupKind parse_setup(const std::string& name) {
  const auto kind = vrgames::setup_from_name(name);
  if (!kind) throw CLI::ValidationError("--setup", "expected l1l1, l2l1 or l2l2");
  return *kind;
}

vrgames::SetupDescriptor make_setup(vrgames::SetupKind kind, const vrgames::SparseMatrix& a) {
  vrgames::SetupDescriptor s;
  s.kind = kind;
  s.n = a.cols();
  s.m = a.rows();
  return s;
}

struct SolveArgs {
  std::string input;
  std::string setup = "l1l1";
  double epsilon = 1e-2;
  std::string estimator;
  bool theorem_mode = false;
  bool restarted = false;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string report_path;
  std::string trace_path;
  std::string point_path;
  std::optional<double> alpha, eta, tau, mu_x, mu_y;
  std::optional<long> t_count, k_count, restart_phases, gap_every;
  long max_inner = 10'000'000;
};

int run_solve(const SolveArgs& args) {
  vrgames::SparseMatrix a;
  try {
    a = vrgames::load_matrix_market_file(args.input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }

  try {
    const vrgames::SetupKind kind = parse_setup(args.setup);
    vrgames::SetupDescriptor setup = make_setup(kind, a);

    vrgames::SolveOptions opts;
    opts.seed = args.seed_given ? args.seed : default_seed();
    opts.theorem_mode = args.theorem_mode;
    opts.use_restarted_oracle = args.restarted;
    opts.alpha = args.alpha;
    opts.eta = args.eta;
    opts.tau = args.tau;
    opts.inner_iterations = args.t_count;
    opts.outer_iterations = args.k_count;
    opts.restart_phases = args.restart_phases;
    opts.gap_check_every = args.gap_every;
    opts.max_total_inner_steps = args.max_inner;
    if (!args.estimator.empty()) {
      const auto v = vrgames::estimator_from_name(args.estimator);
      if (!v) throw std::invalid_argument("unknown estimator '" + args.estimator + "'");
      opts.variant = *v;
    }
    if (args.mu_x || args.mu_y) {
      if (!(args.mu_x && args.mu_y))
        throw std::invalid_argument("--mu-x and --mu-y must be given together");
      vrgames::StrongConfig strong;
      strong.mu_x = *args.mu_x;
      strong.mu_y = *args.mu_y;
      opts.strong = strong;
      opts.composite = {*args.mu_x, *args.mu_y};
    }

    const vrgames::SolveReport report = vrgames::solve(a, setup, args.epsilon, opts);

    if (!args.report_path.empty()) vrgames::write_report_json_file(args.report_path, report);
    if (!args.trace_path.empty()) vrgames::write_trace_csv_file(args.trace_path, report);
    if (!args.point_path.empty())
      vrgames::save_point_json_file(args.point_path, report.final_point);

    std::printf("gap=%.12g work=%lld K=%ld\n", report.measured_gap,
                static_cast<long long>(report.work.total()), report.outer_iterations_run);
    return report.measured_gap <= args.epsilon ? kExitOk : kExitBudget;
  } catch (const vrgames::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

struct BenchArgs {
  std::vector<std::string> inputs;
  std::string setup = "l1l1";
  double epsilon = 1e-2;
  std::vector<std::string> methods = {"vr", "mirror-prox"};
  std::vector<std::int64_t> budgets;
  std::vector<std::uint64_t> seeds = {1, 2, 3};
  std::string json_path;
  std::string csv_path;
  long max_inner = 100'000'000;
};

int run_bench(const BenchArgs& args) {
  std::vector<vrgames::SparseMatrix> matrices;
  matrices.reserve(args.inputs.size());
  for (const std::string& path : args.inputs) {
    try {
      matrices.push_back(vrgames::load_matrix_market_file(path));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitIo;
    }
  }

  try {
    const vrgames::SetupKind kind = parse_setup(args.setup);
    std::vector<vrgames::BenchInstance> instances;
    for (size_t i = 0; i < matrices.size(); ++i)
      instances.push_back({args.inputs[i], &matrices[i], make_setup(kind, matrices[i])});

    std::vector<vrgames::BenchMethod> methods;
    for (const std::string& name : args.methods) {
      const auto m = vrgames::bench_method_from_name(name);
      if (!m) throw std::invalid_argument("unknown method '" + name + "'");
      methods.push_back(*m);
    }

    vrgames::BenchmarkOptions opts;
    opts.epsilon = args.epsilon;
    opts.max_total_inner_steps = args.max_inner;
    const vrgames::BenchmarkResult result =
        vrgames::run_benchmark(instances, methods, args.budgets, args.seeds, opts);

    for (const std::string& notice : result.notices) std::cerr << "notice: " << notice << "\n";
    if (!args.json_path.empty()) {
      std::ofstream out(args.json_path);
      if (!out) throw std::runtime_error("cannot open '" + args.json_path + "'");
      vrgames::write_benchmark_json(out, result);
    }
    if (!args.csv_path.empty()) {
      std::ofstream out(args.csv_path);
      if (!out) throw std::runtime_error("cannot open '" + args.csv_path + "'");
      vrgames::write_benchmark_csv(out, result);
    } else {
      vrgames::write_benchmark_csv(std::cout, result);
    }
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

struct GenArgs {
  long rows = 4;
  long cols = 4;
  double density = 1.0;
  std::string dist = "uniform";
  double param_a = -1.0;
  double param_b = 1.0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_path;
};

int run_gen(const GenArgs& args) {
  try {
    vrgames::GeneratorParams p;
    p.rows = args.rows;
    p.cols = args.cols;
    p.density = args.density;
    p.param_a = args.param_a;
    p.param_b = args.param_b;
    p.seed = args.seed_given ? args.seed : default_seed();
    if (args.dist == "uniform") {
      p.dist = vrgames::ValueDist::Uniform;
    } else if (args.dist == "gaussian") {
      p.dist = vrgames::ValueDist::Gaussian;
    } else if (args.dist == "pm1") {
      p.dist = vrgames::ValueDist::PlusMinus;
      p.param_a = std::abs(p.param_a);
    } else {
      throw std::invalid_argument("unknown distribution '" + args.dist + "'");
    }
    const vrgames::SparseMatrix a = vrgames::generate_random(p);
    if (args.out_path.empty()) {
      vrgames::save_matrix_market(std::cout, a);
    } else {
      vrgames::save_matrix_market_file(args.out_path, a);
    }
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

struct GapArgs {
  std::string input;
  std::string point_path;
  std::string setup = "l1l1";
  std::optional<double> mu_x, mu_y;
};

int run_gap(const GapArgs& args) {
  vrgames::SparseMatrix a;
  vrgames::Point z;
  try {
    a = vrgames::load_matrix_market_file(args.input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  try {
    const vrgames::SetupKind kind = parse_setup(args.setup);
    z = vrgames::load_point_json_file(args.point_path, kind);
    const vrgames::SetupDescriptor setup = make_setup(kind, a);
    std::optional<vrgames::CompositeTerm> composite;
    if (args.mu_x || args.mu_y)
      composite = vrgames::CompositeTerm{args.mu_x.value_or(0.0), args.mu_y.value_or(0.0)};
    const double gap = vrgames::duality_gap(setup, a, z,
                                            composite ? &*composite : nullptr);
    std::printf("%.12f\n", gap);
    return kExitOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bilinear saddle-point solver: variance-reduced extragradient "
               "methods, baselines, and duality-gap tooling"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a game instance");
  solve_cmd->add_option("input", solve_args.input, "MatrixMarket .mtx instance")->required();
  solve_cmd->add_option("--setup", solve_args.setup, "domain setup: l1l1, l2l1, l2l2");
  solve_cmd->add_option("--eps", solve_args.epsilon, "target duality gap")->required();
  solve_cmd->add_option("--estimator", solve_args.estimator, "gradient estimator variant");
  solve_cmd->add_flag("--theorem-mode", solve_args.theorem_mode,
                      "lock parameters to the defaults and disable early stopping");
  solve_cmd->add_flag("--restarted", solve_args.restarted, "use the restarted inner loop");
  solve_cmd->add_option("--seed", solve_args.seed, "RNG seed (default: VRGAMES_SEED or 0)")
      ->each([&solve_args](const std::string&) { solve_args.seed_given = true; });
  solve_cmd->add_option("--out", solve_args.report_path, "write the solve report (JSON)");
  solve_cmd->add_option("--trace", solve_args.trace_path, "write the gap trace (CSV)");
  solve_cmd->add_option("--point-out", solve_args.point_path, "write the final point (JSON)");
  solve_cmd->add_option("--alpha", solve_args.alpha, "override alpha");
  solve_cmd->add_option("--eta", solve_args.eta, "override eta");
  solve_cmd->add_option("--tau", solve_args.tau, "override the clipping threshold");
  solve_cmd->add_option("--T", solve_args.t_count, "override the inner iteration count");
  solve_cmd->add_option("--K", solve_args.k_count, "override the outer iteration count");
  solve_cmd->add_option("--restart-phases", solve_args.restart_phases,
                        "override the restarted-oracle phase count");
  solve_cmd->add_option("--gap-every", solve_args.gap_every, "gap trace cadence (0 = off)");
  solve_cmd->add_option("--mu-x", solve_args.mu_x, "composite strong convexity in x");
  solve_cmd->add_option("--mu-y", solve_args.mu_y, "composite strong concavity in y");
  solve_cmd->add_option("--max-inner", solve_args.max_inner, "combined inner-step cap");

  BenchArgs bench_args;
  CLI::App* bench_cmd = app.add_subcommand("bench", "compare methods on instances");
  bench_cmd->add_option("inputs", bench_args.inputs, "MatrixMarket instances")->required();
  bench_cmd->add_option("--setup", bench_args.setup, "domain setup");
  bench_cmd->add_option("--eps", bench_args.epsilon, "target duality gap");
  bench_cmd->add_option("--methods", bench_args.methods, "vr, mirror-prox, smd")
      ->delimiter(',');
  bench_cmd->add_option("--budgets", bench_args.budgets, "work budgets (coordinate touches)")
      ->delimiter(',')
      ->required();
  bench_cmd->add_option("--seeds", bench_args.seeds, "seeds")->delimiter(',');
  bench_cmd->add_option("--out", bench_args.json_path, "write BenchmarkResult (JSON)");
  bench_cmd->add_option("--csv", bench_args.csv_path, "write budget samples (CSV)");
  bench_cmd->add_option("--max-inner", bench_args.max_inner, "combined inner-step cap");

  GenArgs gen_args;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a random instance");
  gen_cmd->add_option("--rows,-m", gen_args.rows, "row count")->required();
  gen_cmd->add_option("--cols,-n", gen_args.cols, "column count")->required();
  gen_cmd->add_option("--density", gen_args.density, "nonzero density in (0,1]");
  gen_cmd->add_option("--dist", gen_args.dist, "uniform, gaussian, pm1");
  gen_cmd->add_option("--param-a", gen_args.param_a, "distribution parameter a");
  gen_cmd->add_option("--param-b", gen_args.param_b, "distribution parameter b");
  gen_cmd->add_option("--seed", gen_args.seed, "RNG seed (default: VRGAMES_SEED or 0)")
      ->each([&gen_args](const std::string&) { gen_args.seed_given = true; });
  gen_cmd->add_option("--out", gen_args.out_path, "output .mtx path (default stdout)");

  GapArgs gap_args;
  CLI::App* gap_cmd = app.add_subcommand("gap", "duality gap of a point file");
  gap_cmd->add_option("input", gap_args.input, "MatrixMarket .mtx instance")->required();
  gap_cmd->add_option("--point", gap_args.point_path, "point file (JSON with x, y arrays)")
      ->required();
  gap_cmd->add_option("--setup", gap_args.setup, "domain setup");
  gap_cmd->add_option("--mu-x", gap_args.mu_x, "composite coefficient on x");
  gap_cmd->add_option("--mu-y", gap_args.mu_y, "composite coefficient on y");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  if (solve_cmd->parsed()) return run_solve(solve_args);
  if (bench_cmd->parsed()) return run_bench(bench_args);
  if (gen_cmd->parsed()) return run_gen(gen_args);
  if (gap_cmd->parsed()) return run_gap(gap_args);
  return kExitConfig;
}
