// Scratch probe for the 512x512 benchmark comparison (not part of the suite).
#include <chrono>
#include <cstdio>

#include "vrgames/baselines.hpp"
#include "vrgames/gap.hpp"
#include "vrgames/solvers.hpp"

using namespace vrgames;

int main(int argc, char** argv) {
  const Index dim = argc > 1 ? std::atol(argv[1]) : 128;
  GeneratorParams gp;
  gp.rows = dim;
  gp.cols = dim;
  gp.density = 1.0;
  gp.seed = 2024;
  const SparseMatrix a = generate_random(gp);
  const SetupDescriptor s{SetupKind::L1L1, dim, dim};
  const double l = a.norm_max();
  const double eps = 0.01 * l;
  std::printf("dim=%lld nnz=%lld L=%.4f eps=%.5f theta=%.3f\n", (long long)dim,
              (long long)a.nnz(), l, eps, theta(s));

  const SolverConfig cfg = default_params(s, a, eps);
  std::printf("theorem: alpha=%.5f eta=%.6f T=%ld K=%ld\n", cfg.alpha, cfg.eta,
              cfg.inner_iterations, cfg.outer_iterations);

  auto t0 = std::chrono::steady_clock::now();
  BaselineOptions bo;
  bo.gap_check_every = 1;
  const SolveReport mp = mirror_prox_baseline(a, s, eps, 100000, bo);
  auto t1 = std::chrono::steady_clock::now();
  std::printf("mirror-prox: gap=%.6f K=%ld work=%lld converged=%d (%.1fs)\n",
              mp.measured_gap, mp.outer_iterations_run,
              (long long)mp.work.algorithmic(), mp.converged ? 1 : 0,
              std::chrono::duration<double>(t1 - t0).count());

  for (double alpha_scale : {1.0, 2.0, 4.0}) {
    SolveOptions so;
    so.seed = 1;
    so.early_stop = true;
    so.gap_check_every = 1;
    so.max_total_inner_steps = 1000000000;
    if (alpha_scale != 1.0) so.alpha = cfg.alpha * alpha_scale;
    auto t2 = std::chrono::steady_clock::now();
    const SolveReport vr = solve(a, s, eps, so);
    auto t3 = std::chrono::steady_clock::now();
    std::printf(
        "vr(a=%.3fx): gap=%.6f K=%ld/%ld T=%ld work=%lld conv=%d ratio_vs_mp=%.3f "
        "(%.1fs)\n",
        alpha_scale, vr.measured_gap, vr.outer_iterations_run,
        vr.config.outer_iterations, vr.config.inner_iterations,
        (long long)vr.work.algorithmic(), vr.converged ? 1 : 0,
        (double)vr.work.algorithmic() / (double)mp.work.algorithmic(),
        std::chrono::duration<double>(t3 - t2).count());
  }
  return 0;
}
