#ifndef VRGAMES_BASELINES_HPP
#define VRGAMES_BASELINES_HPP

#include "vrgames/solvers.hpp"

namespace vrgames {

struct BaselineOptions {
  long gap_check_every = 1;  // 0 = final measurement only
  bool early_stop = true;
};

/// Deterministic mirror-prox with alpha = L and exact gradients: two mirror
/// steps per iteration, averaged half iterates. Stops at gap <= epsilon or
/// k_max iterations (non-converged flag in the latter case).
SolveReport mirror_prox_baseline(const SparseMatrix& a, const SetupDescriptor& s,
                                 double epsilon, long k_max,
                                 const BaselineOptions& opts = {});

/// One-sample unbiased estimate of g(z) drawn from the current iterate:
/// row i ~ z.y gives A_i: for the x part, column j ~ z.x gives -A_:j for the
/// y part. Both blocks of z must be strictly positive simplex points.
GradientEstimate smd_one_sample_estimate(const SparseMatrix& a, const Point& z, Rng& rng);

/// Reference baseline: plain stochastic mirror descent with the one-sample
/// estimator above, step size sqrt(Theta)/(L sqrt(t)), averaged iterates.
/// Simplex-simplex domains only.
SolveReport sublinear_smd_baseline(const SparseMatrix& a, const SetupDescriptor& s,
                                   double epsilon, long t_max, std::uint64_t seed,
                                   const BaselineOptions& opts = {});

}  // namespace vrgames

#endif  // VRGAMES_BASELINES_HPP
