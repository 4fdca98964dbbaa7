#ifndef VRGAMES_SOLVERS_HPP
#define VRGAMES_SOLVERS_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "vrgames/estimators.hpp"
#include "vrgames/geometry.hpp"

namespace vrgames {

/// Every stored value of the instance is zero, so any feasible point is a
/// saddle point and the step-size formulas divide by zero.
class TrivialInstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested iteration counts exceed the configured hard cap.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, long iteration)
      : std::runtime_error(what + " at inner iteration " + std::to_string(iteration)),
        iteration_(iteration) {}
  long iteration() const { return iteration_; }

 private:
  long iteration_;
};

struct WorkCounters {
  std::int64_t gradient = 0;   // exact gradient evaluations (nnz each)
  std::int64_t estimator = 0;  // stochastic estimate construction
  std::int64_t step = 0;       // mirror steps and iterate averaging
  std::int64_t gap = 0;        // diagnostic gap evaluations (nnz each)

  std::int64_t algorithmic() const { return gradient + estimator + step; }
  std::int64_t total() const { return algorithmic() + gap; }
  WorkCounters& operator+=(const WorkCounters& o) {
    gradient += o.gradient;
    estimator += o.estimator;
    step += o.step;
    gap += o.gap;
    return *this;
  }
};

struct TraceRecord {
  long k = 0;
  std::int64_t work = 0;  // algorithmic work when recorded (gap evals excluded)
  double gap = std::numeric_limits<double>::quiet_NaN();
  double divergence_to_reference = std::numeric_limits<double>::quiet_NaN();
};

struct SolverConfig {
  SetupKind kind = SetupKind::L1L1;
  EstimatorVariant variant = EstimatorVariant::L1L1;
  double alpha = 0.0;
  double eta = 0.0;
  double tau = std::numeric_limits<double>::infinity();
  double epsilon = 0.0;
  long inner_iterations = 0;  // T
  long outer_iterations = 0;  // K
  std::uint64_t seed = 0;
  long gap_check_every = 1;  // 0 = off
  bool early_stop = true;
  bool theorem_mode = false;
  bool use_restarted_oracle = false;
  long restart_phases = 0;
  long max_total_inner_steps = 10'000'000;
};

struct StrongConfig {
  double mu_x = 0.0;
  double mu_y = 0.0;
  long restart_phases = 0;  // phase count when the restarted oracle is used

  double rho() const { return std::sqrt(mu_x / mu_y); }
  double mu() const { return std::sqrt(mu_x * mu_y); }
};

struct SolveReport {
  Point final_point;
  double measured_gap = std::numeric_limits<double>::quiet_NaN();
  std::vector<TraceRecord> trace;
  WorkCounters work;
  long outer_iterations_run = 0;
  std::int64_t inner_steps_run = 0;
  bool converged = false;
  SolverConfig config;
};

/// Estimator constant L for the variant on this matrix (the matrix norm the
/// variance bound carries).
double estimator_constant(const SparseMatrix& a, const SetupDescriptor& s,
                          EstimatorVariant variant);

/// Theorem parameters: alpha = max{eps/Theta, L sqrt((n+m)/nnz)},
/// eta = alpha / (10 L^2) (24 L^2 for the clipped variants),
/// T = ceil(4/(eta alpha)), K = ceil(Theta alpha / eps), tau = 1/(eta rho).
/// Throws TrivialInstanceError when L = 0.
SolverConfig default_params(const SetupDescriptor& s, const SparseMatrix& a, double epsilon,
                            std::optional<EstimatorVariant> variant = std::nullopt);

/// Regularized stochastic mirror descent around the estimator's center:
///   w_t = argmin <g~(w_{t-1}), w> + (alpha/2) V_{w0}(w) + (1/eta) V_{w_{t-1}}(w)
/// returning the uniform iterate average (simplex blocks averaged as
/// probabilities). The optional composite term joins each step objective.
Point inner_loop(EstimatorState& state, const Point& w0, double alpha, double eta, long t_count,
                 const CompositeTerm* composite, WorkCounters& work);

using RecenterFn = std::function<EstimatorState(const Point&)>;

/// Restarted inner loop: N phases, each re-centering the estimator at the
/// previous phase output, regularizing with weight alpha toward the original
/// w0, and stopping at a uniformly drawn truncation step. Returns the last
/// iterate of the final phase.
Point restarted_inner_loop(const RecenterFn& recenter, const Point& w0, double alpha,
                           double eta, long t_count, long n_phases,
                           const CompositeTerm* composite, WorkCounters& work, Rng& phase_rng,
                           std::int64_t* steps_run = nullptr);

using OracleFn = std::function<Point(const Point&, WorkCounters&)>;

struct OuterOptions {
  double epsilon = 0.0;
  long gap_check_every = 1;  // 0 = off
  bool early_stop = false;
  const Point* reference = nullptr;  // when set, traces bregman(z_k, reference)
  const CompositeTerm* composite = nullptr;  // used by the gap metric only
  const Point* start = nullptr;  // default: argmin r (the uniform center)
};

/// Extragradient outer loop: z_{k-1/2} from the oracle, then
/// z_k = argmin <g(z_{k-1/2}), z> + alpha V_{z_{k-1}}(z); returns the
/// running average of the half iterates.
SolveReport outer_loop(const OracleFn& oracle, const SparseMatrix& a,
                       const SetupDescriptor& s, double alpha, long k_count,
                       const OuterOptions& opts = {});

/// Linearly convergent variant for mu-strongly monotone composite problems:
/// the extragradient step gains a mu-weighted divergence anchored at the
/// half iterate, and the LAST iterate is returned.
SolveReport outer_loop_strongly_monotone(const OracleFn& oracle, const SparseMatrix& a,
                                         const SetupDescriptor& s,
                                         const CompositeTerm& composite,
                                         const StrongConfig& strong, double alpha,
                                         long k_count, const OuterOptions& opts = {});

struct SolveOptions {
  std::optional<EstimatorVariant> variant;
  std::uint64_t seed = 0;
  bool theorem_mode = false;
  std::optional<bool> early_stop;
  std::optional<long> gap_check_every;
  std::optional<double> alpha;
  std::optional<double> eta;
  std::optional<double> tau;
  std::optional<long> inner_iterations;
  std::optional<long> outer_iterations;
  bool use_restarted_oracle = false;
  std::optional<long> restart_phases;
  CompositeTerm composite;
  std::optional<StrongConfig> strong;
  const Point* reference = nullptr;
  const Point* start = nullptr;  // default: argmin r
  long max_total_inner_steps = 10'000'000;
};

/// Full solver: default_params + chosen estimator + inner loop (or restarted
/// inner loop) + outer loop (or its strongly monotone variant).
/// Deterministic given the seed.
SolveReport solve(const SparseMatrix& a, SetupDescriptor s, double epsilon,
                  const SolveOptions& options = {});

}  // namespace vrgames

#endif  // VRGAMES_SOLVERS_HPP
