#ifndef VRGAMES_ESTIMATORS_HPP
#define VRGAMES_ESTIMATORS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vrgames/geometry.hpp"
#include "vrgames/sampling.hpp"
#include "vrgames/sparse_matrix.hpp"

namespace vrgames {

enum class EstimatorVariant {
  Exact,           // deterministic g(z) = (A^T y, -A x)
  L1L1,            // sampling from the difference, both blocks
  L2L1Basic,       // squared-difference x-block sampling, no clipping
  L2L1Clipped,     // clipped y-block correction (CBB)
  L2L1Oblivious,   // per-row fixed distributions, clipped, dense y output
  L2L2DynamicSq,   // squared-difference sampling on both blocks
  L2L2Factored,    // fixed row/column-norm distributions
  L2L2NormWeighted // norm-times-difference dynamic sampling
};

const char* estimator_name(EstimatorVariant v);
std::optional<EstimatorVariant> estimator_from_name(const std::string& name);
EstimatorVariant default_estimator(SetupKind kind);
bool estimator_is_clipped(EstimatorVariant v);

struct GradientEstimate {
  Vector gx;
  Vector gy;
  std::int64_t work = 0;  // coordinate touches spent producing this estimate
};

/// Reference point, its cached exact gradient, sampling tables and the RNG
/// stream for one recentered estimator. Single-owner (the RNG mutates);
/// distinct states on distinct threads are safe.
class EstimatorState {
 public:
  EstimatorState(const SparseMatrix& a, const SetupDescriptor& setup, Point w0,
                 EstimatorVariant variant, double tau, std::uint64_t seed);

  const SparseMatrix& matrix() const { return *matrix_; }
  const SetupDescriptor& setup() const { return setup_; }
  const Point& center() const { return w0_; }
  const Vector& g0x() const { return g0x_; }
  const Vector& g0y() const { return g0y_; }
  EstimatorVariant variant() const { return variant_; }
  double tau() const { return tau_; }
  Rng& rng() { return rng_; }
  std::int64_t setup_work() const { return setup_work_; }

  const AliasTable& row_table(Index i) const { return row_tables_[i]; }
  const Vector& factored_row_probs() const { return factored_p_; }
  const Vector& factored_col_probs() const { return factored_q_; }

 private:
  const SparseMatrix* matrix_;
  SetupDescriptor setup_;
  Point w0_;
  Vector g0x_, g0y_;
  EstimatorVariant variant_;
  double tau_;
  Rng rng_;
  std::int64_t setup_work_ = 0;            // exact gradient + table builds
  std::vector<AliasTable> row_tables_;     // oblivious variant only
  Vector factored_p_, factored_q_;         // factored variant only
};

/// g(z) = (A^T z.y, -A z.x). Work: nnz(A) per evaluation (this is the unit
/// the runtime model charges per exact gradient or gap evaluation).
GradientEstimate exact_gradient(const SparseMatrix& a, const Point& z);

/// Dispatch on the state's variant.
GradientEstimate estimate(EstimatorState& state, const Point& w);

GradientEstimate estimate_l1l1(EstimatorState& state, const Point& w);
GradientEstimate estimate_l2l1_basic(EstimatorState& state, const Point& w);
GradientEstimate estimate_l2l1_clipped(EstimatorState& state, const Point& w);
GradientEstimate estimate_l2l1_oblivious(EstimatorState& state, const Point& w);
GradientEstimate estimate_l2l2(EstimatorState& state, const Point& w, EstimatorVariant which);

/// One component of a finite-sum saddle problem: a gradient mapping with a
/// declared Lipschitz constant and a per-evaluation work cost.
struct FiniteSumComponent {
  std::function<void(const Point&, Vector&, Vector&)> gradient;
  double lipschitz = 1.0;
  std::int64_t eval_work = 0;
};

struct FiniteSumProblem {
  SetupDescriptor setup;
  std::vector<FiniteSumComponent> components;

  /// p_k = L_k / sum L_k.
  Vector sampling_probs() const;
  double average_lipschitz() const;  // (1/K) sum L_k
  void full_gradient(const Point& z, Vector& gx, Vector& gy) const;
};

GradientEstimate estimate_finite_sum(const FiniteSumProblem& problem, const Point& w0,
                                     const Vector& g_full_x, const Vector& g_full_y,
                                     const Point& w, Rng& rng);

/// Exact moments of an estimator's outcome distribution, obtained by
/// exhaustive enumeration (test oracle). Fields that are not meaningful for
/// a variant (joint dual-norm moments of the per-coordinate oblivious
/// estimator) hold NaN.
struct MomentReport {
  std::int64_t outcome_count = 0;
  double prob_sum = 0.0;
  Vector mean_x, mean_y;            // E g~
  double e_ref_dual_sq = 0.0;       // E |g~ - g0|_*^2
  double max_ref_dual_sq = 0.0;     // max over outcomes |g~ - g0|_*^2
  double e_exact_dual_sq = 0.0;     // E |g~ - g(w)|_*^2
  double e_dx_sq = 0.0;             // E |g~x - g0x|_{block dual}^2
  double max_e_dy_coord_sq = 0.0;   // max_i E (g~y - g0y)_i^2
  double max_abs_dy = 0.0;          // max over outcomes/coords |(g~y - g0y)_i|
  double bias_y_sup = 0.0;          // |E g~y - gy(w)|_inf
};

/// Guard: throws when the outcome space exceeds one million entries.
MomentReport enumerate_moments(const EstimatorState& state, const Point& w);
MomentReport enumerate_moments(const FiniteSumProblem& problem, const Point& w0,
                               const Point& w);

}  // namespace vrgames

#endif  // VRGAMES_ESTIMATORS_HPP
