#include "vrgames/solvers.hpp"

#include <cmath>

#include "vrgames/gap.hpp"

namespace vrgames {

namespace {

bool is_l2l2(EstimatorVariant v) {
  return v == EstimatorVariant::L2L2DynamicSq || v == EstimatorVariant::L2L2Factored ||
         v == EstimatorVariant::L2L2NormWeighted;
}

void check_variant_setup(EstimatorVariant v, SetupKind kind) {
  const bool ok = v == EstimatorVariant::Exact ||
                  (kind == SetupKind::L1L1 && v == EstimatorVariant::L1L1) ||
                  (kind == SetupKind::L2L1 &&
                   (v == EstimatorVariant::L2L1Basic || v == EstimatorVariant::L2L1Clipped ||
                    v == EstimatorVariant::L2L1Oblivious)) ||
                  (kind == SetupKind::L2L2 && is_l2l2(v));
  if (!ok) throw std::invalid_argument("estimator variant does not match the setup");
}

double inner_eta_denominator(EstimatorVariant v) {
  return estimator_is_clipped(v) ? 24.0 : 10.0;
}

}  // namespace

double estimator_constant(const SparseMatrix& a, const SetupDescriptor& s,
                          EstimatorVariant variant) {
  switch (variant) {
    case EstimatorVariant::Exact:
      // Lipschitz constant of the gradient mapping under the setup norm
      // (Frobenius upper-bounds the spectral norm in the all-Euclidean case).
      switch (s.kind) {
        case SetupKind::L1L1: return a.norm_max();
        case SetupKind::L2L1: return a.norm_2_to_inf();
        case SetupKind::L2L2: return a.norm_fro();
      }
      return 0.0;
    case EstimatorVariant::L1L1: return a.norm_max();
    case EstimatorVariant::L2L1Basic: {
      double acc = 0.0;
      for (Index j = 0; j < a.cols(); ++j) {
        const SparseVector c = a.col(j);
        double peak = 0.0;
        for (double v : c.values) peak = std::max(peak, std::abs(v));
        acc += peak * peak;
      }
      return std::sqrt(acc);
    }
    case EstimatorVariant::L2L1Clipped:
    case EstimatorVariant::L2L1Oblivious: return a.norm_2_to_inf();
    case EstimatorVariant::L2L2DynamicSq:
    case EstimatorVariant::L2L2Factored:
    case EstimatorVariant::L2L2NormWeighted: return a.norm_fro();
  }
  return 0.0;
}

SolverConfig default_params(const SetupDescriptor& s, const SparseMatrix& a, double epsilon,
                            std::optional<EstimatorVariant> variant) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const EstimatorVariant v = variant.value_or(default_estimator(s.kind));
  check_variant_setup(v, s.kind);
  const double l = estimator_constant(a, s, v);
  if (l == 0.0) throw TrivialInstanceError("zero matrix: every feasible point is a saddle");

  SolverConfig cfg;
  cfg.kind = s.kind;
  cfg.variant = v;
  cfg.epsilon = epsilon;
  const double th = theta(s);
  cfg.alpha = std::max(epsilon / th,
                       l * std::sqrt(static_cast<double>(s.n + s.m) /
                                     static_cast<double>(a.nnz())));
  cfg.eta = cfg.alpha / (inner_eta_denominator(v) * l * l);
  cfg.inner_iterations = static_cast<long>(std::ceil(4.0 / (cfg.eta * cfg.alpha)));
  cfg.outer_iterations = static_cast<long>(std::ceil(th * cfg.alpha / epsilon));
  cfg.tau = estimator_is_clipped(v) ? 1.0 / (cfg.eta * s.rho)
                                    : std::numeric_limits<double>::infinity();
  return cfg;
}

Point inner_loop(EstimatorState& state, const Point& w0, double alpha, double eta, long t_count,
                 const CompositeTerm* composite, WorkCounters& work) {
  if (!(alpha > 0.0) || !(eta > 0.0) || t_count < 1)
    throw std::invalid_argument("inner_loop: alpha, eta, T must be positive");
  const SetupDescriptor& s = state.setup();

  const Point center = uniform_center(s);
  BlockAnchor fold{};
  const bool has_composite = composite != nullptr && !composite->empty();
  if (has_composite) fold = composite_fold(s, *composite, center);

  Point prev = w0;
  Vector avg_x = Vector::Zero(s.n), avg_y = Vector::Zero(s.m);
  for (long t = 1; t <= t_count; ++t) {
    const GradientEstimate g = estimate(state, prev);
    work.estimator += g.work;
    const WeightedPoint anchors[2] = {{&w0, 0.5 * alpha}, {&prev, 1.0 / eta}};
    Point next = mirror_step(s, g.gx, g.gy, anchors, has_composite ? &fold : nullptr);
    work.step += s.n + s.m;
    if (!next.x.allFinite() || !next.y.allFinite())
      throw NumericalFailure("inner_loop: non-finite iterate", t);
    avg_x += (next.x - avg_x) / static_cast<double>(t);
    avg_y += (next.y - avg_y) / static_cast<double>(t);
    work.step += s.n + s.m;
    prev = std::move(next);
  }
  Point out;
  out.kind = s.kind;
  out.x = std::move(avg_x);
  out.y = std::move(avg_y);
  return out;
}

Point restarted_inner_loop(const RecenterFn& recenter, const Point& w0, double alpha,
                           double eta, long t_count, long n_phases,
                           const CompositeTerm* composite, WorkCounters& work,
                           Rng& phase_rng, std::int64_t* steps_run) {
  if (n_phases < 1) throw std::invalid_argument("restarted_inner_loop: N must be >= 1");
  if (!(alpha > 0.0) || !(eta > 0.0) || t_count < 1)
    throw std::invalid_argument("restarted_inner_loop: alpha, eta, T must be positive");

  Point hat = w0;
  for (long n = 1; n <= n_phases; ++n) {
    EstimatorState state = recenter(hat);
    work.gradient += state.setup_work();
    const SetupDescriptor& s = state.setup();

    const Point center = uniform_center(s);
    BlockAnchor fold{};
    const bool has_composite = composite != nullptr && !composite->empty();
    if (has_composite) fold = composite_fold(s, *composite, center);

    const long t_hat = static_cast<long>(phase_rng.next_index_one_based(t_count));
    if (steps_run != nullptr) *steps_run += t_hat;
    Point prev = hat;
    for (long t = 1; t <= t_hat; ++t) {
      const GradientEstimate g = estimate(state, prev);
      work.estimator += g.work;
      const WeightedPoint anchors[2] = {{&w0, alpha}, {&prev, 1.0 / eta}};
      Point next = mirror_step(s, g.gx, g.gy, anchors, has_composite ? &fold : nullptr);
      work.step += s.n + s.m;
      if (!next.x.allFinite() || !next.y.allFinite())
        throw NumericalFailure("restarted_inner_loop: non-finite iterate", t);
      prev = std::move(next);
    }
    hat = std::move(prev);
  }
  return hat;
}

namespace {

struct LoopState {
  SolveReport report;
  Vector avg_x, avg_y;
};

void record_trace(SolveReport& report, const SetupDescriptor& s, const SparseMatrix& a,
                  long k, const Point& gap_point, const Point& div_point,
                  const OuterOptions& opts, WorkCounters& work) {
  TraceRecord rec;
  rec.k = k;
  rec.work = work.algorithmic();
  rec.gap = duality_gap(s, a, gap_point, opts.composite);
  work.gap += a.nnz();
  if (opts.reference != nullptr) {
    rec.divergence_to_reference = bregman(s, div_point, *opts.reference);
  }
  report.trace.push_back(rec);
}

}  // namespace

SolveReport outer_loop(const OracleFn& oracle, const SparseMatrix& a,
                       const SetupDescriptor& s, double alpha, long k_count,
                       const OuterOptions& opts) {
  if (!(alpha > 0.0) || k_count < 1)
    throw std::invalid_argument("outer_loop: alpha and K must be positive");

  SolveReport report;
  WorkCounters& work = report.work;
  Point z = opts.start != nullptr ? *opts.start : uniform_center(s);
  Vector avg_x = Vector::Zero(s.n), avg_y = Vector::Zero(s.m);
  Point running;
  running.kind = s.kind;

  for (long k = 1; k <= k_count; ++k) {
    const Point z_half = oracle(z, work);
    const GradientEstimate g = exact_gradient(a, z_half);
    work.gradient += g.work;
    const WeightedPoint anchors[1] = {{&z, alpha}};
    z = mirror_step(s, g.gx, g.gy, anchors);
    work.step += s.n + s.m;

    avg_x += (z_half.x - avg_x) / static_cast<double>(k);
    avg_y += (z_half.y - avg_y) / static_cast<double>(k);
    work.step += s.n + s.m;
    report.outer_iterations_run = k;

    const bool cadence = opts.gap_check_every > 0 &&
                         (k % opts.gap_check_every == 0 || k == k_count);
    if (cadence) {
      running.x = avg_x;
      running.y = avg_y;
      record_trace(report, s, a, k, running, running, opts, work);
      if (opts.early_stop && report.trace.back().gap <= opts.epsilon) break;
    }
  }

  report.final_point.kind = s.kind;
  report.final_point.x = std::move(avg_x);
  report.final_point.y = std::move(avg_y);
  if (!report.trace.empty() && report.trace.back().k == report.outer_iterations_run) {
    report.measured_gap = report.trace.back().gap;
  } else {
    report.measured_gap = duality_gap(s, a, report.final_point, opts.composite);
    work.gap += a.nnz();
  }
  report.converged = report.measured_gap <= opts.epsilon;
  return report;
}

SolveReport outer_loop_strongly_monotone(const OracleFn& oracle, const SparseMatrix& a,
                                         const SetupDescriptor& s,
                                         const CompositeTerm& composite,
                                         const StrongConfig& strong, double alpha,
                                         long k_count, const OuterOptions& opts) {
  if (!(strong.mu() > 0.0))
    throw std::invalid_argument(
        "outer_loop_strongly_monotone: mu must be positive (use outer_loop)");
  if (!(alpha > 0.0) || k_count < 1)
    throw std::invalid_argument("outer_loop_strongly_monotone: alpha and K must be positive");

  const double mu = strong.mu();
  SolveReport report;
  WorkCounters& work = report.work;
  Point z = opts.start != nullptr ? *opts.start : uniform_center(s);

  OuterOptions gap_opts = opts;
  gap_opts.composite = &composite;

  for (long k = 1; k <= k_count; ++k) {
    const Point z_half = oracle(z, work);
    GradientEstimate g = exact_gradient(a, z_half);
    work.gradient += g.work;
    const auto [cx, cy] = composite_gradient(s, composite, z_half);
    g.gx += cx;
    g.gy += cy;
    const WeightedPoint anchors[2] = {{&z, alpha}, {&z_half, mu}};
    z = mirror_step(s, g.gx, g.gy, anchors);
    work.step += s.n + s.m;
    report.outer_iterations_run = k;

    const bool cadence = opts.gap_check_every > 0 &&
                         (k % opts.gap_check_every == 0 || k == k_count);
    if (cadence) {
      record_trace(report, s, a, k, z, z, gap_opts, work);
      if (opts.early_stop && report.trace.back().gap <= opts.epsilon) break;
    }
  }

  report.final_point = z;  // last iterate, not the average
  if (!report.trace.empty() && report.trace.back().k == report.outer_iterations_run) {
    report.measured_gap = report.trace.back().gap;
  } else {
    report.measured_gap = duality_gap(s, a, report.final_point, &composite);
    work.gap += a.nnz();
  }
  report.converged = report.measured_gap <= opts.epsilon;
  return report;
}

namespace {

// Domain diameter in the setup norm: every block (simplex in l1, ball in l2)
// has diameter 2, so |z - z'|^2 <= 8.
double domain_diameter(const SetupDescriptor& s) {
  return std::sqrt(s.rho * 4.0 + 4.0 / s.rho);
}

// Bound on |g(z)|_* over the domain, plus the composite contribution.
double gradient_bound(const SparseMatrix& a, const SetupDescriptor& s,
                      const CompositeTerm& composite) {
  const double l = estimator_constant(a, s, EstimatorVariant::Exact);
  double g = std::sqrt(2.0) * l;
  // lambda * r subgradients: lambda on ball blocks, lambda (1 + |log floor|)
  // on simplex blocks (the log-domain floor keeps them finite).
  if (composite.lambda_x > 0.0)
    g += composite.lambda_x * (x_is_simplex(s.kind) ? 701.0 : 1.0);
  if (composite.lambda_y > 0.0)
    g += composite.lambda_y * (y_is_simplex(s.kind) ? 701.0 : 1.0);
  return g;
}

long default_restart_phases(const SparseMatrix& a, const SetupDescriptor& s,
                            const SolverConfig& cfg, const CompositeTerm& composite) {
  const double l = estimator_constant(a, s, cfg.variant);
  const double g = gradient_bound(a, s, composite);
  const double d = domain_diameter(s);
  const double eps_oracle = 0.5 * cfg.epsilon;
  const double n = 1.0 + 2.0 * std::log2(std::max(2.0, g * (g + 2.0 * l * d) /
                                                           (cfg.alpha * eps_oracle)));
  return static_cast<long>(std::ceil(n));
}

}  // namespace

SolveReport solve(const SparseMatrix& a, SetupDescriptor s, double epsilon,
                  const SolveOptions& options) {
  if (a.rows() != s.m || a.cols() != s.n)
    throw std::invalid_argument("solve: matrix and setup dimensions disagree");
  if (options.strong.has_value()) {
    if (!(options.strong->mu() > 0.0))
      throw std::invalid_argument("solve: strong config needs mu_x, mu_y > 0");
    if (options.composite.empty())
      throw std::invalid_argument(
          "solve: the strongly monotone path needs a composite term");
    s.rho = options.strong->rho();
  } else if (!options.composite.empty()) {
    throw std::invalid_argument(
        "solve: composite terms are supported on the strongly monotone path");
  }

  SolverConfig cfg = default_params(s, a, epsilon, options.variant);
  cfg.seed = options.seed;
  cfg.theorem_mode = options.theorem_mode;
  cfg.use_restarted_oracle = options.use_restarted_oracle;
  cfg.max_total_inner_steps = options.max_total_inner_steps;

  const bool has_override = options.alpha || options.eta || options.tau ||
                            options.inner_iterations || options.outer_iterations;
  if (options.theorem_mode) {
    if (has_override)
      throw std::invalid_argument("solve: theorem mode locks alpha/eta/T/K/tau");
    cfg.early_stop = false;
    cfg.gap_check_every = options.gap_check_every.value_or(0);
  } else {
    // Overrides cascade: dependent quantities are derived from the
    // overridden values unless themselves overridden.
    const double l = estimator_constant(a, s, cfg.variant);
    if (options.alpha) {
      if (!(*options.alpha > 0.0)) throw std::invalid_argument("solve: alpha must be > 0");
      cfg.alpha = *options.alpha;
      cfg.eta = cfg.alpha / (inner_eta_denominator(cfg.variant) * l * l);
      cfg.inner_iterations = static_cast<long>(std::ceil(4.0 / (cfg.eta * cfg.alpha)));
      cfg.outer_iterations = static_cast<long>(std::ceil(theta(s) * cfg.alpha / epsilon));
    }
    if (options.eta) {
      if (!(*options.eta > 0.0)) throw std::invalid_argument("solve: eta must be > 0");
      cfg.eta = *options.eta;
      cfg.inner_iterations = static_cast<long>(std::ceil(4.0 / (cfg.eta * cfg.alpha)));
    }
    if (estimator_is_clipped(cfg.variant)) cfg.tau = 1.0 / (cfg.eta * s.rho);
    if (options.inner_iterations) {
      if (*options.inner_iterations < 1) throw std::invalid_argument("solve: T must be >= 1");
      cfg.inner_iterations = *options.inner_iterations;
    }
    if (options.outer_iterations) {
      if (*options.outer_iterations < 1) throw std::invalid_argument("solve: K must be >= 1");
      cfg.outer_iterations = *options.outer_iterations;
    }
    if (options.tau) {
      if (!(*options.tau > 0.0)) throw std::invalid_argument("solve: tau must be > 0");
      cfg.tau = *options.tau;
    }
    cfg.early_stop = options.early_stop.value_or(true);
    cfg.gap_check_every = options.gap_check_every.value_or(1);
  }
  if (options.use_restarted_oracle) {
    // Phase step size: 8 L^2 denominator for centered estimators; the
    // clipped variants keep their own larger safety constant.
    const double denom = estimator_is_clipped(cfg.variant) ? 24.0 : 8.0;
    const double l = estimator_constant(a, s, cfg.variant);
    cfg.eta = cfg.alpha / (denom * l * l);
    cfg.inner_iterations = static_cast<long>(std::ceil(4.0 / (cfg.eta * cfg.alpha)));
    if (estimator_is_clipped(cfg.variant)) cfg.tau = 1.0 / (cfg.eta * s.rho);
    cfg.restart_phases = options.restart_phases.value_or(
        default_restart_phases(a, s, cfg, options.composite));
  }

  const long phases = cfg.use_restarted_oracle ? cfg.restart_phases : 1;
  if (cfg.outer_iterations * cfg.inner_iterations * phases > cfg.max_total_inner_steps)
    throw BudgetError("solve: K*T exceeds the combined inner-step cap (" +
                      std::to_string(cfg.outer_iterations) + " x " +
                      std::to_string(cfg.inner_iterations * phases) + " > " +
                      std::to_string(cfg.max_total_inner_steps) + ")");

  Rng master(cfg.seed);
  const CompositeTerm* comp = options.composite.empty() ? nullptr : &options.composite;
  std::int64_t inner_steps = 0;

  OracleFn oracle = [&](const Point& z, WorkCounters& work) -> Point {
    if (cfg.use_restarted_oracle) {
      RecenterFn recenter = [&](const Point& c) {
        return EstimatorState(a, s, c, cfg.variant, cfg.tau, master.next_u64());
      };
      Rng phase_rng(master.next_u64());
      return restarted_inner_loop(recenter, z, cfg.alpha, cfg.eta, cfg.inner_iterations,
                                  cfg.restart_phases, comp, work, phase_rng, &inner_steps);
    }
    EstimatorState state(a, s, z, cfg.variant, cfg.tau, master.next_u64());
    work.gradient += state.setup_work();
    inner_steps += cfg.inner_iterations;
    return inner_loop(state, z, cfg.alpha, cfg.eta, cfg.inner_iterations, comp, work);
  };

  OuterOptions outer_opts;
  outer_opts.epsilon = epsilon;
  outer_opts.gap_check_every = cfg.gap_check_every;
  outer_opts.early_stop = cfg.early_stop;
  outer_opts.reference = options.reference;
  outer_opts.composite = comp;
  outer_opts.start = options.start;

  SolveReport report;
  if (options.strong.has_value()) {
    report = outer_loop_strongly_monotone(oracle, a, s, options.composite, *options.strong,
                                          cfg.alpha, cfg.outer_iterations, outer_opts);
  } else {
    report = outer_loop(oracle, a, s, cfg.alpha, cfg.outer_iterations, outer_opts);
  }
  report.inner_steps_run = inner_steps;
  report.config = cfg;
  return report;
}

}  // namespace vrgames
