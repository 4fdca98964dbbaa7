#include "vrgames/baselines.hpp"

#include <cmath>

#include "vrgames/gap.hpp"
#include "vrgames/sampling.hpp"

namespace vrgames {

SolveReport mirror_prox_baseline(const SparseMatrix& a, const SetupDescriptor& s,
                                 double epsilon, long k_max, const BaselineOptions& opts) {
  const double l = estimator_constant(a, s, EstimatorVariant::Exact);
  if (l == 0.0) throw TrivialInstanceError("zero matrix: every feasible point is a saddle");
  if (k_max < 1) throw std::invalid_argument("mirror_prox: k_max must be >= 1");

  SolveReport report;
  report.config.kind = s.kind;
  report.config.variant = EstimatorVariant::Exact;
  report.config.alpha = l;
  report.config.epsilon = epsilon;
  report.config.outer_iterations = k_max;
  WorkCounters& work = report.work;

  Point z = uniform_center(s);
  Vector avg_x = Vector::Zero(s.n), avg_y = Vector::Zero(s.m);
  Point running;
  running.kind = s.kind;

  for (long k = 1; k <= k_max; ++k) {
    const GradientEstimate gz = exact_gradient(a, z);
    work.gradient += gz.work;
    const WeightedPoint half_anchor[1] = {{&z, l}};
    const Point w = mirror_step(s, gz.gx, gz.gy, half_anchor);
    const GradientEstimate gw = exact_gradient(a, w);
    work.gradient += gw.work;
    const WeightedPoint full_anchor[1] = {{&z, l}};
    z = mirror_step(s, gw.gx, gw.gy, full_anchor);
    work.step += 2 * (s.n + s.m);

    avg_x += (w.x - avg_x) / static_cast<double>(k);
    avg_y += (w.y - avg_y) / static_cast<double>(k);
    work.step += s.n + s.m;
    report.outer_iterations_run = k;

    const bool cadence = opts.gap_check_every > 0 &&
                         (k % opts.gap_check_every == 0 || k == k_max);
    if (cadence) {
      running.x = avg_x;
      running.y = avg_y;
      TraceRecord rec;
      rec.k = k;
      rec.work = work.algorithmic();
      rec.gap = duality_gap(s, a, running);
      work.gap += a.nnz();
      report.trace.push_back(rec);
      if (opts.early_stop && rec.gap <= epsilon) break;
    }
  }

  report.final_point.kind = s.kind;
  report.final_point.x = std::move(avg_x);
  report.final_point.y = std::move(avg_y);
  if (!report.trace.empty() && report.trace.back().k == report.outer_iterations_run) {
    report.measured_gap = report.trace.back().gap;
  } else {
    report.measured_gap = duality_gap(s, a, report.final_point);
    work.gap += a.nnz();
  }
  report.converged = report.measured_gap <= epsilon;
  return report;
}

GradientEstimate smd_one_sample_estimate(const SparseMatrix& a, const Point& z, Rng& rng) {
  GradientEstimate g;
  g.gx = Vector::Zero(a.cols());
  g.gy = Vector::Zero(a.rows());
  const Index i = sample_weighted(z.y, rng);
  const SparseVector row = a.row(i);
  for (size_t k = 0; k < row.indices.size(); ++k) g.gx[row.indices[k]] = row.values[k];
  const Index j = sample_weighted(z.x, rng);
  const SparseVector col = a.col(j);
  for (size_t k = 0; k < col.indices.size(); ++k) g.gy[col.indices[k]] = -col.values[k];
  g.work = a.cols() + a.rows() + row.nnz() + col.nnz();
  return g;
}

SolveReport sublinear_smd_baseline(const SparseMatrix& a, const SetupDescriptor& s,
                                   double epsilon, long t_max, std::uint64_t seed,
                                   const BaselineOptions& opts) {
  if (s.kind != SetupKind::L1L1)
    throw std::invalid_argument("sublinear baseline covers the simplex-simplex setup only");
  if (t_max < 1) throw std::invalid_argument("smd: t_max must be >= 1");
  // A zero matrix has zero estimates everywhere: any step size keeps the
  // iterates at the center.
  const double l = std::max(estimator_constant(a, s, EstimatorVariant::Exact), 1e-300);

  SolveReport report;
  report.config.kind = s.kind;
  report.config.seed = seed;
  report.config.epsilon = epsilon;
  report.config.inner_iterations = t_max;
  WorkCounters& work = report.work;

  Rng rng(seed);
  Point z = uniform_center(s);
  Vector avg_x = Vector::Zero(s.n), avg_y = Vector::Zero(s.m);
  Point running;
  running.kind = s.kind;
  const double th = theta(s);

  for (long t = 1; t <= t_max; ++t) {
    const GradientEstimate g = smd_one_sample_estimate(a, z, rng);
    work.estimator += g.work;

    const double eta_t = std::sqrt(th) / (l * std::sqrt(static_cast<double>(t)));
    const WeightedPoint anchors[1] = {{&z, 1.0 / eta_t}};
    z = mirror_step(s, g.gx, g.gy, anchors);
    work.step += s.n + s.m;

    avg_x += (z.x - avg_x) / static_cast<double>(t);
    avg_y += (z.y - avg_y) / static_cast<double>(t);
    work.step += s.n + s.m;
    report.inner_steps_run = t;

    const bool cadence = opts.gap_check_every > 0 &&
                         (t % opts.gap_check_every == 0 || t == t_max);
    if (cadence) {
      running.x = avg_x;
      running.y = avg_y;
      TraceRecord rec;
      rec.k = t;
      rec.work = work.algorithmic();
      rec.gap = duality_gap(s, a, running);
      work.gap += a.nnz();
      report.trace.push_back(rec);
      if (opts.early_stop && rec.gap <= epsilon) break;
    }
  }

  report.final_point.kind = s.kind;
  report.final_point.x = std::move(avg_x);
  report.final_point.y = std::move(avg_y);
  if (!report.trace.empty() && report.trace.back().k == report.inner_steps_run) {
    report.measured_gap = report.trace.back().gap;
  } else {
    report.measured_gap = duality_gap(s, a, report.final_point);
    work.gap += a.nnz();
  }
  report.converged = report.measured_gap <= epsilon;
  return report;
}

}  // namespace vrgames
