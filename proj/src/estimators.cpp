#include "vrgames/estimators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vrgames {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require(bool cond, const char* msg) {
  if (!cond) throw std::logic_error(msg);
}

double sign_of(double v) { return v >= 0.0 ? 1.0 : -1.0; }

double clamp_tau(double v, double tau) { return std::min(tau, std::max(-tau, v)); }

double block_dual_norm(bool simplex, const Vector& g) {
  return simplex ? g.lpNorm<Eigen::Infinity>() : g.norm();
}

}  // namespace

const char* estimator_name(EstimatorVariant v) {
  switch (v) {
    case EstimatorVariant::Exact: return "exact";
    case EstimatorVariant::L1L1: return "l1l1";
    case EstimatorVariant::L2L1Basic: return "l2l1-basic";
    case EstimatorVariant::L2L1Clipped: return "l2l1-clipped";
    case EstimatorVariant::L2L1Oblivious: return "l2l1-oblivious";
    case EstimatorVariant::L2L2DynamicSq: return "l2l2-dynamic";
    case EstimatorVariant::L2L2Factored: return "l2l2-factored";
    case EstimatorVariant::L2L2NormWeighted: return "l2l2-norm-weighted";
  }
  return "?";
}

std::optional<EstimatorVariant> estimator_from_name(const std::string& name) {
  for (EstimatorVariant v :
       {EstimatorVariant::Exact, EstimatorVariant::L1L1, EstimatorVariant::L2L1Basic,
        EstimatorVariant::L2L1Clipped, EstimatorVariant::L2L1Oblivious,
        EstimatorVariant::L2L2DynamicSq, EstimatorVariant::L2L2Factored,
        EstimatorVariant::L2L2NormWeighted}) {
    if (name == estimator_name(v)) return v;
  }
  return std::nullopt;
}

EstimatorVariant default_estimator(SetupKind kind) {
  switch (kind) {
    case SetupKind::L1L1: return EstimatorVariant::L1L1;
    case SetupKind::L2L1: return EstimatorVariant::L2L1Clipped;
    case SetupKind::L2L2: return EstimatorVariant::L2L2DynamicSq;
  }
  return EstimatorVariant::L1L1;
}

bool estimator_is_clipped(EstimatorVariant v) {
  return v == EstimatorVariant::L2L1Clipped || v == EstimatorVariant::L2L1Oblivious;
}

EstimatorState::EstimatorState(const SparseMatrix& a, const SetupDescriptor& setup, Point w0,
                               EstimatorVariant variant, double tau, std::uint64_t seed)
    : matrix_(&a),
      setup_(setup),
      w0_(std::move(w0)),
      variant_(variant),
      tau_(tau),
      rng_(seed) {
  if (a.rows() != setup.m || a.cols() != setup.n)
    throw std::invalid_argument("estimator: matrix and setup dimensions disagree");
  if (estimator_is_clipped(variant) && !(tau > 0.0))
    throw std::invalid_argument("estimator: clipped variants need tau > 0");
  GradientEstimate g0 = exact_gradient(a, w0_);
  g0x_ = std::move(g0.gx);
  g0y_ = std::move(g0.gy);
  setup_work_ = g0.work;

  if (variant == EstimatorVariant::L2L1Oblivious) {
    row_tables_.reserve(a.rows());
    std::vector<double> probs;
    for (Index i = 0; i < a.rows(); ++i) {
      const SparseVector r = a.row(i);
      if (r.nnz() == 0) {
        row_tables_.emplace_back();
        continue;
      }
      probs.assign(r.values.begin(), r.values.end());
      const double denom = a.row_norm_sq(i);
      for (double& p : probs) p = p * p / denom;
      row_tables_.emplace_back(std::span<const double>(probs));
      setup_work_ += r.nnz();
    }
  }
  if (variant == EstimatorVariant::L2L2Factored) {
    const double fro_sq = a.norm_fro() * a.norm_fro();
    if (fro_sq > 0.0) {
      factored_p_.resize(a.rows());
      for (Index i = 0; i < a.rows(); ++i) factored_p_[i] = a.row_norm_sq(i) / fro_sq;
      factored_q_.resize(a.cols());
      for (Index j = 0; j < a.cols(); ++j) factored_q_[j] = a.col_norm_sq(j) / fro_sq;
      setup_work_ += a.rows() + a.cols();
    } else {
      factored_p_ = Vector::Zero(a.rows());
      factored_q_ = Vector::Zero(a.cols());
    }
  }
}

GradientEstimate exact_gradient(const SparseMatrix& a, const Point& z) {
  GradientEstimate g;
  g.gx = a.multiply_transpose(z.y);
  g.gy = -a.multiply(z.x);
  g.work = a.nnz();
  return g;
}

namespace {

// Scatter row i of A into dense, scaled: out[j] += scale * A_ij. Returns touches.
std::int64_t add_scaled_row(const SparseMatrix& a, Index i, double scale, Vector& out) {
  const SparseVector r = a.row(i);
  for (size_t k = 0; k < r.indices.size(); ++k) out[r.indices[k]] += scale * r.values[k];
  return r.nnz();
}

std::int64_t sub_scaled_col(const SparseMatrix& a, Index j, double scale, Vector& out,
                            double clamp = std::numeric_limits<double>::infinity()) {
  const SparseVector c = a.col(j);
  for (size_t k = 0; k < c.indices.size(); ++k)
    out[c.indices[k]] -= clamp_tau(scale * c.values[k], clamp);
  return c.nnz();
}

struct BlockDraw {
  bool drawn = false;
  Index index = -1;
};

// Sampling weights for the row draw (y-difference block). The factored
// variant samples from fixed matrix-norm weights; the others sample from
// the difference.
Vector row_weights(EstimatorVariant v, const SparseMatrix& a, const Vector& dy) {
  Vector w(dy.size());
  switch (v) {
    case EstimatorVariant::L2L2DynamicSq:
      for (Index i = 0; i < dy.size(); ++i) w[i] = dy[i] * dy[i];
      break;
    case EstimatorVariant::L2L2Factored:
      for (Index i = 0; i < dy.size(); ++i) w[i] = a.row_norm_sq(i);
      break;
    case EstimatorVariant::L2L2NormWeighted:
      for (Index i = 0; i < dy.size(); ++i) w[i] = std::sqrt(a.row_norm_sq(i)) * std::abs(dy[i]);
      break;
    default:  // |difference| sampling
      w = dy.cwiseAbs();
      break;
  }
  return w;
}

Vector col_weights(EstimatorVariant v, const SparseMatrix& a, const Vector& dx) {
  Vector w(dx.size());
  switch (v) {
    case EstimatorVariant::L1L1:
      w = dx.cwiseAbs();
      break;
    case EstimatorVariant::L2L2Factored:
      for (Index j = 0; j < dx.size(); ++j) w[j] = a.col_norm_sq(j);
      break;
    case EstimatorVariant::L2L2NormWeighted:
      for (Index j = 0; j < dx.size(); ++j) w[j] = std::sqrt(a.col_norm_sq(j)) * std::abs(dx[j]);
      break;
    default:  // squared difference
      for (Index j = 0; j < dx.size(); ++j) w[j] = dx[j] * dx[j];
      break;
  }
  return w;
}

// Correction scale for the x-output once row i was drawn: g~x = g0x + scale * A_i:.
double row_correction_scale(EstimatorVariant v, const SparseMatrix& a, const Vector& dy,
                            Index i) {
  switch (v) {
    case EstimatorVariant::L2L2DynamicSq:
      return dy.squaredNorm() / dy[i];
    case EstimatorVariant::L2L2Factored: {
      const double fro_sq = a.norm_fro() * a.norm_fro();
      return dy[i] * fro_sq / a.row_norm_sq(i);
    }
    case EstimatorVariant::L2L2NormWeighted: {
      double s = 0.0;
      for (Index k = 0; k < dy.size(); ++k) s += std::sqrt(a.row_norm_sq(k)) * std::abs(dy[k]);
      return sign_of(dy[i]) * s / std::sqrt(a.row_norm_sq(i));
    }
    default:  // sampling from the |difference|
      return dy.lpNorm<1>() * sign_of(dy[i]);
  }
}

// Correction scale for the y-output once column j was drawn: g~y = g0y - scale * A_:j.
double col_correction_scale(EstimatorVariant v, const SparseMatrix& a, const Vector& dx,
                            Index j) {
  switch (v) {
    case EstimatorVariant::L1L1:
      return dx.lpNorm<1>() * sign_of(dx[j]);
    case EstimatorVariant::L2L2Factored: {
      const double fro_sq = a.norm_fro() * a.norm_fro();
      return dx[j] * fro_sq / a.col_norm_sq(j);
    }
    case EstimatorVariant::L2L2NormWeighted: {
      double s = 0.0;
      for (Index k = 0; k < dx.size(); ++k) s += std::sqrt(a.col_norm_sq(k)) * std::abs(dx[k]);
      return sign_of(dx[j]) * s / std::sqrt(a.col_norm_sq(j));
    }
    default:  // squared-difference sampling
      return dx.squaredNorm() / dx[j];
  }
}

// Draws i ~ p(w) then j ~ q(w) (in that order), skipping a block entirely
// when its difference vanishes; that block keeps the cached g0 value, which
// is the analytically exact zero-variance case.
GradientEstimate two_draw_estimate(EstimatorState& state, const Point& w, double clamp_y) {
  const SparseMatrix& a = state.matrix();
  const EstimatorVariant v = state.variant();
  const Index n = a.cols(), m = a.rows();

  GradientEstimate g;
  g.gx = state.g0x();
  g.gy = state.g0y();
  g.work = 2 * (n + m);  // difference/sampling passes plus dense assembly

  // A block whose difference vanishes keeps the cached g0 value and consumes
  // no randomness; its correction is analytically zero.
  const Vector dy = w.y - state.center().y;
  BlockDraw row_draw;
  if (dy.cwiseAbs().sum() > 0.0) {
    Vector wy = row_weights(v, a, dy);
    if (wy.sum() > 0.0) {
      row_draw.drawn = true;
      row_draw.index = sample_weighted(wy, state.rng());
    }
  }
  const Vector dx = w.x - state.center().x;
  BlockDraw col_draw;
  if (dx.cwiseAbs().sum() > 0.0) {
    Vector wx = col_weights(v, a, dx);
    if (wx.sum() > 0.0) {
      col_draw.drawn = true;
      col_draw.index = sample_weighted(wx, state.rng());
    }
  }

  if (row_draw.drawn)
    g.work += add_scaled_row(a, row_draw.index,
                             row_correction_scale(v, a, dy, row_draw.index), g.gx);
  if (col_draw.drawn)
    g.work += sub_scaled_col(a, col_draw.index,
                             col_correction_scale(v, a, dx, col_draw.index), g.gy, clamp_y);

  const std::int64_t row_nnz = row_draw.drawn ? a.row_nnz(row_draw.index) : 0;
  const std::int64_t col_nnz = col_draw.drawn ? a.col_nnz(col_draw.index) : 0;
  require(g.work <= 4 * (n + m + row_nnz + col_nnz), "estimator work bound violated");
  return g;
}

}  // namespace

GradientEstimate estimate_l1l1(EstimatorState& state, const Point& w) {
  require(state.variant() == EstimatorVariant::L1L1, "estimator variant mismatch");
  return two_draw_estimate(state, w, std::numeric_limits<double>::infinity());
}

GradientEstimate estimate_l2l1_basic(EstimatorState& state, const Point& w) {
  require(state.variant() == EstimatorVariant::L2L1Basic, "estimator variant mismatch");
  return two_draw_estimate(state, w, std::numeric_limits<double>::infinity());
}

GradientEstimate estimate_l2l1_clipped(EstimatorState& state, const Point& w) {
  require(state.variant() == EstimatorVariant::L2L1Clipped, "estimator variant mismatch");
  return two_draw_estimate(state, w, state.tau());
}

GradientEstimate estimate_l2l1_oblivious(EstimatorState& state, const Point& w) {
  require(state.variant() == EstimatorVariant::L2L1Oblivious, "estimator variant mismatch");
  const SparseMatrix& a = state.matrix();
  const Index n = a.cols(), m = a.rows();
  const double tau = state.tau();

  GradientEstimate g;
  g.gx = state.g0x();
  g.gy = state.g0y();
  g.work = 2 * (n + m);

  // x-block: identical to the clipped estimator's x-block (row draw from the
  // |difference| distribution). Consumed from the stream before the row-wise
  // y draws.
  const Vector dy = w.y - state.center().y;
  Index drawn_row_nnz = 0;
  if (dy.lpNorm<1>() > 0.0) {
    const Index i = sample_weighted(dy.cwiseAbs(), state.rng());
    g.work += add_scaled_row(a, i, dy.lpNorm<1>() * sign_of(dy[i]), g.gx);
    drawn_row_nnz = a.row_nnz(i);
  }

  // y-block: one independent O(1) alias draw per coordinate, clipped.
  const Vector dx = w.x - state.center().x;
  if (dx.squaredNorm() > 0.0) {
    for (Index i = 0; i < m; ++i) {
      const SparseVector r = a.row(i);
      if (r.nnz() == 0) continue;
      const Index slot = state.row_table(i).sample(state.rng());
      const Index j = r.indices[static_cast<size_t>(slot)];
      const double aij = r.values[static_cast<size_t>(slot)];
      const double q = aij * aij / a.row_norm_sq(i);
      g.gy[i] -= clamp_tau(aij * dx[j] / q, tau);
      ++g.work;
    }
  }
  require(g.work <= 4 * (n + m + drawn_row_nnz), "estimator work bound violated");
  return g;
}

GradientEstimate estimate_l2l2(EstimatorState& state, const Point& w, EstimatorVariant which) {
  require(which == EstimatorVariant::L2L2DynamicSq || which == EstimatorVariant::L2L2Factored ||
              which == EstimatorVariant::L2L2NormWeighted,
          "not an l2-l2 estimator variant");
  require(state.variant() == which, "estimator variant mismatch");
  return two_draw_estimate(state, w, std::numeric_limits<double>::infinity());
}

GradientEstimate estimate(EstimatorState& state, const Point& w) {
  switch (state.variant()) {
    case EstimatorVariant::Exact: {
      GradientEstimate g = exact_gradient(state.matrix(), w);
      return g;
    }
    case EstimatorVariant::L1L1: return estimate_l1l1(state, w);
    case EstimatorVariant::L2L1Basic: return estimate_l2l1_basic(state, w);
    case EstimatorVariant::L2L1Clipped: return estimate_l2l1_clipped(state, w);
    case EstimatorVariant::L2L1Oblivious: return estimate_l2l1_oblivious(state, w);
    case EstimatorVariant::L2L2DynamicSq:
    case EstimatorVariant::L2L2Factored:
    case EstimatorVariant::L2L2NormWeighted: return estimate_l2l2(state, w, state.variant());
  }
  throw std::logic_error("unknown estimator variant");
}

Vector FiniteSumProblem::sampling_probs() const {
  Vector p(static_cast<Index>(components.size()));
  double total = 0.0;
  for (size_t k = 0; k < components.size(); ++k) {
    if (!(components[k].lipschitz > 0.0))
      throw std::invalid_argument("finite sum: Lipschitz constants must be positive");
    p[static_cast<Index>(k)] = components[k].lipschitz;
    total += components[k].lipschitz;
  }
  return p / total;
}

double FiniteSumProblem::average_lipschitz() const {
  double s = 0.0;
  for (const FiniteSumComponent& c : components) s += c.lipschitz;
  return s / static_cast<double>(components.size());
}

void FiniteSumProblem::full_gradient(const Point& z, Vector& gx, Vector& gy) const {
  gx = Vector::Zero(setup.n);
  gy = Vector::Zero(setup.m);
  Vector cx(setup.n), cy(setup.m);
  for (const FiniteSumComponent& c : components) {
    c.gradient(z, cx, cy);
    gx += cx;
    gy += cy;
  }
  const double k = static_cast<double>(components.size());
  gx /= k;
  gy /= k;
}

GradientEstimate estimate_finite_sum(const FiniteSumProblem& problem, const Point& w0,
                                     const Vector& g_full_x, const Vector& g_full_y,
                                     const Point& w, Rng& rng) {
  if (problem.components.empty())
    throw std::invalid_argument("finite sum: no components");
  const Vector p = problem.sampling_probs();
  const Index k = sample_weighted(p, rng);
  const FiniteSumComponent& c = problem.components[static_cast<size_t>(k)];
  const double kcount = static_cast<double>(problem.components.size());

  GradientEstimate g;
  Vector gw_x(problem.setup.n), gw_y(problem.setup.m);
  Vector g0_x(problem.setup.n), g0_y(problem.setup.m);
  c.gradient(w, gw_x, gw_y);
  c.gradient(w0, g0_x, g0_y);
  const double scale = 1.0 / (p[k] * kcount);
  g.gx = g_full_x + scale * (gw_x - g0_x);
  g.gy = g_full_y + scale * (gw_y - g0_y);
  g.work = 2 * c.eval_work + problem.setup.n + problem.setup.m;
  return g;
}

namespace {

struct BlockOutcome {
  double prob;
  Index index;  // -1 for the no-draw outcome of a degenerate block
};

// Mirrors the estimator's gating: a block with zero difference (or with an
// all-zero weight vector) has the single no-draw outcome.
std::vector<BlockOutcome> block_outcomes(const Vector& weights, const Vector& diff) {
  std::vector<BlockOutcome> out;
  const double total = weights.sum();
  if (diff.cwiseAbs().sum() <= 0.0 || total <= 0.0) {
    out.push_back({1.0, -1});
    return out;
  }
  for (Index i = 0; i < weights.size(); ++i)
    if (weights[i] > 0.0) out.push_back({weights[i] / total, i});
  return out;
}

}  // namespace

MomentReport enumerate_moments(const EstimatorState& state, const Point& w) {
  const SparseMatrix& a = state.matrix();
  const SetupDescriptor& s = state.setup();
  const EstimatorVariant v = state.variant();
  const Index n = a.cols(), m = a.rows();

  MomentReport r;
  r.mean_x = Vector::Zero(n);
  r.mean_y = Vector::Zero(m);
  const GradientEstimate gw = exact_gradient(a, w);

  if (v == EstimatorVariant::Exact) {
    r.outcome_count = 1;
    r.prob_sum = 1.0;
    r.mean_x = gw.gx;
    r.mean_y = gw.gy;
    r.e_exact_dual_sq = 0.0;
    Vector dx = gw.gx - state.g0x();
    Vector dy = gw.gy - state.g0y();
    r.e_ref_dual_sq = r.max_ref_dual_sq = dual_norm_sq(s, dx, dy);
    r.e_dx_sq = std::pow(block_dual_norm(x_is_simplex(s.kind), dx), 2);
    r.max_abs_dy = dy.lpNorm<Eigen::Infinity>();
    return r;
  }

  const Vector dy = w.y - state.center().y;
  const Vector dx = w.x - state.center().x;

  if (v == EstimatorVariant::L2L1Oblivious) {
    // Per-coordinate enumeration: the joint outcome space is a product over
    // rows, but every moment of interest is separable across coordinates.
    const double tau = state.tau();
    const std::vector<BlockOutcome> rows = block_outcomes(dy.cwiseAbs(), dy);
    r.outcome_count = static_cast<std::int64_t>(rows.size());
    r.prob_sum = 0.0;
    Vector e_dx_corr = Vector::Zero(n);
    double e_dx_sq = 0.0;
    for (const BlockOutcome& o : rows) {
      r.prob_sum += o.prob;
      if (o.index < 0) continue;
      Vector corr = Vector::Zero(n);
      add_scaled_row(a, o.index, row_correction_scale(v, a, dy, o.index), corr);
      e_dx_corr += o.prob * corr;
      e_dx_sq += o.prob * corr.squaredNorm();
    }
    r.mean_x = state.g0x() + e_dx_corr;
    r.e_dx_sq = e_dx_sq;

    const bool x_moved = dx.squaredNorm() > 0.0;
    r.max_e_dy_coord_sq = 0.0;
    r.max_abs_dy = 0.0;
    r.bias_y_sup = 0.0;
    for (Index i = 0; i < m; ++i) {
      const SparseVector row = a.row(i);
      double e_corr = 0.0, e_corr_sq = 0.0;
      if (x_moved && row.nnz() > 0) {
        for (size_t kk = 0; kk < row.indices.size(); ++kk) {
          const Index j = row.indices[kk];
          const double aij = row.values[kk];
          const double q = aij * aij / a.row_norm_sq(i);
          const double c = clamp_tau(aij * dx[j] / q, tau);
          e_corr += q * c;
          e_corr_sq += q * c * c;
          r.max_abs_dy = std::max(r.max_abs_dy, std::abs(c));
        }
        r.outcome_count += row.nnz();
      }
      r.mean_y[i] = state.g0y()[i] - e_corr;
      r.max_e_dy_coord_sq = std::max(r.max_e_dy_coord_sq, e_corr_sq);
      r.bias_y_sup = std::max(r.bias_y_sup, std::abs(r.mean_y[i] - gw.gy[i]));
    }
    r.e_ref_dual_sq = kNaN;
    r.max_ref_dual_sq = kNaN;
    r.e_exact_dual_sq = kNaN;
    return r;
  }

  // Joint (i, j) enumeration for the two-draw variants.
  const double clamp = v == EstimatorVariant::L2L1Clipped
                           ? state.tau()
                           : std::numeric_limits<double>::infinity();
  const std::vector<BlockOutcome> rows = block_outcomes(row_weights(v, a, dy), dy);
  const std::vector<BlockOutcome> cols = block_outcomes(col_weights(v, a, dx), dx);
  r.outcome_count = static_cast<std::int64_t>(rows.size() * cols.size());
  if (r.outcome_count > 1'000'000)
    throw std::invalid_argument("enumerate_moments: outcome space too large");

  std::vector<Vector> x_corr(rows.size());
  for (size_t ri = 0; ri < rows.size(); ++ri) {
    x_corr[ri] = Vector::Zero(n);
    if (rows[ri].index >= 0)
      add_scaled_row(a, rows[ri].index, row_correction_scale(v, a, dy, rows[ri].index),
                     x_corr[ri]);
  }
  std::vector<Vector> y_corr(cols.size());
  for (size_t cj = 0; cj < cols.size(); ++cj) {
    y_corr[cj] = Vector::Zero(m);
    if (cols[cj].index >= 0) {
      Vector tmp = Vector::Zero(m);
      sub_scaled_col(a, cols[cj].index,
                     col_correction_scale(v, a, dx, cols[cj].index), tmp, clamp);
      y_corr[cj] = tmp;  // tmp holds -clamped correction
    }
  }

  r.prob_sum = 0.0;
  r.max_ref_dual_sq = 0.0;
  r.max_abs_dy = 0.0;
  Vector mean_y_corr = Vector::Zero(m);
  double e_dy_coord_sq_max = 0.0;
  Vector e_dy_coord_sq = Vector::Zero(m);
  for (size_t ri = 0; ri < rows.size(); ++ri) {
    for (size_t cj = 0; cj < cols.size(); ++cj) {
      const double p = rows[ri].prob * cols[cj].prob;
      r.prob_sum += p;
      const double ref_sq = dual_norm_sq(s, x_corr[ri], y_corr[cj]);
      r.e_ref_dual_sq += p * ref_sq;
      r.max_ref_dual_sq = std::max(r.max_ref_dual_sq, ref_sq);
      Vector ex = state.g0x() + x_corr[ri] - gw.gx;
      Vector ey = state.g0y() + y_corr[cj] - gw.gy;
      r.e_exact_dual_sq += p * dual_norm_sq(s, ex, ey);
    }
    r.mean_x += rows[ri].prob * x_corr[ri];
    r.e_dx_sq +=
        rows[ri].prob * std::pow(block_dual_norm(x_is_simplex(s.kind), x_corr[ri]), 2);
  }
  for (size_t cj = 0; cj < cols.size(); ++cj) {
    mean_y_corr += cols[cj].prob * y_corr[cj];
    for (Index i = 0; i < m; ++i) e_dy_coord_sq[i] += cols[cj].prob * y_corr[cj][i] * y_corr[cj][i];
    r.max_abs_dy = std::max(r.max_abs_dy, y_corr[cj].lpNorm<Eigen::Infinity>());
  }
  e_dy_coord_sq_max = e_dy_coord_sq.maxCoeff();
  r.mean_x += state.g0x();
  r.mean_y = state.g0y() + mean_y_corr;
  r.max_e_dy_coord_sq = e_dy_coord_sq_max;
  r.bias_y_sup = (r.mean_y - gw.gy).lpNorm<Eigen::Infinity>();
  return r;
}

MomentReport enumerate_moments(const FiniteSumProblem& problem, const Point& w0,
                               const Point& w) {
  MomentReport r;
  const Index n = problem.setup.n, m = problem.setup.m;
  Vector g_full_x, g_full_y;
  problem.full_gradient(w0, g_full_x, g_full_y);
  Vector gw_x, gw_y;
  problem.full_gradient(w, gw_x, gw_y);

  const Vector p = problem.sampling_probs();
  const double kcount = static_cast<double>(problem.components.size());
  r.outcome_count = static_cast<std::int64_t>(problem.components.size());
  r.mean_x = Vector::Zero(n);
  r.mean_y = Vector::Zero(m);
  Vector cx(n), cy(m), c0x(n), c0y(m);
  for (Index k = 0; k < p.size(); ++k) {
    r.prob_sum += p[k];
    const FiniteSumComponent& c = problem.components[static_cast<size_t>(k)];
    c.gradient(w, cx, cy);
    c.gradient(w0, c0x, c0y);
    const double scale = 1.0 / (p[k] * kcount);
    Vector gx = g_full_x + scale * (cx - c0x);
    Vector gy = g_full_y + scale * (cy - c0y);
    r.mean_x += p[k] * gx;
    r.mean_y += p[k] * gy;
    const double ref_sq = dual_norm_sq(problem.setup, gx - g_full_x, gy - g_full_y);
    r.e_ref_dual_sq += p[k] * ref_sq;
    r.max_ref_dual_sq = std::max(r.max_ref_dual_sq, ref_sq);
    r.e_exact_dual_sq += p[k] * dual_norm_sq(problem.setup, gx - gw_x, gy - gw_y);
  }
  r.bias_y_sup = (r.mean_y - gw_y).lpNorm<Eigen::Infinity>();
  r.e_dx_sq = kNaN;
  r.max_e_dy_coord_sq = kNaN;
  r.max_abs_dy = kNaN;
  return r;
}

}  // namespace vrgames
