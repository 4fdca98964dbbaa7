#ifndef VRGAMES_TEST_SUPPORT_HPP
#define VRGAMES_TEST_SUPPORT_HPP

#include <algorithm>
#include <vector>

#include "vrgames/estimators.hpp"
#include "vrgames/geometry.hpp"
#include "vrgames/sampling.hpp"
#include "vrgames/solvers.hpp"
#include "vrgames/sparse_matrix.hpp"

namespace vrgames::testing {

inline SparseMatrix from_dense(const Eigen::MatrixXd& d) {
  std::vector<Triplet> t;
  for (Index i = 0; i < d.rows(); ++i)
    for (Index j = 0; j < d.cols(); ++j)
      if (d(i, j) != 0.0) t.push_back({i, j, d(i, j)});
  return SparseMatrix::from_triplets(d.rows(), d.cols(), std::move(t));
}

inline SparseMatrix random_instance(Index m, Index n, std::uint64_t seed,
                                    double density = 1.0, double scale = 1.0) {
  GeneratorParams p;
  p.rows = m;
  p.cols = n;
  p.density = density;
  p.seed = seed;
  p.param_a = -scale;
  p.param_b = scale;
  return generate_random(p);
}

inline Vector random_simplex(Index d, Rng& rng) {
  Vector v(d);
  double sum = 0.0;
  for (Index i = 0; i < d; ++i) {
    v[i] = 0.05 + rng.next_double();
    sum += v[i];
  }
  return v / sum;
}

inline Vector random_ball(Index d, Rng& rng) {
  Vector v(d);
  for (Index i = 0; i < d; ++i) v[i] = 2.0 * rng.next_double() - 1.0;
  const double norm = v.norm();
  if (norm > 1.0) v *= rng.next_double() / norm;
  return v;
}

inline Point random_point(const SetupDescriptor& s, Rng& rng) {
  Point z;
  z.kind = s.kind;
  z.x = x_is_simplex(s.kind) ? random_simplex(s.n, rng) : random_ball(s.n, rng);
  z.y = y_is_simplex(s.kind) ? random_simplex(s.m, rng) : random_ball(s.m, rng);
  return z;
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

/// High-accuracy reference for the proximal point prox_{w0}(g) with
/// parameter alpha: damped deterministic iteration of the regularized step,
/// run far past the theory budget. Returns the last iterate.
inline Point reference_prox_point(const SparseMatrix& a, const SetupDescriptor& s,
                                  const Point& w0, double alpha, long iters) {
  const double l = estimator_constant(a, s, EstimatorVariant::Exact);
  const double eta = alpha / (8.0 * l * l);
  Point w = w0;
  for (long t = 0; t < iters; ++t) {
    const GradientEstimate g = exact_gradient(a, w);
    const WeightedPoint anchors[2] = {{&w0, alpha}, {&w, 1.0 / eta}};
    w = mirror_step(s, g.gx, g.gy, anchors);
  }
  return w;
}

/// Exact value of max_u { <g(w), w - u> - alpha V_{w0}(u) }: the maximizer is
/// the mirror step of g(w) anchored at (w0, alpha); extreme candidates are
/// checked alongside as a guard.
inline double relaxed_oracle_gap(const SparseMatrix& a, const SetupDescriptor& s,
                                 const Point& w0, const Point& w, double alpha) {
  const GradientEstimate g = exact_gradient(a, w);
  auto value_at = [&](const Point& u) {
    return g.gx.dot(w.x - u.x) + g.gy.dot(w.y - u.y) - alpha * bregman(s, w0, u);
  };
  const WeightedPoint anchors[1] = {{&w0, alpha}};
  const Point best = mirror_step(s, g.gx, g.gy, anchors);
  double out = value_at(best);

  // extreme candidates per block: best response to the linear term alone
  Point cand = best;
  auto extreme_block = [](const Vector& grad, bool simplex) {
    if (simplex) {
      Index arg = 0;
      grad.minCoeff(&arg);
      Vector v = Vector::Zero(grad.size());
      v[arg] = 1.0;
      return v;
    }
    const double norm = grad.norm();
    return norm > 0.0 ? Vector(-grad / norm) : Vector(Vector::Zero(grad.size()));
  };
  const Vector ex = extreme_block(g.gx, x_is_simplex(s.kind));
  const Vector ey = extreme_block(g.gy, y_is_simplex(s.kind));
  for (int mask = 0; mask < 4; ++mask) {
    cand.x = (mask & 1) ? ex : w0.x;
    cand.y = (mask & 2) ? ey : w0.y;
    out = std::max(out, value_at(cand));
  }
  return out;
}

}  // namespace vrgames::testing

#endif  // VRGAMES_TEST_SUPPORT_HPP
