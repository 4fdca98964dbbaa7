#include "vrgames/gap.hpp"

#include <cmath>

namespace vrgames {

double simplex_best_response_value(const Vector& c, double lambda) {
  const double peak = c.maxCoeff();
  if (lambda <= 0.0) return peak;
  double acc = 0.0;
  for (Index i = 0; i < c.size(); ++i) acc += std::exp((c[i] - peak) / lambda);
  return peak + lambda * std::log(acc);
}

double ball_best_response_value(const Vector& c, double lambda) {
  const double norm = c.norm();
  if (lambda <= 0.0) return -norm;
  const double t = std::min(1.0, norm / lambda);
  return -t * norm + 0.5 * lambda * t * t;
}

namespace {

double entropy_r(const Vector& v) {  // sum v log v, with 0 log 0 = 0
  double acc = 0.0;
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] > 0.0) acc += v[i] * std::log(v[i]);
  return acc;
}

}  // namespace

double duality_gap(const SetupDescriptor& s, const SparseMatrix& a, const Point& z,
                   const CompositeTerm* composite) {
  const std::string err = check_feasible(s, z);
  if (!err.empty()) throw InfeasiblePointError("duality_gap: infeasible point: " + err);

  const Vector ax = a.multiply(z.x);        // y-player payoffs
  const Vector aty = a.multiply_transpose(z.y);  // x-player costs

  const double lx = composite ? composite->lambda_x : 0.0;
  const double ly = composite ? composite->lambda_y : 0.0;

  // Gap(z) = phi(x) + psi(y) + max_{y'} [<A x, y'> - psi(y')]
  //                          - min_{x'} [<A^T y, x'> + phi(x')].
  double gap = 0.0;
  if (lx > 0.0)
    gap += lx * (x_is_simplex(s.kind) ? entropy_r(z.x) : 0.5 * z.x.squaredNorm());
  if (ly > 0.0)
    gap += ly * (y_is_simplex(s.kind) ? entropy_r(z.y) : 0.5 * z.y.squaredNorm());

  if (y_is_simplex(s.kind)) {
    gap += simplex_best_response_value(ax, ly);
  } else {
    gap += -ball_best_response_value(-ax, ly);  // max of <ax,u> - (ly/2)|u|^2
  }
  if (x_is_simplex(s.kind)) {
    gap -= -simplex_best_response_value(-aty, lx);  // min of <aty,u> + lx sum u log u
  } else {
    gap -= ball_best_response_value(aty, lx);
  }
  // Mathematically nonnegative; tiny negatives can only come from roundoff.
  return gap < 0.0 ? 0.0 : gap;
}

}  // namespace vrgames
