#ifndef VRGAMES_GEOMETRY_HPP
#define VRGAMES_GEOMETRY_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>

#include "vrgames/sparse_matrix.hpp"

namespace vrgames {

enum class SetupKind { L1L1, L2L1, L2L2 };

inline bool x_is_simplex(SetupKind k) { return k == SetupKind::L1L1; }
inline bool y_is_simplex(SetupKind k) { return k != SetupKind::L2L2; }

const char* setup_name(SetupKind k);
std::optional<SetupKind> setup_from_name(const std::string& name);

/// Domain geometry: which product of simplex/ball blocks is in play, the
/// block dimensions, and the block rescaling factor rho (1 when unused).
/// rho > 1 weights the x-block divergence up and the y-block down.
struct SetupDescriptor {
  SetupKind kind = SetupKind::L1L1;
  Index n = 1;  // primal dimension
  Index m = 1;  // dual dimension
  double rho = 1.0;
};

/// Primal-dual iterate z = (x, y). Simplex blocks hold probabilities
/// (nonnegative, summing to one); ball blocks satisfy |.|_2 <= 1.
struct Point {
  Vector x;
  Vector y;
  SetupKind kind = SetupKind::L1L1;
};

/// Scaled-regularizer composite term lambda_x * r_x(x) + lambda_y * r_y(y):
/// entropy on simplex blocks, half squared norm on ball blocks.
struct CompositeTerm {
  double lambda_x = 0.0;
  double lambda_y = 0.0;
  bool empty() const { return lambda_x == 0.0 && lambda_y == 0.0; }
};

/// Range of the distance generating function over the domain.
double theta(const SetupDescriptor& s);

/// Minimizer of r: uniform distribution on simplex blocks, origin on balls.
Point uniform_center(const SetupDescriptor& s);

/// Bregman divergence V_z(z'): KL on simplex blocks, half squared Euclidean
/// distance on ball blocks, combined as rho * Vx + (1/rho) * Vy. Returns
/// +infinity when a KL term divides by a zero coordinate of z.
double bregman(const SetupDescriptor& s, const Point& z, const Point& zp);

/// Squared dual norm (1/rho) * |gx|_*^2 + rho * |gy|_*^2 with the block dual
/// norms of the setup (max-norm over simplex blocks, Euclidean over balls).
double dual_norm_sq(const SetupDescriptor& s, const Vector& gx, const Vector& gy);

/// Squared primal norm rho * |dx|^2 + (1/rho) * |dy|^2 of z - zp, with the
/// block norms of the setup (l1 over simplex blocks, l2 over balls).
double distance_norm_sq(const SetupDescriptor& s, const Point& z, const Point& zp);

/// Gradient of z' -> V_z(z') per block: log(z'/z) on simplex blocks
/// (with the log-domain floor), z' - z on ball blocks. No rho weighting.
std::pair<Vector, Vector> bregman_gradient(const SetupDescriptor& s, const Point& z,
                                           const Point& zp);

/// Subgradient of the composite term: lambda * (1 + log z) on simplex
/// blocks, lambda * z on ball blocks.
std::pair<Vector, Vector> composite_gradient(const SetupDescriptor& s,
                                             const CompositeTerm& term, const Point& z);

struct WeightedPoint {
  const Point* point;
  double weight;  // > 0; divergence weight before rho rescaling
};

/// Anchor contribution with explicit per-block divergence weights. Produced
/// by composite_fold; consumed verbatim by mirror_step (no rho rescaling).
struct BlockAnchor {
  const Point* point;
  double weight_x;
  double weight_y;
};

/// Expresses lambda * r composite terms as an extra divergence anchor at the
/// global r-minimizer, exact up to an additive constant that the argmin
/// ignores.
BlockAnchor composite_fold(const SetupDescriptor& s, const CompositeTerm& term,
                           const Point& center);

/// Generalized mirror step: argmin over the domain of
///   <gamma, z> + sum_i w_i V_{z_i}(z)   (+ composite anchor, when present)
/// computed blockwise in closed form. Simplex blocks: exponentiate
/// (sum_i w_i log z_i - gamma) / sum_i w_i with max-subtraction and logits
/// floored at -700. Ball blocks: radial projection of the weighted affine
/// combination. rho enters as per-block effective weights on the anchors.
Point mirror_step(const SetupDescriptor& s, const Vector& gamma_x, const Vector& gamma_y,
                  std::span<const WeightedPoint> anchors,
                  const BlockAnchor* composite = nullptr);

/// Empty string when z satisfies the Point invariants of the setup,
/// otherwise a description of the violated invariant.
std::string check_feasible(const SetupDescriptor& s, const Point& z, double tol = 1e-9);

}  // namespace vrgames

#endif  // VRGAMES_GEOMETRY_HPP
