#include "vrgames/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace vrgames {

namespace {

constexpr double kLogFloor = -700.0;  // keeps exp() inside normal doubles

double floored_log(double p) { return p > 0.0 ? std::max(std::log(p), kLogFloor) : kLogFloor; }

double kl_divergence(const Vector& z, const Vector& zp) {
  double acc = 0.0;
  for (Index i = 0; i < z.size(); ++i) {
    const double a = z[i];
    const double b = zp[i];
    if (b > 0.0) {
      if (a <= 0.0) return std::numeric_limits<double>::infinity();
      acc += b * std::log(b / a) + a - b;
    } else {
      acc += a;
    }
  }
  return acc;
}

double half_sq_dist(const Vector& z, const Vector& zp) { return 0.5 * (z - zp).squaredNorm(); }

}  // namespace

const char* setup_name(SetupKind k) {
  switch (k) {
    case SetupKind::L1L1: return "l1l1";
    case SetupKind::L2L1: return "l2l1";
    case SetupKind::L2L2: return "l2l2";
  }
  return "?";
}

std::optional<SetupKind> setup_from_name(const std::string& name) {
  if (name == "l1l1") return SetupKind::L1L1;
  if (name == "l2l1") return SetupKind::L2L1;
  if (name == "l2l2") return SetupKind::L2L2;
  return std::nullopt;
}

double theta(const SetupDescriptor& s) {
  switch (s.kind) {
    case SetupKind::L1L1: return std::log(static_cast<double>(s.n) * static_cast<double>(s.m));
    case SetupKind::L2L1: return 0.5 + std::log(static_cast<double>(s.m));
    case SetupKind::L2L2: return 1.0;
  }
  return 0.0;
}

Point uniform_center(const SetupDescriptor& s) {
  Point z;
  z.kind = s.kind;
  z.x = x_is_simplex(s.kind) ? Vector::Constant(s.n, 1.0 / static_cast<double>(s.n))
                             : Vector::Zero(s.n);
  z.y = y_is_simplex(s.kind) ? Vector::Constant(s.m, 1.0 / static_cast<double>(s.m))
                             : Vector::Zero(s.m);
  return z;
}

double bregman(const SetupDescriptor& s, const Point& z, const Point& zp) {
  const double vx = x_is_simplex(s.kind) ? kl_divergence(z.x, zp.x) : half_sq_dist(z.x, zp.x);
  const double vy = y_is_simplex(s.kind) ? kl_divergence(z.y, zp.y) : half_sq_dist(z.y, zp.y);
  return s.rho * vx + vy / s.rho;
}

double dual_norm_sq(const SetupDescriptor& s, const Vector& gx, const Vector& gy) {
  const double nx = x_is_simplex(s.kind) ? gx.lpNorm<Eigen::Infinity>() : gx.norm();
  const double ny = y_is_simplex(s.kind) ? gy.lpNorm<Eigen::Infinity>() : gy.norm();
  return nx * nx / s.rho + s.rho * ny * ny;
}

double distance_norm_sq(const SetupDescriptor& s, const Point& z, const Point& zp) {
  const double nx =
      x_is_simplex(s.kind) ? (z.x - zp.x).lpNorm<1>() : (z.x - zp.x).norm();
  const double ny =
      y_is_simplex(s.kind) ? (z.y - zp.y).lpNorm<1>() : (z.y - zp.y).norm();
  return s.rho * nx * nx + ny * ny / s.rho;
}

std::pair<Vector, Vector> bregman_gradient(const SetupDescriptor& s, const Point& z,
                                           const Point& zp) {
  auto block = [&s](bool simplex, const Vector& a, const Vector& b) {
    if (!simplex) return Vector(b - a);
    Vector g(a.size());
    for (Index i = 0; i < a.size(); ++i) g[i] = floored_log(b[i]) - floored_log(a[i]);
    return g;
  };
  return {block(x_is_simplex(s.kind), z.x, zp.x), block(y_is_simplex(s.kind), z.y, zp.y)};
}

std::pair<Vector, Vector> composite_gradient(const SetupDescriptor& s,
                                             const CompositeTerm& term, const Point& z) {
  auto block = [](bool simplex, double lambda, const Vector& v) {
    if (lambda == 0.0) return Vector(Vector::Zero(v.size()));
    if (!simplex) return Vector(lambda * v);
    Vector g(v.size());
    for (Index i = 0; i < v.size(); ++i) g[i] = lambda * (1.0 + floored_log(v[i]));
    return g;
  };
  return {block(x_is_simplex(s.kind), term.lambda_x, z.x),
          block(y_is_simplex(s.kind), term.lambda_y, z.y)};
}

BlockAnchor composite_fold(const SetupDescriptor& s, const CompositeTerm& term,
                           const Point& center) {
  if (term.lambda_x < 0.0 || term.lambda_y < 0.0)
    throw std::invalid_argument("composite coefficients must be nonnegative");
  return BlockAnchor{&center, term.lambda_x, term.lambda_y};
}

namespace {

void simplex_block_step(const Vector& gamma, std::span<const WeightedPoint> anchors,
                        const BlockAnchor* composite, bool x_block, double rho_weight,
                        Vector& out) {
  const Index d = gamma.size();
  double total_weight = 0.0;
  Vector logit = Vector::Zero(d);
  for (const WeightedPoint& a : anchors) {
    const double w = a.weight * rho_weight;
    const Vector& p = x_block ? a.point->x : a.point->y;
    for (Index i = 0; i < d; ++i) logit[i] += w * floored_log(p[i]);
    total_weight += w;
  }
  if (composite) {
    const double w = x_block ? composite->weight_x : composite->weight_y;
    if (w > 0.0) {
      const Vector& p = x_block ? composite->point->x : composite->point->y;
      for (Index i = 0; i < d; ++i) logit[i] += w * floored_log(p[i]);
      total_weight += w;
    }
  }
  if (total_weight <= 0.0) throw std::invalid_argument("mirror_step: nonpositive total weight");
  double peak = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < d; ++i) {
    logit[i] = (logit[i] - gamma[i]) / total_weight;
    peak = std::max(peak, logit[i]);
  }
  double sum = 0.0;
  for (Index i = 0; i < d; ++i) {
    out[i] = std::exp(std::max(logit[i] - peak, kLogFloor));
    sum += out[i];
  }
  out /= sum;
}

void ball_block_step(const Vector& gamma, std::span<const WeightedPoint> anchors,
                     const BlockAnchor* composite, bool x_block, double rho_weight,
                     Vector& out) {
  double total_weight = 0.0;
  out.setZero();
  for (const WeightedPoint& a : anchors) {
    const double w = a.weight * rho_weight;
    out += w * (x_block ? a.point->x : a.point->y);
    total_weight += w;
  }
  if (composite) {
    const double w = x_block ? composite->weight_x : composite->weight_y;
    if (w > 0.0) {
      out += w * (x_block ? composite->point->x : composite->point->y);
      total_weight += w;
    }
  }
  if (total_weight <= 0.0) throw std::invalid_argument("mirror_step: nonpositive total weight");
  out = (out - gamma) / total_weight;
  const double norm = out.norm();
  if (norm > 1.0) out /= norm;
}

}  // namespace

Point mirror_step(const SetupDescriptor& s, const Vector& gamma_x, const Vector& gamma_y,
                  std::span<const WeightedPoint> anchors, const BlockAnchor* composite) {
  if (anchors.empty() && composite == nullptr)
    throw std::invalid_argument("mirror_step: at least one anchor required");
  if (!gamma_x.allFinite() || !gamma_y.allFinite())
    throw std::invalid_argument("mirror_step: non-finite gradient");
  for (const WeightedPoint& a : anchors)
    if (!(a.weight > 0.0)) throw std::invalid_argument("mirror_step: anchor weight must be > 0");

  Point z;
  z.kind = s.kind;
  z.x.resize(s.n);
  z.y.resize(s.m);
  if (x_is_simplex(s.kind))
    simplex_block_step(gamma_x, anchors, composite, true, s.rho, z.x);
  else
    ball_block_step(gamma_x, anchors, composite, true, s.rho, z.x);
  if (y_is_simplex(s.kind))
    simplex_block_step(gamma_y, anchors, composite, false, 1.0 / s.rho, z.y);
  else
    ball_block_step(gamma_y, anchors, composite, false, 1.0 / s.rho, z.y);
  return z;
}

std::string check_feasible(const SetupDescriptor& s, const Point& z, double tol) {
  if (z.x.size() != s.n || z.y.size() != s.m) return "dimension mismatch with setup";
  if (!z.x.allFinite() || !z.y.allFinite()) return "non-finite coordinate";
  auto check_block = [tol](bool simplex, const Vector& v, const char* name) -> std::string {
    if (simplex) {
      for (Index i = 0; i < v.size(); ++i)
        if (v[i] < -tol) return std::string(name) + " block has negative entry";
      if (std::abs(v.sum() - 1.0) > tol)
        return std::string(name) + " block does not sum to 1";
    } else {
      if (v.norm() > 1.0 + tol) return std::string(name) + " block leaves the unit ball";
    }
    return "";
  };
  std::string err = check_block(x_is_simplex(s.kind), z.x, "x");
  if (!err.empty()) return err;
  return check_block(y_is_simplex(s.kind), z.y, "y");
}

}  // namespace vrgames
