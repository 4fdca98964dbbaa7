#ifndef VRGAMES_GAP_HPP
#define VRGAMES_GAP_HPP

#include "vrgames/geometry.hpp"
#include "vrgames/sparse_matrix.hpp"

namespace vrgames {

class InfeasiblePointError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Duality gap of z for the (optionally composite) bilinear objective:
/// best responses are closed-form per block. Throws InfeasiblePointError
/// when z violates the domain invariants. The cost model charges nnz(A)
/// per evaluation.
double duality_gap(const SetupDescriptor& s, const SparseMatrix& a, const Point& z,
                   const CompositeTerm* composite = nullptr);

/// max over the simplex of <c, u> - lambda * sum u log u
/// (lambda = 0 degenerates to max_i c_i).
double simplex_best_response_value(const Vector& c, double lambda);

/// min over the unit ball of <c, u> + (lambda/2) |u|^2.
double ball_best_response_value(const Vector& c, double lambda);

}  // namespace vrgames

#endif  // VRGAMES_GAP_HPP
