#ifndef VRGAMES_SPARSE_MATRIX_HPP
#define VRGAMES_SPARSE_MATRIX_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace vrgames {

using Vector = Eigen::VectorXd;
using Index = std::int64_t;

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Read-only view of one row or column of a SparseMatrix. Indices are
/// strictly increasing and in range; values are finite and nonzero.
struct SparseVector {
  Index length = 0;
  std::span<const Index> indices;
  std::span<const double> values;

  Index nnz() const { return static_cast<Index>(indices.size()); }
};

/// Sparse m x n real matrix stored with both row-major and column-major
/// adjacency so that single rows and single columns are each reachable in
/// time proportional to their nonzero count. Immutable after construction;
/// the three matrix norms are computed once during construction.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Duplicate coordinates are summed; entries that end up exactly zero are
  /// dropped. Throws std::invalid_argument on out-of-range coordinates or
  /// non-finite values.
  static SparseMatrix from_triplets(Index m, Index n, std::vector<Triplet> entries);

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  Index nnz() const { return static_cast<Index>(row_val_.size()); }

  SparseVector row(Index i) const;
  SparseVector col(Index j) const;
  Index row_nnz(Index i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  Index col_nnz(Index j) const { return col_ptr_[j + 1] - col_ptr_[j]; }

  double norm_max() const { return norm_max_; }
  double norm_2_to_inf() const { return norm_2_to_inf_; }
  double norm_fro() const { return norm_fro_; }

  /// Squared Euclidean norm of row i / column j.
  double row_norm_sq(Index i) const { return row_norm_sq_[i]; }
  double col_norm_sq(Index j) const { return col_norm_sq_[j]; }

  Vector multiply(const Vector& x) const;            // A x
  Vector multiply_transpose(const Vector& y) const;  // A^T y

  /// Order-independent fingerprint of dimensions and entries, used by the
  /// benchmark harness to audit that methods saw identical instances.
  std::uint64_t checksum() const;

 private:
  Index m_ = 0;
  Index n_ = 0;
  // CSR-style
  std::vector<Index> row_ptr_;
  std::vector<Index> row_col_;
  std::vector<double> row_val_;
  // CSC-style
  std::vector<Index> col_ptr_;
  std::vector<Index> col_row_;
  std::vector<double> col_val_;

  std::vector<double> row_norm_sq_;
  std::vector<double> col_norm_sq_;
  double norm_max_ = 0.0;
  double norm_2_to_inf_ = 0.0;
  double norm_fro_ = 0.0;
};

Vector matvec(const SparseMatrix& a, const Vector& x);
Vector matvec_transpose(const SparseMatrix& a, const Vector& y);

enum class ValueDist { Uniform, Gaussian, PlusMinus };

struct GeneratorParams {
  Index rows = 1;
  Index cols = 1;
  double density = 1.0;  // (0, 1]
  ValueDist dist = ValueDist::Uniform;
  double param_a = -1.0;  // uniform: lower bound; gaussian: mean; plus-minus: magnitude
  double param_b = 1.0;   // uniform: upper bound; gaussian: stddev
  std::uint64_t seed = 0;
};

/// Deterministic for a fixed seed. Every row and every column receives at
/// least one nonzero (a fill-in pass patches empty ones).
SparseMatrix generate_random(const GeneratorParams& params);

}  // namespace vrgames

#endif  // VRGAMES_SPARSE_MATRIX_HPP
