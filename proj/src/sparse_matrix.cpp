#include "vrgames/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

namespace vrgames {

SparseMatrix SparseMatrix::from_triplets(Index m, Index n, std::vector<Triplet> entries) {
  if (m < 1 || n < 1) throw std::invalid_argument("matrix dimensions must be positive");
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.row >= m || t.col < 0 || t.col >= n)
      throw std::invalid_argument("triplet coordinate out of range");
    if (!std::isfinite(t.value)) throw std::invalid_argument("non-finite matrix entry");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  // Sum duplicates, drop exact zeros.
  std::vector<Triplet> merged;
  merged.reserve(entries.size());
  for (const Triplet& t : entries) {
    if (!merged.empty() && merged.back().row == t.row && merged.back().col == t.col) {
      merged.back().value += t.value;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const Triplet& t) { return t.value == 0.0; });

  SparseMatrix a;
  a.m_ = m;
  a.n_ = n;
  const Index nz = static_cast<Index>(merged.size());
  a.row_ptr_.assign(m + 1, 0);
  a.col_ptr_.assign(n + 1, 0);
  a.row_col_.resize(nz);
  a.row_val_.resize(nz);
  a.col_row_.resize(nz);
  a.col_val_.resize(nz);

  for (const Triplet& t : merged) {
    ++a.row_ptr_[t.row + 1];
    ++a.col_ptr_[t.col + 1];
  }
  for (Index i = 0; i < m; ++i) a.row_ptr_[i + 1] += a.row_ptr_[i];
  for (Index j = 0; j < n; ++j) a.col_ptr_[j + 1] += a.col_ptr_[j];

  // merged is row-major sorted already.
  for (Index k = 0; k < nz; ++k) {
    a.row_col_[k] = merged[k].col;
    a.row_val_[k] = merged[k].value;
  }
  std::vector<Index> fill(a.col_ptr_.begin(), a.col_ptr_.end() - 1);
  for (const Triplet& t : merged) {
    const Index slot = fill[t.col]++;
    a.col_row_[slot] = t.row;
    a.col_val_[slot] = t.value;
  }

  a.row_norm_sq_.assign(m, 0.0);
  a.col_norm_sq_.assign(n, 0.0);
  double max_abs = 0.0;
  double fro_sq = 0.0;
  for (const Triplet& t : merged) {
    const double v2 = t.value * t.value;
    a.row_norm_sq_[t.row] += v2;
    a.col_norm_sq_[t.col] += v2;
    fro_sq += v2;
    max_abs = std::max(max_abs, std::abs(t.value));
  }
  a.norm_max_ = max_abs;
  a.norm_fro_ = std::sqrt(fro_sq);
  double max_row = 0.0;
  for (Index i = 0; i < m; ++i) max_row = std::max(max_row, a.row_norm_sq_[i]);
  a.norm_2_to_inf_ = std::sqrt(max_row);
  return a;
}

SparseVector SparseMatrix::row(Index i) const {
  const Index b = row_ptr_[i], e = row_ptr_[i + 1];
  return SparseVector{n_, {row_col_.data() + b, static_cast<size_t>(e - b)},
                      {row_val_.data() + b, static_cast<size_t>(e - b)}};
}

SparseVector SparseMatrix::col(Index j) const {
  const Index b = col_ptr_[j], e = col_ptr_[j + 1];
  return SparseVector{m_, {col_row_.data() + b, static_cast<size_t>(e - b)},
                      {col_val_.data() + b, static_cast<size_t>(e - b)}};
}

Vector SparseMatrix::multiply(const Vector& x) const {
  if (x.size() != n_) throw std::invalid_argument("matvec: dimension mismatch");
  Vector out = Vector::Zero(m_);
  for (Index i = 0; i < m_; ++i) {
    double acc = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc += row_val_[k] * x[row_col_[k]];
    out[i] = acc;
  }
  return out;
}

Vector SparseMatrix::multiply_transpose(const Vector& y) const {
  if (y.size() != m_) throw std::invalid_argument("matvec_transpose: dimension mismatch");
  Vector out = Vector::Zero(n_);
  for (Index j = 0; j < n_; ++j) {
    double acc = 0.0;
    for (Index k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) acc += col_val_[k] * y[col_row_[k]];
    out[j] = acc;
  }
  return out;
}

std::uint64_t SparseMatrix::checksum() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(static_cast<std::uint64_t>(m_));
  mix(static_cast<std::uint64_t>(n_));
  for (Index i = 0; i < m_; ++i) {
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      std::uint64_t bits;
      std::memcpy(&bits, &row_val_[k], sizeof bits);
      mix(static_cast<std::uint64_t>(i));
      mix(static_cast<std::uint64_t>(row_col_[k]));
      mix(bits);
    }
  }
  return h;
}

Vector matvec(const SparseMatrix& a, const Vector& x) { return a.multiply(x); }
Vector matvec_transpose(const SparseMatrix& a, const Vector& y) {
  return a.multiply_transpose(y);
}

namespace {

double draw_value(std::mt19937_64& gen, const GeneratorParams& p) {
  auto unit = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  for (int attempt = 0; attempt < 64; ++attempt) {
    double v = 0.0;
    switch (p.dist) {
      case ValueDist::Uniform:
        v = p.param_a + (p.param_b - p.param_a) * unit();
        break;
      case ValueDist::Gaussian: {
        // Box-Muller, two fixed draws per value.
        const double u1 = std::max(unit(), 1e-300);
        const double u2 = unit();
        v = p.param_a + p.param_b * std::sqrt(-2.0 * std::log(u1)) *
                            std::cos(6.283185307179586 * u2);
        break;
      }
      case ValueDist::PlusMinus:
        v = unit() < 0.5 ? -p.param_a : p.param_a;
        break;
    }
    if (v != 0.0 && std::isfinite(v)) return v;
  }
  throw std::runtime_error("value distribution keeps producing zeros");
}

}  // namespace

SparseMatrix generate_random(const GeneratorParams& p) {
  if (!(p.density > 0.0 && p.density <= 1.0))
    throw std::invalid_argument("density must lie in (0, 1]");
  if (p.rows < 1 || p.cols < 1) throw std::invalid_argument("dimensions must be positive");

  std::mt19937_64 gen(p.seed);
  auto unit = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };

  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(p.density * static_cast<double>(p.rows * p.cols)) + 16);
  std::vector<bool> row_hit(p.rows, false), col_hit(p.cols, false);
  for (Index i = 0; i < p.rows; ++i) {
    for (Index j = 0; j < p.cols; ++j) {
      if (p.density >= 1.0 || unit() < p.density) {
        entries.push_back({i, j, draw_value(gen, p)});
        row_hit[i] = true;
        col_hit[j] = true;
      }
    }
  }
  for (Index i = 0; i < p.rows; ++i) {
    if (!row_hit[i]) {
      const Index j = std::min<Index>(static_cast<Index>(unit() * p.cols), p.cols - 1);
      entries.push_back({i, j, draw_value(gen, p)});
      col_hit[j] = true;
    }
  }
  for (Index j = 0; j < p.cols; ++j) {
    if (!col_hit[j]) {
      const Index i = std::min<Index>(static_cast<Index>(unit() * p.rows), p.rows - 1);
      entries.push_back({i, j, draw_value(gen, p)});
    }
  }
  return SparseMatrix::from_triplets(p.rows, p.cols, std::move(entries));
}

}  // namespace vrgames
