#ifndef VRGAMES_SAMPLING_HPP
#define VRGAMES_SAMPLING_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "vrgames/sparse_matrix.hpp"

namespace vrgames {

/// Seedable pseudo-random stream. All derived draws (uniform doubles,
/// bounded integers) are built from raw mt19937_64 words so the stream is
/// bit-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform over {0, ..., k-1}.
  Index next_index(Index k) {
    const Index v = static_cast<Index>(next_double() * static_cast<double>(k));
    return v < k ? v : k - 1;
  }

  /// Uniform over {1, ..., t}; the truncation draw of the restarted loop.
  Index next_index_one_based(Index t) { return 1 + next_index(t); }

 private:
  std::mt19937_64 gen_;
};

/// Draws index i with probability weights[i] / sum(weights) using one
/// cumulative pass and one uniform draw. Weights must be nonnegative;
/// throws std::invalid_argument when all weights are zero.
Index sample_weighted(std::span<const double> weights, Rng& rng);
Index sample_weighted(const Vector& weights, Rng& rng);

/// Vose alias table: O(len) preprocessing, O(1) per sample, exact
/// distribution. Consumes two uniform draws per sample (slot, then coin).
class AliasTable {
 public:
  AliasTable() = default;

  /// probs must be nonnegative and sum to 1 within 1e-9.
  explicit AliasTable(std::span<const double> probs);

  Index sample(Rng& rng) const;
  Index size() const { return static_cast<Index>(prob_.size()); }

 private:
  std::vector<double> prob_;   // acceptance threshold per slot
  std::vector<Index> alias_;
};

}  // namespace vrgames

#endif  // VRGAMES_SAMPLING_HPP
