#include "vrgames/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace vrgames {

Index sample_weighted(std::span<const double> weights, Rng& rng) {
  if (weights.empty()) throw std::invalid_argument("sample_weighted: empty weight vector");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("sample_weighted: weights must be finite and nonnegative");
    total += w;
  }
  if (total <= 0.0)
    throw std::invalid_argument("sample_weighted: degenerate distribution (all weights zero)");
  const double target = rng.next_double() * total;
  double acc = 0.0;
  Index last_positive = -1;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = static_cast<Index>(i);
    acc += weights[i];
    if (target < acc && weights[i] > 0.0) return static_cast<Index>(i);
  }
  // target == total up to roundoff: return the last index with positive weight.
  return last_positive;
}

Index sample_weighted(const Vector& weights, Rng& rng) {
  return sample_weighted(std::span<const double>(weights.data(),
                                                 static_cast<size_t>(weights.size())),
                         rng);
}

AliasTable::AliasTable(std::span<const double> probs) {
  if (probs.empty()) throw std::invalid_argument("alias table: empty probability vector");
  double total = 0.0;
  for (double p : probs) {
    if (p < 0.0 || !std::isfinite(p))
      throw std::invalid_argument("alias table: probabilities must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("alias table: probabilities must sum to 1");

  const Index k = static_cast<Index>(probs.size());
  prob_.assign(k, 0.0);
  alias_.assign(k, 0);
  std::vector<double> scaled(k);
  for (Index i = 0; i < k; ++i) scaled[i] = probs[i] * static_cast<double>(k) / total;

  std::vector<Index> small, large;
  small.reserve(k);
  large.reserve(k);
  for (Index i = 0; i < k; ++i) (scaled[i] < 1.0 ? small : large).push_back(i);

  while (!small.empty() && !large.empty()) {
    const Index s = small.back();
    const Index l = large.back();
    small.pop_back();
    large.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (Index i : large) {
    prob_[i] = 1.0;
    alias_[i] = i;
  }
  for (Index i : small) {  // only reachable through roundoff
    prob_[i] = 1.0;
    alias_[i] = i;
  }
}

Index AliasTable::sample(Rng& rng) const {
  const Index slot = rng.next_index(size());
  const double coin = rng.next_double();
  return coin < prob_[slot] ? slot : alias_[slot];
}

}  // namespace vrgames
