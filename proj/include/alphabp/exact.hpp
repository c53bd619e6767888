#pragma once

#include <cmath>
#include <vector>

#include "alphabp/common.hpp"
#include "alphabp/mrf.hpp"

namespace alphabp {

namespace detail {

constexpr double kEnumerationGuard = 16777216.0;  // 2^24 assignments

inline void check_enumeration_size(const PairwiseMRF& mrf) {
  double total = 1.0;
  for (int s = 0; s < mrf.graph().num_nodes(); ++s) {
    total *= static_cast<double>(mrf.num_states());
    if (total > kEnumerationGuard)
      throw CapacityError("enumeration: |domain|^N exceeds 2^24");
  }
}

// Odometer over state-index vectors, lexicographic with node 0 most
// significant. Returns false once the space is exhausted.
inline bool next_assignment(std::vector<std::size_t>& idx, std::size_t k) {
  for (std::size_t pos = idx.size(); pos-- > 0;) {
    if (++idx[pos] < k) return true;
    idx[pos] = 0;
  }
  return false;
}

}  // namespace detail

// Exact normalized marginals by full enumeration with streaming log-sum-exp.
inline std::vector<DiscreteDistribution> exact_marginals(const PairwiseMRF& mrf) {
  detail::check_enumeration_size(mrf);
  const int n = mrf.graph().num_nodes();
  const std::size_t k = mrf.num_states();
  std::vector<std::vector<detail::OnlineLse>> acc(n, std::vector<detail::OnlineLse>(k));
  std::vector<std::size_t> idx(n, 0);
  do {
    double score = mrf_log_score_indices(mrf, idx);
    for (int s = 0; s < n; ++s) acc[s][idx[s]].add(score);
  } while (detail::next_assignment(idx, k));

  std::vector<DiscreteDistribution> marginals(n, DiscreteDistribution(k));
  for (int s = 0; s < n; ++s) {
    std::vector<double> logs(k);
    for (std::size_t x = 0; x < k; ++x) logs[x] = acc[s][x].value();
    double lse = detail::log_sum_exp(logs);
    for (std::size_t x = 0; x < k; ++x) marginals[s][x] = std::exp(logs[x] - lse);
  }
  return marginals;
}

// Exhaustive argmax of the log score; ties break toward the
// lexicographically smallest assignment (in state-index order).
inline std::vector<int> exact_map(const PairwiseMRF& mrf) {
  detail::check_enumeration_size(mrf);
  const int n = mrf.graph().num_nodes();
  const std::size_t k = mrf.num_states();
  std::vector<std::size_t> idx(n, 0), best(n, 0);
  double best_score = mrf_log_score_indices(mrf, idx);
  while (detail::next_assignment(idx, k)) {
    double score = mrf_log_score_indices(mrf, idx);
    if (score > best_score) {  // strict: first (lex-smallest) winner is kept
      best_score = score;
      best = idx;
    }
  }
  std::vector<int> labels(n);
  for (int s = 0; s < n; ++s) labels[s] = mrf.domain().label(best[s]);
  return labels;
}

}  // namespace alphabp
