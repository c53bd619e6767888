#pragma once

#include <cmath>

#include "alphabp/common.hpp"

namespace alphabp {

namespace detail {
inline void check_positive_pair(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  if (p.size() != q.size() || p.empty())
    throw StructuralError("divergence: distributions must share a domain");
  for (double v : p)
    if (!(v > 0.0)) throw DomainError("divergence: entries must be > 0");
  for (double v : q)
    if (!(v > 0.0)) throw DomainError("divergence: entries must be > 0");
}
}  // namespace detail

// KL(p||q) = Σ p log(p/q) + Σ (q - p); the second sum accommodates
// unnormalized inputs.
inline double kl_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q) {
  detail::check_positive_pair(p, q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    d += p[i] * std::log(p[i] / q[i]) + (q[i] - p[i]);
  return d;
}

// D_α(p||q) = Σ [α p + (1-α) q - p^α q^{1-α}] / (α(1-α)).
// α ∈ {0,1} is a 0/0 form; the limits are KL(q||p) and KL(p||q) respectively.
inline double alpha_divergence(const DiscreteDistribution& p, const DiscreteDistribution& q,
                               double alpha) {
  detail::check_positive_pair(p, q);
  if (alpha == 1.0) return kl_divergence(p, q);
  if (alpha == 0.0) return kl_divergence(q, p);
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    s += alpha * p[i] + (1.0 - alpha) * q[i] -
         std::exp(alpha * std::log(p[i]) + (1.0 - alpha) * std::log(q[i]));
  return s / (alpha * (1.0 - alpha));
}

}  // namespace alphabp
