#pragma once

#include <cmath>
#include <vector>

#include "alphabp/common.hpp"
#include "alphabp/inference.hpp"
#include "alphabp/mrf.hpp"

namespace alphabp {

// Naive mean field: coordinate ascent on the fully factorized Gibbs free
// energy. Each sweep updates q_s in node order from the stationarity
// condition q_s ∝ φ_s exp{Σ_{t∈N(s)} Σ_{x_t} q_t(x_t) log φ_st(x_s,x_t)};
// the free energy is non-increasing across sweeps. The residual trace holds
// the max change in any q_s per sweep.
inline BeliefResult mean_field_run(const PairwiseMRF& mrf, const RunConfig& config) {
  config.validate();
  const Graph& g = mrf.graph();
  const std::size_t k = mrf.num_states();
  std::vector<DiscreteDistribution> q(g.num_nodes(), DiscreteDistribution(k, 1.0 / k));

  BeliefResult result;
  std::vector<double> log_q(k);
  for (int sweep = 0; sweep < config.max_iterations; ++sweep) {
    double residual = 0.0;
    for (int s = 0; s < g.num_nodes(); ++s) {
      for (std::size_t xs = 0; xs < k; ++xs) {
        double acc = mrf.log_unary(s, xs);
        for (int t : g.neighbors(s))
          for (std::size_t xt = 0; xt < k; ++xt)
            acc += q[t][xt] * mrf.log_pairwise(s, t, xs, xt);
        log_q[xs] = acc;
      }
      double lse = detail::log_sum_exp(log_q);
      for (std::size_t xs = 0; xs < k; ++xs) {
        double v = std::exp(log_q[xs] - lse);
        residual = std::max(residual, std::abs(v - q[s][xs]));
        q[s][xs] = v;
      }
    }
    result.residual_trace.push_back(residual);
    ++result.iterations_used;
    if (residual < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.marginals = std::move(q);
  return result;
}

}  // namespace alphabp
