#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "alphabp/common.hpp"
#include "alphabp/mrf.hpp"
#include "alphabp/rng.hpp"

namespace alphabp {

// One normalized positive message vector per directed edge, indexed by the
// graph's directed-edge map (m[d] is the message along directed edge d,
// i.e. m_ts over the states of the target node s).
struct MessageState {
  std::vector<std::vector<double>> m;

  bool empty() const { return m.empty(); }
};

// Per-undirected-edge α values; α_ts = α_st by construction.
class AlphaAssignment {
 public:
  AlphaAssignment(const Graph& graph, double alpha)
      : per_edge_(graph.num_edges(), alpha) {}

  AlphaAssignment(const Graph& graph, std::vector<double> per_edge)
      : per_edge_(std::move(per_edge)) {
    if (per_edge_.size() != static_cast<std::size_t>(graph.num_edges()))
      throw StructuralError("AlphaAssignment: one alpha per undirected edge");
  }

  double at(int edge_index) const { return per_edge_[edge_index]; }
  const std::vector<double>& values() const { return per_edge_; }

 private:
  std::vector<double> per_edge_;
};

// Per-undirected-edge edge appearance probability μ_st ∈ (0,1].
class EdgeAppearance {
 public:
  EdgeAppearance(const Graph& graph, std::vector<double> mu) : mu_(std::move(mu)) {
    if (mu_.size() != static_cast<std::size_t>(graph.num_edges()))
      throw StructuralError("EdgeAppearance: one value per undirected edge");
    for (double v : mu_)
      if (!(v > 0.0) || v > 1.0)
        throw ParameterError("EdgeAppearance: mu must lie in (0,1]");
  }

  double at(int edge_index) const { return mu_[edge_index]; }
  const std::vector<double>& values() const { return mu_; }

 private:
  std::vector<double> mu_;
};

// Linear interpolation of a broadcast α over a fixed iteration horizon.
struct AnnealSchedule {
  double alpha_start = 1.0;
  double alpha_end = 1.0;
  int num_iterations = 200;

  double at(int iteration) const {
    if (num_iterations <= 1) return alpha_end;
    int n = std::min(iteration, num_iterations - 1);
    return alpha_start +
           (alpha_end - alpha_start) * static_cast<double>(n) / (num_iterations - 1);
  }
};

struct RunConfig {
  int max_iterations = 200;
  double tolerance = 1e-6;  // on the max-norm message change
  std::optional<double> damping;
  std::optional<AnnealSchedule> anneal;
  std::optional<std::uint64_t> seed;  // multiplicative noise on the uniform init

  void validate() const {
    if (!(tolerance > 0.0)) throw ParameterError("RunConfig: tolerance must be > 0");
    if (max_iterations < 1) throw ParameterError("RunConfig: max_iterations must be >= 1");
    if (damping && !(*damping > 0.0 && *damping < 1.0))
      throw ParameterError("RunConfig: damping must lie in (0,1)");
  }
};

struct BeliefResult {
  std::vector<DiscreteDistribution> marginals;
  bool converged = false;
  int iterations_used = 0;
  std::vector<double> residual_trace;
  MessageState final_messages;
};

// Uniform message on every directed edge.
inline MessageState init_messages(const PairwiseMRF& mrf) {
  const std::size_t k = mrf.num_states();
  MessageState state;
  state.m.assign(mrf.graph().num_directed_edges(),
                 std::vector<double>(k, 1.0 / static_cast<double>(k)));
  return state;
}

// Uniform init perturbed by multiplicative noise, for robustness studies.
inline MessageState init_messages_noisy(const PairwiseMRF& mrf, std::uint64_t seed) {
  MessageState state = init_messages(mrf);
  Rng rng(seed);
  for (auto& msg : state.m) {
    for (double& v : msg) v *= std::exp(0.1 * rng.normal());
    detail::normalize_in_place(msg);
  }
  return state;
}

namespace detail {

constexpr double kMessageFloor = 1e-300;
constexpr double kDegenerateThreshold = 1e-100;

// Exponentiate-and-normalize with the message floor. Entries are clamped at
// 1e-300 before normalization; a post-normalization entry below 1e-100 is a
// degenerate message.
inline std::vector<double> finish_message(const std::vector<double>& log_msg) {
  double lse = log_sum_exp(log_msg);
  if (!std::isfinite(lse)) throw DegenerateMessageError("message update produced no mass");
  std::vector<double> out(log_msg.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::max(std::exp(log_msg[i] - lse), kMessageFloor);
  normalize_in_place(out);
  for (double v : out)
    if (v < kDegenerateThreshold)
      throw DegenerateMessageError("message entry underflowed the 1e-100 floor");
  return out;
}

// Per-node log-message sums Σ_{w∈N(t)} log m_wt(x_t); excluding one neighbor
// is then a single subtraction.
inline std::vector<std::vector<double>> incoming_log_sums(const PairwiseMRF& mrf,
                                                          const MessageState& state) {
  const Graph& g = mrf.graph();
  const std::size_t k = mrf.num_states();
  std::vector<std::vector<double>> total(g.num_nodes(), std::vector<double>(k, 0.0));
  for (int t = 0; t < g.num_nodes(); ++t)
    for (int w : g.neighbors(t)) {
      const auto& msg = state.m[g.directed_index(w, t)];
      for (std::size_t x = 0; x < k; ++x) total[t][x] += std::log(msg[x]);
    }
  return total;
}

}  // namespace detail

// One parallel-synchronous α-BP sweep:
//   m_ts^new(x_s) ∝ m_ts(x_s)^{1-α_ts} Σ_{x_t} φ_ts(x_t,x_s)^{α_ts}
//                   m_st(x_t)^{1-α_ts} φ_t(x_t) Π_{w∈N(t)\s} m_wt(x_t).
// All directed edges update from the old state.
inline MessageState alpha_bp_step(const PairwiseMRF& mrf, const AlphaAssignment& alphas,
                                  const MessageState& state) {
  const Graph& g = mrf.graph();
  const std::size_t k = mrf.num_states();
  if (state.m.size() != static_cast<std::size_t>(g.num_directed_edges()))
    throw StructuralError("alpha_bp_step: state does not cover the directed edges");

  auto total = detail::incoming_log_sums(mrf, state);
  MessageState next;
  next.m.resize(g.num_directed_edges());
  std::vector<double> terms(k), log_msg(k);
  for (int d = 0; d < g.num_directed_edges(); ++d) {
    auto [t, s] = g.directed_edges()[d];
    const double alpha = alphas.at(g.edge_index(t, s));
    const auto& m_ts = state.m[d];
    const auto& m_st = state.m[g.directed_index(s, t)];
    for (std::size_t xs = 0; xs < k; ++xs) {
      for (std::size_t xt = 0; xt < k; ++xt) {
        double lm_st = std::log(m_st[xt]);
        terms[xt] = alpha * mrf.log_pairwise(t, s, xt, xs) + (1.0 - alpha) * lm_st +
                    mrf.log_unary(t, xt) + total[t][xt] - lm_st;
      }
      log_msg[xs] = (1.0 - alpha) * std::log(m_ts[xs]) + detail::log_sum_exp(terms);
    }
    next.m[d] = detail::finish_message(log_msg);
  }
  return next;
}

// Literal sum-product sweep in linear scale; the α≡1 reduction reference.
inline MessageState standard_bp_step(const PairwiseMRF& mrf, const MessageState& state) {
  const Graph& g = mrf.graph();
  const std::size_t k = mrf.num_states();
  MessageState next;
  next.m.resize(g.num_directed_edges());
  for (int d = 0; d < g.num_directed_edges(); ++d) {
    auto [t, s] = g.directed_edges()[d];
    std::vector<double> msg(k, 0.0);
    for (std::size_t xs = 0; xs < k; ++xs) {
      for (std::size_t xt = 0; xt < k; ++xt) {
        double prod = mrf.pairwise(s, t, xs, xt) * mrf.unary(t, xt);
        for (int w : g.neighbors(t))
          if (w != s) prod *= state.m[g.directed_index(w, t)][xt];
        msg[xs] += prod;
      }
    }
    for (double& v : msg) v = std::max(v, detail::kMessageFloor);
    detail::normalize_in_place(msg);
    next.m[d] = msg;
  }
  return next;
}

// Damped BP: m^new ∝ m^γ (BP update)^{1-γ}, γ ∈ (0,1).
inline MessageState damped_bp_step(const PairwiseMRF& mrf, double gamma,
                                   const MessageState& state) {
  if (!(gamma > 0.0 && gamma < 1.0))
    throw ParameterError("damped_bp_step: gamma must lie in (0,1)");
  MessageState bp = alpha_bp_step(mrf, AlphaAssignment(mrf.graph(), 1.0), state);
  MessageState next;
  next.m.resize(state.m.size());
  for (std::size_t d = 0; d < state.m.size(); ++d) {
    std::vector<double> log_msg(state.m[d].size());
    for (std::size_t x = 0; x < log_msg.size(); ++x)
      log_msg[x] = gamma * std::log(state.m[d][x]) + (1.0 - gamma) * std::log(bp.m[d][x]);
    next.m[d] = detail::finish_message(log_msg);
  }
  return next;
}

// Tree-reweighted sweep:
//   m_ts^new(x_s) ∝ Σ_{x_t} φ_st(x_s,x_t)^{1/μ_st} φ_t(x_t)
//                   Π_{w∈N(t)\s} m_wt(x_t)^{μ_wt} / m_st(x_t)^{1-μ_st}.
// μ ≡ 1 reduces to the plain BP sweep.
inline MessageState trw_step(const PairwiseMRF& mrf, const EdgeAppearance& mu,
                             const MessageState& state) {
  const Graph& g = mrf.graph();
  const std::size_t k = mrf.num_states();
  MessageState next;
  next.m.resize(g.num_directed_edges());
  std::vector<double> terms(k), log_msg(k);
  for (int d = 0; d < g.num_directed_edges(); ++d) {
    auto [t, s] = g.directed_edges()[d];
    const double mu_st = mu.at(g.edge_index(s, t));
    const auto& m_st = state.m[g.directed_index(s, t)];
    for (std::size_t xs = 0; xs < k; ++xs) {
      for (std::size_t xt = 0; xt < k; ++xt) {
        double acc = mrf.log_pairwise(s, t, xs, xt) / mu_st + mrf.log_unary(t, xt) -
                     (1.0 - mu_st) * std::log(m_st[xt]);
        for (int w : g.neighbors(t))
          if (w != s)
            acc += mu.at(g.edge_index(w, t)) *
                   std::log(state.m[g.directed_index(w, t)][xt]);
        terms[xt] = acc;
      }
      log_msg[xs] = detail::log_sum_exp(terms);
    }
    next.m[d] = detail::finish_message(log_msg);
  }
  return next;
}

// Node beliefs q_s ∝ φ_s(x_s) Π_{w∈N(s)} m_ws(x_s), normalized.
inline std::vector<DiscreteDistribution> node_beliefs(const PairwiseMRF& mrf,
                                                      const MessageState& state) {
  const Graph& g = mrf.graph();
  const std::size_t k = mrf.num_states();
  std::vector<DiscreteDistribution> beliefs(g.num_nodes());
  for (int s = 0; s < g.num_nodes(); ++s) {
    std::vector<double> log_b(k);
    for (std::size_t x = 0; x < k; ++x) {
      double acc = mrf.log_unary(s, x);
      for (int w : g.neighbors(s)) acc += std::log(state.m[g.directed_index(w, s)][x]);
      log_b[x] = acc;
    }
    double lse = detail::log_sum_exp(log_b);
    beliefs[s].resize(k);
    for (std::size_t x = 0; x < k; ++x) beliefs[s][x] = std::exp(log_b[x] - lse);
  }
  return beliefs;
}

// Per-node argmax decoder; ties break toward the lowest state index.
inline std::vector<int> map_decision(const std::vector<DiscreteDistribution>& beliefs,
                                     const Domain& domain) {
  std::vector<int> decision(beliefs.size());
  for (std::size_t s = 0; s < beliefs.size(); ++s) {
    std::size_t best = 0;
    for (std::size_t x = 1; x < beliefs[s].size(); ++x)
      if (beliefs[s][x] > beliefs[s][best]) best = x;
    decision[s] = domain.label(best);
  }
  return decision;
}

namespace detail {

inline double max_norm_change(const MessageState& a, const MessageState& b) {
  double r = 0.0;
  for (std::size_t d = 0; d < a.m.size(); ++d)
    for (std::size_t x = 0; x < a.m[d].size(); ++x)
      r = std::max(r, std::abs(a.m[d][x] - b.m[d][x]));
  return r;
}

template <typename StepFn>
BeliefResult run_message_loop(const PairwiseMRF& mrf, const RunConfig& config,
                              StepFn&& step) {
  config.validate();
  MessageState state =
      config.seed ? init_messages_noisy(mrf, *config.seed) : init_messages(mrf);
  BeliefResult result;
  for (int n = 0; n < config.max_iterations; ++n) {
    MessageState next = step(n, state);
    double residual = max_norm_change(next, state);
    state = std::move(next);
    result.residual_trace.push_back(residual);
    ++result.iterations_used;
    if (residual < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.marginals = node_beliefs(mrf, state);
  result.final_messages = std::move(state);
  return result;
}

}  // namespace detail

// Iterate α-BP sweeps until the max-norm message change drops below the
// tolerance or the iteration budget runs out. An anneal schedule, when set,
// overrides the per-edge α with its broadcast value at each iteration.
inline BeliefResult run_alpha_bp(const PairwiseMRF& mrf, const AlphaAssignment& alphas,
                                 const RunConfig& config) {
  if (config.anneal) {
    return detail::run_message_loop(mrf, config, [&](int n, const MessageState& s) {
      return alpha_bp_step(mrf, AlphaAssignment(mrf.graph(), config.anneal->at(n)), s);
    });
  }
  if (config.damping) {
    return detail::run_message_loop(mrf, config, [&](int, const MessageState& s) {
      return damped_bp_step(mrf, *config.damping, s);
    });
  }
  return detail::run_message_loop(
      mrf, config, [&](int, const MessageState& s) { return alpha_bp_step(mrf, alphas, s); });
}

inline BeliefResult run_bp(const PairwiseMRF& mrf, const RunConfig& config) {
  return run_alpha_bp(mrf, AlphaAssignment(mrf.graph(), 1.0), config);
}

inline BeliefResult run_damped_bp(const PairwiseMRF& mrf, double gamma, RunConfig config) {
  config.damping = gamma;
  return run_alpha_bp(mrf, AlphaAssignment(mrf.graph(), 1.0), config);
}

inline BeliefResult run_trw(const PairwiseMRF& mrf, const EdgeAppearance& mu,
                            const RunConfig& config) {
  return detail::run_message_loop(
      mrf, config, [&](int, const MessageState& s) { return trw_step(mrf, mu, s); });
}

}  // namespace alphabp
