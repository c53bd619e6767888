#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "alphabp/common.hpp"
#include "alphabp/graph.hpp"
#include "alphabp/inference.hpp"
#include "alphabp/mrf.hpp"

namespace alphabp {

// Symmetric binary potentials: φ_ts = exp{θ_ts x_t x_s}, φ_s ∝ exp{θ_s x_s},
// with θ_ts stored once per undirected edge (graph edge order) and θ_s per
// node.
struct ThetaParams {
  std::vector<double> theta_edge;
  std::vector<double> theta_node;
};

// θ_ts = -2 J_ts and θ_s = -b_s make the Ising potentials match the
// exp{θ_ts x_t x_s} / exp{θ_s x_s} form. The constant -J_ss is dropped; it
// breaks the odd symmetry θ_s(x) = -θ_s(-x) and cancels from all log ratios.
inline ThetaParams theta_from_ising(const IsingModel& model, const Graph& graph) {
  ThetaParams theta;
  theta.theta_edge.reserve(graph.num_edges());
  for (auto [s, t] : graph.edges()) theta.theta_edge.push_back(-2.0 * model.coupling(s, t));
  theta.theta_node.reserve(model.n);
  for (int s = 0; s < model.n; ++s) theta.theta_node.push_back(-model.b[s]);
  return theta;
}

inline ThetaParams theta_from_ising(const IsingModel& model) {
  return theta_from_ising(model, model.graph());
}

// Dense nonnegative matrix over directed edges, rows and columns indexed by
// the graph's lexicographic directed-edge map.
struct ConvergenceMatrix {
  int dim = 0;
  std::vector<double> values;  // row-major dim x dim

  double at(int row, int col) const { return values[static_cast<std::size_t>(row) * dim + col]; }
  double& at(int row, int col) { return values[static_cast<std::size_t>(row) * dim + col]; }
};

struct Certificate {
  double lambda_star = 0.0;
  double l1_norm = 0.0;
  double linf_norm = 0.0;
  bool theorem1_holds = false;
  bool corollary_l1_holds = false;
  bool corollary_linf_holds = false;
};

// Log-ratio coordinates z_ts = log(m_ts(+1)/m_ts(-1)) over directed edges.
struct LogRatioState {
  std::vector<double> z;
};

namespace detail {
inline void check_theta_shape(const ThetaParams& theta, const Graph& graph) {
  if (theta.theta_edge.size() != static_cast<std::size_t>(graph.num_edges()) ||
      theta.theta_node.size() != static_cast<std::size_t>(graph.num_nodes()))
    throw StructuralError("convergence: theta shape does not match graph");
}
}  // namespace detail

// The certificate matrix, entries indexed by directed edges:
//   M[(t→s),(t→s)] = |1-α_ts|
//   M[(t→s),(s→t)] = |1-α_ts| tanh|α_ts θ_ts|
//   M[(t→s),(u→t)] = tanh|α_ts θ_ts|     for u ∈ N(t)\s
// and zero elsewhere.
inline ConvergenceMatrix build_m_matrix(const ThetaParams& theta, const AlphaAssignment& alphas,
                                        const Graph& graph) {
  detail::check_theta_shape(theta, graph);
  ConvergenceMatrix m;
  m.dim = graph.num_directed_edges();
  m.values.assign(static_cast<std::size_t>(m.dim) * m.dim, 0.0);
  for (int d = 0; d < m.dim; ++d) {
    auto [t, s] = graph.directed_edges()[d];
    int e = graph.edge_index(t, s);
    double alpha = alphas.at(e);
    double coupling = std::tanh(std::abs(alpha * theta.theta_edge[e]));
    m.at(d, d) = std::abs(1.0 - alpha);
    m.at(d, graph.directed_index(s, t)) = std::abs(1.0 - alpha) * coupling;
    for (int u : graph.neighbors(t))
      if (u != s) m.at(d, graph.directed_index(u, t)) = coupling;
  }
  return m;
}

// Largest singular value via power iteration on MᵀM. Deterministic all-ones
// start, relative tolerance on successive estimates.
inline double largest_singular_value(const ConvergenceMatrix& m, double tol = 1e-10,
                                     int max_iterations = 1000000) {
  const int n = m.dim;
  if (n == 0) return 0.0;
  std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> mv(n), w(n);
  double sigma = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += m.at(i, j) * v[j];
      mv[i] = acc;
    }
    for (int j = 0; j < n; ++j) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += m.at(i, j) * mv[i];
      w[j] = acc;
    }
    double norm = 0.0;
    for (double x : w) norm += x * x;
    norm = std::sqrt(norm);
    if (norm == 0.0) return 0.0;  // v in the null space of M
    double next_sigma = std::sqrt(norm);
    for (int j = 0; j < n; ++j) v[j] = w[j] / norm;
    if (std::abs(next_sigma - sigma) <= tol * std::max(next_sigma, 1e-30)) return next_sigma;
    sigma = next_sigma;
  }
  throw NumericalError("largest_singular_value: power iteration did not converge; last estimate " +
                       std::to_string(sigma));
}

// Theorem-1 / Corollary certificate. The norm conditions are evaluated from
// their closed forms: ‖M‖₁ is the max column sum
//   max_{u→v} |1-α_uv| + |1-α_vu| tanh|α_vu θ_vu| + Σ_{w∈N(v)\u} tanh|α_vw θ_vw|
// and ‖M‖∞ the max row sum
//   max_{t→s} |1-α_ts| (1 + tanh|α_ts θ_ts|) + (|N(t)|-1) tanh|α_ts θ_ts|.
inline Certificate certify(const ThetaParams& theta, const AlphaAssignment& alphas,
                           const Graph& graph) {
  detail::check_theta_shape(theta, graph);
  Certificate cert;
  ConvergenceMatrix m = build_m_matrix(theta, alphas, graph);
  cert.lambda_star = largest_singular_value(m);

  auto edge_alpha = [&](int a, int b) { return alphas.at(graph.edge_index(a, b)); };
  auto edge_coupling = [&](int a, int b) {
    int e = graph.edge_index(a, b);
    return std::tanh(std::abs(alphas.at(e) * theta.theta_edge[e]));
  };

  double l1 = 0.0, linf = 0.0;
  for (auto [u, v] : graph.directed_edges()) {
    double col = std::abs(1.0 - edge_alpha(u, v)) +
                 std::abs(1.0 - edge_alpha(v, u)) * edge_coupling(v, u);
    for (int w : graph.neighbors(v))
      if (w != u) col += edge_coupling(v, w);
    l1 = std::max(l1, col);
  }
  for (auto [t, s] : graph.directed_edges()) {
    double row = std::abs(1.0 - edge_alpha(t, s)) * (1.0 + edge_coupling(t, s)) +
                 (graph.degree(t) - 1) * edge_coupling(t, s);
    linf = std::max(linf, row);
  }
  cert.l1_norm = l1;
  cert.linf_norm = linf;
  cert.theorem1_holds = cert.lambda_star < 1.0;
  cert.corollary_l1_holds = l1 < 1.0;
  cert.corollary_linf_holds = linf < 1.0;
  return cert;
}

inline Certificate certify_ising(const IsingModel& model, const AlphaAssignment& alphas) {
  return certify(theta_from_ising(model), alphas, model.graph());
}

inline LogRatioState messages_to_logratio(const MessageState& state) {
  LogRatioState z;
  z.z.reserve(state.m.size());
  for (const auto& msg : state.m) {
    if (msg.size() != 2)
      throw StructuralError("messages_to_logratio: binary messages required");
    z.z.push_back(std::log(msg[1] / msg[0]));
  }
  return z;
}

inline MessageState logratio_to_messages(const LogRatioState& z) {
  MessageState state;
  state.m.reserve(z.z.size());
  for (double v : z.z) {
    // (1/(1+e^z), e^z/(1+e^z)) in a form stable for large |z|
    double p1 = 1.0 / (1.0 + std::exp(-v));
    state.m.push_back({1.0 - p1, p1});
  }
  return state;
}

// H(μ;κ) = log((e^{μ+κ}+1)/(e^{μ}+e^{κ})), evaluated with shifted
// log-sum-exp so |μ|,|κ| beyond 700 stay finite.
inline double h_function(double mu, double kappa) {
  double num = std::max(mu + kappa, 0.0) + std::log1p(std::exp(-std::abs(mu + kappa)));
  double den = std::max(mu, kappa) + std::log1p(std::exp(-std::abs(mu - kappa)));
  return num - den;
}

// G(μ;κ) = ∂H/∂μ = sinh κ / (cosh κ + cosh μ); |G| ≤ tanh(|κ|/2).
inline double g_function(double mu, double kappa) {
  double a = std::abs(kappa), b = std::abs(mu);
  double c = std::max(a, b);
  double num = std::exp(a - c) - std::exp(-a - c);
  double den = std::exp(a - c) + std::exp(-a - c) + std::exp(b - c) + std::exp(-b - c);
  return (kappa < 0 ? -num : num) / den;
}

// One synchronous sweep of the proof-space dynamics:
//   F_ts(z) = (1-α_ts) z_ts + H(Δ_ts; 2 α_ts θ_ts),
//   Δ_ts = 2 θ_t + (1-α_ts) z_st + Σ_{w∈N(t)\s} z_wt.
inline LogRatioState z_update(const ThetaParams& theta, const AlphaAssignment& alphas,
                              const Graph& graph, const LogRatioState& z) {
  detail::check_theta_shape(theta, graph);
  if (z.z.size() != static_cast<std::size_t>(graph.num_directed_edges()))
    throw StructuralError("z_update: state does not cover the directed edges");
  LogRatioState next;
  next.z.resize(z.z.size());
  for (int d = 0; d < graph.num_directed_edges(); ++d) {
    auto [t, s] = graph.directed_edges()[d];
    int e = graph.edge_index(t, s);
    double alpha = alphas.at(e);
    double delta = 2.0 * theta.theta_node[t] +
                   (1.0 - alpha) * z.z[graph.directed_index(s, t)];
    for (int w : graph.neighbors(t))
      if (w != s) delta += z.z[graph.directed_index(w, t)];
    next.z[d] = (1.0 - alpha) * z.z[d] + h_function(delta, 2.0 * alpha * theta.theta_edge[e]);
  }
  return next;
}

struct ContractionReport {
  int steps_checked = 0;
  int violations = 0;       // entries beyond the slack
  double max_violation = 0.0;  // max over entries of lhs - rhs
};

// Checks |z^{(n+1)} - z^{(n)}| ≤ M |z^{(n)} - z^{(n-1)}| elementwise along a
// trace of iterates, with additive slack.
inline ContractionReport contraction_check(const ThetaParams& theta,
                                           const AlphaAssignment& alphas, const Graph& graph,
                                           const std::vector<LogRatioState>& trace,
                                           double slack = 1e-9) {
  if (trace.size() < 3)
    throw StructuralError("contraction_check: trace must hold at least 3 states");
  ConvergenceMatrix m = build_m_matrix(theta, alphas, graph);
  ContractionReport report;
  const int dim = m.dim;
  for (std::size_t n = 2; n < trace.size(); ++n) {
    const auto& z2 = trace[n].z;
    const auto& z1 = trace[n - 1].z;
    const auto& z0 = trace[n - 2].z;
    for (int i = 0; i < dim; ++i) {
      double rhs = 0.0;
      for (int j = 0; j < dim; ++j) rhs += m.at(i, j) * std::abs(z1[j] - z0[j]);
      double excess = std::abs(z2[i] - z1[i]) - rhs;
      report.max_violation = std::max(report.max_violation, excess);
      if (excess > slack) ++report.violations;
    }
    ++report.steps_checked;
  }
  return report;
}

}  // namespace alphabp
