#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "alphabp/common.hpp"
#include "alphabp/graph.hpp"

namespace alphabp {

// Ising parameters: p(x) ∝ exp{-x^T J x - b^T x}, x ∈ {-1,1}^N.
// J is the symmetric weighted adjacency matrix (stored dense, row-major);
// off-diagonal nonzeros define the edge set. Diagonal entries are
// assignment-independent constants and are dropped on conversion.
struct IsingModel {
  int n = 0;
  std::vector<double> J;  // n*n row-major, symmetric
  std::vector<double> b;  // length n

  IsingModel(int num_nodes, std::vector<double> coupling, std::vector<double> field)
      : n(num_nodes), J(std::move(coupling)), b(std::move(field)) {
    if (static_cast<int>(J.size()) != n * n || static_cast<int>(b.size()) != n)
      throw StructuralError("IsingModel: dimension mismatch");
    for (int s = 0; s < n; ++s)
      for (int t = s + 1; t < n; ++t)
        if (J[s * n + t] != J[t * n + s])
          throw StructuralError("IsingModel: J must be symmetric");
  }

  double coupling(int s, int t) const { return J[s * n + t]; }

  Graph graph() const {
    std::vector<std::pair<int, int>> edges;
    for (int s = 0; s < n; ++s)
      for (int t = s + 1; t < n; ++t)
        if (J[s * n + t] != 0.0) edges.emplace_back(s, t);
    return Graph(n, std::move(edges));
  }
};

// Discrete pairwise MRF: p(x) ∝ Π_s φ_s(x_s) Π_{(s,t)∈E} φ_st(x_s,x_t).
// Potentials are kept in log space; the linear-scale accessors are the
// contract surface and always return strictly positive values.
// Pairwise tables are stored once per undirected edge (s<t), row index = x_s;
// the reversed lookup transposes.
class PairwiseMRF {
 public:
  PairwiseMRF(Graph graph, Domain domain, std::vector<std::vector<double>> log_unary,
              std::vector<std::vector<double>> log_pairwise)
      : graph_(std::move(graph)),
        domain_(std::move(domain)),
        log_unary_(std::move(log_unary)),
        log_pairwise_(std::move(log_pairwise)) {
    const std::size_t k = domain_.size();
    if (log_unary_.size() != static_cast<std::size_t>(graph_.num_nodes()))
      throw StructuralError("PairwiseMRF: unary table count mismatch");
    for (const auto& u : log_unary_) {
      if (u.size() != k) throw StructuralError("PairwiseMRF: unary table size mismatch");
      for (double v : u)
        if (!std::isfinite(v)) throw DomainError("PairwiseMRF: nonpositive unary potential");
    }
    if (log_pairwise_.size() != static_cast<std::size_t>(graph_.num_edges()))
      throw StructuralError("PairwiseMRF: pairwise table count mismatch");
    for (const auto& p : log_pairwise_) {
      if (p.size() != k * k) throw StructuralError("PairwiseMRF: pairwise table size mismatch");
      for (double v : p)
        if (!std::isfinite(v)) throw DomainError("PairwiseMRF: nonpositive pairwise potential");
    }
  }

  // Construct from linear-scale potential tables (all entries > 0).
  static PairwiseMRF from_tables(Graph graph, Domain domain,
                                 const std::vector<std::vector<double>>& unary,
                                 const std::vector<std::vector<double>>& pairwise) {
    auto to_log = [](const std::vector<double>& t) {
      std::vector<double> out(t.size());
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] > 0.0)) throw DomainError("PairwiseMRF: potential entries must be > 0");
        out[i] = std::log(t[i]);
      }
      return out;
    };
    std::vector<std::vector<double>> lu, lp;
    lu.reserve(unary.size());
    lp.reserve(pairwise.size());
    for (const auto& t : unary) lu.push_back(to_log(t));
    for (const auto& t : pairwise) lp.push_back(to_log(t));
    return PairwiseMRF(std::move(graph), std::move(domain), std::move(lu), std::move(lp));
  }

  const Graph& graph() const { return graph_; }
  const Domain& domain() const { return domain_; }
  std::size_t num_states() const { return domain_.size(); }

  double log_unary(int s, std::size_t state) const { return log_unary_[s][state]; }
  double unary(int s, std::size_t state) const { return std::exp(log_unary_[s][state]); }

  // log φ_st(x_s = a, x_t = b); valid for either orientation of (s,t).
  double log_pairwise(int s, int t, std::size_t a, std::size_t b) const {
    int e = graph_.edge_index(s, t);
    if (e < 0) throw StructuralError("PairwiseMRF: no such edge");
    const std::size_t k = domain_.size();
    const auto& [lo, hi] = graph_.edges()[e];
    (void)hi;
    return s == lo ? log_pairwise_[e][a * k + b] : log_pairwise_[e][b * k + a];
  }

  double pairwise(int s, int t, std::size_t a, std::size_t b) const {
    return std::exp(log_pairwise(s, t, a, b));
  }

 private:
  Graph graph_;
  Domain domain_;
  std::vector<std::vector<double>> log_unary_;
  std::vector<std::vector<double>> log_pairwise_;
};

// Potential-form conversion: φ_ts(x_t,x_s) = e^{-2 J_ts x_t x_s}, φ_s(x_s) = e^{-b_s x_s}.
// The constant e^{-J_ss} factors cancel under normalization and are dropped.
inline PairwiseMRF ising_to_mrf(const IsingModel& model) {
  Domain domain = Domain::binary();
  Graph graph = model.graph();
  std::vector<std::vector<double>> log_unary(model.n);
  for (int s = 0; s < model.n; ++s) {
    log_unary[s] = {-model.b[s] * domain.label(0), -model.b[s] * domain.label(1)};
  }
  std::vector<std::vector<double>> log_pairwise;
  log_pairwise.reserve(graph.num_edges());
  for (auto [s, t] : graph.edges()) {
    std::vector<double> table(4);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t bb = 0; bb < 2; ++bb)
        table[a * 2 + bb] = -2.0 * model.coupling(s, t) * domain.label(a) * domain.label(bb);
    log_pairwise.push_back(std::move(table));
  }
  return PairwiseMRF(std::move(graph), std::move(domain), std::move(log_unary),
                     std::move(log_pairwise));
}

// Unnormalized log joint: Σ_s log φ_s(x_s) + Σ_{(s,t)∈E} log φ_st(x_s,x_t).
// `assignment` holds domain labels, one per node.
inline double mrf_log_score(const PairwiseMRF& mrf, const std::vector<int>& assignment) {
  const Graph& g = mrf.graph();
  if (static_cast<int>(assignment.size()) != g.num_nodes())
    throw StructuralError("mrf_log_score: assignment length mismatch");
  std::vector<std::size_t> idx(assignment.size());
  for (std::size_t s = 0; s < assignment.size(); ++s)
    idx[s] = mrf.domain().index_of(assignment[s]);
  double score = 0.0;
  for (int s = 0; s < g.num_nodes(); ++s) score += mrf.log_unary(s, idx[s]);
  for (auto [s, t] : g.edges()) score += mrf.log_pairwise(s, t, idx[s], idx[t]);
  return score;
}

// Same score on state indices; internal fast path for the enumeration oracles.
inline double mrf_log_score_indices(const PairwiseMRF& mrf, const std::vector<std::size_t>& idx) {
  const Graph& g = mrf.graph();
  double score = 0.0;
  for (int s = 0; s < g.num_nodes(); ++s) score += mrf.log_unary(s, idx[s]);
  for (auto [s, t] : g.edges()) score += mrf.log_pairwise(s, t, idx[s], idx[t]);
  return score;
}

}  // namespace alphabp
