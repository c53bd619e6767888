#pragma once

// Shared generators and oracles for the test suites. Everything here is
// deliberately independent of the library's computation paths: scores are
// enumerated directly, spanning trees are counted by subset search, and so
// on.

#include <cmath>
#include <utility>
#include <vector>

#include "alphabp/graph.hpp"
#include "alphabp/inference.hpp"
#include "alphabp/mrf.hpp"
#include "alphabp/rng.hpp"

namespace testutil {

using namespace alphabp;

inline Graph random_graph(Rng& rng, int n, double edge_prob) {
  std::vector<std::pair<int, int>> edges;
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t)
      if (rng.uniform() < edge_prob) edges.emplace_back(s, t);
  return Graph(n, std::move(edges));
}

// Random labelled tree via a random permutation attachment.
inline Graph random_tree(Rng& rng, int n) {
  std::vector<std::pair<int, int>> edges;
  for (int t = 1; t < n; ++t) {
    int parent = static_cast<int>(rng.uniform() * t);
    edges.emplace_back(parent, t);
  }
  return Graph(n, std::move(edges));
}

// MRF with log-potentials uniform in [-scale, scale].
inline PairwiseMRF random_mrf(Rng& rng, const Graph& graph, const Domain& domain,
                              double scale = 1.0) {
  const std::size_t k = domain.size();
  std::vector<std::vector<double>> log_unary(graph.num_nodes(), std::vector<double>(k));
  for (auto& u : log_unary)
    for (double& v : u) v = scale * (2.0 * rng.uniform() - 1.0);
  std::vector<std::vector<double>> log_pairwise(graph.num_edges(), std::vector<double>(k * k));
  for (auto& p : log_pairwise)
    for (double& v : p) v = scale * (2.0 * rng.uniform() - 1.0);
  return PairwiseMRF(graph, domain, std::move(log_unary), std::move(log_pairwise));
}

inline IsingModel random_ising(Rng& rng, const Graph& graph, double coupling_scale,
                               double field_scale) {
  const int n = graph.num_nodes();
  std::vector<double> J(static_cast<std::size_t>(n) * n, 0.0);
  for (auto [s, t] : graph.edges()) {
    double v = coupling_scale * (2.0 * rng.uniform() - 1.0);
    J[s * n + t] = v;
    J[t * n + s] = v;
  }
  std::vector<double> b(n);
  for (double& v : b) v = field_scale * (2.0 * rng.uniform() - 1.0);
  return IsingModel(n, std::move(J), std::move(b));
}

inline DiscreteDistribution random_distribution(Rng& rng, std::size_t k, bool normalize = true) {
  DiscreteDistribution p(k);
  for (double& v : p) v = 0.05 + rng.uniform();
  if (normalize) {
    double s = 0.0;
    for (double v : p) s += v;
    for (double& v : p) v /= s;
  }
  return p;
}

inline double max_message_diff(const MessageState& a, const MessageState& b) {
  double r = 0.0;
  for (std::size_t d = 0; d < a.m.size(); ++d)
    for (std::size_t x = 0; x < a.m[d].size(); ++x)
      r = std::max(r, std::abs(a.m[d][x] - b.m[d][x]));
  return r;
}

}  // namespace testutil
