#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "alphabp/common.hpp"
#include "alphabp/convergence.hpp"
#include "alphabp/graph.hpp"
#include "alphabp/mrf.hpp"
#include "alphabp/rng.hpp"

namespace alphabp {

struct GraphSpec {
  int n = 16;
  double gamma = 0.2;  // edge probability
  std::uint64_t seed = 0;
};

struct PotentialSpec {
  double sigma = 0.1;  // J_ts ~ N(0, σ²); b_t ~ N(0, (σ/4)²)
  std::uint64_t seed = 0;
};

// Erdős–Rényi sample: each of the n(n-1)/2 pairs is included independently
// with probability gamma, drawn in lexicographic pair order.
inline Graph erdos_renyi(const GraphSpec& spec) {
  if (spec.n < 1) throw ParameterError("erdos_renyi: n must be >= 1");
  Rng rng(spec.seed);
  std::vector<std::pair<int, int>> edges;
  for (int s = 0; s < spec.n; ++s)
    for (int t = s + 1; t < spec.n; ++t)
      if (rng.uniform() < spec.gamma) edges.emplace_back(s, t);
  return Graph(spec.n, std::move(edges));
}

// Gaussian Ising parameters on a fixed graph: couplings in edge order, then
// fields in node order, each from its own draw sequence.
inline IsingModel sample_ising(const Graph& graph, const PotentialSpec& spec) {
  if (!(spec.sigma > 0.0)) throw ParameterError("sample_ising: sigma must be > 0");
  const int n = graph.num_nodes();
  std::vector<double> J(static_cast<std::size_t>(n) * n, 0.0);
  Rng rng(spec.seed);
  for (auto [s, t] : graph.edges()) {
    double v = spec.sigma * rng.normal();
    J[s * n + t] = v;
    J[t * n + s] = v;
  }
  std::vector<double> b(n);
  for (int s = 0; s < n; ++s) b[s] = (spec.sigma / 4.0) * rng.normal();
  return IsingModel(n, std::move(J), std::move(b));
}

struct CertifiedSample {
  Graph graph;
  IsingModel model;
  Certificate certificate;
  int retries = 0;  // failed attempts before the accepted one
};

// Regenerate (graph, model) with derived sub-seeds until the Theorem-1
// certificate holds for the broadcast alpha.
inline CertifiedSample sample_certified(const GraphSpec& graph_spec,
                                        const PotentialSpec& potential_spec, double alpha,
                                        int max_retries) {
  if (max_retries < 1) throw ParameterError("sample_certified: max_retries must be >= 1");
  double last_lambda = 0.0;
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    GraphSpec gs = graph_spec;
    gs.seed = substream_seed(graph_spec.seed, 2 * static_cast<std::uint64_t>(attempt));
    PotentialSpec ps = potential_spec;
    ps.seed = substream_seed(potential_spec.seed, 2 * static_cast<std::uint64_t>(attempt) + 1);
    Graph graph = erdos_renyi(gs);
    IsingModel model = sample_ising(graph, ps);
    Certificate cert =
        certify(theta_from_ising(model, graph), AlphaAssignment(graph, alpha), graph);
    if (cert.theorem1_holds)
      return CertifiedSample{std::move(graph), std::move(model), cert, attempt};
    last_lambda = cert.lambda_star;
  }
  throw SamplingError("sample_certified: retries exhausted; last lambda_star = " +
                      std::to_string(last_lambda));
}

}  // namespace alphabp
