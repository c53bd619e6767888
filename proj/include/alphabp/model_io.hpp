#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "alphabp/common.hpp"
#include "alphabp/convergence.hpp"
#include "alphabp/inference.hpp"
#include "alphabp/mrf.hpp"

namespace alphabp {

// A parsed model file: always yields a PairwiseMRF; the Ising parameters are
// kept when the file used the J/b form (required for certification).
struct ModelFile {
  PairwiseMRF mrf;
  std::optional<IsingModel> ising;
};

namespace detail {

inline std::vector<std::pair<int, int>> parse_edges(const nlohmann::json& j, int n) {
  std::vector<std::pair<int, int>> edges;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2)
      throw StructuralError("model: each edge must be a [s,t] pair");
    int s = e[0].get<int>(), t = e[1].get<int>();
    if (s < 0 || t < 0 || s >= n || t >= n)
      throw StructuralError("model: edge node index out of range");
    edges.emplace_back(s, t);
  }
  return edges;
}

}  // namespace detail

inline ModelFile read_model_json(const nlohmann::json& j) {
  if (!j.contains("n")) throw StructuralError("model: missing \"n\"");
  const int n = j.at("n").get<int>();
  std::vector<int> labels = j.value("domain", std::vector<int>{-1, 1});
  Domain domain{labels};
  auto edges = detail::parse_edges(j.at("edges"), n);

  if (j.contains("J") || j.contains("b")) {
    if (!domain.is_binary())
      throw StructuralError("model: Ising form requires the (-1,1) domain");
    std::vector<double> J(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
    Graph graph(n, edges);  // validates duplicates and self-loops
    for (const auto& trip : j.at("J")) {
      if (!trip.is_array() || trip.size() != 3)
        throw StructuralError("model: J entries must be [s,t,value]");
      int s = trip[0].get<int>(), t = trip[1].get<int>();
      double v = trip[2].get<double>();
      if (!graph.has_edge(s, t)) throw StructuralError("model: J entry on a non-edge");
      std::size_t a = static_cast<std::size_t>(s) * n + t;
      std::size_t b = static_cast<std::size_t>(t) * n + s;
      if ((seen[a] || seen[b]) && J[a] != v)
        throw StructuralError("model: asymmetric duplicate J entry rejected");
      seen[a] = seen[b] = 1;
      J[a] = J[b] = v;
    }
    std::vector<double> b = j.at("b").get<std::vector<double>>();
    if (static_cast<int>(b.size()) != n) throw StructuralError("model: b length mismatch");
    IsingModel model(n, std::move(J), std::move(b));
    return ModelFile{ising_to_mrf(model), std::move(model)};
  }

  Graph graph(n, edges);
  auto unary = j.at("unary").get<std::vector<std::vector<double>>>();
  auto pairwise_raw = j.at("pairwise").get<std::vector<std::vector<std::vector<double>>>>();
  if (pairwise_raw.size() != static_cast<std::size_t>(edges.size()))
    throw StructuralError("model: one pairwise table per edge required");
  // pairwise tables are given in the file's edge order with row index = the
  // first endpoint of the written pair; remap onto the graph's canonical order
  const std::size_t k = domain.size();
  std::vector<std::vector<double>> pairwise(graph.num_edges());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [s, t] = edges[i];
    int e = graph.edge_index(s, t);
    const auto& [lo, hi] = graph.edges()[e];
    (void)hi;
    std::vector<double> table(k * k);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b2 = 0; b2 < k; ++b2) {
        if (pairwise_raw[i].size() != k || pairwise_raw[i][a].size() != k)
          throw StructuralError("model: pairwise table size mismatch");
        double v = pairwise_raw[i][a][b2];
        if (s == lo)
          table[a * k + b2] = v;
        else
          table[b2 * k + a] = v;
      }
    pairwise[e] = std::move(table);
  }
  return ModelFile{PairwiseMRF::from_tables(std::move(graph), std::move(domain), unary, pairwise),
                   std::nullopt};
}

inline ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("model: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return read_model_json(j);
}

inline nlohmann::json ising_to_json(const IsingModel& model,
                                    const nlohmann::json& provenance = nlohmann::json()) {
  nlohmann::json j;
  j["n"] = model.n;
  j["domain"] = {-1, 1};
  nlohmann::json edges = nlohmann::json::array();
  nlohmann::json triplets = nlohmann::json::array();
  for (int s = 0; s < model.n; ++s)
    for (int t = s + 1; t < model.n; ++t)
      if (model.coupling(s, t) != 0.0) {
        edges.push_back({s, t});
        triplets.push_back({s, t, model.coupling(s, t)});
      }
  j["edges"] = std::move(edges);
  j["J"] = std::move(triplets);
  j["b"] = model.b;
  if (!provenance.is_null()) j["provenance"] = provenance;
  return j;
}

inline nlohmann::json certificate_to_json(const Certificate& cert) {
  return nlohmann::json{{"lambda_star", cert.lambda_star}, {"l1", cert.l1_norm},
                        {"linf", cert.linf_norm},          {"theorem1", cert.theorem1_holds},
                        {"corollary_l1", cert.corollary_l1_holds},
                        {"corollary_linf", cert.corollary_linf_holds}};
}

inline nlohmann::json belief_result_to_json(const BeliefResult& result) {
  return nlohmann::json{{"converged", result.converged},
                        {"iterations", result.iterations_used},
                        {"residuals", result.residual_trace},
                        {"marginals", result.marginals}};
}

}  // namespace alphabp
