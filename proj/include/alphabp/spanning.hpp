#pragma once

#include <Eigen/Dense>
#include <algorithm>

#include "alphabp/common.hpp"
#include "alphabp/graph.hpp"
#include "alphabp/inference.hpp"

namespace alphabp {

// Edge appearance probabilities for a uniform random spanning tree. By the
// matrix-tree theorem μ_st equals the effective resistance between s and t in
// the unit-conductance network, computed with one dense factorization of the
// grounded Laplacian. Graphs here are at most a few hundred nodes.
inline EdgeAppearance edge_appearance_probabilities(const Graph& graph) {
  if (!graph.connected())
    throw StructuralError("edge_appearance_probabilities: graph must be connected");
  const int n = graph.num_nodes();
  if (n <= 1 || graph.num_edges() == 0)
    return EdgeAppearance(graph, std::vector<double>(graph.num_edges(), 1.0));

  // Grounded Laplacian (node 0 removed) is positive definite for a
  // connected graph.
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (auto [s, t] : graph.edges()) {
    if (s > 0) lap(s - 1, s - 1) += 1.0;
    if (t > 0) lap(t - 1, t - 1) += 1.0;
    if (s > 0 && t > 0) {
      lap(s - 1, t - 1) -= 1.0;
      lap(t - 1, s - 1) -= 1.0;
    }
  }
  Eigen::LLT<Eigen::MatrixXd> llt(lap);
  if (llt.info() != Eigen::Success)
    throw NumericalError("edge_appearance_probabilities: Laplacian factorization failed");

  std::vector<double> mu(graph.num_edges());
  Eigen::VectorXd rhs(n - 1);
  for (int e = 0; e < graph.num_edges(); ++e) {
    auto [s, t] = graph.edges()[e];
    rhs.setZero();
    if (s > 0) rhs(s - 1) = 1.0;
    if (t > 0) rhs(t - 1) = -1.0;
    Eigen::VectorXd v = llt.solve(rhs);
    double vs = s > 0 ? v(s - 1) : 0.0;
    double vt = t > 0 ? v(t - 1) : 0.0;
    mu[e] = std::clamp(vs - vt, 1e-15, 1.0);
  }
  return EdgeAppearance(graph, std::move(mu));
}

}  // namespace alphabp
