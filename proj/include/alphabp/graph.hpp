#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "alphabp/common.hpp"

namespace alphabp {

// Ordered set of discrete states. The binary case is exactly (-1, +1):
// state index 0 maps to -1 and index 1 to +1, fixing sign conventions
// everywhere downstream.
class Domain {
 public:
  explicit Domain(std::vector<int> labels) : labels_(std::move(labels)) {
    if (labels_.size() < 2) throw StructuralError("Domain: need at least 2 states");
    std::vector<int> sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw StructuralError("Domain: labels must be distinct");
  }

  static Domain binary() { return Domain({-1, 1}); }

  std::size_t size() const { return labels_.size(); }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<int>& labels() const { return labels_; }

  bool is_binary() const {
    return labels_.size() == 2 && labels_[0] == -1 && labels_[1] == 1;
  }

  // Index of a label; throws on out-of-domain states.
  std::size_t index_of(int label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    throw DomainError("Domain: state " + std::to_string(label) + " not in domain");
  }

  bool contains(int label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
  }

 private:
  std::vector<int> labels_;
};

// Undirected simple graph with a fixed directed-edge index map. Directed
// edges are numbered lexicographically by (source, target); this map is the
// shared convention between message states and the certificate matrix.
class Graph {
 public:
  Graph(int num_nodes, std::vector<std::pair<int, int>> edge_list)
      : num_nodes_(num_nodes) {
    if (num_nodes < 0) throw StructuralError("Graph: negative node count");
    adjacency_.resize(num_nodes_);
    for (auto [s, t] : edge_list) {
      if (s == t) throw StructuralError("Graph: self-loop rejected");
      if (s < 0 || t < 0 || s >= num_nodes_ || t >= num_nodes_)
        throw StructuralError("Graph: node index out of range");
      if (s > t) std::swap(s, t);
      edges_.emplace_back(s, t);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
      throw StructuralError("Graph: duplicate edge rejected");
    for (auto [s, t] : edges_) {
      adjacency_[s].push_back(t);
      adjacency_[t].push_back(s);
    }
    for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());

    edge_id_.assign(static_cast<std::size_t>(num_nodes_) * num_nodes_, -1);
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      auto [s, t] = edges_[e];
      edge_id_[pair_key(s, t)] = e;
      edge_id_[pair_key(t, s)] = e;
    }

    for (int s = 0; s < num_nodes_; ++s)
      for (int t : adjacency_[s]) directed_.emplace_back(s, t);
    // adjacency lists are sorted, so directed_ is lex-sorted by (source, target)
    directed_id_.assign(static_cast<std::size_t>(num_nodes_) * num_nodes_, -1);
    for (int d = 0; d < static_cast<int>(directed_.size()); ++d)
      directed_id_[pair_key(directed_[d].first, directed_[d].second)] = d;
  }

  int num_nodes() const { return num_nodes_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_directed_edges() const { return static_cast<int>(directed_.size()); }

  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& neighbors(int s) const { return adjacency_[s]; }
  int degree(int s) const { return static_cast<int>(adjacency_[s].size()); }

  bool has_edge(int s, int t) const { return edge_index(s, t) >= 0; }

  // Undirected edge id for the pair {s,t}; -1 when absent.
  int edge_index(int s, int t) const {
    if (s == t) return -1;
    return edge_id_[pair_key(s, t)];
  }

  // Directed edges, lex-sorted by (source, target).
  const std::vector<std::pair<int, int>>& directed_edges() const { return directed_; }

  int directed_index(int source, int target) const {
    int d = directed_id_[pair_key(source, target)];
    if (d < 0) throw StructuralError("Graph: no directed edge for given pair");
    return d;
  }

  bool connected() const {
    if (num_nodes_ <= 1) return true;
    std::vector<char> seen(num_nodes_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      for (int t : adjacency_[s])
        if (!seen[t]) {
          seen[t] = 1;
          ++count;
          stack.push_back(t);
        }
    }
    return count == num_nodes_;
  }

 private:
  std::size_t pair_key(int a, int b) const {
    return static_cast<std::size_t>(a) * num_nodes_ + b;
  }

  int num_nodes_;
  std::vector<std::pair<int, int>> edges_;           // s < t, sorted
  std::vector<std::vector<int>> adjacency_;
  std::vector<int> edge_id_;                         // dense pair -> undirected id
  std::vector<std::pair<int, int>> directed_;        // (source, target), lex order
  std::vector<int> directed_id_;
};

}  // namespace alphabp
