#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "dagp/types.hpp"

namespace dagp {

/**
 * Directed communication graph.
 *
 * An edge (i, j) means node i receives from node j, so row i of the adjacency
 * matrix lists the nodes i listens to. Self-loops are rejected and the edge
 * set is kept sorted and deduplicated.
 */
class DirectedGraph {
 public:
  using Edge = std::pair<int, int>;

  explicit DirectedGraph(int node_count, std::vector<Edge> edges = {});

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool has_edge(int receiver, int sender) const;

  /// {u : (v, u) in E}
  const std::vector<int>& in_neighbors(int v) const;
  /// {u : (u, v) in E}
  const std::vector<int>& out_neighbors(int v) const;

  /// 0/1 adjacency with a(i, j) = 1 iff (i, j) in E.
  Matrix adjacency() const;

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.node_count_ == b.node_count_ && a.edges_ == b.edges_;
  }

 private:
  void check_node(int v) const;

  int node_count_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> in_;
  std::vector<std::vector<int>> out_;
};

struct Laplacians {
  Matrix in;   // D_in - A, zero row sums
  Matrix out;  // D_out - A, zero column sums
};

/// Random Hamiltonian cycle plus independent extra edges with probability
/// edge_prob. Always strongly connected; deterministic in seed.
DirectedGraph random_strongly_connected(int node_count, double edge_prob, std::uint64_t seed);

/// Complete digraph on node_count nodes.
DirectedGraph complete_graph(int node_count);

/// Directed cycle with edges (k+1 mod M, k).
DirectedGraph cycle_graph(int node_count);

/// Tarjan's SCC algorithm (iterative), true iff there is a single component.
bool is_strongly_connected(const DirectedGraph& g);

Laplacians laplacians(const DirectedGraph& g);

/// Edge-list text format: first line "M", then one "i j" pair per line.
void write_edge_list(std::ostream& os, const DirectedGraph& g);
DirectedGraph read_edge_list(std::istream& is);
DirectedGraph load_edge_list(const std::string& path);

}  // namespace dagp
