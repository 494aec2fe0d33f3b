#include "dagp/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dagp {

DirectedGraph::DirectedGraph(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ < 1) {
    throw std::invalid_argument("DirectedGraph: node_count must be positive");
  }
  for (const auto& [i, j] : edges_) {
    check_node(i);
    check_node(j);
    if (i == j) {
      throw std::invalid_argument("DirectedGraph: self-loop on node " + std::to_string(i));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

  in_.assign(node_count_, {});
  out_.assign(node_count_, {});
  for (const auto& [i, j] : edges_) {
    in_[i].push_back(j);
    out_[j].push_back(i);
  }
  for (auto& list : out_) std::sort(list.begin(), list.end());
}

void DirectedGraph::check_node(int v) const {
  if (v < 0 || v >= node_count_) {
    throw std::out_of_range("DirectedGraph: node index " + std::to_string(v) + " out of range");
  }
}

bool DirectedGraph::has_edge(int receiver, int sender) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{receiver, sender});
}

const std::vector<int>& DirectedGraph::in_neighbors(int v) const {
  check_node(v);
  return in_[v];
}

const std::vector<int>& DirectedGraph::out_neighbors(int v) const {
  check_node(v);
  return out_[v];
}

Matrix DirectedGraph::adjacency() const {
  Matrix a = Matrix::Zero(node_count_, node_count_);
  for (const auto& [i, j] : edges_) a(i, j) = 1.0;
  return a;
}

DirectedGraph random_strongly_connected(int node_count, double edge_prob, std::uint64_t seed) {
  if (node_count < 1) {
    throw std::invalid_argument("random_strongly_connected: node_count must be positive");
  }
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw std::invalid_argument("random_strongly_connected: edge_prob must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::vector<int> order(node_count);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<DirectedGraph::Edge> edges;
  if (node_count > 1) {
    for (int k = 0; k < node_count; ++k) {
      edges.emplace_back(order[(k + 1) % node_count], order[k]);
    }
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int i = 0; i < node_count; ++i) {
    for (int j = 0; j < node_count; ++j) {
      if (i == j) continue;
      // Draw for every pair so the stream does not depend on the cycle.
      if (coin(rng) < edge_prob) edges.emplace_back(i, j);
    }
  }
  return DirectedGraph(node_count, std::move(edges));
}

DirectedGraph complete_graph(int node_count) {
  std::vector<DirectedGraph::Edge> edges;
  for (int i = 0; i < node_count; ++i) {
    for (int j = 0; j < node_count; ++j) {
      if (i != j) edges.emplace_back(i, j);
    }
  }
  return DirectedGraph(node_count, std::move(edges));
}

DirectedGraph cycle_graph(int node_count) {
  std::vector<DirectedGraph::Edge> edges;
  if (node_count > 1) {
    for (int k = 0; k < node_count; ++k) edges.emplace_back((k + 1) % node_count, k);
  }
  return DirectedGraph(node_count, std::move(edges));
}

bool is_strongly_connected(const DirectedGraph& g) {
  const int n = g.node_count();
  // Iterative Tarjan over the sender -> receiver direction.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;
  int counter = 0;
  int components = 0;

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;

    while (!call.empty()) {
      auto& [v, next] = call.back();
      const auto& succ = g.out_neighbors(v);
      if (next < succ.size()) {
        const int w = succ[next++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().first;
        low[parent] = std::min(low[parent], low[done]);
      }
      if (low[done] == index[done]) {
        ++components;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
        } while (w != done);
      }
    }
  }
  return components == 1;
}

Laplacians laplacians(const DirectedGraph& g) {
  const int n = g.node_count();
  const Matrix a = g.adjacency();
  Laplacians lap{-a, -a};
  for (int v = 0; v < n; ++v) {
    lap.in(v, v) = static_cast<double>(g.in_neighbors(v).size());
    lap.out(v, v) = static_cast<double>(g.out_neighbors(v).size());
  }
  return lap;
}

void write_edge_list(std::ostream& os, const DirectedGraph& g) {
  os << g.node_count() << '\n';
  for (const auto& [i, j] : g.edges()) os << i << ' ' << j << '\n';
}

DirectedGraph read_edge_list(std::istream& is) {
  std::string line;
  int node_count = 0;
  int line_no = 0;
  bool have_header = false;
  std::vector<DirectedGraph::Edge> edges;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ss(line);
    if (!have_header) {
      if (!(ss >> node_count)) {
        throw std::runtime_error("edge list line " + std::to_string(line_no) + ": expected node count");
      }
      have_header = true;
      continue;
    }
    int i = 0, j = 0;
    if (!(ss >> i >> j)) {
      throw std::runtime_error("edge list line " + std::to_string(line_no) + ": expected 'i j'");
    }
    edges.emplace_back(i, j);
  }
  if (!have_header) throw std::runtime_error("edge list: missing node count");
  return DirectedGraph(node_count, std::move(edges));
}

DirectedGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

}  // namespace dagp
