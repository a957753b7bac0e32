#ifndef HSBLAB_GRAPHS_HPP
#define HSBLAB_GRAPHS_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hsblab {

/* Simple undirected graph on vertices 0..n-1 with a sorted, duplicate-free
   edge list (u < v).  Edge indices into `edges` name edges everywhere. */
struct SimpleGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  SimpleGraph() = default;
  SimpleGraph(int vertices, std::vector<std::pair<int, int>> edge_list)
      : n(vertices) {
    if (n <= 0) throw std::invalid_argument("graph needs at least one vertex");
    for (auto& [u, v] : edge_list) {
      if (u == v) throw std::invalid_argument("self-loops are not supported");
      if (u > v) std::swap(u, v);
      if (u < 0 || v >= n) throw std::invalid_argument("edge endpoint out of range");
    }
    std::sort(edge_list.begin(), edge_list.end());
    edge_list.erase(std::unique(edge_list.begin(), edge_list.end()), edge_list.end());
    edges = std::move(edge_list);
  }
};

inline SimpleGraph complete_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return SimpleGraph(n, std::move(e));
}

inline SimpleGraph path_graph(int n) {
  std::vector<std::pair<int, int>> e;
  for (int u = 0; u + 1 < n; ++u) e.emplace_back(u, u + 1);
  return SimpleGraph(n, std::move(e));
}

inline SimpleGraph cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs at least three vertices");
  auto g = path_graph(n);
  return SimpleGraph(n, [&] {
    auto e = g.edges;
    e.emplace_back(0, n - 1);
    return e;
  }());
}

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), count_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  int find(int a) {
    while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    --count_;
    return true;
  }
  int components() const { return count_; }

 private:
  std::vector<int> parent_;
  int count_;
};

}  // namespace detail

inline bool is_connected(const SimpleGraph& g) {
  detail::UnionFind uf(g.n);
  for (const auto& [u, v] : g.edges) uf.unite(u, v);
  return uf.components() == 1;
}

/* Connected components of the subgraph induced by U under the edge subset
   `tree` (edge indices into g.edges). */
inline int component_count(const std::vector<int>& u_set,
                           const std::vector<int>& tree, const SimpleGraph& g) {
  if (u_set.empty()) throw std::invalid_argument("vertex set must be nonempty");
  std::vector<int> slot(g.n, -1);
  for (std::size_t k = 0; k < u_set.size(); ++k) {
    int v = u_set[k];
    if (v < 0 || v >= g.n) throw std::invalid_argument("vertex out of range");
    if (slot[v] != -1) throw std::invalid_argument("duplicate vertex in set");
    slot[v] = static_cast<int>(k);
  }
  detail::UnionFind uf(static_cast<int>(u_set.size()));
  for (int e : tree) {
    const auto& [a, b] = g.edges.at(e);
    if (slot[a] != -1 && slot[b] != -1) uf.unite(slot[a], slot[b]);
  }
  return uf.components();
}

/* All spanning trees as sorted edge-index lists, emitted in lexicographic
   order (include-first recursion over the sorted edge list, pruning branches
   that can no longer connect the graph). */
inline std::vector<std::vector<int>> enumerate_spanning_trees(const SimpleGraph& g) {
  if (!is_connected(g)) throw std::invalid_argument("graph is not connected");
  const int n = g.n;
  const int m = static_cast<int>(g.edges.size());
  std::vector<std::vector<int>> out;
  std::vector<int> chosen;

  std::function<void(int, detail::UnionFind&)> rec = [&](int k, detail::UnionFind& uf) {
    if (static_cast<int>(chosen.size()) == n - 1) {
      out.push_back(chosen);
      return;
    }
    if (k == m) return;
    {
      /* Can the rest still connect everything? */
      detail::UnionFind probe = uf;
      for (int e = k; e < m; ++e) probe.unite(g.edges[e].first, g.edges[e].second);
      if (probe.components() != 1) return;
    }
    const auto& [u, v] = g.edges[k];
    if (uf.find(u) != uf.find(v)) {
      detail::UnionFind next = uf;
      next.unite(u, v);
      chosen.push_back(k);
      rec(k + 1, next);
      chosen.pop_back();
    }
    rec(k + 1, uf);
  };

  detail::UnionFind uf(n);
  rec(0, uf);
  return out;
}

/* Spanning tree count by the matrix-tree theorem, with an integer
   fraction-free elimination so the determinant is exact. */
inline std::uint64_t spanning_tree_count_kirchhoff(const SimpleGraph& g) {
  const int n = g.n;
  if (n == 1) return 1;
  const int k = n - 1;
  std::vector<std::vector<long long>> a(k, std::vector<long long>(k, 0));
  for (const auto& [u, v] : g.edges) {
    if (u < k) a[u][u] += 1;
    if (v < k) a[v][v] += 1;
    if (u < k && v < k) {
      a[u][v] -= 1;
      a[v][u] -= 1;
    }
  }
  long long denom = 1;
  int sign = 1;
  for (int col = 0; col < k; ++col) {
    int piv = -1;
    for (int r = col; r < k; ++r)
      if (a[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv == -1) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      sign = -sign;
    }
    for (int r = col + 1; r < k; ++r) {
      for (int c = col + 1; c < k; ++c)
        a[r][c] = (a[r][c] * a[col][col] - a[r][col] * a[col][c]) / denom;
      a[r][col] = 0;
    }
    denom = a[col][col];
  }
  long long det = sign * a[k - 1][k - 1];
  return static_cast<std::uint64_t>(det < 0 ? -det : det);
}

}  // namespace hsblab

#endif
