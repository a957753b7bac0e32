#ifndef HSBLAB_ZOO_HPP
#define HSBLAB_ZOO_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hsblab/graphs.hpp"
#include "hsblab/matrix.hpp"
#include "hsblab/scalar.hpp"

namespace hsblab {

/* Slack matrices of the polytope families the workbench studies, built
   directly from combinatorics.  Conventions, fixed for reproducibility:
     - vertices of the cube are ordered by their binary value with x_1 as
       the most significant bit (00, 01, 10, 11 for n = 2);
     - vertex subsets are ordered by binary counter value with vertex 1 on
       the least significant bit;
     - spanning trees are ordered lexicographically by sorted edge list;
     - permutations are ordered lexicographically by image tuple.
   Rows and columns are labeled 1-based for human-facing output. */

namespace detail {

inline std::vector<int> bits_of(std::uint32_t mask, int n) {
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if ((mask >> i) & 1u) out.push_back(i);
  return out;
}

inline std::string set_label(std::uint32_t mask, int n) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < n; ++i)
    if ((mask >> i) & 1u) {
      if (!first) s += ",";
      s += std::to_string(i + 1);
      first = false;
    }
  return s + "}";
}

}  // namespace detail

/* Cube [0,1]^n: rows x_i >= 0 (slack v_i) and x_i <= 1 (slack 1 - v_i),
   interleaved per coordinate; columns the 2^n vertices. */
template <class T>
LabeledMatrix<T> hypercube_slack(int n, int cap = 16) {
  if (n < 1) throw std::invalid_argument("cube dimension must be at least 1");
  if (n > cap) throw std::invalid_argument("cube dimension exceeds the column cap");
  const int cols = 1 << n;
  Matrix<T> s(2 * n, cols);
  std::vector<std::string> rl(2 * n), cl(cols);
  for (int c = 0; c < cols; ++c) {
    std::string name(n, '0');
    for (int i = 0; i < n; ++i) {
      /* x_1 is the most significant bit of the column index. */
      int bit = (c >> (n - 1 - i)) & 1;
      name[i] = static_cast<char>('0' + bit);
      s(2 * i, c) = T(bit);
      s(2 * i + 1, c) = T(1 - bit);
    }
    cl[c] = name;
  }
  for (int i = 0; i < n; ++i) {
    rl[2 * i] = "x" + std::to_string(i + 1) + ">=0";
    rl[2 * i + 1] = "x" + std::to_string(i + 1) + "<=1";
  }
  return LabeledMatrix<T>(std::move(s), std::move(rl), std::move(cl));
}

/* Same cube with the valid but redundant inequality sum(x) >= 0 appended;
   its slack at vertex v is the popcount of v. */
template <class T>
LabeledMatrix<T> hypercube_slack_redundant(int n, int cap = 16) {
  LabeledMatrix<T> base = hypercube_slack<T>(n, cap);
  const int cols = base.mat.cols();
  Matrix<T> s(2 * n + 1, cols);
  for (int r = 0; r < 2 * n; ++r)
    for (int c = 0; c < cols; ++c) s(r, c) = base.mat(r, c);
  for (int c = 0; c < cols; ++c) {
    int pop = 0;
    for (int i = 0; i < n; ++i) pop += (c >> i) & 1;
    s(2 * n, c) = T(pop);
  }
  auto rl = base.row_labels;
  rl.push_back("sum(x)>=0");
  return LabeledMatrix<T>(std::move(s), std::move(rl), std::move(base.col_labels));
}

/* Standard simplex with one inequality rescaled: the (n+1)x(n+1) identity
   with the first row multiplied by lambda >= 1. */
template <class T>
LabeledMatrix<T> simplex_slack(int n, const T& lambda) {
  if (n < 1) throw std::invalid_argument("simplex dimension must be at least 1");
  if (lambda < T(1)) throw std::invalid_argument("scale factor must be at least 1");
  Matrix<T> s = Matrix<T>::identity(n + 1);
  s(0, 0) = lambda;
  std::vector<std::string> rl(n + 1), cl(n + 1);
  for (int i = 0; i <= n; ++i) {
    rl[i] = "f" + std::to_string(i + 1);
    cl[i] = "v" + std::to_string(i + 1);
  }
  return LabeledMatrix<T>(std::move(s), std::move(rl), std::move(cl));
}

namespace detail {

inline std::string edge_label(const std::pair<int, int>& e) {
  return std::to_string(e.first + 1) + "-" + std::to_string(e.second + 1);
}

inline std::string tree_label(const std::vector<int>& tree, const SimpleGraph& g) {
  std::string s;
  for (std::size_t k = 0; k < tree.size(); ++k) {
    if (k) s += ",";
    s += edge_label(g.edges[tree[k]]);
  }
  return s;
}

/* Parent of every vertex when the tree is rooted at `root`; -1 for the root
   itself. */
inline std::vector<int> tree_parents(const std::vector<int>& tree,
                                     const SimpleGraph& g, int root) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.n));
  for (int e : tree) {
    adj[static_cast<std::size_t>(g.edges[e].first)].push_back(g.edges[e].second);
    adj[static_cast<std::size_t>(g.edges[e].second)].push_back(g.edges[e].first);
  }
  std::vector<int> par(static_cast<std::size_t>(g.n), -2);
  par[static_cast<std::size_t>(root)] = -1;
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int y : adj[static_cast<std::size_t>(x)])
      if (par[static_cast<std::size_t>(y)] == -2) {
        par[static_cast<std::size_t>(y)] = x;
        stack.push_back(y);
      }
  }
  return par;
}

}  // namespace detail

/* Spanning tree polytope of a connected graph.  Rows: every nonempty proper
   vertex subset U (slack of the rank inequality, which equals the component
   count of the induced forest minus one), then one nonnegativity row per
   edge (slack is the tree's incidence).  Columns: all spanning trees.  U = V
   holds with equality for every tree and is excluded; singleton-U rows are kept even
   though they are identically zero unless drop_zero_rows is set. */
template <class T>
LabeledMatrix<T> spanning_tree_slack(const SimpleGraph& g, bool drop_zero_rows = false) {
  const int n = g.n;
  if (n < 2) throw std::invalid_argument("need at least two vertices");
  if (n > 20) throw std::invalid_argument("vertex count exceeds the subset cap");
  auto trees = enumerate_spanning_trees(g);
  const auto expected = spanning_tree_count_kirchhoff(g);
  if (trees.size() != expected)
    throw std::logic_error("tree enumeration disagrees with the determinant count");
  const int t = static_cast<int>(trees.size());
  const std::uint32_t full = (1u << n) - 1;

  std::vector<std::uint32_t> subsets;
  for (std::uint32_t mask = 1; mask < full; ++mask) subsets.push_back(mask);

  const int m_edges = static_cast<int>(g.edges.size());
  Matrix<T> s(static_cast<int>(subsets.size()) + m_edges, t);
  std::vector<std::string> rl, cl(t);

  for (std::size_t r = 0; r < subsets.size(); ++r) {
    auto u_set = detail::bits_of(subsets[r], n);
    rl.push_back("U=" + detail::set_label(subsets[r], n));
    for (int c = 0; c < t; ++c) {
      int comp = component_count(u_set, trees[c], g);
      s(static_cast<int>(r), c) = T(comp - 1);
    }
  }
  for (int e = 0; e < m_edges; ++e) {
    rl.push_back("x(" + detail::edge_label(g.edges[e]) + ")>=0");
    for (int c = 0; c < t; ++c) {
      bool in_tree = std::binary_search(trees[c].begin(), trees[c].end(), e);
      s(static_cast<int>(subsets.size()) + e, c) = T(in_tree ? 1 : 0);
    }
  }
  for (int c = 0; c < t; ++c) cl[c] = detail::tree_label(trees[c], g);

  LabeledMatrix<T> out(std::move(s), std::move(rl), std::move(cl));
  if (!drop_zero_rows) return out;

  std::vector<int> keep;
  for (int r = 0; r < out.mat.rows(); ++r) {
    bool zero = true;
    for (int c = 0; c < t && zero; ++c) zero = out.mat(r, c) == T(0);
    if (!zero) keep.push_back(r);
  }
  Matrix<T> pruned(static_cast<int>(keep.size()), t);
  std::vector<std::string> prl;
  for (std::size_t r = 0; r < keep.size(); ++r) {
    prl.push_back(out.row_labels[keep[r]]);
    for (int c = 0; c < t; ++c) pruned(static_cast<int>(r), c) = out.mat(keep[r], c);
  }
  return LabeledMatrix<T>(std::move(pruned), std::move(prl), std::move(out.col_labels));
}

/* Exact rectangle decomposition of the spanning tree slack matrix, with the
   row/column order of spanning_tree_slack (zero rows kept).  Root every tree
   at the smallest vertex w of the row's subset U; the rank-inequality slack
   then counts the vertices of U other than w whose parent lies outside U.
   Each count term is a rectangle once rows are grouped by w: rows with
   min U = w that contain v and avoid u, against the trees whose w-rooted
   parent of v is u.  One rectangle per edge covers the nonnegativity rows.
   The total weight is far below the entry sum, so these make strong solver
   seeds and a compact upper-bound certificate. */
template <class T>
std::vector<std::pair<T, Rectangle>> spanning_tree_decomposition(const SimpleGraph& g) {
  const int n = g.n;
  if (n < 2) throw std::invalid_argument("need at least two vertices");
  if (n > 20) throw std::invalid_argument("vertex count exceeds the subset cap");
  auto trees = enumerate_spanning_trees(g);
  const int t = static_cast<int>(trees.size());
  const std::uint32_t full = (1u << n) - 1;
  const int subset_rows = static_cast<int>(full) - 1;
  const int m_edges = static_cast<int>(g.edges.size());
  const int m = subset_rows + m_edges;

  std::vector<std::pair<T, Rectangle>> out;
  for (int w = 0; w < n; ++w) {
    std::vector<std::vector<int>> par(static_cast<std::size_t>(t));
    for (int c = 0; c < t; ++c)
      par[static_cast<std::size_t>(c)] = detail::tree_parents(trees[c], g, w);
    for (int v = w + 1; v < n; ++v) {
      for (int u = 0; u < n; ++u) {
        if (u == w || u == v) continue;
        std::vector<int> cols;
        for (int c = 0; c < t; ++c)
          if (par[static_cast<std::size_t>(c)][static_cast<std::size_t>(v)] == u)
            cols.push_back(c);
        if (cols.empty()) continue;
        std::vector<int> rows;
        for (std::uint32_t mask = 1; mask < full; ++mask) {
          if ((mask & (((1u << w) << 1) - 1)) != (1u << w)) continue;  // min is w
          if (!(mask >> v & 1) || (mask >> u & 1)) continue;
          rows.push_back(static_cast<int>(mask) - 1);
        }
        if (rows.empty()) continue;
        out.emplace_back(T(1), Rectangle(std::move(rows), std::move(cols), m, t));
      }
    }
  }
  for (int e = 0; e < m_edges; ++e) {
    std::vector<int> cols;
    for (int c = 0; c < t; ++c)
      if (std::binary_search(trees[c].begin(), trees[c].end(), e)) cols.push_back(c);
    if (cols.empty()) continue;
    out.emplace_back(T(1), Rectangle({subset_rows + e}, std::move(cols), m, t));
  }
  return out;
}

/* Set function g_A(S) = sum over i, j in S with i <= j of a_ij. */
template <class T>
T zonotope_set_function(const Matrix<T>& a, const std::vector<int>& s_set) {
  T acc(0);
  for (int i : s_set)
    for (int j : s_set)
      if (i <= j) acc += a(i, j);
  return acc;
}

/* Supermodularity g(S or T) + g(S and T) >= g(S) + g(T), checked exhaustively. */
template <class T>
bool check_supermodular(const Matrix<T>& a, bool strict = false) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("matrix must be square");
  if (n > 12) throw std::invalid_argument("exhaustive check capped at 12 vertices");
  std::vector<T> g(1u << n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
    g[mask] = zonotope_set_function(a, detail::bits_of(mask, n));
  for (std::uint32_t s = 0; s < (1u << n); ++s)
    for (std::uint32_t t = 0; t < (1u << n); ++t) {
      T lhs = g[s | t] + g[s & t];
      T rhs = g[s] + g[t];
      if (lhs < rhs) return false;
      bool incomparable = (s & ~t) != 0 && (t & ~s) != 0;
      if (strict && incomparable && !(lhs > rhs)) return false;
    }
  return true;
}

/* Vertex of the zonotope selected by a permutation (image array, 0-based):
   x_j = sum over i with pi(i) <= pi(j) of a_ij. */
template <class T>
std::vector<T> vertex_of_permutation(const Matrix<T>& a, const std::vector<int>& pi) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("matrix must be square");
  check_permutation(pi, n, "vertex");
  std::vector<T> x(n, T(0));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (pi[i] <= pi[j]) x[j] += a(i, j);
  return x;
}

namespace detail {

template <class T>
void require_symmetric_nonneg(const Matrix<T>& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix must be square");
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) < T(0)) throw std::invalid_argument("weights must be nonnegative");
      if (a(i, j) != a(j, i)) throw std::invalid_argument("matrix must be symmetric");
    }
}

inline std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::string perm_label(const std::vector<int>& p) {
  std::string s;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(p[k] + 1);
  }
  return s;
}

/* Greedy generating subset: keep a permutation only when the closure of the
   ones kept so far does not already contain it. */
inline std::vector<std::vector<int>> generating_subset(
    const std::vector<std::vector<int>>& perms) {
  if (perms.empty()) return {};
  const int n = static_cast<int>(perms.front().size());
  std::vector<int> ident(static_cast<std::size_t>(n));
  std::iota(ident.begin(), ident.end(), 0);
  std::set<std::vector<int>> closed{ident};
  std::vector<std::vector<int>> gens;
  for (const auto& p : perms) {
    if (closed.count(p)) continue;
    gens.push_back(p);
    std::vector<std::vector<int>> frontier(closed.begin(), closed.end());
    while (!frontier.empty()) {
      auto cur = std::move(frontier.back());
      frontier.pop_back();
      for (const auto& g : gens) {
        std::vector<int> comp(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) comp[static_cast<std::size_t>(i)] =
            g[static_cast<std::size_t>(cur[static_cast<std::size_t>(i)])];
        if (closed.insert(comp).second) frontier.push_back(comp);
      }
    }
  }
  return gens;
}

/* Image of a subset mask under a vertex relabeling. */
inline std::uint32_t mask_image(std::uint32_t mask, int n, const std::vector<int>& perm) {
  std::uint32_t img = 0;
  for (int v = 0; v < n; ++v)
    if ((mask >> v) & 1u) img |= 1u << perm[static_cast<std::size_t>(v)];
  return img;
}

}  // namespace detail

/* Slack matrix of the graphic zonotope of a symmetric nonnegative matrix,
   relative to the supermodular description: rows are nonempty proper subsets
   S, columns are permutations, and the entry is

       sum over i not in S, j in S with pi(i) <= pi(j) of a_ij,

   cross-checked against x^pi(S) - g_A(S) entry by entry. */
template <class T>
LabeledMatrix<T> zonotope_slack(const Matrix<T>& a, int cap = 7) {
  detail::require_symmetric_nonneg(a);
  const int n = a.rows();
  if (n < 2) throw std::invalid_argument("need at least two coordinates");
  if (n > cap) throw std::invalid_argument("coordinate count exceeds the column cap");

  auto perms = detail::all_permutations(n);
  const int cols = static_cast<int>(perms.size());
  const std::uint32_t full = (1u << n) - 1;
  const int rows = static_cast<int>(full) - 1;

  Matrix<T> s(rows, cols);
  std::vector<std::string> rl(rows), cl(cols);

  std::vector<std::vector<T>> vertices(cols);
  for (int c = 0; c < cols; ++c) {
    vertices[c] = vertex_of_permutation(a, perms[c]);
    cl[c] = detail::perm_label(perms[c]);
  }

  for (std::uint32_t mask = 1; mask < full; ++mask) {
    const int r = static_cast<int>(mask) - 1;
    auto s_set = detail::bits_of(mask, n);
    rl[r] = "S=" + detail::set_label(mask, n);
    T g_s = zonotope_set_function(a, s_set);
    for (int c = 0; c < cols; ++c) {
      const auto& pi = perms[c];
      T direct(0);
      for (int j : s_set)
        for (int i = 0; i < n; ++i)
          if (!((mask >> i) & 1u) && pi[i] <= pi[j]) direct += a(i, j);
      T via_vertex(0);
      for (int j : s_set) via_vertex += vertices[c][j];
      via_vertex -= g_s;
      bool mismatch;
      if constexpr (scalar_traits<T>::is_exact)
        mismatch = direct != via_vertex;
      else
        mismatch = scalar_traits<T>::to_double(num_abs(direct - via_vertex)) >
                   1e-9 * std::max(1.0, scalar_traits<T>::to_double(num_abs(direct)));
      if (mismatch)
        throw std::logic_error("slack entry cross-check failed at " + rl[r]);
      s(r, c) = direct;
    }
  }
  return LabeledMatrix<T>(std::move(s), std::move(rl), std::move(cl));
}

/* Explicit covering family: for each ordered pair (i, j) with positive
   weight, the rectangle of all (S, pi) with i outside S, j inside S, and
   pi(i) <= pi(j).  The weighted rectangles sum to the slack matrix. */
template <class T>
std::vector<std::pair<T, Rectangle>> zonotope_decomposition(const Matrix<T>& a,
                                                            int cap = 7) {
  detail::require_symmetric_nonneg(a);
  const int n = a.rows();
  if (n < 2) throw std::invalid_argument("need at least two coordinates");
  if (n > cap) throw std::invalid_argument("coordinate count exceeds the column cap");

  auto perms = detail::all_permutations(n);
  const std::uint32_t full = (1u << n) - 1;
  const int rows = static_cast<int>(full) - 1;
  const int cols = static_cast<int>(perms.size());

  std::vector<std::pair<T, Rectangle>> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || !(a(i, j) > T(0))) continue;
      std::vector<int> rset, cset;
      for (std::uint32_t mask = 1; mask < full; ++mask)
        if (!((mask >> i) & 1u) && ((mask >> j) & 1u))
          rset.push_back(static_cast<int>(mask) - 1);
      for (int c = 0; c < cols; ++c)
        if (perms[c][i] <= perms[c][j]) cset.push_back(c);
      out.emplace_back(a(i, j), Rectangle(std::move(rset), std::move(cset), rows, cols));
    }
  return out;
}

/* Vertex permutations mapping edges to edges, reduced to a small generating
   set.  Exhaustive, so capped at 8 vertices. */
inline std::vector<std::vector<int>> graph_automorphism_generators(const SimpleGraph& g) {
  if (g.n > 8) throw std::invalid_argument("automorphism search capped at 8 vertices");
  std::set<std::pair<int, int>> eset(g.edges.begin(), g.edges.end());
  std::vector<std::vector<int>> autos;
  std::vector<int> p(static_cast<std::size_t>(g.n));
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (const auto& [u, v] : g.edges) {
      int a = p[static_cast<std::size_t>(u)], b = p[static_cast<std::size_t>(v)];
      if (a > b) std::swap(a, b);
      if (!eset.count({a, b})) {
        ok = false;
        break;
      }
    }
    if (ok) autos.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return detail::generating_subset(autos);
}

/* Row/column symmetry of spanning_tree_slack (zero rows kept) induced by a
   vertex permutation: subset rows map by set image, edge rows and tree
   columns by edge relabeling.  Throws when the permutation is not an
   automorphism of the graph. */
inline Symmetry spanning_tree_symmetry(const SimpleGraph& g,
                                       const std::vector<int>& vperm) {
  const int n = g.n;
  check_permutation(vperm, n, "vertex");
  if (n < 2 || n > 20) throw std::invalid_argument("vertex count out of range");
  std::map<std::pair<int, int>, int> eidx;
  for (std::size_t e = 0; e < g.edges.size(); ++e) eidx[g.edges[e]] = static_cast<int>(e);
  std::vector<int> emap(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    int u = vperm[static_cast<std::size_t>(g.edges[e].first)];
    int v = vperm[static_cast<std::size_t>(g.edges[e].second)];
    if (u > v) std::swap(u, v);
    auto it = eidx.find({u, v});
    if (it == eidx.end())
      throw std::invalid_argument("vertex permutation is not a graph automorphism");
    emap[e] = it->second;
  }
  auto trees = enumerate_spanning_trees(g);
  std::map<std::vector<int>, int> tidx;
  for (std::size_t c = 0; c < trees.size(); ++c) tidx[trees[c]] = static_cast<int>(c);
  const std::uint32_t full = (1u << n) - 1;
  const int subset_rows = static_cast<int>(full) - 1;
  Symmetry out;
  out.row_perm.resize(static_cast<std::size_t>(subset_rows) + g.edges.size());
  for (std::uint32_t mask = 1; mask < full; ++mask)
    out.row_perm[mask - 1] = static_cast<int>(detail::mask_image(mask, n, vperm)) - 1;
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    out.row_perm[static_cast<std::size_t>(subset_rows) + e] = subset_rows + emap[e];
  out.col_perm.resize(trees.size());
  for (std::size_t c = 0; c < trees.size(); ++c) {
    std::vector<int> img;
    img.reserve(trees[c].size());
    for (int e : trees[c]) img.push_back(emap[static_cast<std::size_t>(e)]);
    std::sort(img.begin(), img.end());
    auto it = tidx.find(img);
    if (it == tidx.end()) throw std::logic_error("tree image is not a spanning tree");
    out.col_perm[c] = it->second;
  }
  return out;
}

inline std::vector<Symmetry> spanning_tree_symmetries(const SimpleGraph& g) {
  std::vector<Symmetry> out;
  for (const auto& vperm : graph_automorphism_generators(g))
    out.push_back(spanning_tree_symmetry(g, vperm));
  return out;
}

/* Row/column symmetry of zonotope_slack induced by a coordinate relabeling:
   subset rows map by set image; the column of ranking pi maps to the column
   of pi composed with the inverse relabeling. */
inline Symmetry zonotope_symmetry(int n, const std::vector<int>& sigma, int cap = 7) {
  check_permutation(sigma, n, "coordinate");
  if (n < 2 || n > cap) throw std::invalid_argument("coordinate count out of range");
  auto perms = detail::all_permutations(n);
  std::map<std::vector<int>, int> pidx;
  for (std::size_t c = 0; c < perms.size(); ++c) pidx[perms[c]] = static_cast<int>(c);
  const std::uint32_t full = (1u << n) - 1;
  Symmetry out;
  out.row_perm.resize(static_cast<std::size_t>(full) - 1);
  for (std::uint32_t mask = 1; mask < full; ++mask)
    out.row_perm[mask - 1] = static_cast<int>(detail::mask_image(mask, n, sigma)) - 1;
  out.col_perm.resize(perms.size());
  for (std::size_t c = 0; c < perms.size(); ++c) {
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      img[static_cast<std::size_t>(sigma[static_cast<std::size_t>(i)])] =
          perms[c][static_cast<std::size_t>(i)];
    out.col_perm[c] = pidx.at(img);
  }
  return out;
}

/* Generating symmetries of the zonotope slack of A: the coordinate
   relabelings that fix A entrywise, found exhaustively and reduced. */
template <class T>
std::vector<Symmetry> zonotope_symmetries(const Matrix<T>& a, int cap = 7) {
  detail::require_symmetric_nonneg(a);
  const int n = a.rows();
  if (n < 2 || n > cap) throw std::invalid_argument("coordinate count out of range");
  std::vector<std::vector<int>> keep;
  for (const auto& sigma : detail::all_permutations(n)) {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = 0; j < n && ok; ++j)
        ok = a(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]) ==
             a(i, j);
    if (ok) keep.push_back(sigma);
  }
  std::vector<Symmetry> out;
  for (const auto& sigma : detail::generating_subset(keep))
    out.push_back(zonotope_symmetry(n, sigma, cap));
  return out;
}

/* Cut weight of the bipartition (S, complement): sum of a_ij over i outside
   and j inside.  For symmetric A this is the usual cut weight, each crossing
   pair counted once.  Brute force over the 2^(n-1) - 1 bipartitions with
   vertex 1 fixed outside S. */
template <class T>
std::pair<T, std::vector<int>> max_cut_weight(const Matrix<T>& a) {
  detail::require_symmetric_nonneg(a);
  const int n = a.rows();
  if (n < 2) throw std::invalid_argument("need at least two vertices");
  if (n > 24) throw std::invalid_argument("cut enumeration capped at 24 vertices");
  T best(0);
  std::vector<int> bw;
  bool has = false;
  for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
    std::uint32_t s = mask << 1;  // vertex 1 stays outside S
    T w(0);
    for (int j = 1; j < n; ++j) {
      if (!((s >> j) & 1u)) continue;
      for (int i = 0; i < n; ++i)
        if (!((s >> i) & 1u)) w += a(i, j);
    }
    if (!has || w > best) {
      best = w;
      bw = detail::bits_of(s, n);
      has = true;
    }
  }
  return {best, bw};
}

template <class T>
std::pair<T, std::vector<int>> min_cut_weight(const Matrix<T>& a) {
  detail::require_symmetric_nonneg(a);
  const int n = a.rows();
  if (n < 2) throw std::invalid_argument("need at least two vertices");
  if (n > 24) throw std::invalid_argument("cut enumeration capped at 24 vertices");
  T best(0);
  std::vector<int> bw;
  bool has = false;
  for (std::uint32_t mask = 1; mask < (1u << (n - 1)); ++mask) {
    std::uint32_t s = mask << 1;
    T w(0);
    for (int j = 1; j < n; ++j) {
      if (!((s >> j) & 1u)) continue;
      for (int i = 0; i < n; ++i)
        if (!((s >> i) & 1u)) w += a(i, j);
    }
    if (!has || w < best) {
      best = w;
      bw = detail::bits_of(s, n);
      has = true;
    }
  }
  return {best, bw};
}

/* Weight matrices of the two named zonotope families. */
template <class T>
Matrix<T> completion_time_matrix(const std::vector<T>& p) {
  const int n = static_cast<int>(p.size());
  if (n < 1) throw std::invalid_argument("need at least one processing time");
  for (const T& v : p)
    if (!(v > T(0))) throw std::invalid_argument("processing times must be positive");
  Matrix<T> a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = p[i] * p[j];
  return a;
}

template <class T>
Matrix<T> permutahedron_matrix(int n) {
  if (n < 1) throw std::invalid_argument("need at least one coordinate");
  return Matrix<T>::constant(n, n, T(1));
}

}  // namespace hsblab

#endif
