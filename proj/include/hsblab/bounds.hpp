#ifndef HSBLAB_BOUNDS_HPP
#define HSBLAB_BOUNDS_HPP

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "hsblab/matrix.hpp"
#include "hsblab/scalar.hpp"

namespace hsblab {

namespace detail {

/* Fixed-width bitset helpers over vector<uint64_t>. */
using WordVec = std::vector<std::uint64_t>;

inline WordVec make_words(int bits) {
  return WordVec(static_cast<std::size_t>((bits + 63) / 64), 0);
}
inline void set_bit(WordVec& w, int i) {
  w[static_cast<std::size_t>(i) >> 6] |= std::uint64_t(1) << (i & 63);
}
inline bool test_bit(const WordVec& w, int i) {
  return (w[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u;
}
inline bool words_empty(const WordVec& w) {
  for (auto v : w)
    if (v) return false;
  return true;
}
inline int words_popcount(const WordVec& w) {
  int c = 0;
  for (auto v : w) c += __builtin_popcountll(v);
  return c;
}
inline WordVec words_and(const WordVec& a, const WordVec& b) {
  WordVec out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] & b[k];
  return out;
}
inline bool words_subset(const WordVec& a, const WordVec& b) {  // a included in b
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] & ~b[k]) return false;
  return true;
}

}  // namespace detail

struct RectangleCoverOptions {
  int max_support_cells = 2000;
  int max_rectangles = 5000;
  long long node_limit = 500000;
};

/* Outcome of the support-covering computation. `lower` is always a proven
 * lower bound on the covering number (and therefore on the nonnegative
 * rank); `upper` is the size of the best cover found; `exact` means the two
 * met and `cover` is optimal. */
struct RectangleCoverResult {
  int lower = 0;
  int upper = 0;
  bool exact = false;
  std::vector<Rectangle> cover;
  int candidates = 0;
  int support_cells = 0;
  long long nodes = 0;
};

namespace detail {

/* All inclusion-maximal all-nonzero submatrices of s, obtained as closed
 * intersections of row supports. Seeding with every single row keeps the
 * list cover-feasible even when the budget truncates it. */
template <typename T>
std::vector<Rectangle> maximal_support_rectangles(const Matrix<T>& s, int budget,
                                                  bool* complete) {
  const int m = s.rows(), n = s.cols();
  std::vector<WordVec> supp(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    supp[static_cast<std::size_t>(i)] = make_words(n);
    for (int j = 0; j < n; ++j)
      if (!(s(i, j) == T(0))) set_bit(supp[static_cast<std::size_t>(i)], j);
  }

  std::set<WordVec> closed;
  std::vector<WordVec> queue;
  for (int i = 0; i < m; ++i) {
    const auto& w = supp[static_cast<std::size_t>(i)];
    if (words_empty(w)) continue;
    if (closed.insert(w).second) queue.push_back(w);
  }
  *complete = true;
  for (std::size_t head = 0; head < queue.size() && *complete; ++head) {
    WordVec cur = queue[head];
    for (int r = 0; r < m; ++r) {
      WordVec next = words_and(cur, supp[static_cast<std::size_t>(r)]);
      if (words_empty(next) || closed.count(next)) continue;
      if (static_cast<int>(closed.size()) >= budget) {
        *complete = false;
        break;
      }
      closed.insert(next);
      queue.push_back(next);
    }
  }

  std::vector<Rectangle> rects;
  rects.reserve(closed.size());
  for (const auto& colmask : closed) {
    std::vector<int> rows, cols;
    for (int i = 0; i < m; ++i)
      if (words_subset(colmask, supp[static_cast<std::size_t>(i)])) rows.push_back(i);
    for (int j = 0; j < n; ++j)
      if (test_bit(colmask, j)) cols.push_back(j);
    rects.push_back(Rectangle(rows, cols, m, n));
  }
  std::sort(rects.begin(), rects.end());
  return rects;
}

/* Greedy antichain of support cells no two of which fit in one support
 * rectangle; its size bounds the covering number from below. */
template <typename T>
int fooling_set_bound(const Matrix<T>& s, const std::vector<std::pair<int, int>>& cells) {
  std::vector<std::pair<int, int>> chosen;
  for (const auto& [i, j] : cells) {
    bool ok = true;
    for (const auto& [k, l] : chosen) {
      bool together = !(s(i, l) == T(0)) && !(s(k, j) == T(0));
      if (together) {
        ok = false;
        break;
      }
    }
    if (ok) chosen.push_back({i, j});
  }
  return static_cast<int>(chosen.size());
}

struct CoverSearch {
  const std::vector<WordVec>* rect_cells = nullptr;
  std::vector<std::vector<int>> cell_rects;  // candidate rectangles per cell
  int universe = 0;
  int max_rect_size = 1;
  long long node_limit = 0;
  long long nodes = 0;
  bool complete = true;
  int best = 0;
  std::vector<int> best_pick;
  std::vector<int> pick;

  WordVec gain_mask(const WordVec& covered, int r) const {
    const auto& rc = (*rect_cells)[static_cast<std::size_t>(r)];
    WordVec out(rc.size());
    for (std::size_t k = 0; k < rc.size(); ++k) out[k] = rc[k] & ~covered[k];
    return out;
  }

  void dfs(const WordVec& covered, int used, int covered_count) {
    if (covered_count == universe) {
      if (used < best) {
        best = used;
        best_pick = pick;
      }
      return;
    }
    int remaining = universe - covered_count;
    if (used + (remaining + max_rect_size - 1) / max_rect_size >= best) return;
    if (++nodes > node_limit) {
      complete = false;
      return;
    }

    /* Branch on the uncovered cell with the fewest candidate rectangles. */
    int pivot = -1, pivot_deg = 0;
    for (int c = 0; c < universe; ++c) {
      if (test_bit(covered, c)) continue;
      int deg = static_cast<int>(cell_rects[static_cast<std::size_t>(c)].size());
      if (pivot < 0 || deg < pivot_deg) {
        pivot = c;
        pivot_deg = deg;
      }
      if (pivot_deg <= 1) break;
    }
    std::vector<int> order = cell_rects[static_cast<std::size_t>(pivot)];
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      int ga = words_popcount(gain_mask(covered, a));
      int gb = words_popcount(gain_mask(covered, b));
      if (ga != gb) return ga > gb;
      return a < b;
    });
    for (int r : order) {
      WordVec next = covered;
      const auto& rc = (*rect_cells)[static_cast<std::size_t>(r)];
      int gained = 0;
      for (std::size_t k = 0; k < next.size(); ++k) {
        std::uint64_t add = rc[k] & ~next[k];
        gained += __builtin_popcountll(add);
        next[k] |= add;
      }
      if (gained == 0) continue;
      pick.push_back(r);
      dfs(next, used + 1, covered_count + gained);
      pick.pop_back();
      if (!complete) return;
    }
  }
};

}  // namespace detail

template <typename T>
RectangleCoverResult rectangle_cover_bound(const Matrix<T>& s,
                                           const RectangleCoverOptions& opts = {}) {
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j)
      if (!(s(i, j) == T(0))) cells.push_back({i, j});
  if (cells.empty()) throw std::invalid_argument("rectangle_cover_bound: zero matrix");

  RectangleCoverResult res;
  res.support_cells = static_cast<int>(cells.size());
  if (res.support_cells > opts.max_support_cells)
    throw std::invalid_argument("rectangle_cover_bound: support exceeds the cell budget");

  bool rects_complete = false;
  auto rects = detail::maximal_support_rectangles(s, opts.max_rectangles, &rects_complete);
  res.candidates = static_cast<int>(rects.size());

  const int universe = res.support_cells;
  std::vector<int> cell_id(static_cast<std::size_t>(s.rows() * s.cols()), -1);
  for (int c = 0; c < universe; ++c)
    cell_id[static_cast<std::size_t>(cells[static_cast<std::size_t>(c)].first * s.cols() +
                                     cells[static_cast<std::size_t>(c)].second)] = c;
  std::vector<detail::WordVec> rect_cells;
  rect_cells.reserve(rects.size());
  for (const auto& r : rects) {
    auto w = detail::make_words(universe);
    for (int i : r.row_set)
      for (int j : r.col_set)
        detail::set_bit(w, cell_id[static_cast<std::size_t>(i * s.cols() + j)]);
    rect_cells.push_back(std::move(w));
  }

  /* Greedy cover for the initial upper bound. */
  detail::WordVec covered = detail::make_words(universe);
  std::vector<int> greedy;
  int covered_count = 0;
  while (covered_count < universe) {
    int best_r = -1, best_gain = 0;
    for (int r = 0; r < res.candidates; ++r) {
      int gain = 0;
      for (std::size_t k = 0; k < covered.size(); ++k)
        gain += __builtin_popcountll(rect_cells[static_cast<std::size_t>(r)][k] & ~covered[k]);
      if (gain > best_gain) {
        best_gain = gain;
        best_r = r;
      }
    }
    greedy.push_back(best_r);
    for (std::size_t k = 0; k < covered.size(); ++k)
      covered[k] |= rect_cells[static_cast<std::size_t>(best_r)][k];
    covered_count = detail::words_popcount(covered);
  }

  int fool = detail::fooling_set_bound(s, cells);

  detail::CoverSearch search;
  search.rect_cells = &rect_cells;
  search.universe = universe;
  search.node_limit = opts.node_limit;
  search.best = static_cast<int>(greedy.size());
  search.best_pick = greedy;
  for (const auto& w : rect_cells)
    search.max_rect_size = std::max(search.max_rect_size, detail::words_popcount(w));
  search.cell_rects.assign(static_cast<std::size_t>(universe), {});
  for (int r = 0; r < res.candidates; ++r)
    for (int c = 0; c < universe; ++c)
      if (detail::test_bit(rect_cells[static_cast<std::size_t>(r)], c))
        search.cell_rects[static_cast<std::size_t>(c)].push_back(r);

  if (fool < search.best) search.dfs(detail::make_words(universe), 0, 0);

  res.upper = search.best;
  res.nodes = search.nodes;
  if (fool >= search.best) {
    res.lower = search.best;
    res.exact = true;
  } else if (rects_complete && search.complete) {
    res.lower = search.best;
    res.exact = true;
  } else {
    res.lower = fool;
    res.exact = false;
  }
  for (int r : search.best_pick) res.cover.push_back(rects[static_cast<std::size_t>(r)]);
  return res;
}

/* Rank by one-step fraction-free elimination in exact arithmetic; scaled
 * partial-pivot elimination with a relative tolerance over doubles. */
template <typename T>
int real_rank(const Matrix<T>& s) {
  const int m = s.rows(), n = s.cols();
  Matrix<T> a = s;
  int rank = 0;
  if constexpr (scalar_traits<T>::is_exact) {
    T prev_pivot(1);
    for (int col = 0; col < n && rank < m; ++col) {
      int piv = -1;
      for (int i = rank; i < m; ++i)
        if (!(a(i, col) == T(0))) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      if (piv != rank)
        for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(rank, j));
      for (int i = rank + 1; i < m; ++i) {
        for (int j = col + 1; j < n; ++j) {
          T num = a(rank, col) * a(i, j) - a(i, col) * a(rank, j);
          a(i, j) = num / prev_pivot;
        }
        a(i, col) = T(0);
      }
      prev_pivot = a(rank, col);
      ++rank;
    }
  } else {
    T tol = max_abs_entry(a) * T(1e-9);
    for (int col = 0; col < n && rank < m; ++col) {
      int piv = -1;
      T piv_abs(0);
      for (int i = rank; i < m; ++i) {
        T v = num_abs(a(i, col));
        if (v > piv_abs) {
          piv_abs = v;
          piv = i;
        }
      }
      if (piv < 0 || !(piv_abs > tol)) continue;
      if (piv != rank)
        for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(rank, j));
      for (int i = rank + 1; i < m; ++i) {
        T f = a(i, col) / a(rank, col);
        for (int j = col; j < n; ++j) a(i, j) -= f * a(rank, j);
      }
      ++rank;
    }
  }
  return rank;
}

}  // namespace hsblab

#endif
