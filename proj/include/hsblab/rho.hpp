#ifndef HSBLAB_RHO_HPP
#define HSBLAB_RHO_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hsblab/matrix.hpp"
#include "hsblab/rng.hpp"
#include "hsblab/scalar.hpp"

namespace hsblab {

/* rho(X) = max over combinatorial rectangles R of <X, R>.  This is the
   pricing problem of the whole workbench; everything else leans on it. */

template <class T>
struct RhoResult {
  T value{};          // <X, witness>, the best rectangle value found
  T upper{};          // valid upper bound on rho(X) (see `complete`)
  Rectangle witness;
  std::uint64_t nodes = 0;
  /* complete = search ran to the end.  Then value == rho(X), except when a
     prune floor f was given and rho(X) <= f, in which case upper == f still
     bounds rho(X) from above.  With complete == false (time or node limit,
     or a stop_above trigger), `value` is only a lower bound but `upper`
     remains valid. */
  bool complete = false;
};

struct RhoOptions {
  double time_limit_sec = 0;     // 0 means unlimited
  std::uint64_t node_limit = 0;  // 0 means unlimited
  int heuristic_restarts = 8;
  std::uint64_t seed = 0;
};

namespace detail {

template <class T>
bool lex_before(const Rectangle& a, const Rectangle& b) {
  return a < b;
}

/* Best single entry, lex-smallest position among maxima. */
template <class T>
std::pair<T, Rectangle> best_entry(const Matrix<T>& x) {
  int bi = 0, bj = 0;
  T best = x(0, 0);
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j)
      if (x(i, j) > best) {
        best = x(i, j);
        bi = i;
        bj = j;
      }
  return {best, Rectangle({bi}, {bj}, x.rows(), x.cols())};
}

template <class T>
struct CandidateSink {
  T value;
  Rectangle witness;
  bool has = false;

  void offer(const T& v, const Rectangle& w) {
    if (!has || v > value || (v == value && w < witness)) {
      value = v;
      witness = w;
      has = true;
    }
  }
};

/* One run of alternating maximization from a starting row set.  Returns the
   fixed point reached (row set, greedy column set, value). */
template <class T>
std::pair<T, Rectangle> alternate_from(const Matrix<T>& x, std::vector<int> rows) {
  const int m = x.rows(), n = x.cols();
  std::vector<int> cols;
  for (int round = 0; round < 1000; ++round) {
    cols.clear();
    std::vector<T> colsum(n, T(0));
    for (int i : rows)
      for (int j = 0; j < n; ++j) colsum[j] += x(i, j);
    for (int j = 0; j < n; ++j)
      if (colsum[j] > T(0)) cols.push_back(j);
    if (cols.empty()) {
      int bj = 0;
      for (int j = 1; j < n; ++j)
        if (colsum[j] > colsum[bj]) bj = j;
      cols.push_back(bj);
    }
    std::vector<T> rowsum(m, T(0));
    for (int j : cols)
      for (int i = 0; i < m; ++i) rowsum[i] += x(i, j);
    std::vector<int> next;
    for (int i = 0; i < m; ++i)
      if (rowsum[i] > T(0)) next.push_back(i);
    if (next.empty()) {
      int bi = 0;
      for (int i = 1; i < m; ++i)
        if (rowsum[i] > rowsum[bi]) bi = i;
      next.push_back(bi);
    }
    if (next == rows) break;
    rows = std::move(next);
  }
  Rectangle w(rows, cols, m, n);
  return {rectangle_inner(x, w), w};
}

}  // namespace detail

/* Alternating maximization with a deterministic start plus seeded random
   restarts.  Lower bound only: result.upper is not meaningful and
   result.complete is always false.  When `harvest` is given, every distinct
   fixed point encountered is appended to it. */
template <class T>
RhoResult<T> rho_heuristic(const Matrix<T>& x, const RhoOptions& opts = {},
                           std::vector<std::pair<T, Rectangle>>* harvest = nullptr) {
  const int m = x.rows(), n = x.cols();
  detail::CandidateSink<T> sink;
  auto offer = [&](const std::pair<T, Rectangle>& c) {
    sink.offer(c.first, c.second);
    if (harvest) {
      for (const auto& h : *harvest)
        if (h.second == c.second) return;
      harvest->push_back(c);
    }
  };

  offer(detail::best_entry(x));

  /* Deterministic start: the row with the largest positive-part sum. */
  int start = 0;
  T best_possum(0);
  for (int i = 0; i < m; ++i) {
    T s(0);
    for (int j = 0; j < n; ++j)
      if (x(i, j) > T(0)) s += x(i, j);
    if (i == 0 || s > best_possum) {
      best_possum = s;
      start = i;
    }
  }
  offer(detail::alternate_from(x, {start}));

  Rng rng(opts.seed);
  for (int r = 0; r < opts.heuristic_restarts; ++r)
    offer(detail::alternate_from(x, rng.nonempty_subset(m)));

  RhoResult<T> out;
  out.value = sink.value;
  out.upper = sink.value;
  out.witness = sink.witness;
  out.complete = false;
  return out;
}

namespace detail {

template <class T>
class RhoBranchBound {
 public:
  RhoBranchBound(const Matrix<T>& x, const RhoOptions& opts,
                 const std::optional<T>& floor, const std::optional<T>& stop)
      : x_(x), opts_(opts), floor_(floor), stop_(stop),
        start_(std::chrono::steady_clock::now()) {}

  RhoResult<T> run() {
    const int m = x_.rows(), n = x_.cols();

    for (int i = 0; i < m; ++i) {
      T s(0);
      for (int j = 0; j < n; ++j)
        if (x_(i, j) > T(0)) s += x_(i, j);
      if (s > T(0)) branch_rows_.push_back(i), possum_.push_back(s);
    }
    std::vector<int> order(branch_rows_.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return possum_[a] > possum_[b];
    });
    {
      std::vector<int> sorted;
      for (int k : order) sorted.push_back(branch_rows_[k]);
      branch_rows_ = std::move(sorted);
    }
    const int L = static_cast<int>(branch_rows_.size());

    RhoResult<T> out;
    auto seed = best_entry(x_);
    if (L == 0) {
      /* No positive entry anywhere: a single maximal entry is optimal,
         since every rectangle sums entries that are all <= 0. */
      out.value = seed.first;
      out.witness = seed.second;
      out.upper = effective_upper(seed.first);
      out.complete = true;
      out.nodes = 1;
      return out;
    }

    inc_.offer(seed.first, seed.second);
    {
      RhoOptions hopts = opts_;
      hopts.time_limit_sec = 0;
      hopts.node_limit = 0;
      auto h = rho_heuristic(x_, hopts);
      inc_.offer(h.value, h.witness);
    }
    check_stop();

    suffix_.assign(L + 1, std::vector<T>(n, T(0)));
    for (int k = L - 1; k >= 0; --k)
      for (int j = 0; j < n; ++j) {
        const T& v = x_(branch_rows_[k], j);
        suffix_[k][j] = suffix_[k + 1][j] + (v > T(0) ? v : T(0));
      }

    colsum_.assign(n, T(0));
    dfs(0);

    out.value = inc_.value;
    out.witness = inc_.witness;
    out.nodes = nodes_;
    out.complete = !aborted_;
    T u = effective_upper(inc_.value);
    if (aborted_ && abort_upper_ > u) u = abort_upper_;
    if (!scalar_traits<T>::is_exact) u += scalar_traits<T>::prune_tol();
    out.upper = u;
    return out;
  }

 private:
  T effective_upper(const T& v) const {
    T u = v;
    if (floor_ && *floor_ > u) u = *floor_;
    return u;
  }

  /* A caller that only wants to know whether some rectangle clears the stop
     bar has its answer as soon as the incumbent does; abort the search then,
     so the unwind still collects a valid upper bound from the untaken
     subtrees. */
  void check_stop() {
    if (stop_ && inc_.value > *stop_) aborted_ = true;
  }

  T threshold() const { return effective_upper(inc_.value) + scalar_traits<T>::prune_tol(); }

  T bound_at(int k) const {
    T b(0);
    const auto& sfx = suffix_[k];
    for (std::size_t j = 0; j < colsum_.size(); ++j) {
      T v = colsum_[j] + sfx[j];
      if (v > T(0)) b += v;
    }
    return b;
  }

  bool abort_now() {
    if (aborted_) return true;
    if ((nodes_ & 1023u) == 0u) {
      if (opts_.node_limit && nodes_ >= opts_.node_limit) aborted_ = true;
      if (!aborted_ && opts_.time_limit_sec > 0) {
        double el = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - start_).count();
        if (el >= opts_.time_limit_sec) aborted_ = true;
      }
    }
    return aborted_;
  }

  void leaf_update() {
    if (in_rows_.empty()) return;
    const int n = x_.cols();
    T v(0);
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (colsum_[j] > T(0)) {
        v += colsum_[j];
        cols.push_back(j);
      }
    if (cols.empty()) {
      /* No profitable column for this row set; fall back to the best single
         entry inside it so the candidate is still a valid rectangle. */
      int bi = in_rows_[0], bj = 0;
      T best = x_(bi, 0);
      for (int i : in_rows_)
        for (int j = 0; j < n; ++j)
          if (x_(i, j) > best) {
            best = x_(i, j);
            bi = i;
            bj = j;
          }
      inc_.offer(best, Rectangle({bi}, {bj}, x_.rows(), n));
      check_stop();
      return;
    }
    std::vector<int> rows = in_rows_;
    inc_.offer(v, Rectangle(std::move(rows), std::move(cols), x_.rows(), n));
    check_stop();
  }

  void dfs(int k) {
    ++nodes_;
    if (abort_now()) {
      T b = bound_at(k);
      if (b > abort_upper_) abort_upper_ = b;
      return;
    }
    if (k == static_cast<int>(branch_rows_.size())) {
      leaf_update();
      return;
    }
    const int row = branch_rows_[k];
    const int n = x_.cols();

    in_rows_.push_back(row);
    for (int j = 0; j < n; ++j) colsum_[j] += x_(row, j);
    if (bound_at(k + 1) > threshold()) dfs(k + 1);
    for (int j = 0; j < n; ++j) colsum_[j] -= x_(row, j);
    in_rows_.pop_back();

    if (bound_at(k + 1) > threshold()) dfs(k + 1);
  }

  const Matrix<T>& x_;
  RhoOptions opts_;
  std::optional<T> floor_;
  std::optional<T> stop_;
  std::chrono::steady_clock::time_point start_;

  std::vector<int> branch_rows_;
  std::vector<T> possum_;
  std::vector<std::vector<T>> suffix_;
  std::vector<T> colsum_;
  std::vector<int> in_rows_;
  CandidateSink<T> inc_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  T abort_upper_{};
};

}  // namespace detail

/* Exact maximization by branch and bound over subsets of the smaller side.
   Subtrees whose bound cannot beat max(incumbent, prune_floor) are cut, so a
   caller that only needs to distinguish "rho <= floor" from the exact value
   above the floor can pass the floor and keep the certificate in `upper`.
   With stop_above set, the search aborts as soon as any rectangle above that
   bar is in hand (complete comes back false): separation callers that treat
   every such rectangle alike get their cut at heuristic cost instead of
   paying for a full optimality proof. */
template <class T>
RhoResult<T> rho_exact(const Matrix<T>& x, const RhoOptions& opts = {},
                       const std::optional<T>& prune_floor = {},
                       const std::optional<T>& stop_above = {}) {
  if (x.rows() > x.cols()) {
    Matrix<T> xt = transpose(x);
    RhoResult<T> r =
        detail::RhoBranchBound<T>(xt, opts, prune_floor, stop_above).run();
    r.witness = r.witness.transposed();
    return r;
  }
  return detail::RhoBranchBound<T>(x, opts, prune_floor, stop_above).run();
}

/* Full sweep over all nonempty subsets of the smaller side with greedy
   column choice.  Exact by exhaustion; meant for small instances, where it
   doubles as an independent check on the branch and bound. */
template <class T>
RhoResult<T> rho_enumerate(const Matrix<T>& x) {
  if (x.rows() > x.cols()) {
    RhoResult<T> r = rho_enumerate(transpose(x));
    r.witness = r.witness.transposed();
    return r;
  }
  const int m = x.rows(), n = x.cols();
  if (m > 24)
    throw std::invalid_argument("enumeration needs min(rows, cols) <= 24");

  detail::CandidateSink<T> sink;
  std::vector<T> colsum(n, T(0));
  std::uint32_t gray = 0;
  std::uint64_t nodes = 0;
  for (std::uint32_t k = 1; k < (1u << m); ++k) {
    std::uint32_t next = k ^ (k >> 1);
    std::uint32_t flip = gray ^ next;
    int r = 0;
    while (!((flip >> r) & 1u)) ++r;
    bool added = ((next >> r) & 1u) != 0;
    for (int j = 0; j < n; ++j)
      colsum[j] += added ? x(r, j) : T(0) - x(r, j);
    gray = next;
    ++nodes;

    T v(0);
    std::vector<int> cols;
    for (int j = 0; j < n; ++j)
      if (colsum[j] > T(0)) {
        v += colsum[j];
        cols.push_back(j);
      }
    std::vector<int> rows;
    for (int i = 0; i < m; ++i)
      if ((gray >> i) & 1u) rows.push_back(i);
    if (cols.empty()) {
      int bi = rows[0], bj = 0;
      T best = x(bi, 0);
      for (int i : rows)
        for (int j = 0; j < n; ++j)
          if (x(i, j) > best) {
            best = x(i, j);
            bi = i;
            bj = j;
          }
      sink.offer(best, Rectangle({bi}, {bj}, m, n));
    } else {
      sink.offer(v, Rectangle(std::move(rows), std::move(cols), m, n));
    }
  }

  RhoResult<T> out;
  out.value = sink.value;
  out.upper = sink.value;
  out.witness = sink.witness;
  out.nodes = nodes;
  out.complete = true;
  return out;
}

}  // namespace hsblab

#endif
