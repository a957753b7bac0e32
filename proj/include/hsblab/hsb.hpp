#ifndef HSBLAB_HSB_HPP
#define HSBLAB_HSB_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>
#include <tuple>
#include <string>
#include <utility>
#include <vector>

#include "hsblab/bounds.hpp"
#include "hsblab/lp.hpp"
#include "hsblab/matrix.hpp"
#include "hsblab/rho.hpp"
#include "hsblab/scalar.hpp"

namespace hsblab {

class ZeroMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class HsbStatus { kConverged, kTimeLimit };

template <class T>
struct DualTerm {
  Rectangle rect;
  T weight{};
};

template <class T>
struct HsbResult {
  T value{};  // certified lower bound; the reported number
  T lower{};
  T upper{};  // certified upper bound from the best valid decomposition
  T gap{};    // upper - lower
  Matrix<T> primal_x;
  std::vector<DualTerm<T>> dual;
  HsbStatus status = HsbStatus::kConverged;
  int iterations = 0;         // master optimizations
  int cut_rounds = 0;         // pricing rounds that added columns
  int exact_oracle_calls = 0;
  std::uint64_t lp_pivots = 0;
  std::uint64_t oracle_nodes = 0;
  double wall_seconds = 0;
};

struct HsbOptions {
  /* Termination: certified separation value <= 1 + rel_tol.  Ignored in
     exact arithmetic, where the criterion is <= 1 with no slack. */
  double rel_tol = 1e-6;
  double time_limit_sec = 0;  // 0 means unlimited
  int heuristic_restarts = 8;
  int max_cuts_per_round = 8;
  std::uint64_t seed = 0;
  std::size_t exact_cell_cap = 64;  // cell budget for exact arithmetic
  /* Pool-seeding budget for maximal support rectangles; 0 skips them. */
  int seed_rectangles = 3000;
  /* Caller-supplied rectangles added to the starting pool, e.g. from a
     known decomposition of the input.  Purely an accelerator: the result
     is certified the same way with or without them. */
  std::vector<Rectangle> seed_pool;
  /* Row/column permutations that leave the matrix unchanged.  The master
     then carries one row per cell orbit and one column per rectangle orbit,
     which removes the degeneracy that stalls column generation on highly
     symmetric instances.  Certificates are expanded back to plain
     rectangles, so nothing downstream depends on the reduction. */
  std::vector<Symmetry> symmetries;
  std::ostream* trace = nullptr;    // per-round progress lines, for tuning
};

/* Lower bound certified by a separating matrix: <S, X> / (norm * rho(X)),
   computed with a fresh exact separation run.  Throws when the oracle cannot
   finish within the option limits. */
template <class T>
T verify_primal_certificate(const Matrix<T>& s, const Matrix<T>& x,
                            const RhoOptions& oracle_opts = {}) {
  if (s.rows() != x.rows() || s.cols() != x.cols())
    throw CertificateError("separating matrix shape does not match the instance");
  T norm = max_abs_entry(s);
  if (norm == T(0)) throw ZeroMatrixError("zero matrix has no certificate");
  T inner = frobenius_inner(s, x);
  if (!(inner > T(0))) return T(0);
  auto r = rho_exact(x, oracle_opts);
  if (!r.complete)
    throw CertificateError("separation oracle hit its limit during verification");
  T rho = r.value;
  if (!(rho > T(0)))
    throw CertificateError("separation value is not positive");
  return inner / (norm * rho);
}

/* Upper bound certified by a weighted rectangle decomposition.  The weights
   must be nonnegative and reproduce the matrix entrywise. */
template <class T>
T verify_dual_certificate(const Matrix<T>& s, const std::vector<DualTerm<T>>& dual) {
  T norm = max_abs_entry(s);
  if (norm == T(0)) throw ZeroMatrixError("zero matrix has no certificate");
  Matrix<T> cover(s.rows(), s.cols());
  T total(0);
  for (std::size_t k = 0; k < dual.size(); ++k) {
    const auto& term = dual[k];
    if (term.rect.ambient_rows != s.rows() || term.rect.ambient_cols != s.cols())
      throw CertificateError("rectangle " + std::to_string(k + 1) +
                             " has the wrong ambient shape");
    term.rect.validate();
    T w = term.weight;
    if constexpr (scalar_traits<T>::is_exact) {
      if (w < T(0))
        throw CertificateError("rectangle " + std::to_string(k + 1) +
                               " has a negative weight");
    } else {
      if (scalar_traits<T>::to_double(w) < -1e-9)
        throw CertificateError("rectangle " + std::to_string(k + 1) +
                               " has a negative weight");
      if (w < T(0)) w = T(0);
    }
    for (int i : term.rect.row_set)
      for (int j : term.rect.col_set) cover(i, j) += w;
    total += w;
  }
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j) {
      T dev = num_abs(cover(i, j) - s(i, j));
      bool bad;
      if constexpr (scalar_traits<T>::is_exact)
        bad = dev != T(0);
      else
        bad = scalar_traits<T>::to_double(dev) >
              1e-6 * std::max(1.0, scalar_traits<T>::to_double(norm));
      if (bad)
        throw CertificateError(
            "decomposition misses entry (" + std::to_string(i + 1) + "," +
            std::to_string(j + 1) + ")");
    }
  return total / norm;
}

namespace detail {

template <class T>
T tmax(const T& a, const T& b) { return a < b ? b : a; }

template <class T>
class HsbEngine {
 public:
  HsbEngine(const Matrix<T>& s, const HsbOptions& opts)
      : s_(s), opts_(opts), start_(std::chrono::steady_clock::now()) {}

  HsbResult<T> run() {
    const int m = s_.rows(), n = s_.cols();
    norm_ = max_abs_entry(s_);
    if (norm_ == T(0))
      throw ZeroMatrixError("the zero matrix admits no rectangle decomposition");
    if (!s_.is_nonnegative())
      throw std::invalid_argument("decomposition bound needs a nonnegative matrix");
    if (scalar_traits<T>::is_exact &&
        static_cast<std::size_t>(m) * n > opts_.exact_cell_cap)
      throw std::invalid_argument(
          "exact arithmetic is limited to " + std::to_string(opts_.exact_cell_cap) +
          " cells; use float mode for larger instances");

    sym_ = !opts_.symmetries.empty();
    if (sym_) {
      for (const Symmetry& g : opts_.symmetries)
        if (!preserves(g, s_))
          throw std::invalid_argument("symmetry generator does not preserve the matrix");
      compute_cell_orbits();
    }

    build_initial_pool();
    free_.assign(static_cast<std::size_t>(m) * n, 0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (s_(i, j) != T(0)) free_[flat(i, j)] = 1;

    T sum = entry_sum(s_);
    T ratio = sum / norm_;
    box_cost_ = T(m) * T(n) * tmax(T(1), ratio);

    /* Singleton decomposition: always valid, seeds the upper bound. */
    best_upper_ = sum / norm_;
    best_dual_.clear();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (s_(i, j) != T(0))
          best_dual_.push_back({Rectangle({i}, {j}, m, n), s_(i, j)});

    /* The indicator of a largest entry separates with value one, so the
       bound never starts below that. */
    best_lower_ = T(1);
    best_x_ = Matrix<T>(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (num_abs(s_(i, j)) == norm_) {
          best_x_(i, j) = T(1);
          i = m;
          break;
        }

    std::unique_ptr<RectangleMaster<T>> master;
    int rebuild_retries = 0, box_doublings = 0, duplicate_cuts = 0;
    std::uint64_t finished_pivots = 0;

    HsbResult<T> out;
    out.primal_x = Matrix<T>(m, n);

    int round = 0;
    while (true) {
      ++round;
      if (!master) {
        master = build_master();
        master_pool_size_ = pool_.size();
      } else {
        for (std::size_t k = master_pool_size_; k < pool_.size(); ++k)
          add_master_column(*master, k);
        master_pool_size_ = pool_.size();
      }
      if (expired()) return bracket(out, master.get(), finished_pivots);

      LpStatus st = master->solve(0, remaining());
      ++out.iterations;
      if (opts_.trace)
        *opts_.trace << "[hsb] round " << round << " lp status="
                     << static_cast<int>(st) << " pivots="
                     << (finished_pivots + master->pivots()) << " obj="
                     << scalar_traits<T>::to_double(master->objective())
                     << " pool=" << pool_.size() << " t="
                     << elapsed() << "s\n";
      if (st == LpStatus::kIterationLimit || st == LpStatus::kDeadline)
        return bracket(out, master.get(), finished_pivots);
      if (st == LpStatus::kNumericalFailure) {
        if (++rebuild_retries > 3)
          throw SolverError("master kept failing numerically after rebuilds");
        /* A fresh salt reshuffles the perturbation streams, so the retry
           explores a different vertex of the degenerate optimal face. */
        lp_salt_ += 0x9e3779b9u;
        finished_pivots += master->pivots();
        master.reset();
        continue;
      }

      if (master->box_active()) {
        if (++box_doublings > 62)
          throw SolverError("box penalty kept growing without becoming inactive");
        if (opts_.trace)
          *opts_.trace << "[hsb] round " << round << " box active, doubling cost\n";
        box_cost_ = box_cost_ * T(2);
        finished_pivots += master->pivots();
        master.reset();
        continue;
      }

      Matrix<T> x = master->dual_matrix();
      auto active = master->active_rectangles();

      /* Orbit mode: the master prices whole rectangle orbits against one
         representative cell per cell orbit.  Spreading the representative's
         multiplier evenly over its orbit recovers a separating matrix whose
         inner product with any member rectangle equals the orbit column's
         price, so the usual oracle separates the reduced dual exactly. */
      if (sym_) {
        Matrix<T> lifted(m, n);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j) {
            int rep = cell_rep_[flat(i, j)];
            lifted(i, j) = x(rep / n, rep % n) / T(orbit_size_[rep]);
          }
        x = std::move(lifted);
      }

      /* Unpin every cell outside F that an active rectangle covers; the
         rebuilt master then forbids that overhang.  Support-confined seeds
         and the pinned-cell penalty below keep this a dead path in normal
         runs; it remains as a safeguard. */
      std::vector<int> newly_freed;
      auto free_cell = [&](int i, int j) {
        if (free_[flat(i, j)]) return;
        free_[flat(i, j)] = 1;
        newly_freed.push_back(flat(i, j));
        add_pool(Rectangle({i}, {j}, m, n));
      };
      for (const auto& [pid, w] : active) {
        if (sym_) {
          for (const Rectangle& mem : members_[pid])
            for (int i : mem.row_set)
              for (int j : mem.col_set) free_cell(i, j);
        } else {
          for (int i : pool_[pid].row_set)
            for (int j : pool_[pid].col_set) free_cell(i, j);
        }
      }
      if (!newly_freed.empty()) {
        if (opts_.trace)
          *opts_.trace << "[hsb] round " << round << " freed "
                       << newly_freed.size() << " cells, rebuilding\n";
        finished_pivots += master->pivots();
        master.reset();
        continue;
      }

      /* Overhang-free: the active set is a genuine decomposition of S (each
         orbit column standing for all its members at the same weight), and
         its weight sum is the upper bound it certifies. */
      T active_sum(0);
      for (const auto& [pid, w] : active)
        active_sum += sym_ ? w * T(static_cast<int>(members_[pid].size())) : w;
      T cur_upper = active_sum / norm_;
      if (cur_upper < best_upper_) {
        best_upper_ = cur_upper;
        best_dual_.clear();
        for (const auto& [pid, w] : active) {
          if (sym_)
            for (const Rectangle& mem : members_[pid]) best_dual_.push_back({mem, w});
          else
            best_dual_.push_back({pool_[pid], w});
        }
      }

      /* Pinned cells carry zero in S; push them low enough that no
         rectangle through them can ever look profitable to the oracle.
         Cuts then stay support-confined, and the lower bound can only
         improve since <S, X> is untouched. */
      T x_absmax(0);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) {
          T a = num_abs(x(i, j));
          if (a > x_absmax) x_absmax = a;
        }
      const T pin_value = T(0) - (T(1) + x_absmax) * T(m) * T(n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j)
          if (!free_[flat(i, j)]) x(i, j) = pin_value;

      Matrix<T> x_vertex{1, 1};
      if constexpr (!scalar_traits<T>::is_exact) x_vertex = x;

      if (expired()) return bracket(out, master.get(), finished_pivots);

      /* Certification bar, shared by the cut heuristics and the oracle. */
      const T term_bar = scalar_traits<T>::is_exact ? T(1) : T(1) + T(opts_.rel_tol);
      auto certify = [&](const Matrix<T>& point, std::uint64_t salt) {
        RhoOptions xopts;
        xopts.seed = opts_.seed + static_cast<std::uint64_t>(round) * 104729u + salt;
        xopts.heuristic_restarts = opts_.heuristic_restarts;
        xopts.time_limit_sec = remaining();
        RhoResult<T> sep;
        if constexpr (scalar_traits<T>::is_exact) {
          sep = rho_enumerate(point);
        } else {
          /* Stop at the first rectangle past the bar: a cut is a cut, only
             clears need the full optimality proof. */
          T cert_floor = T(1) + T(opts_.rel_tol) / T(2);
          sep = rho_exact(point, xopts, std::optional<T>(cert_floor),
                          std::optional<T>(term_bar));
        }
        ++out.exact_oracle_calls;
        out.oracle_nodes += sep.nodes;
        if (opts_.trace)
          *opts_.trace << "[hsb] round " << round << " exact sep="
                       << scalar_traits<T>::to_double(sep.value) << " upper="
                       << scalar_traits<T>::to_double(sep.upper) << " nodes="
                       << sep.nodes << (sep.complete ? "" : " (incomplete)")
                       << (salt ? " (vertex)" : "") << "\n";
        T rho_up = tmax(sep.upper, T(1));
        T inner = frobenius_inner(s_, point);
        if (inner > T(0)) {
          T cand = inner / (norm_ * rho_up);
          if (cand > best_lower_) {
            best_lower_ = cand;
            best_x_ = point;
          }
        }
        return std::make_tuple(std::move(sep), rho_up, inner);
      };
      auto converged = [&](Matrix<T>&& point, const T& inner, const T& rho_up) {
        /* rho_up certifies the lower bound; the active set is a valid
           decomposition certifying the upper bound. */
        out.status = HsbStatus::kConverged;
        out.lower = inner / (norm_ * rho_up);
        out.upper = best_upper_;
        if (out.lower > out.upper) out.lower = out.upper;
        out.value = out.lower;
        out.gap = out.upper - out.lower;
        out.primal_x = std::move(point);
        out.dual = best_dual_;
        out.lp_pivots = finished_pivots + master->pivots();
        out.wall_seconds = elapsed();
        return out;
      };

      if constexpr (!scalar_traits<T>::is_exact) {
        /* Certified bounds meeting beats waiting for the dual itself to
           pass the oracle: the pool decomposition already certifies the
           upper bound, and any point the oracle clears certifies a lower
           bound.  Close the bracket and the value is settled. */
        auto converged_pair = [&]() {
          out.status = HsbStatus::kConverged;
          out.lower = best_lower_;
          out.upper = best_upper_;
          if (out.lower > out.upper) out.lower = out.upper;
          out.value = out.lower;
          out.gap = out.upper - out.lower;
          out.primal_x = best_x_;
          out.dual = best_dual_;
          out.lp_pivots = finished_pivots + master->pivots();
          out.wall_seconds = elapsed();
          return out;
        };
        auto tight = [&]() {
          return best_upper_ - best_lower_ <=
                 T(opts_.rel_tol) * (T(1) + num_abs(best_upper_));
        };
        if (tight()) return converged_pair();

        /* Cheap cuts: fixed points of alternating maximization at the
           vertex.  Each is violated there, so each fresh one moves the
           master. */
        T vertex_viol(0);
        int vertex_added = 0;
        {
          std::vector<std::pair<T, Rectangle>> harvest;
          RhoOptions hopts;
          hopts.heuristic_restarts = opts_.heuristic_restarts;
          hopts.seed = opts_.seed + static_cast<std::uint64_t>(round) * 7919u;
          rho_heuristic(x_vertex, hopts, &harvest);
          std::stable_sort(harvest.begin(), harvest.end(),
                           [](const auto& a, const auto& b) { return a.first > b.first; });
          if (!harvest.empty()) vertex_viol = harvest[0].first;
          int budget = opts_.max_cuts_per_round;
          for (const auto& [v, rect] : harvest) {
            if (!(v > term_bar)) break;
            if (budget-- <= 0) break;
            if (add_pool(rect)) ++vertex_added;
          }
        }

        /* Bisect the segment from the certified inner point (the origin
           until one exists) toward the vertex, separating each probe
           exactly.  A probe the oracle clears becomes the new inner point
           and lifts the lower bound; a probe it cuts yields a rectangle
           that also cuts the vertex, since the inner endpoint satisfies
           every rectangle.  The round therefore always makes certified
           progress on one side of the bracket or the other, while optimal
           faces full of alternative duals slow a plain vertex chase to a
           crawl.  The final cut sits just past the feasibility crossing:
           as deep as this segment offers. */
        int walk_certified = 0;
        int walk_cuts = 0;
        {
          Matrix<T> blend(m, n);
          T t_lo(0), t_hi(1);
          for (int step = 0; step < 7; ++step) {
            if (expired()) return bracket(out, master.get(), finished_pivots);
            const T t = (t_lo + t_hi) / T(2);
            for (int i = 0; i < m; ++i)
              for (int j = 0; j < n; ++j) {
                const T base = inner_set_ ? x_inner_(i, j) : T(0);
                blend(i, j) = base + t * (x_vertex(i, j) - base);
              }
            auto [sep, rho_up, inner] = certify(blend, 977u + step);
            if (sep.value > term_bar) {
              t_hi = t;
              if (add_pool(sep.witness)) ++walk_cuts;
            } else if (!sep.complete) {
              return bracket(out, master.get(), finished_pivots);
            } else {
              t_lo = t;
              x_inner_ = blend;
              if (rho_up > T(1))
                for (int i = 0; i < m; ++i)
                  for (int j = 0; j < n; ++j)
                    x_inner_(i, j) = x_inner_(i, j) / rho_up;
              inner_set_ = true;
              ++walk_certified;
              if (tight()) return converged_pair();
            }
          }
        }
        if (opts_.trace && vertex_added + walk_certified + walk_cuts > 0)
          *opts_.trace << "[hsb] round " << round << " cuts="
                       << vertex_added << "+" << walk_cuts
                       << " vviol=" << vertex_viol
                       << " walk=" << walk_certified
                       << " lower=" << scalar_traits<T>::to_double(best_lower_)
                       << " upper=" << scalar_traits<T>::to_double(best_upper_)
                       << "\n";
        if (vertex_added > 0 || walk_cuts > 0) {
          duplicate_cuts = 0;
          ++out.cut_rounds;
          continue;
        }
      }

      /* Separate the vertex itself.  Every pooled rectangle prices
         nonnegative at the optimum, so a rectangle the vertex violates is
         always new to the pool and the master keeps moving. */
      Matrix<T>* vtx = &x;
      std::uint64_t vsalt = 0;
      if constexpr (!scalar_traits<T>::is_exact) {
        vtx = &x_vertex;
        vsalt = 1;
      }
      auto [sep, rho_up, inner] = certify(*vtx, vsalt);
      if (!(sep.value > term_bar)) {
        if (!sep.complete) return bracket(out, master.get(), finished_pivots);
        return converged(std::move(*vtx), inner, rho_up);
      }

      if (add_pool(sep.witness)) {
        duplicate_cuts = 0;
        ++out.cut_rounds;
        continue;
      }

      /* The oracle found a violated rectangle the master already owns:
         the claimed optimum was stale.  Rebuild once from scratch. */
      if (++duplicate_cuts > 2)
        throw SolverError("separation kept returning rectangles already priced");
      finished_pivots += master->pivots();
      master.reset();
      continue;
    }
  }

 private:
  int flat(int i, int j) const { return i * s_.cols() + j; }

  double elapsed() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

  bool expired() const {
    return opts_.time_limit_sec > 0 && elapsed() >= opts_.time_limit_sec;
  }

  double remaining() const {
    if (opts_.time_limit_sec <= 0) return 0;
    double rem = opts_.time_limit_sec - elapsed();
    return rem > 0.001 ? rem : 0.001;
  }

  bool add_pool(const Rectangle& r) {
    if (!sym_) {
      auto [it, inserted] = pool_index_.try_emplace(r, static_cast<int>(pool_.size()));
      if (inserted) pool_.push_back(r);
      return inserted;
    }
    /* Close the rectangle's orbit under the generators; the smallest member
       keys the pool, so symmetric copies collapse onto one column. */
    std::set<Rectangle> closed{r};
    std::vector<Rectangle> frontier{r};
    while (!frontier.empty()) {
      Rectangle cur = std::move(frontier.back());
      frontier.pop_back();
      for (const Symmetry& g : opts_.symmetries) {
        Rectangle img = permuted(cur, g);
        if (closed.insert(img).second) frontier.push_back(img);
      }
      if (closed.size() > 100000)
        throw SolverError("rectangle orbit exceeded the safety cap");
    }
    auto [it, inserted] =
        pool_index_.try_emplace(*closed.begin(), static_cast<int>(pool_.size()));
    if (!inserted) return false;
    pool_.push_back(*closed.begin());
    members_.emplace_back(closed.begin(), closed.end());
    /* Column entries: one unit per member through each representative cell. */
    std::vector<int> cells;
    for (const Rectangle& mem : members_.back())
      for (int i : mem.row_set)
        for (int j : mem.col_set) {
          int c = flat(i, j);
          if (cell_rep_[c] == c) cells.push_back(c);
        }
    pool_cols_.push_back(std::move(cells));
    return true;
  }

  void build_initial_pool() {
    /* Every seed stays inside the support: a rectangle that touches a zero
       cell is forced to weight zero by the zero-cell equalities, and its
       overhang would trigger master rebuilds for nothing. */
    const int m = s_.rows(), n = s_.cols();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (s_(i, j) != T(0)) add_pool(Rectangle({i}, {j}, m, n));
    for (int i = 0; i < m; ++i) {
      std::vector<int> cols;
      for (int j = 0; j < n; ++j)
        if (s_(i, j) != T(0)) cols.push_back(j);
      if (cols.size() > 1) add_pool(Rectangle({i}, std::move(cols), m, n));
    }
    for (int j = 0; j < n; ++j) {
      std::vector<int> rows;
      for (int i = 0; i < m; ++i)
        if (s_(i, j) != T(0)) rows.push_back(i);
      if (rows.size() > 1) add_pool(Rectangle(std::move(rows), {j}, m, n));
    }

    /* When the support itself is a rectangle, it makes a strong seed. */
    std::vector<int> srows, scols;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (s_(i, j) != T(0)) {
          if (srows.empty() || srows.back() != i) srows.push_back(i);
          break;
        }
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < m; ++i)
        if (s_(i, j) != T(0)) {
          scols.push_back(j);
          break;
        }
    if (!srows.empty()) {
      std::size_t cells = 0;
      for (int i : srows)
        for (int j : scols) cells += (s_(i, j) != T(0)) ? 1u : 0u;
      if (cells == srows.size() * scols.size())
        add_pool(Rectangle(srows, scols, m, n));
    }

    /* Caller-supplied seeds, trimmed to the support: a cell outside it
       would pin the rectangle's weight to zero anyway, and the overhang
       would cost a master rebuild. */
    for (const Rectangle& r : opts_.seed_pool) {
      std::vector<int> rows, cols;
      for (int i : r.row_set) {
        bool any = false;
        for (int j : r.col_set) any = any || s_(i, j) != T(0);
        if (any) rows.push_back(i);
      }
      for (int j : r.col_set) {
        bool any = false;
        for (int i : r.row_set) any = any || s_(i, j) != T(0);
        if (any) cols.push_back(j);
      }
      if (rows.empty() || cols.empty()) continue;
      std::size_t covered = 0;
      for (int i : rows)
        for (int j : cols) covered += (s_(i, j) != T(0)) ? 1u : 0u;
      if (covered == rows.size() * cols.size())
        add_pool(Rectangle(std::move(rows), std::move(cols), m, n));
    }

    /* Maximal support rectangles are the natural candidates for binding
       constraints at the optimum; front-loading them saves most of the
       pricing rounds on structured instances. */
    bool closure_complete = true;
    if (opts_.seed_rectangles > 0) {
      auto maximal = detail::maximal_support_rectangles(
          s_, opts_.seed_rectangles, &closure_complete);
      for (const Rectangle& r : maximal)
        if (r.row_set.size() * r.col_set.size() > 1) add_pool(r);
    }
  }

  std::unique_ptr<RectangleMaster<T>> build_master() {
    std::vector<int> cells;
    for (int c = 0; c < static_cast<int>(free_.size()); ++c)
      if (free_[c] && (!sym_ || cell_rep_[c] == c)) cells.push_back(c);
    auto master = std::make_unique<RectangleMaster<T>>(s_, cells, box_cost_);
    master->trace = opts_.trace;
    master->set_perturb_salt(lp_salt_);
    for (std::size_t k = 0; k < pool_.size(); ++k) add_master_column(*master, k);
    return master;
  }

  void add_master_column(RectangleMaster<T>& master, std::size_t k) {
    if (sym_)
      master.add_column(static_cast<int>(k), pool_cols_[k],
                        T(static_cast<int>(members_[k].size())));
    else
      master.add_rectangle(static_cast<int>(k), pool_[k]);
  }

  /* Orbits of cells under the generators, each represented by its smallest
     flat index (the ascending sweep reaches that cell first). */
  void compute_cell_orbits() {
    const int n = s_.cols();
    const int total = s_.rows() * n;
    cell_rep_.assign(total, -1);
    orbit_size_.assign(total, 0);
    std::vector<int> stack, orbit;
    for (int c0 = 0; c0 < total; ++c0) {
      if (cell_rep_[c0] != -1) continue;
      orbit.clear();
      stack.assign(1, c0);
      cell_rep_[c0] = c0;
      while (!stack.empty()) {
        int c = stack.back();
        stack.pop_back();
        orbit.push_back(c);
        for (const Symmetry& g : opts_.symmetries) {
          int img = g.row_perm[c / n] * n + g.col_perm[c % n];
          if (cell_rep_[img] == -1) {
            cell_rep_[img] = c0;
            stack.push_back(img);
          }
        }
      }
      for (int c : orbit) orbit_size_[c] = static_cast<int>(orbit.size());
    }
  }

  HsbResult<T> bracket(HsbResult<T>& out, RectangleMaster<T>* master,
                       std::uint64_t finished_pivots) {
    out.status = HsbStatus::kTimeLimit;
    out.lower = best_lower_;
    out.upper = best_upper_;
    if (out.lower > out.upper) out.lower = out.upper;
    out.value = out.lower;
    out.gap = out.upper - out.lower;
    if (best_x_.rows() > 0) out.primal_x = best_x_;
    out.dual = best_dual_;
    out.lp_pivots = finished_pivots + (master ? master->pivots() : 0);
    out.wall_seconds = elapsed();
    return out;
  }

  const Matrix<T>& s_;
  HsbOptions opts_;
  std::chrono::steady_clock::time_point start_;

  T norm_{};
  T box_cost_{};
  std::uint64_t lp_salt_ = 0;
  std::vector<Rectangle> pool_;
  std::map<Rectangle, int> pool_index_;
  std::size_t master_pool_size_ = 0;
  std::vector<char> free_;

  bool sym_ = false;
  std::vector<int> cell_rep_;    // flat cell -> smallest cell in its orbit
  std::vector<int> orbit_size_;  // flat cell -> orbit cardinality
  std::vector<std::vector<Rectangle>> members_;  // pool id -> orbit members
  std::vector<std::vector<int>> pool_cols_;      // pool id -> rep cells, with multiplicity

  T best_lower_{};
  T best_upper_{};
  Matrix<T> best_x_;
  std::vector<DualTerm<T>> best_dual_;
  Matrix<T> x_inner_{1, 1};
  bool inner_set_ = false;
};

}  // namespace detail

/* Certified two-sided bound on the rectangle decomposition number of a
   nonnegative matrix, by cutting planes on the separating-matrix side run
   as column generation on the decomposition side. */
template <class T>
HsbResult<T> compute_hsb(const Matrix<T>& s, const HsbOptions& opts = {}) {
  return detail::HsbEngine<T>(s, opts).run();
}

/* One-shot restricted problem over a fixed pool with every cell unpinned.
   Feasibility requires the pool to cover all nonzero cells with singletons;
   pass include_singletons = true to have them added. */
template <class T>
struct RestrictedLpSolution {
  LpStatus status;
  T objective{};
  Matrix<T> duals;
  std::vector<std::pair<Rectangle, T>> weights;
};

template <class T>
RestrictedLpSolution<T> solve_restricted_lp(const Matrix<T>& s,
                                            std::vector<Rectangle> pool,
                                            bool include_singletons = true) {
  const int m = s.rows(), n = s.cols();
  if (include_singletons)
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) pool.push_back(Rectangle({i}, {j}, m, n));
  std::vector<int> cells(static_cast<std::size_t>(m) * n);
  for (int c = 0; c < static_cast<int>(cells.size()); ++c) cells[c] = c;
  T sum = entry_sum(s);
  T norm = max_abs_entry(s);
  if (norm == T(0)) throw ZeroMatrixError("zero matrix");
  T ratio = sum / norm;
  T box = T(m) * T(n) * detail::tmax(T(1), ratio);

  RectangleMaster<T> master(s, cells, box);
  for (std::size_t k = 0; k < pool.size(); ++k)
    master.add_rectangle(static_cast<int>(k), pool[k]);
  RestrictedLpSolution<T> out;
  out.status = master.solve();
  out.objective = master.objective();
  out.duals = master.dual_matrix();
  for (const auto& [pid, w] : master.active_rectangles())
    out.weights.emplace_back(pool[pid], w);
  return out;
}

}  // namespace hsblab

#endif
