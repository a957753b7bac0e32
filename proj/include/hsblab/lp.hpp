#ifndef HSBLAB_LP_HPP
#define HSBLAB_LP_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hsblab/matrix.hpp"
#include "hsblab/scalar.hpp"

namespace hsblab {

enum class LpStatus { kOptimal, kIterationLimit, kDeadline, kNumericalFailure };

/* Restricted master problem over a pool of rectangles, kept in the
   nonnegative-combination form

       min  sum_R y_R  +  M * sum_g mu_g
       s.t. sum_R y_R * chi(R)|_F  -  mu  =  S|_F,     y, mu >= 0,

   where F is the current set of unpinned cells.  The row duals at the
   optimum are the entries of the separating matrix X on F; the mu columns
   realize the lower box X >= -M (the upper box X <= 1 comes from the
   singleton rectangles, which the caller must include in the pool).

   Solved by revised simplex with a product-form basis inverse: the basis
   stays close to the all-singleton identity, so an eta chain with periodic
   refactorization keeps each pivot near-linear in the row count instead of
   quadratic.  The all-singleton basis is feasible from the start (S is
   nonnegative), so no phase one is needed.  Dantzig pricing with a Bland
   fallback after a run of degenerate pivots keeps the exact mode
   cycle-free. */
template <class T>
class RectangleMaster {
 public:
  RectangleMaster(const Matrix<T>& s, const std::vector<int>& free_cells, T box_cost)
      : ambient_rows_(s.rows()), ambient_cols_(s.cols()),
        cell_row_(static_cast<std::size_t>(s.rows()) * s.cols(), -1) {
    m_ = static_cast<int>(free_cells.size());
    if (m_ == 0) throw std::invalid_argument("master needs at least one free cell");
    cells_ = free_cells;
    b_.resize(m_);
    for (int r = 0; r < m_; ++r) {
      int cell = free_cells[r];
      if (cell < 0 || cell >= static_cast<int>(cell_row_.size()))
        throw std::invalid_argument("free cell outside ambient shape");
      if (cell_row_[cell] != -1)
        throw std::invalid_argument("duplicate free cell");
      cell_row_[cell] = r;
      b_[r] = s(cell / ambient_cols_, cell % ambient_cols_);
      if (b_[r] < T(0))
        throw std::invalid_argument("master requires a nonnegative matrix");
    }
    for (int r = 0; r < m_; ++r) {
      Column col;
      col.rows = {r};
      col.negated = true;
      col.cost = box_cost;
      col.pool_id = -1;
      cols_.push_back(std::move(col));
    }
  }

  /* Returns true when the rectangle touches at least one free cell and was
     materialized as a column. */
  bool add_rectangle(int pool_id, const Rectangle& rect) {
    if (rect.ambient_rows != ambient_rows_ || rect.ambient_cols != ambient_cols_)
      throw std::invalid_argument("rectangle ambient shape mismatch");
    Column col;
    for (int i : rect.row_set)
      for (int j : rect.col_set) {
        int r = cell_row_[static_cast<std::size_t>(i) * ambient_cols_ + j];
        if (r >= 0) col.rows.push_back(r);
      }
    if (col.rows.empty()) return false;
    col.cost = T(1);
    col.price_weight = column_price_weight(col.rows.size());
    col.negated = false;
    col.pool_id = pool_id;
    cols_.push_back(std::move(col));
    if (!basis_.empty()) in_basis_.push_back(false);
    return true;
  }

  /* General nonnegative integer column: one unit per listed ambient cell,
     repeats raising the coefficient, at an arbitrary positive cost.  Used
     by symmetry-reduced masters whose variables aggregate many rectangles. */
  bool add_column(int pool_id, const std::vector<int>& flat_cells, T cost) {
    Column col;
    for (int cell : flat_cells) {
      if (cell < 0 || cell >= static_cast<int>(cell_row_.size()))
        throw std::invalid_argument("column cell outside ambient shape");
      int r = cell_row_[cell];
      if (r >= 0) col.rows.push_back(r);
    }
    if (col.rows.empty()) return false;
    if (!(cost > T(0))) throw std::invalid_argument("column cost must be positive");
    col.cost = cost;
    col.price_weight = column_price_weight(col.rows.size());
    col.negated = false;
    col.pool_id = pool_id;
    cols_.push_back(std::move(col));
    if (!basis_.empty()) in_basis_.push_back(false);
    return true;
  }

  /* time_budget_sec == 0 means no deadline. */
  LpStatus solve(std::uint64_t max_pivots = 0, double time_budget_sec = 0) {
    if (max_pivots == 0) max_pivots = 200000 + 2000ull * m_;
    /* Slack matrices repeat entries heavily, so the master sits on hugely
       degenerate vertices where the simplex stalls.  Jitter both sides:
       the rhs so every ratio test makes strictly positive progress, and
       the (all-equal) costs so pricing ties break generically.  The true
       data comes back before any answer is read off. */
    if constexpr (!scalar_traits<T>::is_exact) {
      if (!perturbed_) perturb_costs();
      if (!rhs_perturbed_) perturb_rhs();
    }
    const bool fresh = basis_.empty();
    if (fresh) init_basis();
    else refresh();  // heal any drift before pricing against the duals
    auto done = [&](LpStatus st) {
      if (perturbed_ || rhs_perturbed_) {
        if (perturbed_) restore_costs();
        if (rhs_perturbed_) {
          b_ = b_true_;
          rhs_perturbed_ = false;
        }
        refresh();
      }
      return st;
    };
    auto deadline = std::chrono::steady_clock::now() +
                    std::chrono::duration<double>(time_budget_sec);

    const T tol = scalar_traits<T>::feas_tol();
    int degenerate_run = 0;
    bool bland = false;
    std::uint64_t window_degen = 0;
    double t_price = 0, t_refill = 0, t_step = 0, t_refac = 0;
    auto lap = [last = std::chrono::steady_clock::now()]() mutable {
      auto now = std::chrono::steady_clock::now();
      double dt = std::chrono::duration<double>(now - last).count();
      last = now;
      return dt;
    };
    cand_.clear();

    if (fresh) {
      if (!crash_pass(tol)) return done(LpStatus::kNumericalFailure);
      if (trace)
        *trace << "[lp] crash done obj=" << scalar_traits<T>::to_double(obj_)
               << " pivots=" << pivots_ << "\n";
    }

    for (std::uint64_t it = 0; it < max_pivots; ++it) {
      if (trace && (it & 8191u) == 8191u) {
        T cx(0), xmin(0);
        int nneg = 0;
        for (int i = 0; i < m_; ++i) {
          cx += cols_[basis_[i]].cost * x_[i];
          if (x_[i] < xmin) xmin = x_[i];
          if (x_[i] < T(0)) ++nneg;
        }
        *trace << "[lp] it=" << it << " obj="
               << scalar_traits<T>::to_double(obj_) << " cx="
               << scalar_traits<T>::to_double(cx) << " xmin="
               << scalar_traits<T>::to_double(xmin) << " nneg=" << nneg
               << " degen_window=" << window_degen << " bland=" << bland
               << " cand=" << cand_.size() << " etas=" << etas_.size()
               << " price=" << t_price << " refill=" << t_refill
               << " step=" << t_step << " refac=" << t_refac << "\n";
        window_degen = 0;
        t_price = t_refill = t_step = t_refac = 0;
      }
      lap();
      int enter = -1;
      T best_rc(0);
      if (bland) {
        for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
          if (in_basis_[j]) continue;
          T rc = reduced_cost(j);
          if (rc < T(0) - tol) {
            enter = j;
            best_rc = rc;
            break;
          }
        }
      } else {
        /* Partial pricing: keep a working set of promising columns and
           rescan the full column list only when it runs dry. */
        T best_score(0);
        for (int pass = 0; pass < 2 && enter == -1; ++pass) {
          std::size_t keep = 0;
          for (std::size_t k = 0; k < cand_.size(); ++k) {
            int j = cand_[k];
            if (in_basis_[j]) continue;
            T rc = reduced_cost(j);
            if (!(rc < T(0) - tol)) continue;
            cand_[keep++] = j;
            T score = rc * cols_[j].price_weight;
            if (enter == -1 || score < best_score) {
              enter = j;
              best_rc = rc;
              best_score = score;
            }
          }
          cand_.resize(keep);
          if (enter == -1 && pass == 0) {
            t_price += lap();
            refill_candidates(tol);
            t_refill += lap();
          }
        }
      }
      t_price += lap();
      if (enter == -1) {
        if (perturbed_) {
          /* Optimal for the jittered costs; restore the real ones and let
             the loop finish the job (usually a handful of pivots).  The
             rhs stays jittered until finish() so cleanup pivots keep
             making strict progress. */
          restore_costs();
          refresh();
          cand_.clear();
          degenerate_run = 0;
          bland = false;
          continue;
        }
        return finish();
      }

      std::vector<T> d = ftran(column_dense(cols_[enter]));

      int leave = -1;
      T theta(0);
      if constexpr (scalar_traits<T>::is_exact) {
        for (int i = 0; i < m_; ++i) {
          if (!(d[i] > tol)) continue;
          T ratio = x_[i] / d[i];
          if (leave == -1 || ratio < theta ||
              (ratio == theta && basis_[i] < basis_[leave])) {
            leave = i;
            theta = ratio;
          }
        }
      } else {
        /* Exact minimum ratio; ties broken by the largest pivot element
           for stability.  A tolerance window here would let the leaving
           row's true value go negative and the leak compounds over many
           pivots, so only exact ties qualify.  Basics that have drifted a
           hair below zero count as zero so theta never goes negative. */
        auto basic_at = [&](int i) { return x_[i] < T(0) ? T(0) : x_[i]; };
        for (int i = 0; i < m_; ++i) {
          if (!(d[i] > tol)) continue;
          T ratio = basic_at(i) / d[i];
          if (leave == -1 || ratio < theta ||
              (ratio == theta && d[i] > d[leave])) {
            leave = i;
            theta = ratio;
          }
        }
      }
      if (leave == -1) return done(LpStatus::kNumericalFailure);

      pivot(enter, leave, d, theta, best_rc);
      ++pivots_;
      t_step += lap();

      if (theta <= tol) {
        ++window_degen;
        if (++degenerate_run >= 192) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }

      /* A rebuilt chain already holds one eta per wide basic column, so
         the trigger counts growth since the rebuild, not absolute size. */
      if (etas_.size() >= etas_base_ + kRefactorInterval) {
        lap();
        if (!refactor_and_refresh()) return done(LpStatus::kNumericalFailure);
        t_refac += lap();
      }
      if (time_budget_sec > 0 && (it & 127u) == 127u &&
          std::chrono::steady_clock::now() >= deadline)
        return done(LpStatus::kDeadline);
    }
    return done(LpStatus::kIterationLimit);
  }

  T objective() const { return obj_; }
  int rows() const { return m_; }
  std::ostream* trace = nullptr;  // progress lines every few thousand pivots
  std::uint64_t pivots() const { return pivots_; }

  /* Shifts every jitter stream; lets a caller rebuild after a numerical
     failure without replaying the exact same perturbations. */
  void set_perturb_salt(std::uint64_t salt) { salt_ = salt; }

  /* Duals as a full ambient matrix; pinned cells are zero. */
  Matrix<T> dual_matrix() const {
    Matrix<T> x(ambient_rows_, ambient_cols_);
    for (int r = 0; r < m_; ++r)
      x(cells_[r] / ambient_cols_, cells_[r] % ambient_cols_) = pi_[r];
    return x;
  }

  std::vector<std::pair<int, T>> active_rectangles() const {
    std::vector<std::pair<int, T>> out;
    const T tol = weight_tol();
    for (int i = 0; i < m_; ++i) {
      const Column& c = cols_[basis_[i]];
      if (c.pool_id >= 0 && x_[i] > tol) out.emplace_back(c.pool_id, x_[i]);
    }
    return out;
  }

  bool box_active() const {
    const T tol = weight_tol();
    for (int i = 0; i < m_; ++i)
      if (cols_[basis_[i]].negated && x_[i] > tol) return true;
    return false;
  }

  /* Worst primal feasibility violation of the current basic solution,
     recomputed from the original column data. */
  T residual() const {
    std::vector<T> lhs(m_, T(0));
    for (int i = 0; i < m_; ++i) {
      const Column& c = cols_[basis_[i]];
      for (int r : c.rows) lhs[r] += c.negated ? T(0) - x_[i] : x_[i];
    }
    T worst(0);
    for (int r = 0; r < m_; ++r) {
      T dv = num_abs(lhs[r] - b_[r]);
      if (dv > worst) worst = dv;
    }
    return worst;
  }

 private:
  struct Column {
    std::vector<int> rows;  // master row indices the column covers
    T cost{};
    T price_weight{1};      // ~1/||column||, steers pricing toward steep edges
    bool negated = false;   // box columns carry -1 entries
    int pool_id = -1;       // caller's rectangle id, -1 for box columns
  };

  static T column_price_weight(std::size_t nrows) {
    if constexpr (scalar_traits<T>::is_exact) return T(1);
    else return T(1) / std::sqrt(static_cast<T>(nrows));
  }

  /* One elementary transformation: basis inverse column `row` replaced.
     Stored sparse; master rows run into the thousands and the transformed
     columns keep most entries at exact zero. */
  struct Eta {
    int row;
    T diag;
    std::vector<std::pair<int, T>> off;
  };

  static constexpr int kRefactorInterval = 96;

  T weight_tol() const {
    if constexpr (scalar_traits<T>::is_exact) return T(0);
    else return scalar_traits<T>::feas_tol();
  }

  static double jitter01(std::uint64_t j) {
    std::uint64_t z = (j + 1) * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
  }

  void perturb_costs() {
    true_cost_.resize(cols_.size());
    for (std::size_t j = 0; j < cols_.size(); ++j) {
      true_cost_[j] = cols_[j].cost;
      cols_[j].cost *= T(1) + T(1e-5) * (T(1) + T(jitter01(j + salt_)));
    }
    perturbed_ = true;
  }

  void restore_costs() {
    for (std::size_t j = 0; j < cols_.size(); ++j) cols_[j].cost = true_cost_[j];
    perturbed_ = false;
  }

  void perturb_rhs() {
    b_true_ = b_;
    for (int r = 0; r < m_; ++r)
      b_[r] *= T(1) + T(1e-6) * (T(1) + T(jitter01(static_cast<std::uint64_t>(r) + 0x5bd1e995 + salt_)));
    rhs_perturbed_ = true;
  }

  void refill_candidates(const T& tol) {
    constexpr std::size_t kWorkingSet = 512;
    std::vector<std::pair<T, int>> scored;
    for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
      if (in_basis_[j]) continue;
      T rc = reduced_cost(j);
      if (rc < T(0) - tol) scored.emplace_back(rc * cols_[j].price_weight, j);
    }
    if (scored.size() > kWorkingSet) {
      std::nth_element(scored.begin(), scored.begin() + kWorkingSet, scored.end());
      scored.resize(kWorkingSet);
    }
    cand_.clear();
    for (const auto& [rc, j] : scored) cand_.push_back(j);
  }

  std::vector<T> column_dense(const Column& c) const {
    /* Row indices may repeat: each occurrence adds one unit, so a column
       can carry integer coefficients above one. */
    std::vector<T> v(m_, T(0));
    for (int r : c.rows) v[r] += c.negated ? T(-1) : T(1);
    return v;
  }

  std::vector<T> ftran(std::vector<T> v) const {
    for (const Eta& e : etas_) {
      T t = v[e.row];
      if (t == T(0)) continue;
      for (const auto& [i, c] : e.off) v[i] += c * t;
      v[e.row] = e.diag * t;
    }
    return v;
  }

  std::vector<T> btran(std::vector<T> v) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const Eta& e = *it;
      T acc = e.diag * v[e.row];
      for (const auto& [i, c] : e.off) acc += c * v[i];
      v[e.row] = acc;
    }
    return v;
  }

  void append_eta(int row, const std::vector<T>& w) {
    Eta e;
    e.row = row;
    const T d = w[row];
    for (int i = 0; i < m_; ++i)
      if (i != row && !(w[i] == T(0))) e.off.emplace_back(i, T(0) - w[i] / d);
    e.diag = T(1) / d;
    etas_.push_back(std::move(e));
  }

  /* One pass over the wide columns from the identity start, largest first:
     price each and pivot it in when it carries weight.  The ratio test
     hands such a column the minimum residual over its cells, so the pass
     acts out a greedy peeling decomposition and skips most of the
     cold-start grind. */
  bool crash_pass(const T& tol) {
    std::vector<std::pair<std::size_t, int>> order;
    for (int j = 0; j < static_cast<int>(cols_.size()); ++j)
      if (!cols_[j].negated && cols_[j].rows.size() > 1)
        order.emplace_back(cols_[j].rows.size(), j);
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [sz, j] : order) {
      if (in_basis_[j]) continue;
      T rc = reduced_cost(j);
      if (!(rc < T(0) - tol)) continue;
      std::vector<T> d = ftran(column_dense(cols_[j]));
      int leave = -1;
      T theta(0);
      auto basic_at = [&](int i) { return x_[i] < T(0) ? T(0) : x_[i]; };
      for (int i = 0; i < m_; ++i) {
        if (!(d[i] > tol)) continue;
        T ratio = basic_at(i) / d[i];
        if (leave == -1 || ratio < theta ||
            (ratio == theta && d[i] > d[leave])) {
          leave = i;
          theta = ratio;
        }
      }
      if (leave == -1 || !(theta > tol)) continue;  // skip steps that don't move
      pivot(j, leave, d, theta, rc);
      ++pivots_;
      if (etas_.size() >= etas_base_ + kRefactorInterval)
        if (!refactor_and_refresh()) return false;
    }
    return true;
  }

  void init_basis() {
    /* One singleton rectangle per row forms the identity start basis. */
    std::vector<int> owner(m_, -1);
    for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
      const Column& c = cols_[j];
      if (!c.negated && c.pool_id >= 0 && c.rows.size() == 1 && owner[c.rows[0]] == -1)
        owner[c.rows[0]] = j;
    }
    for (int r = 0; r < m_; ++r)
      if (owner[r] == -1)
        throw std::logic_error("pool must contain a singleton for every free cell");

    basis_ = owner;
    in_basis_.assign(cols_.size(), false);
    for (int j : basis_) in_basis_[j] = true;
    etas_.clear();
    x_ = b_;
    pi_.assign(m_, T(0));
    obj_ = T(0);
    for (int r = 0; r < m_; ++r) {
      pi_[r] = cols_[basis_[r]].cost;
      obj_ += x_[r] * cols_[basis_[r]].cost;
    }
  }

  T reduced_cost(int j) const {
    const Column& c = cols_[j];
    T acc(0);
    for (int r : c.rows) acc += pi_[r];
    if (c.negated) return T(c.cost + acc);
    return T(c.cost - acc);
  }

  void pivot(int enter, int leave, const std::vector<T>& d, const T& theta,
             const T& rc) {
    /* Dual update uses row `leave` of the outgoing basis inverse. */
    std::vector<T> unit(m_, T(0));
    unit[leave] = T(1);
    std::vector<T> leave_row = btran(std::move(unit));
    T step = rc / d[leave];
    for (int r = 0; r < m_; ++r)
      if (!(leave_row[r] == T(0))) pi_[r] += step * leave_row[r];

    for (int i = 0; i < m_; ++i)
      if (i != leave) x_[i] -= theta * d[i];
    x_[leave] = theta;

    obj_ += theta * rc;
    in_basis_[basis_[leave]] = false;
    in_basis_[enter] = true;
    basis_[leave] = enter;
    append_eta(leave, d);
  }

  /* Rebuild the eta chain from the current basis set.  Unit columns
     (singletons and boxes) are eliminated on their own rows first, leaving
     only the rectangle columns to produce nontrivial etas.  May permute the
     row assignment of the basic columns; the basic values, duals, and
     objective are recomputed afterwards.  Returns false on a singular
     basis. */
  bool refactor_and_refresh() {
    std::vector<int> old_basis = basis_;
    std::vector<char> row_done(static_cast<std::size_t>(m_), 0);
    std::vector<int> new_basis(static_cast<std::size_t>(m_), -1);
    std::vector<int> wide;  // basis entries with more than one row

    etas_.clear();
    for (int j : old_basis) {
      const Column& c = cols_[j];
      if (c.rows.size() == 1) {
        int r = c.rows[0];
        if (row_done[static_cast<std::size_t>(r)]) return false;  // duplicate unit column
        row_done[static_cast<std::size_t>(r)] = 1;
        new_basis[static_cast<std::size_t>(r)] = j;
        if (c.negated) {
          /* Sign-flip eta for a box column. */
          Eta e;
          e.row = r;
          e.diag = T(-1);
          etas_.push_back(std::move(e));
        }
      } else {
        wide.push_back(j);
      }
    }
    /* Narrow columns first: their etas stay sparse, and the fill the wide
       ones pick up at the end burdens nobody after them. */
    std::sort(wide.begin(), wide.end(), [&](int a, int b) {
      return cols_[a].rows.size() < cols_[b].rows.size();
    });
    for (int j : wide) {
      std::vector<T> w = ftran(column_dense(cols_[j]));
      int pick = -1;
      if constexpr (scalar_traits<T>::is_exact) {
        for (int r = 0; r < m_; ++r)
          if (!row_done[static_cast<std::size_t>(r)] && !(w[static_cast<std::size_t>(r)] == T(0))) {
            pick = r;
            break;
          }
      } else {
        T best(0);
        for (int r = 0; r < m_; ++r) {
          if (row_done[static_cast<std::size_t>(r)]) continue;
          T mag = num_abs(w[static_cast<std::size_t>(r)]);
          if (pick == -1 || mag > best) {
            pick = r;
            best = mag;
          }
        }
        if (pick != -1 && !(best > scalar_traits<T>::feas_tol())) pick = -1;
      }
      if (pick == -1) return false;
      row_done[static_cast<std::size_t>(pick)] = 1;
      new_basis[static_cast<std::size_t>(pick)] = j;
      append_eta(pick, w);
    }

    basis_ = std::move(new_basis);
    etas_base_ = etas_.size();
    refresh();
    return true;
  }

  /* Recompute basic solution, duals, and objective through the factors. */
  void refresh() {
    x_ = ftran(b_);
    std::vector<T> cb(static_cast<std::size_t>(m_));
    for (int r = 0; r < m_; ++r) cb[static_cast<std::size_t>(r)] = cols_[basis_[r]].cost;
    pi_ = btran(std::move(cb));
    obj_ = T(0);
    for (int i = 0; i < m_; ++i) obj_ += cols_[basis_[i]].cost * x_[i];
  }

  LpStatus finish() {
    if (rhs_perturbed_) {
      b_ = b_true_;
      rhs_perturbed_ = false;
    }
    if (!refactor_and_refresh()) return LpStatus::kNumericalFailure;
    if constexpr (!scalar_traits<T>::is_exact) {
      double scale = 1.0;
      for (int r = 0; r < m_; ++r)
        scale = std::max(scale, scalar_traits<T>::to_double(num_abs(b_[r])));
      /* Dropping the rhs jitter can leave basics that are degenerate at the
         true rhs a hair negative.  Dual steps walk back to feasibility
         without losing optimality; the budget keeps a genuinely sick basis
         failing fast. */
      const T dtol = scalar_traits<T>::feas_tol();
      for (int step = 0; step < 64; ++step) {
        int leave = -1;
        double worst = -1e-7 * scale;
        for (int i = 0; i < m_; ++i) {
          double xi = scalar_traits<T>::to_double(x_[i]);
          if (xi < worst) {
            worst = xi;
            leave = i;
          }
        }
        if (leave == -1) break;
        std::vector<T> unit(m_, T(0));
        unit[leave] = T(1);
        std::vector<T> lrow = btran(std::move(unit));
        int enter = -1;
        T best_ratio(0);
        for (int j = 0; j < static_cast<int>(cols_.size()); ++j) {
          if (in_basis_[j]) continue;
          const Column& c = cols_[j];
          T alpha(0);
          for (int r : c.rows) alpha += lrow[r];
          if (c.negated) alpha = T(0) - alpha;
          if (!(alpha < T(0) - dtol)) continue;
          T ratio = reduced_cost(j) / (T(0) - alpha);
          if (enter == -1 || ratio < best_ratio) {
            enter = j;
            best_ratio = ratio;
          }
        }
        if (enter == -1) return LpStatus::kNumericalFailure;
        std::vector<T> d = ftran(column_dense(cols_[enter]));
        if (!(d[leave] < T(0) - dtol)) return LpStatus::kNumericalFailure;
        T theta = x_[leave] / d[leave];
        pivot(enter, leave, d, theta, reduced_cost(enter));
        ++pivots_;
        if (etas_.size() >= etas_base_ + kRefactorInterval)
          if (!refactor_and_refresh()) return LpStatus::kNumericalFailure;
      }
      for (int i = 0; i < m_; ++i)
        if (scalar_traits<T>::to_double(x_[i]) < -1e-7 * scale)
          return LpStatus::kNumericalFailure;
      if (scalar_traits<T>::to_double(residual()) > 1e-6 * scale)
        return LpStatus::kNumericalFailure;
    } else {
      for (int i = 0; i < m_; ++i)
        if (x_[i] < T(0)) return LpStatus::kNumericalFailure;
      if (residual() != T(0)) return LpStatus::kNumericalFailure;
    }
    return LpStatus::kOptimal;
  }

  int ambient_rows_, ambient_cols_;
  int m_ = 0;
  std::vector<int> cells_;      // master row -> flat ambient cell id
  std::vector<int> cell_row_;   // flat ambient cell id -> master row or -1
  std::vector<T> b_;
  std::vector<Column> cols_;

  std::vector<int> basis_;
  std::vector<bool> in_basis_;
  std::vector<Eta> etas_;
  std::size_t etas_base_ = 0;
  std::vector<int> cand_;  // partial-pricing working set
  std::vector<T> true_cost_;
  bool perturbed_ = false;
  std::vector<T> b_true_;
  bool rhs_perturbed_ = false;
  std::vector<T> x_;
  std::vector<T> pi_;
  T obj_{};
  std::uint64_t pivots_ = 0;
  std::uint64_t salt_ = 0;
};

}  // namespace hsblab

#endif
