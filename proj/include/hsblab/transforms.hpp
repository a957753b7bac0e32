#ifndef HSBLAB_TRANSFORMS_HPP
#define HSBLAB_TRANSFORMS_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include "hsblab/hsb.hpp"
#include "hsblab/matrix.hpp"
#include "hsblab/scalar.hpp"

namespace hsblab {

/* Positive diagonal pair (d1 on the left, d2 on the right). */
template <typename T>
struct DiagonalScaling {
  std::vector<T> d1;
  std::vector<T> d2;
};

namespace detail {

template <typename T>
void check_diagonal(const std::vector<T>& d, const char* side, int want) {
  if (static_cast<int>(d.size()) != want)
    throw std::invalid_argument(std::string(side) + " diagonal has the wrong length");
  for (const auto& v : d)
    if (!(v > T(0)))
      throw std::invalid_argument(std::string(side) + " diagonal must be strictly positive");
}

template <typename T>
T diag_norm(const std::vector<T>& d) {
  T best = d.front();
  for (const auto& v : d)
    if (v > best) best = v;
  return best;
}

template <typename T>
T diag_inverse_norm(const std::vector<T>& d) {
  T low = d.front();
  for (const auto& v : d)
    if (v < low) low = v;
  return T(1) / low;
}

}  // namespace detail

template <typename T>
Matrix<T> apply_scaling(const Matrix<T>& s, const std::vector<T>& d1,
                        const std::vector<T>& d2) {
  detail::check_diagonal(d1, "left", s.rows());
  detail::check_diagonal(d2, "right", s.cols());
  Matrix<T> out(s.rows(), s.cols());
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j) out(i, j) = d1[i] * s(i, j) * d2[j];
  return out;
}

template <typename T>
Matrix<T> apply_scaling(const Matrix<T>& s, const DiagonalScaling<T>& d) {
  return apply_scaling(s, d.d1, d.d2);
}

/* Two-sided bracket for the bound of the scaled matrix in terms of the
 * original one:
 *   base * |S| / (|D1^-1| |D1 S D2| |D2^-1|)  <=  value of D1 S D2
 *   value of D1 S D2  <=  base * |D1| |S| |D2| / |D1 S D2|
 * where base is the value computed for S and |.| is the max-abs norm. */
template <typename T>
std::pair<T, T> scaling_sandwich(const Matrix<T>& s, const std::vector<T>& d1,
                                 const std::vector<T>& d2, const T& base) {
  detail::check_diagonal(d1, "left", s.rows());
  detail::check_diagonal(d2, "right", s.cols());
  if (s.is_zero()) throw ZeroMatrixError("scaling_sandwich: zero matrix");
  Matrix<T> scaled = apply_scaling(s, d1, d2);
  T norm_s = max_abs_entry(s);
  T norm_scaled = max_abs_entry(scaled);
  T lower = base * norm_s /
            (detail::diag_inverse_norm(d1) * norm_scaled * detail::diag_inverse_norm(d2));
  T upper = base * detail::diag_norm(d1) * norm_s * detail::diag_norm(d2) / norm_scaled;
  return {lower, upper};
}

template <typename T>
std::pair<T, T> scaling_sandwich(const Matrix<T>& s, const std::vector<T>& d1,
                                 const std::vector<T>& d2,
                                 const HsbOptions& opts = {}) {
  T base = compute_hsb(s, opts).value;
  return scaling_sandwich(s, d1, d2, base);
}

namespace detail {

template <typename T>
T line_norm(const Matrix<T>& s, int idx, bool row) {
  T best(0);
  int len = row ? s.cols() : s.rows();
  for (int k = 0; k < len; ++k) {
    T v = num_abs(row ? s(idx, k) : s(k, idx));
    if (v > best) best = v;
  }
  return best;
}

}  // namespace detail

/* Divide every nonzero row by its max-abs entry; zero rows pass through. */
template <typename T>
Matrix<T> normalize_rows(const Matrix<T>& s) {
  Matrix<T> out = s;
  for (int i = 0; i < s.rows(); ++i) {
    T norm = detail::line_norm(s, i, true);
    if (norm == T(0)) continue;
    for (int j = 0; j < s.cols(); ++j) out(i, j) = s(i, j) / norm;
  }
  return out;
}

template <typename T>
Matrix<T> normalize_cols(const Matrix<T>& s) {
  Matrix<T> out = s;
  for (int j = 0; j < s.cols(); ++j) {
    T norm = detail::line_norm(s, j, false);
    if (norm == T(0)) continue;
    for (int i = 0; i < s.rows(); ++i) out(i, j) = s(i, j) / norm;
  }
  return out;
}

template <typename T>
Matrix<T> normalize_rows_then_cols(const Matrix<T>& s, bool rows_first = true) {
  return rows_first ? normalize_cols(normalize_rows(s))
                    : normalize_rows(normalize_cols(s));
}

/* What to do when the combination row would grow the matrix norm. */
enum class RowPolicy {
  kReject,   // refuse the append
  kRescale,  // shrink w until the new row's norm matches the matrix norm
  kRaw,      // append anyway; the bracket is then marked invalid
};

/* Result of appending the combination row wS. When bracket_valid is set,
 * the bound of the extended matrix lies between factor_low and factor_high
 * times the bound of the input; the bracket needs the appended row's norm
 * to stay within the matrix norm, so kRaw appends that grow the norm clear
 * the flag. When rescaling fires, the stored weights are the shrunk ones. */
template <typename T>
struct RedundantRowReport {
  Matrix<T> mat;
  std::vector<T> weights;
  T factor_low;
  T factor_high;
  bool bracket_valid = true;
  bool rescaled = false;
};

template <typename T>
RedundantRowReport<T> add_redundant_row(const Matrix<T>& s, std::vector<T> w,
                                        RowPolicy policy = RowPolicy::kReject) {
  if (static_cast<int>(w.size()) != s.rows())
    throw std::invalid_argument("add_redundant_row: weight length mismatch");
  for (const auto& v : w)
    if (v < T(0)) throw std::invalid_argument("add_redundant_row: negative weight");
  if (s.is_zero()) throw ZeroMatrixError("add_redundant_row: zero matrix");

  auto combo_row = [&](const std::vector<T>& weights) {
    std::vector<T> row(static_cast<std::size_t>(s.cols()), T(0));
    for (int i = 0; i < s.rows(); ++i) {
      if (weights[static_cast<std::size_t>(i)] == T(0)) continue;
      for (int j = 0; j < s.cols(); ++j)
        row[static_cast<std::size_t>(j)] += weights[static_cast<std::size_t>(i)] * s(i, j);
    }
    return row;
  };

  RedundantRowReport<T> rep;
  std::vector<T> row = combo_row(w);
  T norm_s = max_abs_entry(s);
  T norm_row(0);
  for (const auto& v : row)
    if (num_abs(v) > norm_row) norm_row = num_abs(v);
  if (norm_row > norm_s) {
    switch (policy) {
      case RowPolicy::kReject:
        throw std::invalid_argument(
            "add_redundant_row: combination row dominates the matrix norm; "
            "rescale it or append it raw");
      case RowPolicy::kRescale: {
        T shrink = norm_s / norm_row;
        for (auto& v : w) v = v * shrink;
        row = combo_row(w);
        rep.rescaled = true;
        break;
      }
      case RowPolicy::kRaw:
        rep.bracket_valid = false;
        break;
    }
  }

  Matrix<T> out(s.rows() + 1, s.cols());
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j) out(i, j) = s(i, j);
  for (int j = 0; j < s.cols(); ++j) out(s.rows(), j) = row[static_cast<std::size_t>(j)];

  T w1(0);
  for (const auto& v : w) w1 += v;
  rep.mat = std::move(out);
  rep.weights = std::move(w);
  rep.factor_low = T(1);
  rep.factor_high = w1 > T(1) ? w1 : T(1);
  return rep;
}

}  // namespace hsblab

#endif
