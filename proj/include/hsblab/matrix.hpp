#ifndef HSBLAB_MATRIX_HPP
#define HSBLAB_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "hsblab/scalar.hpp"

namespace hsblab {

/* Dense row-major matrix over the active scalar type. */
template <class T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}

  Matrix(int rows, int cols, const T& fill = T(0))
      : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0)
      throw std::invalid_argument("matrix dimensions must be positive");
    data_.assign(static_cast<std::size_t>(rows) * cols, fill);
  }

  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = static_cast<int>(init.size());
    if (rows_ == 0) throw std::invalid_argument("matrix needs at least one row");
    cols_ = static_cast<int>(init.begin()->size());
    if (cols_ == 0) throw std::invalid_argument("matrix needs at least one column");
    data_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& row : init) {
      if (static_cast<int>(row.size()) != cols_)
        throw std::invalid_argument("ragged matrix initializer");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix constant(int rows, int cols, const T& v) {
    return Matrix(rows, cols, v);
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  const T& operator()(int i, int j) const { return data_[idx(i, j)]; }
  T& operator()(int i, int j) { return data_[idx(i, j)]; }

  const T& at(int i, int j) const {
    check(i, j);
    return data_[idx(i, j)];
  }
  T& at(int i, int j) {
    check(i, j);
    return data_[idx(i, j)];
  }

  const std::vector<T>& data() const { return data_; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }
  bool operator!=(const Matrix& o) const { return !(*this == o); }

  bool is_zero() const {
    for (const auto& v : data_)
      if (v != T(0)) return false;
    return true;
  }

  bool is_nonnegative() const {
    for (const auto& v : data_)
      if (v < T(0)) return false;
    return true;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * cols_ + j;
  }
  void check(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
      throw std::out_of_range("matrix index (" + std::to_string(i) + "," +
                              std::to_string(j) + ") out of range");
  }

  int rows_, cols_;
  std::vector<T> data_;
};

/* Combinatorial rectangle: a set of rows times a set of columns inside a
   fixed ambient shape.  Index sets are kept sorted and unique so that equal
   rectangles compare equal and can key a map. */
struct Rectangle {
  std::vector<int> row_set;
  std::vector<int> col_set;
  int ambient_rows = 0;
  int ambient_cols = 0;

  Rectangle() = default;
  Rectangle(std::vector<int> rows, std::vector<int> cols, int m, int n)
      : row_set(std::move(rows)), col_set(std::move(cols)),
        ambient_rows(m), ambient_cols(n) {
    normalize();
    validate();
  }

  void normalize() {
    std::sort(row_set.begin(), row_set.end());
    row_set.erase(std::unique(row_set.begin(), row_set.end()), row_set.end());
    std::sort(col_set.begin(), col_set.end());
    col_set.erase(std::unique(col_set.begin(), col_set.end()), col_set.end());
  }

  void validate() const {
    if (row_set.empty() || col_set.empty())
      throw std::invalid_argument("rectangle must have nonempty row and column sets");
    if (ambient_rows <= 0 || ambient_cols <= 0)
      throw std::invalid_argument("rectangle needs a positive ambient shape");
    if (row_set.front() < 0 || row_set.back() >= ambient_rows ||
        col_set.front() < 0 || col_set.back() >= ambient_cols)
      throw std::invalid_argument("rectangle index outside ambient shape");
  }

  std::size_t cell_count() const { return row_set.size() * col_set.size(); }

  bool contains(int i, int j) const {
    return std::binary_search(row_set.begin(), row_set.end(), i) &&
           std::binary_search(col_set.begin(), col_set.end(), j);
  }

  Rectangle transposed() const {
    Rectangle r;
    r.row_set = col_set;
    r.col_set = row_set;
    r.ambient_rows = ambient_cols;
    r.ambient_cols = ambient_rows;
    return r;
  }

  bool operator==(const Rectangle& o) const {
    return row_set == o.row_set && col_set == o.col_set &&
           ambient_rows == o.ambient_rows && ambient_cols == o.ambient_cols;
  }
  bool operator<(const Rectangle& o) const {
    return std::tie(row_set, col_set) < std::tie(o.row_set, o.col_set);
  }
};

/* Simultaneous row and column permutation, acting on cells by
   (i, j) -> (row_perm[i], col_perm[j]). */
struct Symmetry {
  std::vector<int> row_perm;
  std::vector<int> col_perm;
};

inline Rectangle permuted(const Rectangle& r, const Symmetry& g) {
  if (static_cast<int>(g.row_perm.size()) != r.ambient_rows ||
      static_cast<int>(g.col_perm.size()) != r.ambient_cols)
    throw std::invalid_argument("symmetry shape does not match the rectangle");
  std::vector<int> rows, cols;
  rows.reserve(r.row_set.size());
  cols.reserve(r.col_set.size());
  for (int i : r.row_set) rows.push_back(g.row_perm[i]);
  for (int j : r.col_set) cols.push_back(g.col_perm[j]);
  return Rectangle(std::move(rows), std::move(cols), r.ambient_rows, r.ambient_cols);
}

/* 0/1 indicator matrix of a rectangle. */
template <class T>
Matrix<T> dense(const Rectangle& r) {
  Matrix<T> m(r.ambient_rows, r.ambient_cols);
  for (int i : r.row_set)
    for (int j : r.col_set) m(i, j) = T(1);
  return m;
}

template <class T>
T frobenius_inner(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("inner product needs matching shapes");
  T acc(0);
  for (std::size_t k = 0; k < a.data().size(); ++k)
    acc += a.data()[k] * b.data()[k];
  return acc;
}

/* Entry of largest absolute value; the matrix norm used throughout. */
template <class T>
T max_abs_entry(const Matrix<T>& a) {
  T best(0);
  for (const auto& v : a.data()) {
    T m = num_abs(v);
    if (m > best) best = m;
  }
  return best;
}

/* <X, R> for an indicator rectangle, without materializing it. */
template <class T>
T rectangle_inner(const Matrix<T>& x, const Rectangle& r) {
  if (r.ambient_rows != x.rows() || r.ambient_cols != x.cols())
    throw std::invalid_argument("rectangle ambient shape mismatch");
  T acc(0);
  for (int i : r.row_set)
    for (int j : r.col_set) acc += x(i, j);
  return acc;
}

template <class T>
T entry_sum(const Matrix<T>& a) {
  T acc(0);
  for (const auto& v : a.data()) acc += v;
  return acc;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& a) {
  Matrix<T> t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline void check_permutation(const std::vector<int>& p, int n, const char* what) {
  if (static_cast<int>(p.size()) != n)
    throw std::invalid_argument(std::string(what) + " permutation has wrong length");
  std::vector<char> seen(n, 0);
  for (int v : p) {
    if (v < 0 || v >= n || seen[v])
      throw std::invalid_argument(std::string(what) + " is not a permutation");
    seen[v] = 1;
  }
}

/* Every cell equals its image under the symmetry. */
template <class T>
bool preserves(const Symmetry& g, const Matrix<T>& a) {
  check_permutation(g.row_perm, a.rows(), "symmetry row");
  check_permutation(g.col_perm, a.cols(), "symmetry column");
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(g.row_perm[i], g.col_perm[j]) != a(i, j)) return false;
  return true;
}

/* Gather semantics: result(i, j) = a(row_perm[i], col_perm[j]). */
template <class T>
Matrix<T> permute(const Matrix<T>& a, const std::vector<int>& row_perm,
                  const std::vector<int>& col_perm) {
  check_permutation(row_perm, a.rows(), "row");
  check_permutation(col_perm, a.cols(), "column");
  Matrix<T> r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(row_perm[i], col_perm[j]);
  return r;
}

template <class T>
Matrix<T> scalar_scale(const Matrix<T>& a, const T& c) {
  Matrix<T> r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = c * a(i, j);
  return r;
}

template <class T>
Matrix<T> hstack(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows())
    throw std::invalid_argument("hstack needs matching row counts");
  Matrix<T> r(a.rows(), a.cols() + b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
    for (int j = 0; j < b.cols(); ++j) r(i, a.cols() + j) = b(i, j);
  }
  return r;
}

template <class T>
Matrix<T> vstack(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.cols())
    throw std::invalid_argument("vstack needs matching column counts");
  Matrix<T> r(a.rows() + b.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(a.rows() + i, j) = b(i, j);
  return r;
}

template <class T, class U>
Matrix<U> convert_matrix(const Matrix<T>& a, U (*conv)(const T&)) {
  Matrix<U> r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = conv(a(i, j));
  return r;
}

inline double rational_to_double(const Rational& x) {
  return scalar_traits<Rational>::to_double(x);
}

/* Matrix plus row/column names, for human-facing output. */
template <class T>
struct LabeledMatrix {
  Matrix<T> mat;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  LabeledMatrix() = default;
  explicit LabeledMatrix(Matrix<T> m) : mat(std::move(m)) {
    row_labels.resize(mat.rows());
    col_labels.resize(mat.cols());
    for (int i = 0; i < mat.rows(); ++i) row_labels[i] = "r" + std::to_string(i + 1);
    for (int j = 0; j < mat.cols(); ++j) col_labels[j] = "c" + std::to_string(j + 1);
  }
  LabeledMatrix(Matrix<T> m, std::vector<std::string> rl, std::vector<std::string> cl)
      : mat(std::move(m)), row_labels(std::move(rl)), col_labels(std::move(cl)) {
    if (static_cast<int>(row_labels.size()) != mat.rows() ||
        static_cast<int>(col_labels.size()) != mat.cols())
      throw std::invalid_argument("label count does not match matrix shape");
  }
};

}  // namespace hsblab

#endif
