#ifndef HSBLAB_IO_HPP
#define HSBLAB_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hsblab/hsb.hpp"
#include "hsblab/matrix.hpp"
#include "hsblab/scalar.hpp"

namespace hsblab {

using nlohmann::json;

namespace detail {

template <typename T>
json scalar_to_json(const T& v) {
  if constexpr (scalar_traits<T>::is_exact) {
    return json(format_rational(v));
  } else {
    return json(v);
  }
}

template <typename T>
T scalar_from_json(const json& j, const char* what) {
  if constexpr (scalar_traits<T>::is_exact) {
    if (j.is_number_integer()) return T(j.get<long long>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_float())
      throw std::invalid_argument(std::string(what) +
                                  ": write non-integer rationals as \"p/q\" strings");
    throw std::invalid_argument(std::string(what) + ": expected a number or \"p/q\" string");
  } else {
    if (j.is_number()) return j.get<double>();
    if (j.is_string())
      return scalar_traits<Rational>::to_double(parse_rational(j.get<std::string>()));
    throw std::invalid_argument(std::string(what) + ": expected a number");
  }
}

/* Write-then-rename so readers never observe a half-written file. */
inline void write_text_atomic(const std::string& path, const std::string& text) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot move " + tmp + " into place");
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

}  // namespace detail

template <typename T>
json matrix_to_json(const LabeledMatrix<T>& lm) {
  json data = json::array();
  for (int i = 0; i < lm.mat.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < lm.mat.cols(); ++j)
      row.push_back(detail::scalar_to_json(lm.mat(i, j)));
    data.push_back(std::move(row));
  }
  return json{{"rows", lm.mat.rows()},
              {"cols", lm.mat.cols()},
              {"mode", scalar_traits<T>::mode_name()},
              {"data", std::move(data)},
              {"row_labels", lm.row_labels},
              {"col_labels", lm.col_labels}};
}

template <typename T>
LabeledMatrix<T> matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("data"))
    throw std::invalid_argument("matrix json needs rows, cols, and data");
  int m = j.at("rows").get<int>();
  int n = j.at("cols").get<int>();
  if (m <= 0 || n <= 0) throw std::invalid_argument("matrix json has empty shape");
  const json& data = j.at("data");
  if (!data.is_array() || static_cast<int>(data.size()) != m)
    throw std::invalid_argument("matrix json data has the wrong row count");
  Matrix<T> mat(m, n);
  for (int i = 0; i < m; ++i) {
    const json& row = data.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw std::invalid_argument("matrix json data has a ragged row");
    for (int c = 0; c < n; ++c)
      mat(i, c) = detail::scalar_from_json<T>(row.at(static_cast<std::size_t>(c)), "data");
  }
  LabeledMatrix<T> lm(std::move(mat));
  if (j.contains("row_labels") && !j.at("row_labels").is_null()) {
    auto labels = j.at("row_labels").get<std::vector<std::string>>();
    if (static_cast<int>(labels.size()) != m)
      throw std::invalid_argument("matrix json row_labels length mismatch");
    lm.row_labels = std::move(labels);
  }
  if (j.contains("col_labels") && !j.at("col_labels").is_null()) {
    auto labels = j.at("col_labels").get<std::vector<std::string>>();
    if (static_cast<int>(labels.size()) != n)
      throw std::invalid_argument("matrix json col_labels length mismatch");
    lm.col_labels = std::move(labels);
  }
  return lm;
}

template <typename T>
void save_matrix(const std::string& path, const LabeledMatrix<T>& lm) {
  detail::write_text_atomic(path, matrix_to_json(lm).dump(1) + "\n");
}

template <typename T>
LabeledMatrix<T> load_matrix(const std::string& path) {
  return matrix_from_json<T>(detail::read_json_file(path));
}

/* The stored mode of a matrix file, for callers that dispatch on it. */
inline std::string matrix_file_mode(const std::string& path) {
  json j = detail::read_json_file(path);
  if (j.contains("mode") && j.at("mode").is_string()) return j.at("mode").get<std::string>();
  return "float";
}

/* Certificate interchange.  Index sets are 1-based in the file, matching
   the label convention used everywhere else. */
template <typename T>
json certificate_to_json(const HsbResult<T>& r) {
  json primal = json::array();
  for (int i = 0; i < r.primal_x.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < r.primal_x.cols(); ++j)
      row.push_back(detail::scalar_to_json(r.primal_x(i, j)));
    primal.push_back(std::move(row));
  }
  json dual = json::array();
  for (const auto& term : r.dual) {
    json rows = json::array(), cols = json::array();
    for (int i : term.rect.row_set) rows.push_back(i + 1);
    for (int j : term.rect.col_set) cols.push_back(j + 1);
    dual.push_back(json{{"rows", std::move(rows)},
                        {"cols", std::move(cols)},
                        {"weight", detail::scalar_to_json(term.weight)}});
  }
  return json{{"value", detail::scalar_to_json(r.value)},
              {"gap", detail::scalar_to_json(r.gap)},
              {"primal_X", std::move(primal)},
              {"dual", std::move(dual)}};
}

template <typename T>
struct CertificateData {
  T value{};
  T gap{};
  Matrix<T> primal_x;
  std::vector<DualTerm<T>> dual;
};

template <typename T>
CertificateData<T> certificate_from_json(const json& j, int m, int n) {
  if (!j.is_object() || !j.contains("value") || !j.contains("primal_X") || !j.contains("dual"))
    throw std::invalid_argument("certificate json needs value, primal_X, and dual");
  CertificateData<T> cert;
  cert.value = detail::scalar_from_json<T>(j.at("value"), "value");
  cert.gap = j.contains("gap") ? detail::scalar_from_json<T>(j.at("gap"), "gap") : T(0);
  const json& primal = j.at("primal_X");
  if (!primal.is_array() || static_cast<int>(primal.size()) != m)
    throw std::invalid_argument("certificate primal_X has the wrong row count");
  cert.primal_x = Matrix<T>(m, n);
  for (int i = 0; i < m; ++i) {
    const json& row = primal.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw std::invalid_argument("certificate primal_X has a ragged row");
    for (int c = 0; c < n; ++c)
      cert.primal_x(i, c) =
          detail::scalar_from_json<T>(row.at(static_cast<std::size_t>(c)), "primal_X");
  }
  for (const json& term : j.at("dual")) {
    if (!term.contains("rows") || !term.contains("cols") || !term.contains("weight"))
      throw std::invalid_argument("certificate dual term needs rows, cols, weight");
    std::vector<int> rows, cols;
    for (const json& v : term.at("rows")) {
      int idx = v.get<int>();
      if (idx < 1 || idx > m)
        throw std::invalid_argument("certificate dual row index out of range");
      rows.push_back(idx - 1);
    }
    for (const json& v : term.at("cols")) {
      int idx = v.get<int>();
      if (idx < 1 || idx > n)
        throw std::invalid_argument("certificate dual column index out of range");
      cols.push_back(idx - 1);
    }
    DualTerm<T> dt{Rectangle(rows, cols, m, n),
                   detail::scalar_from_json<T>(term.at("weight"), "weight")};
    cert.dual.push_back(std::move(dt));
  }
  return cert;
}

template <typename T>
void save_certificate(const std::string& path, const HsbResult<T>& r) {
  detail::write_text_atomic(path, certificate_to_json(r).dump(1) + "\n");
}

template <typename T>
CertificateData<T> load_certificate(const std::string& path, int m, int n) {
  return certificate_from_json<T>(detail::read_json_file(path), m, n);
}

/* Weighted rectangle lists (decompositions, solver seeds) share the dual
   term layout of certificates: 1-based index sets plus a weight. */
template <typename T>
void save_decomposition(const std::string& path,
                        const std::vector<std::pair<T, Rectangle>>& terms) {
  json arr = json::array();
  for (const auto& [w, rect] : terms) {
    json rows = json::array(), cols = json::array();
    for (int i : rect.row_set) rows.push_back(i + 1);
    for (int j : rect.col_set) cols.push_back(j + 1);
    arr.push_back(json{{"rows", std::move(rows)},
                       {"cols", std::move(cols)},
                       {"weight", detail::scalar_to_json(w)}});
  }
  detail::write_text_atomic(path, json{{"terms", std::move(arr)}}.dump(1) + "\n");
}

/* Symmetry generator lists, stored as 1-based image arrays. */
inline void save_symmetries(const std::string& path, const std::vector<Symmetry>& gens,
                            int m, int n) {
  json arr = json::array();
  for (const auto& g : gens) {
    json rp = json::array(), cp = json::array();
    for (int v : g.row_perm) rp.push_back(v + 1);
    for (int v : g.col_perm) cp.push_back(v + 1);
    arr.push_back(json{{"row_perm", std::move(rp)}, {"col_perm", std::move(cp)}});
  }
  detail::write_text_atomic(
      path,
      json{{"rows", m}, {"cols", n}, {"generators", std::move(arr)}}.dump(1) + "\n");
}

inline std::vector<Symmetry> load_symmetries(const std::string& path, int m, int n) {
  const json j = detail::read_json_file(path);
  if (!j.is_object() || !j.contains("generators") || !j.at("generators").is_array())
    throw std::invalid_argument("symmetry json needs a generators array");
  if (j.contains("rows") && j.at("rows").get<int>() != m)
    throw std::invalid_argument("symmetry json row count mismatch");
  if (j.contains("cols") && j.at("cols").get<int>() != n)
    throw std::invalid_argument("symmetry json column count mismatch");
  std::vector<Symmetry> out;
  for (const json& gj : j.at("generators")) {
    if (!gj.contains("row_perm") || !gj.contains("col_perm"))
      throw std::invalid_argument("symmetry generator needs row_perm and col_perm");
    Symmetry g;
    for (const json& v : gj.at("row_perm")) {
      int idx = v.get<int>();
      if (idx < 1 || idx > m)
        throw std::invalid_argument("symmetry row index out of range");
      g.row_perm.push_back(idx - 1);
    }
    for (const json& v : gj.at("col_perm")) {
      int idx = v.get<int>();
      if (idx < 1 || idx > n)
        throw std::invalid_argument("symmetry column index out of range");
      g.col_perm.push_back(idx - 1);
    }
    check_permutation(g.row_perm, m, "symmetry row");
    check_permutation(g.col_perm, n, "symmetry column");
    out.push_back(std::move(g));
  }
  return out;
}

template <typename T>
std::vector<std::pair<T, Rectangle>> load_decomposition(const std::string& path,
                                                        int m, int n) {
  const json j = detail::read_json_file(path);
  if (!j.is_object() || !j.contains("terms") || !j.at("terms").is_array())
    throw std::invalid_argument("decomposition json needs a terms array");
  std::vector<std::pair<T, Rectangle>> out;
  for (const json& term : j.at("terms")) {
    if (!term.contains("rows") || !term.contains("cols") || !term.contains("weight"))
      throw std::invalid_argument("decomposition term needs rows, cols, weight");
    std::vector<int> rows, cols;
    for (const json& v : term.at("rows")) {
      int idx = v.get<int>();
      if (idx < 1 || idx > m)
        throw std::invalid_argument("decomposition row index out of range");
      rows.push_back(idx - 1);
    }
    for (const json& v : term.at("cols")) {
      int idx = v.get<int>();
      if (idx < 1 || idx > n)
        throw std::invalid_argument("decomposition column index out of range");
      cols.push_back(idx - 1);
    }
    out.emplace_back(detail::scalar_from_json<T>(term.at("weight"), "weight"),
                     Rectangle(std::move(rows), std::move(cols), m, n));
  }
  return out;
}

}  // namespace hsblab

#endif
