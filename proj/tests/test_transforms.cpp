#include <catch2/catch_amalgamated.hpp>

#include "hsblab/bounds.hpp"
#include "hsblab/hsb.hpp"
#include "hsblab/matrix.hpp"
#include "hsblab/rng.hpp"
#include "hsblab/transforms.hpp"
#include "hsblab/zoo.hpp"

#include <utility>
#include <vector>

using namespace hsblab;

namespace {

/* Random nonnegative matrix with no zero row or column. */
Matrix<double> random_dense(Rng& rng, int m, int n) {
  for (;;) {
    Matrix<double> s(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        s(i, j) = rng.uniform01() < 0.25 ? 0.0 : rng.uniform(0.0, 4.0);
    bool ok = !s.is_zero();
    for (int i = 0; i < m && ok; ++i) {
      bool nz = false;
      for (int j = 0; j < n; ++j) nz |= s(i, j) != 0.0;
      ok &= nz;
    }
    for (int j = 0; j < n && ok; ++j) {
      bool nz = false;
      for (int i = 0; i < m; ++i) nz |= s(i, j) != 0.0;
      ok &= nz;
    }
    if (ok) return s;
  }
}

std::vector<double> random_diag(Rng& rng, int len) {
  std::vector<double> d(static_cast<std::size_t>(len));
  for (auto& v : d) v = rng.uniform(0.25, 4.0);
  return d;
}

}  // namespace

TEST_CASE("identity scaling is a no-op with a tight sandwich") {
  Matrix<Rational> s{{Rational(1), Rational(2)}, {Rational(0), Rational(3)}};
  std::vector<Rational> d1{Rational(1), Rational(1)};
  std::vector<Rational> d2{Rational(1), Rational(1)};
  REQUIRE(apply_scaling(s, d1, d2) == s);
  auto [lo, hi] = scaling_sandwich(s, d1, d2, Rational(7));
  REQUIRE(lo == Rational(7));
  REQUIRE(hi == Rational(7));
  REQUIRE_THROWS(apply_scaling(s, {Rational(1), Rational(0)}, d2));
  REQUIRE_THROWS(apply_scaling(s, d1, {Rational(1)}));
}

TEST_CASE("scaling the identity into a weighted simplex slack") {
  auto id3 = Matrix<Rational>::identity(3);
  std::vector<Rational> d1{Rational(2), Rational(1), Rational(1)};
  std::vector<Rational> ones{Rational(1), Rational(1), Rational(1)};
  auto scaled = apply_scaling(id3, d1, ones);
  REQUIRE(scaled == simplex_slack<Rational>(2, Rational(2)).mat);

  Rational base = compute_hsb(id3).value;
  REQUIRE(base == Rational(3));
  auto [lo, hi] = scaling_sandwich(id3, d1, ones, base);
  REQUIRE(lo == Rational(3, 2));
  REQUIRE(hi == Rational(3));
  Rational scaled_value = compute_hsb(scaled).value;
  REQUIRE(scaled_value == Rational(2));
  REQUIRE(lo <= scaled_value);
  REQUIRE(scaled_value <= hi);
}

TEST_CASE("two-sided scaling bracket on random instances") {
  Rng rng(101);
  HsbOptions opt;
  for (int trial = 0; trial < 25; ++trial) {
    int m = rng.uniform_int(2, 4), n = rng.uniform_int(2, 4);
    auto s = random_dense(rng, m, n);
    auto d1 = random_diag(rng, m);
    auto d2 = random_diag(rng, n);
    double base = compute_hsb(s, opt).value;
    auto [lo, hi] = scaling_sandwich(s, d1, d2, base);
    double scaled_value = compute_hsb(apply_scaling(s, d1, d2), opt).value;
    REQUIRE(scaled_value >= lo - 1e-6 * (1 + lo));
    REQUIRE(scaled_value <= hi + 1e-6 * (1 + hi));
  }
}

TEST_CASE("one-sided scaling bound on random instances") {
  Rng rng(103);
  HsbOptions opt;
  for (int trial = 0; trial < 25; ++trial) {
    int m = rng.uniform_int(2, 4), n = rng.uniform_int(2, 4);
    auto s = random_dense(rng, m, n);
    auto d = random_diag(rng, m);
    std::vector<double> id(static_cast<std::size_t>(n), 1.0);
    auto ds = apply_scaling(s, d, id);
    double base = compute_hsb(s, opt).value;
    double scaled_value = compute_hsb(ds, opt).value;
    double dmax = *std::max_element(d.begin(), d.end());
    double cap = base * dmax * max_abs_entry(s) / max_abs_entry(ds);
    REQUIRE(scaled_value <= cap + 1e-6 * (1 + cap));
  }
}

TEST_CASE("row and column normalization") {
  auto s32 = simplex_slack<Rational>(3, Rational(2)).mat;
  REQUIRE(normalize_rows(s32) == Matrix<Rational>::identity(4));

  auto ones = Matrix<Rational>::constant(3, 4, Rational(1));
  REQUIRE(normalize_rows(ones) == ones);
  REQUIRE(normalize_cols(ones) == ones);
  REQUIRE(normalize_rows_then_cols(ones) == ones);

  Matrix<Rational> with_zero{{Rational(0), Rational(0)}, {Rational(2), Rational(4)}};
  auto norm = normalize_rows(with_zero);
  REQUIRE(norm(0, 0) == Rational(0));
  REQUIRE(norm(1, 0) == Rational(1, 2));
  REQUIRE(norm(1, 1) == Rational(1));

  /* Columns-first differs on purpose when requested. */
  Matrix<Rational> mixed{{Rational(1), Rational(4)}, {Rational(2), Rational(2)}};
  auto rows_first = normalize_rows_then_cols(mixed);
  auto cols_first = normalize_rows_then_cols(mixed, false);
  REQUIRE(rows_first != cols_first);
}

TEST_CASE("normalized scalings never lose value") {
  Rng rng(107);
  HsbOptions opt;
  for (int trial = 0; trial < 20; ++trial) {
    int m = rng.uniform_int(2, 4), n = rng.uniform_int(2, 4);
    auto s = random_dense(rng, m, n);
    auto normalized = normalize_rows_then_cols(s);
    double base = compute_hsb(s, opt).value;
    double lifted = compute_hsb(normalized, opt).value;
    REQUIRE(lifted >= base - 1e-6 * (1 + base));
  }
}

TEST_CASE("redundant row policies and brackets") {
  auto s2 = hypercube_slack<Rational>(2).mat;
  std::vector<Rational> w{Rational(1), Rational(0), Rational(1), Rational(0)};

  /* The raw append rebuilds the augmented cube matrix exactly. */
  auto raw = add_redundant_row(s2, w, RowPolicy::kRaw);
  REQUIRE(raw.mat == hypercube_slack_redundant<Rational>(2).mat);
  REQUIRE(!raw.bracket_valid);
  REQUIRE(compute_hsb(raw.mat).value == Rational(2));
  REQUIRE(compute_hsb(s2).value == Rational(4));

  /* Default policy refuses a norm-growing row. */
  REQUIRE_THROWS(add_redundant_row(s2, w));

  /* Rescaling shrinks the weights until the norm matches. */
  auto scaled = add_redundant_row(s2, w, RowPolicy::kRescale);
  REQUIRE(scaled.rescaled);
  REQUIRE(scaled.bracket_valid);
  REQUIRE(max_abs_entry(scaled.mat) == max_abs_entry(s2));
  REQUIRE(scaled.factor_high == Rational(1));
  REQUIRE(compute_hsb(scaled.mat).value == Rational(4));

  REQUIRE_THROWS(add_redundant_row(s2, {Rational(-1), Rational(0), Rational(0), Rational(0)}));
  REQUIRE_THROWS(add_redundant_row(s2, {Rational(1)}));
}

TEST_CASE("combination rows inside the norm keep the value bracketed") {
  Rng rng(109);
  HsbOptions opt;
  int checked = 0;
  for (int trial = 0; trial < 60 && checked < 20; ++trial) {
    int m = rng.uniform_int(2, 4), n = rng.uniform_int(2, 4);
    auto s = random_dense(rng, m, n);
    std::vector<double> w(static_cast<std::size_t>(m), 0.0);
    for (auto& v : w) v = rng.coin() ? 0.0 : rng.uniform(0.0, 0.8);
    RedundantRowReport<double> rep;
    try {
      rep = add_redundant_row(s, w);
    } catch (const std::invalid_argument&) {
      continue;  // norm would grow; not this trial's subject
    }
    ++checked;
    double base = compute_hsb(s, opt).value;
    double extended = compute_hsb(rep.mat, opt).value;
    REQUIRE(extended >= base * rep.factor_low - 1e-6 * (1 + base));
    REQUIRE(extended <= base * rep.factor_high + 1e-6 * (1 + base));
  }
  REQUIRE(checked >= 20);
}

TEST_CASE("convex combination rows leave the value unchanged") {
  Rng rng(113);
  for (int trial = 0; trial < 8; ++trial) {
    int m = rng.uniform_int(2, 3), n = rng.uniform_int(2, 3);
    Matrix<Rational> s(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) s(i, j) = Rational(rng.uniform_int(0, 4));
    if (s.is_zero()) continue;
    /* Convex weights with denominator m. */
    std::vector<Rational> w(static_cast<std::size_t>(m), Rational(1, m));
    auto rep = add_redundant_row(s, w);
    REQUIRE(rep.factor_high == Rational(1));
    REQUIRE(compute_hsb(rep.mat).value == compute_hsb(s).value);
  }

  /* A single damped unit weight also keeps the value. */
  auto id = Matrix<Rational>::identity(3);
  std::vector<Rational> e1{Rational(3, 10), Rational(0), Rational(0)};
  auto rep = add_redundant_row(id, e1);
  REQUIRE(rep.factor_high == Rational(1));
  REQUIRE(compute_hsb(rep.mat).value == Rational(3));
}

TEST_CASE("support covering number on canonical shapes") {
  for (int n : {2, 3, 4, 5}) {
    auto res = rectangle_cover_bound(Matrix<Rational>::identity(n));
    REQUIRE(res.exact);
    REQUIRE(res.lower == n);
    REQUIRE(res.upper == n);
  }
  auto ones = rectangle_cover_bound(Matrix<Rational>::constant(3, 5, Rational(1)));
  REQUIRE(ones.exact);
  REQUIRE(ones.upper == 1);

  Matrix<Rational> tri{{Rational(1), Rational(1)}, {Rational(0), Rational(1)}};
  auto res = rectangle_cover_bound(tri);
  REQUIRE(res.exact);
  REQUIRE(res.upper == 2);

  REQUIRE_THROWS(rectangle_cover_bound(Matrix<Rational>(2, 2)));
}

TEST_CASE("covering certificates actually cover and stay inside the support") {
  Rng rng(127);
  for (int trial = 0; trial < 30; ++trial) {
    int m = rng.uniform_int(2, 5), n = rng.uniform_int(2, 5);
    Matrix<Rational> s(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        s(i, j) = rng.uniform01() < 0.4 ? Rational(0) : Rational(rng.uniform_int(1, 4));
    if (s.is_zero()) continue;
    auto res = rectangle_cover_bound(s);
    REQUIRE(res.exact);
    Matrix<int> hit(m, n);
    for (const auto& r : res.cover)
      for (int i : r.row_set)
        for (int j : r.col_set) {
          REQUIRE(s(i, j) != Rational(0));
          hit(i, j) = 1;
        }
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        if (s(i, j) != Rational(0)) REQUIRE(hit(i, j) == 1);
    REQUIRE(res.lower == static_cast<int>(res.cover.size()));
  }
}

TEST_CASE("rank by exact elimination") {
  REQUIRE(real_rank(Matrix<Rational>::identity(4)) == 4);
  REQUIRE(real_rank(Matrix<Rational>::constant(3, 5, Rational(1))) == 1);
  REQUIRE(real_rank(Matrix<Rational>(3, 3)) == 0);

  auto ct = completion_time_matrix<Rational>({Rational(1), Rational(2), Rational(3)});
  REQUIRE(real_rank(ct) == 1);

  /* Product of random m x r and r x n factors has rank at most r. */
  Rng rng(131);
  for (int trial = 0; trial < 20; ++trial) {
    int m = rng.uniform_int(2, 5), n = rng.uniform_int(2, 5);
    int r = rng.uniform_int(1, std::min(m, n));
    Matrix<Rational> a(m, r), b(r, n);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < r; ++k) a(i, k) = Rational(rng.uniform_int(-3, 3));
    for (int k = 0; k < r; ++k)
      for (int j = 0; j < n; ++j) b(k, j) = Rational(rng.uniform_int(-3, 3));
    Matrix<Rational> prod(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) {
        Rational acc(0);
        for (int k = 0; k < r; ++k) acc += a(i, k) * b(k, j);
        prod(i, j) = acc;
      }
    REQUIRE(real_rank(prod) <= r);
    REQUIRE(real_rank(prod) == real_rank(transpose(prod)));
  }

  /* Distinct-node Vandermonde matrices have full rank. */
  for (int n : {2, 3, 4, 5}) {
    Matrix<Rational> v(n, n);
    for (int i = 0; i < n; ++i) {
      Rational x(i + 1);
      Rational p(1);
      for (int j = 0; j < n; ++j) {
        v(i, j) = p;
        p *= x;
      }
    }
    REQUIRE(real_rank(v) == n);
    Matrix<double> vd(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) vd(i, j) = scalar_traits<Rational>::to_double(v(i, j));
    REQUIRE(real_rank(vd) == n);
  }
}

TEST_CASE("cube slack ranks and covers") {
  auto s3 = hypercube_slack<Rational>(3).mat;
  REQUIRE(real_rank(s3) == 4);  // affine hull of the 3-cube plus constants
  auto cover = rectangle_cover_bound(s3);
  REQUIRE(cover.exact);
  /* Each facet pair x_i >= 0, x_i <= 1 needs its own rectangles; the cube
   * support splits into 6 full facet rows. */
  REQUIRE(cover.upper >= 4);
}
