#include <catch2/catch_amalgamated.hpp>

#include "hsblab/hsb.hpp"
#include "hsblab/matrix.hpp"
#include "hsblab/rng.hpp"
#include "hsblab/scalar.hpp"

#include <vector>

using namespace hsblab;

namespace {

Matrix<double> random_nonneg(Rng& rng, int max_dim, int hi) {
  int m = rng.uniform_int(1, max_dim), n = rng.uniform_int(1, max_dim);
  Matrix<double> s(m, n);
  bool any = false;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      s(i, j) = rng.uniform_int(0, hi);
      any |= s(i, j) != 0;
    }
  if (!any) s(0, 0) = 1;
  return s;
}

Matrix<Rational> to_rational(const Matrix<double>& s) {
  Matrix<Rational> r(s.rows(), s.cols());
  for (int i = 0; i < s.rows(); ++i)
    for (int j = 0; j < s.cols(); ++j) r(i, j) = Rational(static_cast<long long>(s(i, j)));
  return r;
}

/* Every rectangle of the ambient shape; with the full pool the one-shot
   restricted problem is the unrestricted decomposition problem. */
std::vector<Rectangle> all_rectangles(int m, int n) {
  std::vector<Rectangle> out;
  for (unsigned rm = 1; rm < (1u << m); ++rm)
    for (unsigned cm = 1; cm < (1u << n); ++cm) {
      std::vector<int> rows, cols;
      for (int i = 0; i < m; ++i)
        if ((rm >> i) & 1u) rows.push_back(i);
      for (int j = 0; j < n; ++j)
        if ((cm >> j) & 1u) cols.push_back(j);
      out.emplace_back(rows, cols, m, n);
    }
  return out;
}

}  // namespace

TEST_CASE("identity matrices need one rectangle per diagonal cell") {
  for (int k = 1; k <= 6; ++k) {
    auto r = compute_hsb(Matrix<double>::identity(k));
    REQUIRE(r.status == HsbStatus::kConverged);
    REQUIRE(r.value == Catch::Approx(double(k)).margin(1e-6));
    REQUIRE(r.gap <= 1e-6 * k);
  }
  for (int k = 1; k <= 5; ++k) {
    auto r = compute_hsb(Matrix<Rational>::identity(k));
    REQUIRE(r.status == HsbStatus::kConverged);
    REQUIRE(r.value == Rational(k));
    REQUIRE(r.gap == Rational(0));
  }
}

TEST_CASE("all-ones matrices decompose into a single rectangle") {
  auto r = compute_hsb(Matrix<double>::constant(3, 5, 1.0));
  REQUIRE(r.value == Catch::Approx(1.0).margin(1e-6));
  auto q = compute_hsb(Matrix<Rational>::constant(4, 2, Rational(1)));
  REQUIRE(q.value == Rational(1));
  REQUIRE(q.dual.size() == 1);
  REQUIRE(q.dual[0].rect.cell_count() == 8);
}

TEST_CASE("scaled diagonals match the weighted singleton decomposition") {
  /* diag(d_1..d_k) forces singleton covers, so the bound is sum(d)/max(d). */
  std::vector<std::vector<long long>> diags = {{4, 1}, {2, 1, 1}, {3, 2, 1, 1}};
  for (const auto& d : diags) {
    int k = static_cast<int>(d.size());
    Matrix<Rational> s(k, k);
    long long sum = 0, mx = 0;
    for (int i = 0; i < k; ++i) {
      s(i, i) = Rational(d[i]);
      sum += d[i];
      mx = std::max(mx, d[i]);
    }
    auto r = compute_hsb(s);
    REQUIRE(r.value == Rational(sum, mx));
    REQUIRE(r.gap == Rational(0));
  }
}

TEST_CASE("lower triangular 2x2 needs the unpinning pass") {
  /* The best decomposition of [[1,0],[1,1]] overhangs the zero cell while it
     stays pinned; the engine must unpin it and settle at two rectangles. */
  Matrix<Rational> s{{Rational(1), Rational(0)}, {Rational(1), Rational(1)}};
  auto r = compute_hsb(s);
  REQUIRE(r.value == Rational(2));
  REQUIRE(r.gap == Rational(0));
  REQUIRE(verify_dual_certificate(s, r.dual) == Rational(2));

  auto f = compute_hsb(Matrix<double>{{1, 0}, {1, 1}});
  REQUIRE(f.value == Catch::Approx(2.0).margin(1e-6));
}

TEST_CASE("square hypercube slack instance reaches the expected plateau") {
  /* Facets x_i >= 0 and x_i <= 1 against the four vertices 00, 01, 10, 11. */
  Matrix<Rational> s{{Rational(0), Rational(0), Rational(1), Rational(1)},
                     {Rational(1), Rational(1), Rational(0), Rational(0)},
                     {Rational(0), Rational(1), Rational(0), Rational(1)},
                     {Rational(1), Rational(0), Rational(1), Rational(0)}};
  auto r = compute_hsb(s);
  REQUIRE(r.status == HsbStatus::kConverged);
  REQUIRE(r.gap == Rational(0));
  REQUIRE(r.value == Rational(4));
  REQUIRE(verify_dual_certificate(s, r.dual) == r.upper);
}

TEST_CASE("engine agrees with the full-pool one-shot problem exactly") {
  Rng rng(606);
  for (int trial = 0; trial < 25; ++trial) {
    auto sf = random_nonneg(rng, 3, 4);
    auto s = to_rational(sf);
    auto engine = compute_hsb(s);
    auto full = solve_restricted_lp(s, all_rectangles(s.rows(), s.cols()));
    REQUIRE(full.status == LpStatus::kOptimal);
    Rational norm = max_abs_entry(s);
    CAPTURE(trial, s.rows(), s.cols());
    REQUIRE(engine.status == HsbStatus::kConverged);
    REQUIRE(engine.gap == Rational(0));
    REQUIRE(engine.value == full.objective / norm);
  }
}

TEST_CASE("certificates returned by the engine verify independently") {
  Rng rng(707);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_nonneg(rng, 4, 4);
    HsbOptions opts;
    opts.seed = trial;
    auto r = compute_hsb(s, opts);
    REQUIRE(r.status == HsbStatus::kConverged);
    double ub = verify_dual_certificate(s, r.dual);
    REQUIRE(ub == Catch::Approx(r.upper).margin(1e-7));
    double lb = verify_primal_certificate(s, r.primal_x);
    REQUIRE(lb >= r.lower - 1e-7);
    REQUIRE(lb <= r.upper + 1e-6 * std::max(1.0, r.upper));
    REQUIRE(r.gap <= 1e-6 * std::max(1.0, r.value));
  }
}

TEST_CASE("bound is invariant under transpose, permutations, and scaling") {
  Rng rng(808);
  for (int trial = 0; trial < 12; ++trial) {
    auto s = random_nonneg(rng, 4, 4);
    auto base = compute_hsb(s);

    auto t = compute_hsb(transpose(s));
    REQUIRE(t.value == Catch::Approx(base.value).margin(2e-6 * (1 + base.value)));

    auto rp = rng.permutation(s.rows());
    auto cp = rng.permutation(s.cols());
    auto p = compute_hsb(permute(s, rp, cp));
    REQUIRE(p.value == Catch::Approx(base.value).margin(2e-6 * (1 + base.value)));

    for (double c : {1.0 / 3.0, 2.0, 7.0}) {
      auto sc = compute_hsb(scalar_scale(s, c));
      REQUIRE(sc.value == Catch::Approx(base.value).margin(2e-6 * (1 + base.value)));
    }

    auto dup = compute_hsb(hstack(s, s));
    REQUIRE(dup.value == Catch::Approx(base.value).margin(2e-6 * (1 + base.value)));
  }
}

TEST_CASE("degenerate and invalid inputs are rejected") {
  REQUIRE_THROWS_AS(compute_hsb(Matrix<double>(3, 3)), ZeroMatrixError);
  REQUIRE_THROWS_AS(compute_hsb(Matrix<double>{{1, -1}}), std::invalid_argument);
  REQUIRE_THROWS_AS(compute_hsb(Matrix<Rational>::identity(9)), std::invalid_argument);
}

TEST_CASE("dual certificate verification rejects broken decompositions") {
  Matrix<Rational> s = Matrix<Rational>::identity(2);
  std::vector<DualTerm<Rational>> good{{Rectangle({0}, {0}, 2, 2), Rational(1)},
                                       {Rectangle({1}, {1}, 2, 2), Rational(1)}};
  REQUIRE(verify_dual_certificate(s, good) == Rational(2));

  auto off = good;
  off[1].weight = Rational(1, 2);
  REQUIRE_THROWS_AS(verify_dual_certificate(s, off), CertificateError);

  auto neg = good;
  neg.push_back({Rectangle({0}, {1}, 2, 2), Rational(-1)});
  REQUIRE_THROWS_AS(verify_dual_certificate(s, neg), CertificateError);

  auto shape = good;
  shape[0].rect = Rectangle({0}, {0}, 3, 3);
  REQUIRE_THROWS_AS(verify_dual_certificate(s, shape), CertificateError);

  std::vector<DualTerm<Rational>> overhang{{Rectangle({0, 1}, {0, 1}, 2, 2), Rational(1)}};
  REQUIRE_THROWS_AS(verify_dual_certificate(s, overhang), CertificateError);
}

TEST_CASE("time limit produces a valid bracket instead of an answer") {
  Matrix<double> s(6, 6);
  Rng rng(99);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) s(i, j) = rng.uniform_int(0, 4);
  s(0, 0) = std::max(s(0, 0), 1.0);
  HsbOptions opts;
  opts.time_limit_sec = 1e-6;
  auto r = compute_hsb(s, opts);
  REQUIRE(r.status == HsbStatus::kTimeLimit);
  REQUIRE(r.lower >= 1.0 - 1e-12);
  REQUIRE(r.upper >= r.lower);
  REQUIRE(verify_dual_certificate(s, r.dual) == Catch::Approx(r.upper).margin(1e-7));
}

TEST_CASE("orbit-reduced runs match the plain engine exactly") {
  /* Circulants: shifting rows and columns together is an automorphism, so
     the reduced master must land on the same value as the plain one. */
  Rng rng(4242);
  for (int n : {3, 4, 5}) {
    std::vector<long long> first(n);
    for (int j = 0; j < n; ++j) first[j] = rng.uniform_int(0, 3);
    bool any = false;
    for (long long v : first) any |= v != 0;
    if (!any) first[0] = 2;
    Matrix<Rational> s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s(i, j) = Rational(first[(j - i + n) % n]);

    auto plain = compute_hsb(s);

    Symmetry shift;
    shift.row_perm.resize(n);
    for (int i = 0; i < n; ++i) shift.row_perm[i] = (i + 1) % n;
    shift.col_perm = shift.row_perm;
    HsbOptions opts;
    opts.symmetries = {shift};
    auto reduced = compute_hsb(s, opts);

    REQUIRE(reduced.status == HsbStatus::kConverged);
    REQUIRE(reduced.value == plain.value);
    REQUIRE(verify_dual_certificate(s, reduced.dual) == reduced.upper);
  }
}

TEST_CASE("generators that move the matrix are rejected") {
  Matrix<double> s{{1, 2}, {2, 1}};
  Symmetry bad;
  bad.row_perm = {1, 0};
  bad.col_perm = {0, 1};
  HsbOptions opts;
  opts.symmetries = {bad};
  REQUIRE_THROWS_AS(compute_hsb(s, opts), std::invalid_argument);
}
