#include <catch2/catch_amalgamated.hpp>

#include "hsblab/graphs.hpp"
#include "hsblab/hsb.hpp"
#include "hsblab/matrix.hpp"
#include "hsblab/rng.hpp"
#include "hsblab/zoo.hpp"

#include <algorithm>
#include <set>
#include <vector>

using namespace hsblab;

TEST_CASE("spanning tree enumeration matches the determinant count") {
  struct Case {
    SimpleGraph g;
    std::uint64_t count;
  };
  std::vector<Case> cases = {{complete_graph(3), 3},   {complete_graph(4), 16},
                             {complete_graph(5), 125}, {complete_graph(6), 1296},
                             {path_graph(4), 1},       {cycle_graph(5), 5}};
  for (auto& [g, count] : cases) {
    auto trees = enumerate_spanning_trees(g);
    REQUIRE(trees.size() == count);
    REQUIRE(spanning_tree_count_kirchhoff(g) == count);
    std::set<std::vector<int>> uniq(trees.begin(), trees.end());
    REQUIRE(uniq.size() == trees.size());
    REQUIRE(std::is_sorted(trees.begin(), trees.end()));
    for (const auto& t : trees) {
      REQUIRE(t.size() == static_cast<std::size_t>(g.n - 1));
      std::vector<int> all(g.n);
      for (int v = 0; v < g.n; ++v) all[v] = v;
      REQUIRE(component_count(all, t, g) == 1);
    }
  }
  REQUIRE_THROWS(enumerate_spanning_trees(SimpleGraph(4, {{0, 1}, {2, 3}})));
}

TEST_CASE("component counts on induced forests") {
  auto k3 = complete_graph(3);
  /* Edges of K_3 in lex order: (1-2), (1-3), (2-3). */
  std::vector<int> t_a{0, 1};  // {1-2, 1-3}
  std::vector<int> t_b{0, 2};  // {1-2, 2-3}
  REQUIRE(component_count({0}, t_a, k3) == 1);
  REQUIRE(component_count({1, 2}, t_a, k3) == 2);
  REQUIRE(component_count({1, 2}, t_b, k3) == 1);
  REQUIRE_THROWS(component_count({}, t_a, k3));

  /* A stable set of a tree keeps every vertex isolated. */
  auto p4 = path_graph(4);
  std::vector<int> tree{0, 1, 2};
  REQUIRE(component_count({0, 2}, tree, p4) == 2);
}

TEST_CASE("cube slack matrices") {
  auto s1 = hypercube_slack<Rational>(1);
  REQUIRE(s1.mat == Matrix<Rational>{{Rational(0), Rational(1)},
                                     {Rational(1), Rational(0)}});

  auto s2p = hypercube_slack_redundant<Rational>(2);
  REQUIRE(s2p.mat.rows() == 5);
  REQUIRE(s2p.col_labels == std::vector<std::string>{"00", "01", "10", "11"});
  std::vector<Rational> last;
  for (int c = 0; c < 4; ++c) last.push_back(s2p.mat(4, c));
  REQUIRE(last == std::vector<Rational>{Rational(0), Rational(1), Rational(1), Rational(2)});
  REQUIRE(max_abs_entry(s2p.mat) == Rational(2));

  for (int n = 1; n <= 5; ++n) {
    auto s = hypercube_slack<double>(n);
    REQUIRE(s.mat.rows() == 2 * n);
    REQUIRE(s.mat.cols() == (1 << n));
    for (int c = 0; c < s.mat.cols(); ++c) {
      int ones = 0;
      for (int r = 0; r < 2 * n; ++r) ones += s.mat(r, c) == 1.0 ? 1 : 0;
      REQUIRE(ones == n);
    }
    auto sp = hypercube_slack_redundant<double>(n);
    REQUIRE(max_abs_entry(sp.mat) == double(n));
  }
  REQUIRE_THROWS(hypercube_slack<double>(0));
  REQUIRE_THROWS(hypercube_slack<double>(17));
}

TEST_CASE("scaled simplex slack matrices") {
  auto id = simplex_slack<Rational>(2, Rational(1));
  REQUIRE(id.mat == Matrix<Rational>::identity(3));
  auto s24 = simplex_slack<Rational>(2, Rational(4));
  REQUIRE(max_abs_entry(s24.mat) == Rational(4));
  REQUIRE(s24.mat(0, 0) == Rational(4));
  REQUIRE_THROWS(simplex_slack<Rational>(2, Rational(1, 2)));

  auto r = compute_hsb(simplex_slack<Rational>(3, Rational(2)).mat);
  REQUIRE(r.value == Rational(5, 2));
  REQUIRE(r.gap == Rational(0));
}

TEST_CASE("spanning tree slack matrix of K_3 and K_4") {
  auto s3 = spanning_tree_slack<Rational>(complete_graph(3));
  REQUIRE(s3.mat.rows() == 6 + 3);
  REQUIRE(s3.mat.cols() == 3);
  /* Subset row U={2,3} is mask 110 -> row index 5; trees are lex ordered. */
  REQUIRE(s3.row_labels[5] == "U={2,3}");
  REQUIRE(s3.mat(5, 0) == Rational(1));
  REQUIRE(s3.mat(5, 1) == Rational(0));

  /* Singleton subsets give identically zero rows. */
  for (int c = 0; c < 3; ++c) {
    REQUIRE(s3.mat(0, c) == Rational(0));
    REQUIRE(s3.mat(1, c) == Rational(0));
    REQUIRE(s3.mat(3, c) == Rational(0));
  }

  auto s4 = spanning_tree_slack<Rational>(complete_graph(4));
  REQUIRE(s4.mat.rows() == 14 + 6);
  REQUIRE(s4.mat.cols() == 16);
  REQUIRE(max_abs_entry(s4.mat) == Rational(2));
  REQUIRE(s4.mat.is_nonnegative());

  auto dropped = spanning_tree_slack<Rational>(complete_graph(4), true);
  REQUIRE(dropped.mat.rows() == 20 - 4 - 0);
  for (int r = 0; r < dropped.mat.rows(); ++r) {
    bool zero = true;
    for (int c = 0; c < dropped.mat.cols(); ++c) zero &= dropped.mat(r, c) == Rational(0);
    REQUIRE(!zero);
  }
}

TEST_CASE("rank-inequality slack equals the edge-count form") {
  /* c(U,T) - 1 must agree with |U| - 1 - |T on E(U)| on every cell. */
  for (int n : {4, 5}) {
    auto g = complete_graph(n);
    auto trees = enumerate_spanning_trees(g);
    auto s = spanning_tree_slack<Rational>(g);
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      std::vector<int> u_set;
      for (int v = 0; v < n; ++v)
        if ((mask >> v) & 1u) u_set.push_back(v);
      for (std::size_t c = 0; c < trees.size(); ++c) {
        int inside = 0;
        for (int e : trees[c]) {
          auto [a, b] = g.edges[e];
          if (((mask >> a) & 1u) && ((mask >> b) & 1u)) ++inside;
        }
        Rational expect(static_cast<int>(u_set.size()) - 1 - inside);
        REQUIRE(s.mat(static_cast<int>(mask) - 1, static_cast<int>(c)) == expect);
      }
    }
  }
}

TEST_CASE("norm of complete-graph tree slack grows with the bipartition bound") {
  for (int n : {4, 5, 6}) {
    auto s = spanning_tree_slack<double>(complete_graph(n));
    REQUIRE(max_abs_entry(s.mat) >= n / 2.0 - 1.0);
  }
}

TEST_CASE("zonotope set function and supermodularity") {
  Matrix<Rational> ones = Matrix<Rational>::constant(3, 3, Rational(1));
  REQUIRE(zonotope_set_function(ones, {}) == Rational(0));
  REQUIRE(zonotope_set_function(ones, {0, 1}) == Rational(3));
  REQUIRE(check_supermodular(ones));
  REQUIRE(check_supermodular(ones, true));

  auto ct = completion_time_matrix<Rational>({Rational(1), Rational(2), Rational(3)});
  REQUIRE(check_supermodular(ct));
  REQUIRE(check_supermodular(ct, true));

  /* Zero off-diagonal weights break strictness but not supermodularity. */
  REQUIRE(check_supermodular(Matrix<Rational>::identity(3)));
  REQUIRE(!check_supermodular(Matrix<Rational>::identity(3), true));
}

TEST_CASE("zonotope vertices from permutations") {
  Matrix<Rational> ones = Matrix<Rational>::constant(3, 3, Rational(1));
  auto v = vertex_of_permutation(ones, {0, 1, 2});
  REQUIRE(v == std::vector<Rational>{Rational(1), Rational(2), Rational(3)});

  auto ct = completion_time_matrix<Rational>({Rational(1), Rational(2), Rational(3)});
  auto x = vertex_of_permutation(ct, {0, 1, 2});
  REQUIRE(x == std::vector<Rational>{Rational(1), Rational(6), Rational(18)});

  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    int n = rng.uniform_int(2, 5);
    Matrix<Rational> a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        a(i, j) = Rational(rng.uniform_int(0, 4));
        a(j, i) = a(i, j);
      }
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    Rational g_full = zonotope_set_function(a, all);
    auto pi = rng.permutation(n);
    auto vx = vertex_of_permutation(a, pi);
    Rational total(0);
    for (const auto& c : vx) total += c;
    REQUIRE(total == g_full);
  }
}

TEST_CASE("zonotope slack matrix basics") {
  Matrix<Rational> ones = Matrix<Rational>::constant(3, 3, Rational(1));
  auto m = zonotope_slack(ones);
  REQUIRE(m.mat.rows() == 6);
  REQUIRE(m.mat.cols() == 6);
  REQUIRE(m.row_labels[0] == "S={1}");
  REQUIRE(m.col_labels[0] == "1,2,3");
  REQUIRE(m.mat(0, 0) == Rational(0));
  REQUIRE(m.mat.is_nonnegative());
  REQUIRE(max_abs_entry(m.mat) == Rational(2));

  /* Permutahedron columns are exactly the permutations of (1..n). */
  auto perm3 = permutahedron_matrix<Rational>(3);
  REQUIRE(perm3 == ones);
  std::set<std::vector<Rational>> vertex_set;
  std::vector<int> pi{0, 1, 2};
  do {
    vertex_set.insert(vertex_of_permutation(ones, pi));
  } while (std::next_permutation(pi.begin(), pi.end()));
  REQUIRE(vertex_set.size() == 6);
  for (const auto& vx : vertex_set) {
    std::multiset<Rational> coords(vx.begin(), vx.end());
    REQUIRE(coords == std::multiset<Rational>{Rational(1), Rational(2), Rational(3)});
  }
}

TEST_CASE("zonotope slack is blind to the diagonal") {
  Rng rng(47);
  for (int trial = 0; trial < 6; ++trial) {
    int n = rng.uniform_int(2, 4);
    Matrix<Rational> a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        a(i, j) = Rational(rng.uniform_int(0, 3));
        a(j, i) = a(i, j);
      }
    Matrix<Rational> b = a;
    for (int i = 0; i < n; ++i) b(i, i) = a(i, i) + Rational(rng.uniform_int(1, 5));
    REQUIRE(zonotope_slack(a).mat == zonotope_slack(b).mat);
  }
}

TEST_CASE("row maxima of the zonotope slack hit the full crossing weight") {
  Rng rng(53);
  for (int trial = 0; trial < 6; ++trial) {
    int n = rng.uniform_int(2, 4);
    Matrix<Rational> a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        a(i, j) = Rational(rng.uniform_int(0, 4));
        a(j, i) = a(i, j);
      }
    auto m = zonotope_slack(a);
    const std::uint32_t full = (1u << n) - 1;
    for (std::uint32_t mask = 1; mask < full; ++mask) {
      Rational crossing(0);
      for (int j = 0; j < n; ++j) {
        if (!((mask >> j) & 1u)) continue;
        for (int i = 0; i < n; ++i)
          if (!((mask >> i) & 1u)) crossing += a(i, j);
      }
      Rational row_max(0);
      for (int c = 0; c < m.mat.cols(); ++c)
        row_max = std::max(row_max, m.mat(static_cast<int>(mask) - 1, c));
      REQUIRE(row_max == crossing);
    }
    /* The norm therefore equals the maximum cut weight. */
    REQUIRE(max_abs_entry(m.mat) == max_cut_weight(a).first);
  }
}

TEST_CASE("zonotope decomposition reconstructs the slack matrix") {
  SECTION("permutahedron n=3 gives the 6/2 bound") {
    auto a = permutahedron_matrix<Rational>(3);
    auto m = zonotope_slack(a);
    auto terms = zonotope_decomposition(a);
    REQUIRE(terms.size() == 6);
    std::vector<DualTerm<Rational>> dual;
    for (auto& [w, rect] : terms) {
      REQUIRE(rect.row_set.size() == 2);   // 2^(n-2)
      REQUIRE(rect.col_set.size() == 3);   // n!/2
      dual.push_back({rect, w});
    }
    REQUIRE(verify_dual_certificate(m.mat, dual) == Rational(3));
  }
  SECTION("random symmetric weights at n=4") {
    Rng rng(61);
    Matrix<Rational> a(4, 4);
    for (int i = 0; i < 4; ++i)
      for (int j = i; j < 4; ++j) {
        a(i, j) = Rational(rng.uniform_int(1, 4));
        a(j, i) = a(i, j);
      }
    auto m = zonotope_slack(a);
    auto terms = zonotope_decomposition(a);
    Matrix<Rational> acc(m.mat.rows(), m.mat.cols());
    Rational total(0);
    for (auto& [w, rect] : terms) {
      REQUIRE(rect.row_set.size() == 4);
      REQUIRE(rect.col_set.size() == 12);
      for (int i : rect.row_set)
        for (int j : rect.col_set) acc(i, j) += w;
      total += w;
    }
    REQUIRE(acc == m.mat);
    /* Ordered off-diagonal total over the norm stays below four. */
    REQUIRE(total / max_abs_entry(m.mat) <= Rational(4));
  }
}

TEST_CASE("spanning tree decomposition reconstructs the slack matrix") {
  auto check = [](const SimpleGraph& g) {
    auto m = spanning_tree_slack<Rational>(g);
    auto terms = spanning_tree_decomposition<Rational>(g);
    std::vector<DualTerm<Rational>> dual;
    Rational total(0);
    for (auto& [w, rect] : terms) {
      REQUIRE(w == Rational(1));
      dual.push_back({rect, w});
      total += w;
    }
    /* Throws unless the weighted rectangles sum to the matrix exactly. */
    REQUIRE(verify_dual_certificate(m.mat, dual) == total / max_abs_entry(m.mat));
    return terms.size();
  };
  /* Every pair (min vertex, other vertex) contributes one rectangle per
     possible parent, and every edge one more for its nonnegativity row. */
  REQUIRE(check(complete_graph(4)) == 6 * 2 + 6);
  REQUIRE(check(complete_graph(5)) == 10 * 3 + 10);
  check(cycle_graph(5));
  check(path_graph(4));
}

TEST_CASE("cut enumeration") {
  auto k3 = permutahedron_matrix<Rational>(3);
  REQUIRE(max_cut_weight(k3).first == Rational(2));
  REQUIRE(min_cut_weight(k3).first == Rational(2));

  auto k4 = permutahedron_matrix<Rational>(4);
  REQUIRE(max_cut_weight(k4).first == Rational(4));
  REQUIRE(min_cut_weight(k4).first == Rational(3));
  REQUIRE(max_cut_weight(k4).second.size() == 2);

  auto ct = completion_time_matrix<Rational>({Rational(1), Rational(2), Rational(3)});
  REQUIRE(max_cut_weight(ct).first == Rational(9));
  REQUIRE(min_cut_weight(ct).first == Rational(5));
}

TEST_CASE("weight matrix constructors") {
  auto ct = completion_time_matrix<Rational>({Rational(1), Rational(2)});
  REQUIRE(ct == Matrix<Rational>{{Rational(1), Rational(2)},
                                 {Rational(2), Rational(4)}});
  auto ones = completion_time_matrix<Rational>({Rational(1), Rational(1), Rational(1)});
  REQUIRE(ones == permutahedron_matrix<Rational>(3));
  REQUIRE_THROWS(completion_time_matrix<Rational>({Rational(1), Rational(0)}));
  REQUIRE_THROWS(zonotope_slack(Matrix<Rational>{{Rational(0), Rational(1)},
                                                 {Rational(2), Rational(0)}}));
}

TEST_CASE("small cube and simplex instances reach their plateaus") {
  /* Collapse on the square: the redundant row halves the bound. */
  auto s2 = hypercube_slack<Rational>(2);
  auto s2p = hypercube_slack_redundant<Rational>(2);
  auto base = compute_hsb(s2.mat);
  auto red = compute_hsb(s2p.mat);
  REQUIRE(base.value == Rational(4));
  REQUIRE(red.value == Rational(2));
  REQUIRE(max_abs_entry(s2.mat) * base.value == max_abs_entry(s2p.mat) * red.value);
}

TEST_CASE("family symmetry generators preserve their slack matrices") {
  for (int n : {4, 5}) {
    auto g = complete_graph(n);
    auto lm = spanning_tree_slack<double>(g);
    auto gens = spanning_tree_symmetries(g);
    REQUIRE(!gens.empty());
    for (const auto& sym : gens) REQUIRE(preserves(sym, lm.mat));
  }

  Matrix<double> ones = Matrix<double>::constant(4, 4, 1.0);
  auto pgens = zonotope_symmetries(ones);
  REQUIRE(!pgens.empty());
  REQUIRE(preserves(pgens[0], zonotope_slack(ones).mat));
  for (const auto& sym : pgens) REQUIRE(preserves(sym, zonotope_slack(ones).mat));

  /* Tied weights keep exactly the permutations fixing the weight matrix. */
  Matrix<double> tied(3, 3);
  tied(0, 1) = tied(1, 0) = 1;
  tied(0, 2) = tied(2, 0) = 2;
  tied(1, 2) = tied(2, 1) = 2;
  auto tgens = zonotope_symmetries(tied);
  auto tm = zonotope_slack(tied);
  REQUIRE(!tgens.empty());
  for (const auto& sym : tgens) REQUIRE(preserves(sym, tm.mat));
}

TEST_CASE("vertex maps that break the structure are rejected") {
  auto path = path_graph(3);
  REQUIRE_THROWS_AS(spanning_tree_symmetry(path, {1, 0, 2}), std::invalid_argument);
  REQUIRE_THROWS_AS(spanning_tree_symmetry(path, {0, 1}), std::invalid_argument);
}

TEST_CASE("orbit reduction solves the K4 tree polytope") {
  auto g = complete_graph(4);
  auto lm = spanning_tree_slack<double>(g);
  HsbOptions opts;
  opts.symmetries = spanning_tree_symmetries(g);
  for (auto& [w, rect] : spanning_tree_decomposition<double>(g))
    opts.seed_pool.push_back(rect);
  opts.seed_rectangles = 0;
  auto r = compute_hsb(lm.mat, opts);
  REQUIRE(r.status == HsbStatus::kConverged);
  REQUIRE(r.value == Catch::Approx(17.0 / 3.0).margin(2e-5));
  REQUIRE(verify_dual_certificate(lm.mat, r.dual) ==
          Catch::Approx(r.upper).margin(1e-7));
}
