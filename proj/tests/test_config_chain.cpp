#include <doctest.h>

#include <functional>
#include <map>

#include "moran/config_chain.hpp"
#include "moran/error.hpp"

using namespace moran;

namespace {

// Row of the lumped chain from a representative lineage vector, by enumerating
// every ordered (parents..., child) tuple of distinct individuals and every
// assignment of the child's lineages to parent slots.
std::map<Configuration, Rational> brute_force_row(std::size_t n, std::size_t m,
                                                  const Configuration& from) {
  std::vector<std::size_t> x;
  std::size_t site = 0;
  for (int part : from.parts()) {
    for (int i = 0; i < part; ++i) x.push_back(site);
    ++site;
  }
  std::map<Configuration, Rational> row;
  std::vector<std::size_t> tuple;
  std::vector<bool> used(n, false);
  Rational tuple_prob = 1;
  for (std::size_t i = 0; i <= m; ++i) tuple_prob /= static_cast<long>(n - i);

  std::function<void()> rec = [&]() {
    if (tuple.size() == m + 1) {
      const std::size_t child = tuple[m];
      std::vector<std::size_t> movers;
      for (std::size_t a = 0; a < x.size(); ++a) {
        if (x[a] == child) movers.push_back(a);
      }
      std::size_t assignments = 1;
      for (std::size_t i = 0; i < movers.size(); ++i) assignments *= m;
      for (std::size_t code = 0; code < assignments; ++code) {
        auto y = x;
        std::size_t c = code;
        for (auto a : movers) {
          y[a] = tuple[c % m];
          c /= m;
        }
        row[configuration_of(y)] += tuple_prob / static_cast<long>(assignments);
      }
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      tuple.push_back(i);
      rec();
      tuple.pop_back();
      used[i] = false;
    }
  };
  rec();
  return row;
}

// Markov-chain tree theorem by explicit enumeration of in-trees.
std::vector<Rational> spanning_tree_stationary(const std::vector<std::vector<Rational>>& p) {
  const std::size_t s = p.size();
  std::vector<Rational> w(s, 0);
  for (std::size_t root = 0; root < s; ++root) {
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < s; ++i) {
      if (i != root) others.push_back(i);
    }
    std::size_t total = 1;
    for (std::size_t i = 0; i < others.size(); ++i) total *= s;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::size_t> next(s, root);
      std::size_t c = code;
      bool self_loop = false;
      for (auto i : others) {
        next[i] = c % s;
        c /= s;
        self_loop = self_loop || next[i] == i;
      }
      if (self_loop) continue;
      bool tree = true;
      for (auto i : others) {
        std::size_t v = i;
        for (std::size_t step = 0; step < s && v != root; ++step) v = next[v];
        tree = tree && v == root;
      }
      if (!tree) continue;
      Rational weight = 1;
      for (auto i : others) weight *= p[i][next[i]];
      w[root] += weight;
    }
  }
  Rational sum = 0;
  for (const auto& v : w) sum += v;
  for (auto& v : w) v /= sum;
  return w;
}

}  // namespace

TEST_CASE("state space and stochasticity") {
  const auto chain = build_transition_matrix(10, 2, 4, Arithmetic::Exact);
  CHECK(chain.states == partitions(4));
  REQUIRE(chain.has_exact());
  for (const auto& row : chain.exact) {
    Rational s = 0;
    for (const auto& v : row) s += v;
    CHECK(s == 1);
  }
  CHECK(is_irreducible(chain));
  CHECK(chain.index_of(Configuration({2, 2})) == 2);
  CHECK_THROWS_AS(chain.index_of(Configuration({5})), std::out_of_range);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(build_transition_matrix(5, 2, 5), RegimeError);
  CHECK_THROWS_AS(build_transition_matrix(3, 3, 2), RegimeError);
  CHECK_THROWS_AS(build_transition_matrix(10, 1, 2), ConfigError);
  CHECK_FALSE(build_transition_matrix(10, 2, 2, Arithmetic::Floating).has_exact());
  CHECK(exact_regime(200, 8));
  CHECK_FALSE(exact_regime(201, 8));
  CHECK_FALSE(exact_regime(50, 9));
}

TEST_CASE("transition rows match brute-force tuple enumeration") {
  for (auto [n, m, k] : {std::tuple{6, 2, 3}, std::tuple{6, 2, 4}, std::tuple{6, 3, 3},
                         std::tuple{7, 4, 3}, std::tuple{5, 2, 4}}) {
    const auto chain = build_transition_matrix(n, m, k, Arithmetic::Exact);
    for (std::size_t i = 0; i < chain.states.size(); ++i) {
      const auto row = brute_force_row(n, m, chain.states[i]);
      for (std::size_t j = 0; j < chain.states.size(); ++j) {
        const auto it = row.find(chain.states[j]);
        const Rational expected = it == row.end() ? Rational(0) : it->second;
        CHECK_MESSAGE(chain.exact[i][j] == expected,
                      "N=" << n << " m=" << m << " " << chain.states[i].label() << " -> "
                           << chain.states[j].label());
      }
    }
  }
}

TEST_CASE("k=2 two-state balance") {
  for (long n : {3L, 4L, 5L, 10L, 50L, 100L}) {
    for (long m : {2L, 3L}) {
      if (n < m + 1 || n <= 2) continue;
      const Rational merge = Rational(2, n * (n - 1));
      const Rational split = Rational(m - 1, m * n);
      const Rational nu2 = merge / (merge + split);
      const auto st = stationary_linear(build_transition_matrix(n, m, 2, Arithmetic::Exact));
      REQUIRE(st.exact);
      CHECK(*st.exact_probability(Configuration({2})) == nu2);
      CHECK(*st.exact_probability(Configuration({1, 1})) == 1 - nu2);
    }
    const auto st = stationary_linear(build_transition_matrix(n, 2, 2, Arithmetic::Exact));
    CHECK(*st.exact_probability(Configuration({2})) == Rational(4, n + 3));
  }
}

TEST_CASE("tree theorem against explicit in-tree enumeration") {
  for (auto [n, k] : {std::pair{6, 3}, std::pair{9, 4}, std::pair{12, 3}}) {
    const auto chain = build_transition_matrix(n, 2, k, Arithmetic::Exact);
    const auto oracle = spanning_tree_stationary(chain.exact);
    const auto tree = stationary_tree_theorem(chain);
    const auto lin = stationary_linear(chain);
    CHECK(*tree.exact == oracle);
    CHECK(*lin.exact == oracle);
    const auto pow = stationary_power(chain);
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      CHECK(pow.nu[i] == doctest::Approx(to_double(oracle[i])).epsilon(1e-12));
    }
    CHECK(lin.residual < 1e-14);
  }
  CHECK_THROWS_AS(stationary_tree_theorem(build_transition_matrix(20, 2, 6), 5), CapabilityError);
}

TEST_CASE("floating and exact solves agree") {
  const auto e = stationary_linear(build_transition_matrix(40, 2, 5, Arithmetic::Exact));
  const auto f = stationary_linear(build_transition_matrix(40, 2, 5, Arithmetic::Floating));
  CHECK_FALSE(f.exact);
  for (std::size_t i = 0; i < e.nu.size(); ++i) {
    CHECK(f.nu[i] == doctest::Approx(e.nu[i]).epsilon(1e-10));
  }
}

TEST_CASE("vector lift sums to one over I^k") {
  for (auto [n, k] : {std::pair{5, 3}, std::pair{6, 4}, std::pair{4, 2}}) {
    const auto st = stationary_linear(build_transition_matrix(n, 2, k, Arithmetic::Exact));
    // Count vectors of each configuration directly.
    std::map<Configuration, long> count;
    std::vector<std::size_t> x(k, 0);
    std::size_t total = 1;
    for (int i = 0; i < k; ++i) total *= n;
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (int i = 0; i < k; ++i) {
        x[i] = c % n;
        c /= n;
      }
      ++count[configuration_of(x)];
    }
    Rational sum = 0;
    for (std::size_t i = 0; i < st.states.size(); ++i) {
      const auto& c = st.states[i];
      const auto lifted = lift_to_vector((*st.exact)[i], c, n);
      CHECK(lifted * count[c] == (*st.exact)[i]);
      sum += lifted * count[c];
    }
    CHECK(sum == 1);
  }
}

TEST_CASE("joint moments at finite N") {
  for (long n : {5L, 10L, 37L}) {
    const std::vector<int> one{1}, two{2}, cross{1, 1}, with_zero{0, 1, 0, 1};
    CHECK(*joint_moment(n, 2, one).exact == 1);
    CHECK(*joint_moment(n, 2, two).exact == Rational(4 * n, n + 3));
    CHECK(*joint_moment(n, 2, cross).exact == Rational(n, n + 3));
    CHECK(*joint_moment(n, 2, with_zero).exact == Rational(n, n + 3));
  }
  const std::vector<int> none{0, 0};
  CHECK(joint_moment(10, 2, none).value == 1.0);
  const std::vector<int> a{2, 1}, b{1, 2};
  CHECK(*joint_moment(12, 2, a).exact == *joint_moment(12, 2, b).exact);
  const std::vector<int> big{3, 3};
  CHECK_THROWS_AS(joint_moment(6, 2, big), RegimeError);

  // Reusing a solved law gives the same numbers.
  const auto st = stationary_linear(build_transition_matrix(12, 2, 3, Arithmetic::Exact));
  CHECK(*joint_moment(st, 12, a).exact == *joint_moment(12, 2, a).exact);
}

TEST_CASE("limit coefficients") {
  CHECK(K_closed_form(Configuration({1, 1, 1}), 2) == 1);
  CHECK(K_closed_form(Configuration({2}), 2) == 4);
  CHECK(K_closed_form(Configuration({3, 2}), 2) == 24 * 4);
  CHECK(K_closed_form(Configuration({2}), 3) == 6);
  const auto report = verify_K_recursion(8);
  CHECK(report.ok());
  CHECK(report.checks.size() == 58);
  for (const auto& [c, v] : solve_K_recursion(8)) CHECK(v == K_closed_form(c, 2));
}
