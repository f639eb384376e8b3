// Acceptance criteria AC1..AC9. One PASS/FAIL line per criterion.
// Usage: acceptance [AC1 AC2 ...]   (no argument runs all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "moran/asymptotics.hpp"
#include "moran/config_chain.hpp"
#include "moran/limit_law.hpp"
#include "moran/monte_carlo.hpp"
#include "moran/stats.hpp"
#include "moran/vector_chain.hpp"

using namespace moran;

namespace {

constexpr std::uint64_t kSeed = 20261016;

struct Outcome {
  bool passed = false;
  std::string detail;
};

// Partitions as non-increasing vectors, built independently of the library.
void partitions_rec(int left, int max_part, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (left == 0) {
    out.push_back(cur);
    return;
  }
  for (int p = std::min(left, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(left - p, p, cur, out);
    cur.pop_back();
  }
}

Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

Rational binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

Rational pow_half(int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r /= 2;
  return r;
}

// prod 2^{k_i - 1} k_i!, order-independent.
Rational k_oracle(const std::vector<int>& parts) {
  Rational r = 1;
  for (int k : parts) r *= factorial(k) / pow_half(k - 1);
  return r;
}

Outcome ac1() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t total = 0, checked = 0, holds = 0, library_agrees = 0;
  for (int k = 1; k <= 8; ++k) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    partitions_rec(k, k, cur, parts);
    for (const auto& x : parts) {
      ++total;
      library_agrees += K_closed_form(Configuration(x), 2) == k_oracle(x);
      if (static_cast<int>(x.size()) == k) continue;  // {1,...,1}: both sides vanish
      ++checked;
      const int l = static_cast<int>(x.size());
      Rational bracket = l;
      for (int kmu : x) bracket -= 2 * pow_half(kmu);
      Rational rhs = 0;
      for (int mu = 0; mu < l; ++mu) {
        for (int i = 1; i <= x[mu] - 1; ++i) {
          auto y = x;
          y[mu] -= i;
          y.push_back(i);
          rhs += 2 * pow_half(i) * binomial(x[mu], i) * K_closed_form(Configuration(y), 2);
        }
      }
      holds += K_closed_form(Configuration(x), 2) * bracket == rhs;
    }
  }
  const auto lib = verify_K_recursion(8);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << total << " partitions of k<=8, recursion holds on " << holds << "/" << checked
    << " (library check: " << lib.violations << " violations), closed form agrees on "
    << library_agrees << "/" << total << ", " << seconds << " s";
  return {holds == checked && library_agrees == total && lib.ok() && total == 66 && seconds < 1.0,
          d.str()};
}

Outcome ac2() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream d;
  for (long n : {3L, 5L, 10L, 50L, 100L}) {
    // Two-state balance: merge 2/(N(N-1)), split 1/(2N).
    const Rational merge = Rational(2, n * (n - 1));
    const Rational split = Rational(1, 2 * n);
    const Rational oracle = merge / (merge + split);
    const auto st = stationary_linear(build_transition_matrix(n, 2, 2, Arithmetic::Exact));
    const auto nu2 = *st.exact_probability(Configuration({2}));
    const auto nu11 = *st.exact_probability(Configuration({1, 1}));
    const bool good = nu2 == Rational(4, n + 3) && nu11 == Rational(n - 1, n + 3) && nu2 == oracle;
    ok = ok && good;
    d << "N=" << n << " nu({2})=" << to_string(nu2) << (good ? "" : "(!)") << "; ";
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  d << seconds << " s";
  return {ok && seconds < 1.0, d.str()};
}

Outcome ac3() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  std::ostringstream d;
  for (long n : {3L, 5L, 8L, 10L, 16L, 32L, 50L, 64L, 100L, 128L}) {
    const std::vector<int> two{2};
    const auto m2 = *joint_moment(n, 2, two, Arithmetic::Exact).exact;
    Rational err = m2 - 4;
    if (err < 0) err = -err;
    ok = ok && err == Rational(12, n + 3);
  }
  d << "|E[M^2]-4| = 12/(N+3) exactly: " << (ok ? "yes" : "no") << "; ";
  const std::vector<std::size_t> grid{8, 16, 32, 64, 128};
  for (int k : {3, 4}) {
    const double limit = to_double(factorial(k) / pow_half(k - 1));
    std::vector<double> errors;
    for (auto n : grid) {
      const std::vector<int> e{k};
      errors.push_back(std::abs(joint_moment(n, 2, e, Arithmetic::Exact).value - limit));
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < errors.size(); ++i) decreasing = decreasing && errors[i] < errors[i - 1];
    const auto fit = fit_decay(grid, errors);
    const bool rate = std::abs(fit.exponent - 1.0) <= 0.05;
    ok = ok && decreasing && rate;
    d << "k=" << k << " limit " << limit << " error N=8.." << grid.back() << ": " << errors.front()
      << " -> " << errors.back() << ", rate N^-" << fit.exponent << "; ";
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  d << seconds << " s";
  return {ok && seconds < 10.0, d.str()};
}

Outcome ac4() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  bool exact_equal = true;
  for (std::size_t n : {6, 10, 20}) {
    for (int k = 1; k <= 4; ++k) {
      for (auto arith : {Arithmetic::Exact, Arithmetic::Floating}) {
        const auto chain = build_transition_matrix(n, 2, k, arith);
        const auto lin = stationary_linear(chain);
        const auto tree = stationary_tree_theorem(chain);
        for (std::size_t i = 0; i < lin.nu.size(); ++i) {
          worst = std::max(worst, std::abs(lin.nu[i] - tree.nu[i]));
        }
        if (lin.exact) exact_equal = exact_equal && *lin.exact == *tree.exact;
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << "k<=4, N in {6,10,20}: max |tree - linear| = " << worst << " (floating and exact), exact "
    << (exact_equal ? "identical" : "differ") << ", " << seconds << " s";
  return {worst <= 1e-10 && exact_equal && seconds < 10.0, d.str()};
}

Outcome ac5() {
  const auto start = std::chrono::steady_clock::now();
  bool ok = true;
  double within = 0.0, aggregate = 0.0;
  const std::pair<int, std::size_t> cases[] = {{2, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}};
  for (auto [k, n] : cases) {
    const auto c = check_lumping(n, 2, k, 1e-12);
    ok = ok && c.max_within_configuration <= 1e-12 && c.max_aggregate_error <= 1e-12;
    within = std::max(within, c.max_within_configuration);
    aggregate = std::max(aggregate, c.max_aggregate_error);
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << "(k=2, N=3..5), (k=3, N=4..5): within-configuration spread " << within
    << ", aggregate error " << aggregate << ", " << seconds << " s";
  return {ok && seconds < 60.0, d.str()};
}

Outcome ac6() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::size_t> grid{16, 32, 64, 128, 256};
  std::size_t rows = 0, failures = 0;
  double worst = 0.0;
  for (int k = 2; k <= 5; ++k) {
    const auto r = check_order_classes(k, 2, grid, 0.05);
    rows += r.rows.size();
    failures += r.failures;
    for (const auto& row : r.rows) {
      worst = std::max(worst, std::abs(row.fit.exponent - row.predicted));
      if (row.predicted_constant) {
        worst = std::max(worst, std::abs(row.fit.constant / *row.predicted_constant - 1.0));
      }
    }
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << "k=2..5, N=16..256: " << rows << " transitions, " << failures
    << " outside 0.05, largest deviation " << worst << ", " << seconds << " s";
  return {failures == 0 && rows > 0 && seconds < 30.0, d.str()};
}

Outcome ac7() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentSpec spec;
  spec.model.population_size = 100;
  spec.model.parent_count = 2;
  spec.model.seed = kSeed;
  spec.replicates = 10000;
  spec.tracked = 2;
  const auto samples = run_experiment(spec);
  const double n = 100.0;
  const double ref_m2 = 4 * n / (n + 3);
  const double ref_cross = n / (n + 3);
  const std::vector<int> two{2}, cross{1, 1};
  const bool exact_refs = std::abs(joint_moment(100, 2, two).value - ref_m2) < 1e-12 &&
                          std::abs(joint_moment(100, 2, cross).value - ref_cross) < 1e-12;

  const auto m1 = samples.column(0);
  const auto m2 = samples.column(1);
  std::vector<double> sq(m1.size()), prod(m1.size());
  std::size_t zeros = 0;
  for (std::size_t r = 0; r < m1.size(); ++r) {
    sq[r] = m1[r] * m1[r];
    prod[r] = m1[r] * m2[r];
    zeros += m1[r] == 0.0;
  }
  const auto mean = stats::mean_interval(m1, 0.99, 1.0);
  const auto second = stats::mean_interval(sq, 0.99, ref_m2);
  const auto mixed = stats::mean_interval(prod, 0.99, ref_cross);
  const double zero_frac = static_cast<double>(zeros) / m1.size();
  const double ks = ks_distance(m1, MixtureLaw(2));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const bool ok = exact_refs && mean.covers(1.0) && second.covers(ref_m2) && mixed.covers(ref_cross) &&
                  zero_frac >= 0.48 && zero_frac <= 0.52 && ks < 0.05 && samples.nonconverged() == 0 &&
                  seconds < 600.0;
  std::ostringstream d;
  d << "seed " << kSeed << ": E[M1]=" << mean.mean << " [" << mean.lower << "," << mean.upper
    << "]; E[M1^2]=" << second.mean << " [" << second.lower << "," << second.upper << "] vs "
    << ref_m2 << "; E[M1M2]=" << mixed.mean << " [" << mixed.lower << "," << mixed.upper << "] vs "
    << ref_cross << "; zero fraction " << zero_frac << "; KS " << ks << "; non-converged "
    << samples.nonconverged() << "; " << seconds << " s";
  return {ok, d.str()};
}

Outcome ac8() {
  const auto start = std::chrono::steady_clock::now();
  ExperimentSpec spec;
  spec.model.population_size = 100;
  spec.model.seed = kSeed;
  spec.replicates = 10000;
  spec.tracked = 2;
  spec.checkpoints = {100, 10000, 100000};
  const auto m = run_martingale(spec);
  bool ok = true;
  std::ostringstream d;
  for (std::size_t c = 0; c < m.checkpoints.size(); ++c) {
    const auto a = m.column(c, 0);
    const auto b = m.column(c, 1);
    const auto mean = stats::mean_interval(a, 0.999, 1.0);
    const auto ks = stats::ks_two_sample(a, b);
    const bool good = mean.covers(1.0) && ks.p_value > 0.001;
    ok = ok && good;
    d << "n=" << m.checkpoints[c] << ": mean " << mean.mean << " [" << mean.lower << ","
      << mean.upper << "], KS p=" << ks.p_value << (good ? "" : "(!)") << "; ";
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  d << seconds << " s";
  return {ok, d.str()};
}

Outcome ac9() {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream d;
  const std::vector<std::size_t> grid{16, 32, 64, 128};
  const double target = 6.0;  // 3^(2-1) 2!
  std::vector<double> values;
  for (auto n : grid) {
    const std::vector<int> two{2};
    values.push_back(joint_moment(n, 3, two, Arithmetic::Exact).value);
  }
  // Richardson extrapolation of an O(1/N) sequence.
  const double extrapolated = 2 * values[3] - values[2];
  const bool trend = std::abs(extrapolated - target) / target < 0.02 &&
                     std::abs(values[3] - target) < std::abs(values[0] - target);
  d << "m=3 exact E[M^2] at N=16..128: ";
  for (double v : values) d << v << " ";
  d << "-> extrapolated " << extrapolated << " vs " << target << "; ";

  ExperimentSpec spec;
  spec.model.population_size = 100;
  spec.model.parent_count = 3;
  spec.model.seed = kSeed;
  spec.replicates = 10000;
  spec.tracked = 2;
  const auto samples = run_experiment(spec);
  std::size_t zeros = 0;
  const auto col = samples.column(0);
  for (double v : col) zeros += v == 0.0;
  const double zero_frac = static_cast<double>(zeros) / col.size();
  const bool atom = std::abs(zero_frac - 2.0 / 3.0) <= 0.03;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  d << "Monte Carlo N=100 zero fraction " << zero_frac << " vs [0.6367,0.6967]; " << seconds << " s";
  return {trend && atom, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::function<Outcome()>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}};
  std::vector<std::string> selected;
  for (int i = 1; i < argc; ++i) selected.emplace_back(argv[i]);
  if (selected.empty()) {
    for (const auto& [name, fn] : criteria) selected.push_back(name);
  }
  std::cout.precision(6);
  int failed = 0;
  for (const auto& name : selected) {
    const auto it = criteria.find(name);
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << name << '\n';
      return 1;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.passed;
    std::cout << (o.passed ? "PASS " : "FAIL ") << name << "  " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
