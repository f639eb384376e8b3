#include "moran/config_chain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "moran/error.hpp"
#include "moran/linalg.hpp"

namespace moran {

namespace {

template <class T>
T make_ratio(long long p, long long q) {
  if constexpr (std::is_floating_point_v<T>) {
    return static_cast<T>(p) / static_cast<T>(q);
  } else {
    return T(p, q);
  }
}

// C(n, r) as a scalar; zero when r > n.
template <class T>
T binomial(long long n, long long r) {
  if (r < 0 || r > n) return T(0);
  T out = 1;
  for (long long i = 1; i <= r; ++i) out = out * make_ratio<T>(n - r + i, i);
  return out;
}

long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Calls visit(a) for every composition a of `total` into `slots` nonnegative parts.
template <class F>
void for_each_composition(int total, std::size_t slots, F&& visit) {
  std::vector<int> a(slots, 0);
  auto rec = [&](auto&& self, std::size_t slot, int remaining) -> void {
    if (slot + 1 == slots) {
      a[slot] = remaining;
      visit(a);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      a[slot] = v;
      self(self, slot + 1, remaining - v);
    }
  };
  rec(rec, 0, total);
}

template <class T>
std::vector<std::vector<T>> transition_rows(const std::vector<Configuration>& states,
                                            std::size_t n_sites, std::size_t m) {
  std::map<Configuration, std::size_t> index;
  for (std::size_t i = 0; i < states.size(); ++i) index.emplace(states[i], i);

  const auto N = static_cast<long long>(n_sites);
  const auto M = static_cast<long long>(m);
  std::vector<std::vector<T>> rows(states.size(), std::vector<T>(states.size(), T(0)));
  const T parent_tuples = binomial<T>(N - 1, M);

  for (std::size_t s = 0; s < states.size(); ++s) {
    const auto& parts = states[s].parts();
    const auto l = static_cast<long long>(parts.size());
    auto& row = rows[s];

    // Child on an unoccupied site: nothing moves.
    row[s] += make_ratio<T>(N - l, N);

    for (std::size_t child = 0; child < parts.size(); ++child) {
      const int moving = parts[child];
      std::vector<int> others;
      for (std::size_t q = 0; q < parts.size(); ++q)
        if (q != child) others.push_back(parts[q]);

      // Each lineage picks one of the m parent slots: m^-c per split.
      T split_norm = 1;
      for (int i = 0; i < moving; ++i) split_norm = split_norm * make_ratio<T>(1, M);

      const std::size_t subsets = std::size_t{1} << others.size();
      for (std::size_t mask = 0; mask < subsets; ++mask) {
        std::vector<std::size_t> occupied_parents;
        for (std::size_t q = 0; q < others.size(); ++q)
          if (mask & (std::size_t{1} << q)) occupied_parents.push_back(q);
        const auto j = static_cast<long long>(occupied_parents.size());
        if (j > M) continue;
        // Parent set = these occupied sites plus m - j of the N - l free sites.
        const T set_weight =
            binomial<T>(N - l, M - j) / parent_tuples * make_ratio<T>(1, N);
        if (set_weight == 0) continue;

        for_each_composition(moving, m, [&](const std::vector<int>& a) {
          long long coeff = factorial(moving);
          for (int v : a) coeff /= factorial(v);
          std::vector<int> next;
          next.reserve(others.size() + m);
          for (std::size_t q = 0, slot = 0; q < others.size(); ++q) {
            if (slot < occupied_parents.size() && occupied_parents[slot] == q) {
              next.push_back(others[q] + a[slot]);
              ++slot;
            } else {
              next.push_back(others[q]);
            }
          }
          for (std::size_t slot = occupied_parents.size(); slot < m; ++slot)
            if (a[slot] > 0) next.push_back(a[slot]);
          const auto dest = index.at(Configuration(std::move(next)));
          row[dest] += set_weight * split_norm * T(coeff);
        });
      }
    }
  }
  return rows;
}

template <class T>
std::vector<std::vector<double>> to_double_matrix(const std::vector<std::vector<T>>& a) {
  std::vector<std::vector<double>> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i].reserve(a[i].size());
    for (const auto& v : a[i]) {
      if constexpr (std::is_floating_point_v<T>) {
        out[i].push_back(v);
      } else {
        out[i].push_back(to_double(v));
      }
    }
  }
  return out;
}

double residual(const std::vector<std::vector<double>>& p, const std::vector<double>& nu) {
  double worst = 0.0;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) acc += nu[i] * p[i][j];
    worst = std::max(worst, std::abs(acc - nu[j]));
  }
  return worst;
}

template <class T>
std::optional<std::vector<T>> solve_balance(const std::vector<std::vector<T>>& p) {
  const std::size_t n = p.size();
  // Rows 0..n-2 of (P - I)^T nu = 0, last row replaced by sum nu = 1.
  linalg::Matrix<T> a(n, std::vector<T>(n, T(0)));
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = p[j][i] - (i == j ? T(1) : T(0));
  for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = T(1);
  std::vector<T> b(n, T(0));
  b[n - 1] = T(1);
  return linalg::solve(std::move(a), std::move(b));
}

template <class T>
std::vector<T> tree_weights(const std::vector<std::vector<T>>& p) {
  const std::size_t n = p.size();
  std::vector<T> weights(n, T(0));
  if (n == 1) {
    weights[0] = T(1);
    return weights;
  }
  for (std::size_t root = 0; root < n; ++root) {
    linalg::Matrix<T> minor;
    minor.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == root) continue;
      std::vector<T> r;
      r.reserve(n - 1);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == root) continue;
        r.push_back((i == j ? T(1) : T(0)) - p[i][j]);
      }
      minor.push_back(std::move(r));
    }
    weights[root] = linalg::determinant(std::move(minor));
  }
  return weights;
}

StationaryResult finish(StationaryMethod method, const LumpedChain& chain, std::vector<double> nu,
                        std::optional<std::vector<Rational>> exact) {
  StationaryResult r;
  r.method = method;
  r.states = chain.states;
  r.residual = residual(chain.matrix, nu);
  r.nu = std::move(nu);
  r.exact = std::move(exact);
  return r;
}

}  // namespace

bool exact_regime(std::size_t population_size, int order) {
  return order <= 8 && population_size <= 200;
}

std::size_t LumpedChain::index_of(const Configuration& c) const {
  auto it = std::find(states.begin(), states.end(), c);
  if (it == states.end()) throw std::out_of_range("configuration " + c.label() + " not in chain");
  return static_cast<std::size_t>(it - states.begin());
}

LumpedChain build_transition_matrix(std::size_t population_size, std::size_t parent_count,
                                    int order, Arithmetic arithmetic) {
  if (order < 1) throw std::invalid_argument("order k must be at least 1");
  if (parent_count < 2) throw ConfigError("parent count must be at least 2");
  if (population_size <= static_cast<std::size_t>(order)) {
    throw RegimeError("exact chain needs N > k (N=" + std::to_string(population_size) +
                      ", k=" + std::to_string(order) + ")");
  }
  if (population_size < parent_count + 1) {
    throw RegimeError("exact chain needs N >= m + 1 (N=" + std::to_string(population_size) +
                      ", m=" + std::to_string(parent_count) + ")");
  }
  LumpedChain chain;
  chain.population_size = population_size;
  chain.parent_count = parent_count;
  chain.order = order;
  chain.states = partitions(order);

  const bool exact = arithmetic == Arithmetic::Exact ||
                     (arithmetic == Arithmetic::Auto && exact_regime(population_size, order));
  if (exact) {
    chain.exact = transition_rows<Rational>(chain.states, population_size, parent_count);
    chain.matrix = to_double_matrix(chain.exact);
  } else {
    chain.matrix = to_double_matrix(
        transition_rows<double>(chain.states, population_size, parent_count));
  }
  return chain;
}

bool is_irreducible(const LumpedChain& chain) {
  const std::size_t n = chain.states.size();
  auto reach_all = [&](bool forward) {
    std::vector<char> seen(n, 0);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
      const auto u = queue.front();
      queue.pop_front();
      for (std::size_t v = 0; v < n; ++v) {
        const double w = forward ? chain.matrix[u][v] : chain.matrix[v][u];
        if (w > 0.0 && !seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach_all(true) && reach_all(false);
}

std::string_view to_string(StationaryMethod method) {
  switch (method) {
    case StationaryMethod::LinearSolve:
      return "linear-solve";
    case StationaryMethod::TreeTheorem:
      return "tree-theorem";
    case StationaryMethod::PowerIteration:
      return "power-iteration";
  }
  return "unknown";
}

double StationaryResult::probability(const Configuration& c) const {
  auto it = std::find(states.begin(), states.end(), c);
  return it == states.end() ? 0.0 : nu[static_cast<std::size_t>(it - states.begin())];
}

std::optional<Rational> StationaryResult::exact_probability(const Configuration& c) const {
  if (!exact) return std::nullopt;
  auto it = std::find(states.begin(), states.end(), c);
  if (it == states.end()) return Rational(0);
  return (*exact)[static_cast<std::size_t>(it - states.begin())];
}

StationaryResult stationary_linear(const LumpedChain& chain) {
  if (!is_irreducible(chain)) throw StructuralError("configuration chain is reducible");
  if (chain.has_exact()) {
    auto solved = solve_balance(chain.exact);
    if (!solved) throw StructuralError("balance equations are singular");
    std::vector<double> nu;
    for (const auto& v : *solved) nu.push_back(to_double(v));
    return finish(StationaryMethod::LinearSolve, chain, std::move(nu), std::move(solved));
  }
  auto solved = solve_balance(chain.matrix);
  if (!solved) throw StructuralError("balance equations are singular");
  return finish(StationaryMethod::LinearSolve, chain, std::move(*solved), std::nullopt);
}

StationaryResult stationary_tree_theorem(const LumpedChain& chain, std::size_t max_states) {
  if (chain.states.size() > max_states) {
    throw CapabilityError("tree theorem limited to " + std::to_string(max_states) +
                          " states, chain has " + std::to_string(chain.states.size()));
  }
  if (!is_irreducible(chain)) throw StructuralError("configuration chain is reducible");
  if (chain.has_exact()) {
    auto w = tree_weights(chain.exact);
    Rational total = 0;
    for (const auto& v : w) total += v;
    std::vector<double> nu;
    for (auto& v : w) {
      v /= total;
      nu.push_back(to_double(v));
    }
    return finish(StationaryMethod::TreeTheorem, chain, std::move(nu), std::move(w));
  }
  auto w = tree_weights(chain.matrix);
  double total = 0.0;
  for (double v : w) total += v;
  for (double& v : w) v /= total;
  return finish(StationaryMethod::TreeTheorem, chain, std::move(w), std::nullopt);
}

StationaryResult stationary_power(const LumpedChain& chain) {
  if (!is_irreducible(chain)) throw StructuralError("configuration chain is reducible");
  const std::size_t n = chain.states.size();
  auto p = chain.matrix;
  auto multiply = [n](const std::vector<std::vector<double>>& a,
                      const std::vector<std::vector<double>>& b) {
    std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t q = 0; q < n; ++q)
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][q] * b[q][j];
    return c;
  };
  auto rows_agree = [&](const std::vector<std::vector<double>>& a) {
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (std::abs(a[i][j] - a[0][j]) > 1e-15) return false;
    return true;
  };
  for (int squarings = 0; squarings < 200 && !rows_agree(p); ++squarings) {
    p = multiply(p, p);
    for (auto& row : p) {
      double s = 0.0;
      for (double v : row) s += v;
      for (double& v : row) v /= s;
    }
  }
  std::vector<double> nu(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) nu[j] += p[i][j];
    nu[j] /= static_cast<double>(n);
  }
  // Plain iterations to polish.
  for (int it = 0; it < 64; ++it) {
    std::vector<double> next(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) next[j] += nu[i] * chain.matrix[i][j];
    double s = 0.0;
    for (double v : next) s += v;
    for (double& v : next) v /= s;
    nu = std::move(next);
  }
  return finish(StationaryMethod::PowerIteration, chain, std::move(nu), std::nullopt);
}

namespace {

// #{y in I^k : {y} = c} = N!/(N - l)! * k! / (prod_i k_i! * prod_r mult_r!),
// where mult_r counts parts equal to r. Returns the second factor.
Rational label_arrangements(const Configuration& c) {
  Rational out = 1;
  for (int i = 2; i <= c.order(); ++i) out *= i;
  const auto& parts = c.parts();
  for (std::size_t q = 0; q < parts.size();) {
    std::size_t run = q;
    while (run < parts.size() && parts[run] == parts[q]) ++run;
    for (std::size_t r = q; r < run; ++r)
      for (int i = 2; i <= parts[r]; ++i) out /= i;
    for (std::size_t i = 2; i <= run - q; ++i) out /= static_cast<long>(i);
    q = run;
  }
  return out;
}

}  // namespace

Rational lift_to_vector(const Rational& nu_config, const Configuration& c,
                        std::size_t population_size) {
  if (c.size() > population_size) throw std::invalid_argument("configuration larger than N");
  Rational count = label_arrangements(c);
  for (std::size_t i = 0; i < c.size(); ++i) count *= Rational(population_size - i);
  return nu_config / count;
}

double lift_to_vector(double nu_config, const Configuration& c, std::size_t population_size) {
  if (c.size() > population_size) throw std::invalid_argument("configuration larger than N");
  double count = to_double(label_arrangements(c));
  for (std::size_t i = 0; i < c.size(); ++i) count *= static_cast<double>(population_size - i);
  return nu_config / count;
}

namespace {

std::optional<Configuration> exponent_configuration(std::span<const int> exponents) {
  std::vector<int> parts;
  for (int e : exponents) {
    if (e < 0) throw std::invalid_argument("moment exponents must be nonnegative");
    if (e > 0) parts.push_back(e);
  }
  if (parts.empty()) return std::nullopt;
  return Configuration(std::move(parts));
}

}  // namespace

MomentValue joint_moment(const StationaryResult& stationary, std::size_t population_size,
                         std::span<const int> exponents) {
  auto config = exponent_configuration(exponents);
  if (!config) return {1.0, Rational(1)};
  const int k = config->order();
  if (stationary.states.empty() || stationary.states.front().order() != k) {
    throw std::invalid_argument("stationary law has a different order than the exponents");
  }
  MomentValue out;
  double scale = 1.0;
  for (int i = 0; i < k; ++i) scale *= static_cast<double>(population_size);
  out.value = scale * lift_to_vector(stationary.probability(*config), *config, population_size);
  if (auto exact = stationary.exact_probability(*config)) {
    Rational nk = 1;
    for (int i = 0; i < k; ++i) nk *= Rational(population_size);
    out.exact = nk * lift_to_vector(*exact, *config, population_size);
    out.value = to_double(*out.exact);
  }
  return out;
}

MomentValue joint_moment(std::size_t population_size, std::size_t parent_count,
                         std::span<const int> exponents, Arithmetic arithmetic) {
  auto config = exponent_configuration(exponents);
  if (!config) return {1.0, Rational(1)};
  const auto chain = build_transition_matrix(population_size, parent_count, config->order(),
                                             arithmetic);
  return joint_moment(stationary_linear(chain), population_size, exponents);
}

Rational K_closed_form(const Configuration& c, std::size_t parent_count) {
  Rational k = 1;
  for (int part : c.parts()) {
    for (int i = 0; i < part - 1; ++i) k *= Rational(parent_count);
    for (int i = 2; i <= part; ++i) k *= Rational(i);
  }
  return k;
}

namespace {

Rational half_power(int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r /= 2;
  return r;
}

// {.., k_mu - i, .., i}
Configuration split_part(const Configuration& c, std::size_t mu, int i) {
  auto parts = c.parts();
  parts[mu] -= i;
  parts.push_back(i);
  return Configuration(std::move(parts));
}

Rational recursion_bracket(const Configuration& c) {
  Rational b = Rational(static_cast<long>(c.size()));
  for (int part : c.parts()) b -= 2 * half_power(part);
  return b;
}

template <class KFn>
Rational recursion_rhs(const Configuration& c, KFn&& k_of) {
  Rational rhs = 0;
  for (std::size_t mu = 0; mu < c.size(); ++mu) {
    const int part = c.parts()[mu];
    for (int i = 1; i <= part - 1; ++i) {
      rhs += half_power(i) * binomial<Rational>(part, i) * k_of(split_part(c, mu, i));
    }
  }
  return 2 * rhs;
}

}  // namespace

RecursionReport verify_K_recursion(int k_max) {
  RecursionReport report;
  for (int k = 1; k <= k_max; ++k) {
    for (const auto& c : partitions(k)) {
      if (c.all_singletons()) continue;
      RecursionCheck check;
      check.config = c;
      check.lhs = K_closed_form(c, 2) * recursion_bracket(c);
      check.rhs = recursion_rhs(c, [](const Configuration& x) { return K_closed_form(x, 2); });
      check.holds = check.lhs == check.rhs;
      if (!check.holds) ++report.violations;
      report.checks.push_back(std::move(check));
    }
  }
  return report;
}

std::map<Configuration, Rational> solve_K_recursion(int k_max) {
  std::map<Configuration, Rational> k_values;
  for (int k = 1; k <= k_max; ++k) {
    auto states = partitions(k);
    // Larger sizes first: the right-hand side only involves size l + 1.
    std::stable_sort(states.begin(), states.end(),
                     [](const Configuration& a, const Configuration& b) {
                       return a.size() > b.size();
                     });
    for (const auto& c : states) {
      if (c.all_singletons()) {
        k_values[c] = 1;
        continue;
      }
      const auto rhs = recursion_rhs(c, [&](const Configuration& x) { return k_values.at(x); });
      k_values[c] = rhs / recursion_bracket(c);
    }
  }
  return k_values;
}

}  // namespace moran
