#include "moran/vector_chain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "moran/config_chain.hpp"
#include "moran/error.hpp"
#include "moran/linalg.hpp"

namespace moran {

std::vector<std::size_t> VectorChain::decode(std::size_t index) const {
  std::vector<std::size_t> x(static_cast<std::size_t>(order));
  for (auto& v : x) {
    v = index % population_size;
    index /= population_size;
  }
  return x;
}

VectorChain build_vector_chain(std::size_t population_size, std::size_t parent_count, int order,
                               std::size_t max_states) {
  if (order < 1) throw std::invalid_argument("order must be at least 1");
  if (population_size < parent_count + 1) throw RegimeError("vector chain needs N >= m + 1");
  std::size_t states = 1;
  for (int i = 0; i < order; ++i) {
    states *= population_size;
    if (states > max_states) {
      throw CapabilityError("vector chain with N^k > " + std::to_string(max_states) + " states");
    }
  }
  VectorChain chain;
  chain.population_size = population_size;
  chain.parent_count = parent_count;
  chain.order = order;
  chain.matrix.assign(states, std::vector<double>(states, 0.0));

  // All ordered tuples (p_1..p_m, child) of distinct individuals.
  std::vector<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> current;
  auto extend = [&](auto&& self) -> void {
    if (current.size() == parent_count + 1) {
      tuples.push_back(current);
      return;
    }
    for (std::size_t v = 0; v < population_size; ++v) {
      if (std::find(current.begin(), current.end(), v) != current.end()) continue;
      current.push_back(v);
      self(self);
      current.pop_back();
    }
  };
  extend(extend);
  const double tuple_prob = 1.0 / static_cast<double>(tuples.size());

  for (std::size_t s = 0; s < states; ++s) {
    const auto x = chain.decode(s);
    for (const auto& tuple : tuples) {
      const std::size_t child = tuple[parent_count];
      std::vector<std::size_t> movers;
      for (std::size_t q = 0; q < x.size(); ++q)
        if (x[q] == child) movers.push_back(q);
      std::size_t choices = 1;
      for (std::size_t q = 0; q < movers.size(); ++q) choices *= parent_count;
      const double each = tuple_prob / static_cast<double>(choices);
      for (std::size_t c = 0; c < choices; ++c) {
        auto y = x;
        std::size_t code = c;
        for (auto q : movers) {
          y[q] = tuple[code % parent_count];
          code /= parent_count;
        }
        std::size_t dest = 0;
        for (std::size_t q = y.size(); q-- > 0;) dest = dest * population_size + y[q];
        chain.matrix[s][dest] += each;
      }
    }
  }
  return chain;
}

std::vector<double> vector_stationary(const VectorChain& chain) {
  const std::size_t n = chain.state_count();
  linalg::Matrix<double> a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = chain.matrix[j][i] - (i == j ? 1.0 : 0.0);
  for (std::size_t j = 0; j < n; ++j) a[n - 1][j] = 1.0;
  std::vector<double> b(n, 0.0);
  b[n - 1] = 1.0;
  auto nu = linalg::solve(std::move(a), std::move(b));
  if (!nu) throw StructuralError("vector chain balance equations are singular");
  return *nu;
}

LumpingCheck check_lumping(std::size_t population_size, std::size_t parent_count, int order,
                           double tolerance) {
  const auto vchain = build_vector_chain(population_size, parent_count, order);
  const auto nu_vec = vector_stationary(vchain);
  const auto lumped = stationary_linear(build_transition_matrix(population_size, parent_count, order));

  std::map<Configuration, std::pair<double, double>> range;  // min, max per configuration
  std::map<Configuration, double> aggregate;
  LumpingCheck check;
  check.population_size = population_size;
  check.order = order;
  for (std::size_t s = 0; s < nu_vec.size(); ++s) {
    const auto x = vchain.decode(s);
    const auto c = configuration_of(x);
    auto [it, inserted] = range.try_emplace(c, nu_vec[s], nu_vec[s]);
    if (!inserted) {
      it->second.first = std::min(it->second.first, nu_vec[s]);
      it->second.second = std::max(it->second.second, nu_vec[s]);
    }
    aggregate[c] += nu_vec[s];
    const double lifted = lift_to_vector(lumped.probability(c), c, population_size);
    check.max_lift_error = std::max(check.max_lift_error, std::abs(nu_vec[s] - lifted));
  }
  for (const auto& [c, r] : range) {
    check.max_within_configuration = std::max(check.max_within_configuration, r.second - r.first);
  }
  for (const auto& c : lumped.states) {
    check.max_aggregate_error =
        std::max(check.max_aggregate_error, std::abs(aggregate[c] - lumped.probability(c)));
  }
  check.passed = check.max_within_configuration <= tolerance &&
                 check.max_aggregate_error <= tolerance && check.max_lift_error <= tolerance;
  return check;
}

}  // namespace moran
