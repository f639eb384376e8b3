#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "moran/configuration.hpp"
#include "moran/rational.hpp"

namespace moran {

enum class Arithmetic {
  /// Exact rationals inside exact_regime(), floating otherwise.
  Auto,
  Exact,
  Floating,
};

/// Rational transition matrices are built by default for k <= 8 and N <= 200.
bool exact_regime(std::size_t population_size, int order);

/// The k-lineage chain lumped onto configurations (DistinctTuple model).
///
/// One step: a uniformly random ordered tuple of m+1 distinct individuals is
/// drawn (m parents, one child); each lineage sitting on the child moves to
/// one of the m parents, chosen uniformly and independently. All other
/// lineages stay. Entries are computed by enumerating the child's occupancy,
/// which occupied sites are among the parents, and the multinomial split of
/// the child's lineages over the parent slots.
struct LumpedChain {
  std::size_t population_size = 0;
  std::size_t parent_count = 2;
  int order = 0;
  std::vector<Configuration> states;
  /// Row-stochastic, exact. Empty when built with floating arithmetic.
  std::vector<std::vector<Rational>> exact;
  /// Floating mirror (always present).
  std::vector<std::vector<double>> matrix;

  bool has_exact() const { return !exact.empty(); }
  /// Throws std::out_of_range if the configuration is not a state of this chain.
  std::size_t index_of(const Configuration& c) const;
};

/// Requires N > k, m >= 2 and N >= m + 1; throws RegimeError otherwise.
LumpedChain build_transition_matrix(std::size_t population_size, std::size_t parent_count,
                                    int order, Arithmetic arithmetic = Arithmetic::Auto);

/// Every state reaches every other through positive entries.
bool is_irreducible(const LumpedChain& chain);

enum class StationaryMethod { LinearSolve, TreeTheorem, PowerIteration };

std::string_view to_string(StationaryMethod method);

struct StationaryResult {
  StationaryMethod method = StationaryMethod::LinearSolve;
  std::vector<Configuration> states;
  std::vector<double> nu;
  /// Present when the chain carried exact entries (linear and tree methods).
  std::optional<std::vector<Rational>> exact;
  /// max_j |(nu P)_j - nu_j| in floating arithmetic.
  double residual = 0.0;

  /// nu({x}); zero for configurations outside the state space.
  double probability(const Configuration& c) const;
  std::optional<Rational> exact_probability(const Configuration& c) const;
};

/// Unique solution of nu P = nu, sum nu = 1. Throws StructuralError if the
/// chain is reducible.
StationaryResult stationary_linear(const LumpedChain& chain);

/// Markov-chain tree theorem: nu({x}) proportional to the total weight of
/// spanning in-trees rooted at {x}, evaluated as the principal minor
/// det((I - P) without row/column x). Throws CapabilityError above max_states.
StationaryResult stationary_tree_theorem(const LumpedChain& chain, std::size_t max_states = 100);

/// Floating power iteration, accelerated by repeated squaring of P.
StationaryResult stationary_power(const LumpedChain& chain);

/// Per-vector stationary probability for any y in I^k with configuration c.
/// nu({x}) is spread evenly over the N!/(N - l)! site assignments times the
/// k!/(prod k_i! prod_r mult_r!) ways to label the lineages, mult_r being the
/// number of parts equal to r.
Rational lift_to_vector(const Rational& nu_config, const Configuration& c,
                        std::size_t population_size);
double lift_to_vector(double nu_config, const Configuration& c, std::size_t population_size);

struct MomentValue {
  double value = 0.0;
  std::optional<Rational> exact;
};

/// E[M_inf(1)^{k_1} ... M_inf(l)^{k_l}] = N^k nu(1,..,1,2,..,2,...) at finite N.
/// Zero exponents are dropped. Throws RegimeError if N <= k.
MomentValue joint_moment(std::size_t population_size, std::size_t parent_count,
                         std::span<const int> exponents,
                         Arithmetic arithmetic = Arithmetic::Auto);

/// Same, reusing a stationary law already solved for order k = sum of exponents.
MomentValue joint_moment(const StationaryResult& stationary, std::size_t population_size,
                         std::span<const int> exponents);

/// prod_i m^{k_i - 1} k_i!
Rational K_closed_form(const Configuration& c, std::size_t parent_count);

struct RecursionCheck {
  Configuration config;
  Rational lhs;
  Rational rhs;
  bool holds = false;
};

struct RecursionReport {
  std::vector<RecursionCheck> checks;
  std::size_t violations = 0;
  bool ok() const { return violations == 0 && !checks.empty(); }
};

/// Checks, for every partition of every k <= k_max other than {1,...,1},
///   K * [l - 2 sum_mu 2^-k_mu] = 2 sum_mu sum_{i=1}^{k_mu - 1} 2^-i C(k_mu, i) K({.., k_mu - i, .., i})
/// with K the biparental closed form, in exact arithmetic.
RecursionReport verify_K_recursion(int k_max);

/// The unique solution of the same recursion normalised by K({1,...,1}) = 1,
/// computed size by size from l = k downwards.
std::map<Configuration, Rational> solve_K_recursion(int k_max);

}  // namespace moran
