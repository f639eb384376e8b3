#include "moran/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "moran/config_chain.hpp"
#include "moran/linalg.hpp"

namespace moran {

DecayFit fit_decay(std::span<const std::size_t> grid, std::span<const double> values) {
  if (grid.size() != values.size()) throw std::invalid_argument("grid/value size mismatch");
  if (grid.size() < 4) throw std::invalid_argument("decay fit needs at least 4 grid points");
  DecayFit fit;
  fit.grid.assign(grid.begin(), grid.end());
  fit.values.assign(values.begin(), values.end());
  const auto zeros = std::count(values.begin(), values.end(), 0.0);
  if (zeros == static_cast<std::ptrdiff_t>(values.size())) {
    fit.structurally_zero = true;
    return fit;
  }
  if (zeros > 0 || std::any_of(values.begin(), values.end(), [](double v) { return !(v > 0); })) {
    throw std::invalid_argument("decay fit needs all-positive values");
  }
  // Normal equations for y = c0 + c1 (-log N) + c2 / N + c3 / N^2.
  constexpr std::size_t p = 4;
  linalg::Matrix<double> ata(p, std::vector<double>(p, 0.0));
  std::vector<double> aty(p, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double n = static_cast<double>(grid[i]);
    const double row[p] = {1.0, -std::log(n), 1.0 / n, 1.0 / (n * n)};
    const double y = std::log(values[i]);
    for (std::size_t a = 0; a < p; ++a) {
      aty[a] += row[a] * y;
      for (std::size_t b = 0; b < p; ++b) ata[a][b] += row[a] * row[b];
    }
  }
  auto coeffs = linalg::solve(std::move(ata), std::move(aty));
  if (!coeffs) throw std::invalid_argument("decay fit is degenerate on this grid");
  fit.constant = std::exp((*coeffs)[0]);
  fit.exponent = (*coeffs)[1];
  return fit;
}

std::string_view to_string(TransitionClass c) {
  switch (c) {
    case TransitionClass::Grow:
      return "grow";
    case TransitionClass::Shrink:
      return "shrink";
    case TransitionClass::Reshuffle:
      return "reshuffle";
    case TransitionClass::StayDeficit:
      return "stay-deficit";
  }
  return "unknown";
}

TransitionClass classify(const Configuration& from, const Configuration& to) {
  if (from == to) return TransitionClass::StayDeficit;
  if (to.size() == from.size() + 1) return TransitionClass::Grow;
  if (to.size() + 1 == from.size()) return TransitionClass::Shrink;
  if (to.size() == from.size()) return TransitionClass::Reshuffle;
  throw std::invalid_argument("no single-step transition between " + from.label() + " and " +
                              to.label());
}

namespace {

bool is_pair_merge(const Configuration& from, const Configuration& to) {
  const auto& parts = from.parts();
  for (std::size_t a = 0; a < parts.size(); ++a) {
    for (std::size_t b = a + 1; b < parts.size(); ++b) {
      std::vector<int> merged;
      for (std::size_t q = 0; q < parts.size(); ++q)
        if (q != a && q != b) merged.push_back(parts[q]);
      merged.push_back(parts[a] + parts[b]);
      if (Configuration(std::move(merged)) == to) return true;
    }
  }
  return false;
}

double leaving_probability(const LumpedChain& chain, std::size_t i) {
  if (chain.has_exact()) {
    Rational out = 0;
    for (std::size_t j = 0; j < chain.states.size(); ++j)
      if (j != i) out += chain.exact[i][j];
    return to_double(out);
  }
  double out = 0.0;
  for (std::size_t j = 0; j < chain.states.size(); ++j)
    if (j != i) out += chain.matrix[i][j];
  return out;
}

double transition_value(const LumpedChain& chain, std::size_t i, std::size_t j) {
  if (i == j) return leaving_probability(chain, i);
  return chain.has_exact() ? to_double(chain.exact[i][j]) : chain.matrix[i][j];
}

}  // namespace

double predicted_exponent(const Configuration& from, const Configuration& to) {
  switch (classify(from, to)) {
    case TransitionClass::Grow:
      return 1.0;
    case TransitionClass::Reshuffle:
      return 2.0;
    case TransitionClass::Shrink:
      return is_pair_merge(from, to) ? 2.0 : 3.0;
    case TransitionClass::StayDeficit:
      return from.all_singletons() ? 2.0 : 1.0;
  }
  return 0.0;
}

DecayFit asymptotic_order_check(const Configuration& from, const Configuration& to,
                                std::size_t parent_count, std::span<const std::size_t> grid) {
  if (from.order() != to.order()) throw std::invalid_argument("configurations differ in order");
  std::vector<double> values;
  for (auto n : grid) {
    const auto chain = build_transition_matrix(n, parent_count, from.order(), Arithmetic::Exact);
    values.push_back(transition_value(chain, chain.index_of(from), chain.index_of(to)));
  }
  return fit_decay(grid, values);
}

OrderCheckReport check_order_classes(int order, std::size_t parent_count,
                                     std::span<const std::size_t> grid, double tolerance) {
  std::vector<LumpedChain> chains;
  for (auto n : grid) chains.push_back(build_transition_matrix(n, parent_count, order, Arithmetic::Exact));
  const auto& states = chains.front().states;

  OrderCheckReport report;
  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < states.size(); ++j) {
      const auto& from = states[i];
      const auto& to = states[j];
      const auto size_gap = static_cast<long>(from.size()) - static_cast<long>(to.size());
      if (size_gap > 1 || size_gap < -1) continue;
      std::vector<double> values;
      for (const auto& chain : chains) values.push_back(transition_value(chain, i, j));
      auto fit = fit_decay(grid, values);
      if (fit.structurally_zero) continue;

      OrderCheckRow row;
      row.from = from;
      row.to = to;
      row.kind = classify(from, to);
      row.predicted = predicted_exponent(from, to);
      if (row.kind == TransitionClass::StayDeficit && from.all_singletons()) {
        row.predicted_constant = static_cast<double>(order) * (order - 1);
      }
      row.fit = std::move(fit);
      row.passed = std::abs(row.fit.exponent - row.predicted) <= tolerance;
      if (row.predicted_constant) {
        row.passed = row.passed && std::abs(row.fit.constant / *row.predicted_constant - 1.0) <=
                                       tolerance;
      }
      if (!row.passed) ++report.failures;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

ScalingReport nu_scaling_check(std::span<const std::size_t> grid, int order,
                               std::size_t parent_count) {
  ScalingReport report;
  report.grid.assign(grid.begin(), grid.end());
  std::vector<StationaryResult> laws;
  for (auto n : grid) {
    laws.push_back(stationary_linear(build_transition_matrix(n, parent_count, order)));
  }
  for (const auto& config : laws.front().states) {
    ScalingRow row;
    row.config = config;
    row.limit = K_closed_form(config, parent_count);
    const double limit = to_double(row.limit);
    row.positive_finite = true;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      const double n = static_cast<double>(grid[g]);
      const double nu = laws[g].probability(config);
      const double scaled = std::pow(n, order - static_cast<int>(config.size())) * nu;
      const double vec = std::pow(n, order) * lift_to_vector(nu, config, grid[g]);
      row.scaled_config.push_back(scaled);
      row.scaled_vector.push_back(vec);
      row.errors.push_back(std::abs(vec - limit));
      row.positive_finite = row.positive_finite && std::isfinite(scaled) && scaled > 0.0;
    }
    row.error_decreasing = true;
    for (std::size_t g = 1; g < grid.size(); ++g) {
      row.error_decreasing = row.error_decreasing && row.errors[g] <= row.errors[g - 1];
    }
    const bool vanishing = std::all_of(row.errors.begin(), row.errors.end(),
                                       [&](double e) { return e <= 1e-12 * std::max(1.0, limit); });
    if (!vanishing && grid.size() >= 4 &&
        std::all_of(row.errors.begin(), row.errors.end(), [](double e) { return e > 0.0; })) {
      row.error_exponent = fit_decay(grid, row.errors).exponent;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace moran
