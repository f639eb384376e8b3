#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "moran/configuration.hpp"
#include "moran/rational.hpp"

namespace moran {

/// Fit of log v(N) = log C - alpha log N + b/N + c/N^2 over an N grid.
/// The 1/N and 1/N^2 terms absorb the finite-size corrections of rational
/// transition probabilities, so alpha estimates the decay exponent.
struct DecayFit {
  bool structurally_zero = false;
  double exponent = 0.0;
  double constant = 0.0;
  std::vector<std::size_t> grid;
  std::vector<double> values;
};

/// Needs at least 4 grid points. All-zero values give structurally_zero;
/// a mix of zero and positive values throws std::invalid_argument.
DecayFit fit_decay(std::span<const std::size_t> grid, std::span<const double> values);

enum class TransitionClass {
  /// size l -> l + 1
  Grow,
  /// size l -> l - 1
  Shrink,
  /// size l -> l, different configuration
  Reshuffle,
  /// 1 - P(stay)
  StayDeficit,
};

std::string_view to_string(TransitionClass c);

TransitionClass classify(const Configuration& from, const Configuration& to);

/// Decay exponent the biparental event taxonomy predicts: 1 for Grow; 2 for
/// Reshuffle; for Shrink, 2 when `to` merges two parts of `from` and 3
/// otherwise; for StayDeficit, 2 when every lineage is alone and 1 otherwise.
double predicted_exponent(const Configuration& from, const Configuration& to);

/// Exact transition probability from -> to at each N of the grid (or the
/// leaving probability 1 - P(stay) when from == to), fitted with fit_decay.
DecayFit asymptotic_order_check(const Configuration& from, const Configuration& to,
                                std::size_t parent_count, std::span<const std::size_t> grid);

struct OrderCheckRow {
  Configuration from;
  Configuration to;
  TransitionClass kind = TransitionClass::Grow;
  double predicted = 0.0;
  /// k(k - 1) for the stay deficit of {1,...,1}.
  std::optional<double> predicted_constant;
  DecayFit fit;
  bool passed = false;
};

struct OrderCheckReport {
  std::vector<OrderCheckRow> rows;
  std::size_t failures = 0;
  bool ok() const { return failures == 0 && !rows.empty(); }
};

/// Fits every structurally allowed transition (and every stay deficit) of the
/// order-k chain. A row passes when the fitted exponent is within `tolerance`
/// of the prediction and, where a constant is predicted, the fitted constant
/// is within relative `tolerance` of it.
OrderCheckReport check_order_classes(int order, std::size_t parent_count,
                                     std::span<const std::size_t> grid, double tolerance = 0.05);

struct ScalingRow {
  Configuration config;
  /// N^{k - l} nu({x}) per grid point.
  std::vector<double> scaled_config;
  /// N^k nu(y) for y with configuration {x}, per grid point.
  std::vector<double> scaled_vector;
  Rational limit;
  /// |scaled_vector - limit| per grid point.
  std::vector<double> errors;
  bool positive_finite = false;
  bool error_decreasing = false;
  /// Decay exponent of the error sequence (fit_decay); nullopt when the error
  /// vanishes identically (e.g. {1}).
  std::optional<double> error_exponent;
};

struct ScalingReport {
  std::vector<std::size_t> grid;
  std::vector<ScalingRow> rows;
};

/// nu_{N,k} on the grid against K_closed_form(., parent_count).
ScalingReport nu_scaling_check(std::span<const std::size_t> grid, int order,
                               std::size_t parent_count = 2);

}  // namespace moran
