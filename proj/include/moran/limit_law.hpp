#pragma once

#include <cstddef>
#include <span>

#include "moran/rational.hpp"
#include "moran/rng.hpp"

namespace moran {

/// Large-population law of an ancestor's stationary weight: an atom at 0 of
/// mass (m-1)/m and, with mass 1/m, an exponential of mean m. Unit mean.
class MixtureLaw {
 public:
  /// Throws std::invalid_argument for m < 2.
  explicit MixtureLaw(std::size_t parent_count);

  std::size_t parent_count() const { return parent_count_; }
  double atom_weight() const { return (m_ - 1.0) / m_; }
  double exponential_weight() const { return 1.0 / m_; }
  double exponential_mean() const { return m_; }

  /// P(X <= t)
  double cdf(double t) const;
  /// P(X < t)
  double cdf_left(double t) const;
  /// Density of the continuous part (integrates to exponential_weight()).
  double continuous_density(double t) const;
  /// Generalised inverse of cdf on [0, 1).
  double quantile(double u) const;
  /// E[X^k] = m^{k-1} k! for k >= 1, 1 for k = 0.
  Rational moment(int k) const;

  double sample(Rng& rng) const;

 private:
  std::size_t parent_count_;
  double m_;
};

/// sup_t |F_n(t) - F(t)| for the empirical CDF of `samples`, taking both
/// one-sided limits at every sample point and at the atom.
/// Throws std::invalid_argument on empty input.
double ks_distance(std::span<const double> samples, const MixtureLaw& law);

}  // namespace moran
