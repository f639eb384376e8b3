#include "moran/limit_law.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace moran {

MixtureLaw::MixtureLaw(std::size_t parent_count)
    : parent_count_(parent_count), m_(static_cast<double>(parent_count)) {
  if (parent_count < 2) throw std::invalid_argument("parent count must be at least 2");
}

double MixtureLaw::cdf(double t) const {
  if (t < 0.0) return 0.0;
  return atom_weight() + exponential_weight() * (-std::expm1(-t / m_));
}

double MixtureLaw::cdf_left(double t) const {
  if (t <= 0.0) return 0.0;
  return cdf(t);
}

double MixtureLaw::continuous_density(double t) const {
  if (t < 0.0) return 0.0;
  return exponential_weight() * std::exp(-t / m_) / m_;
}

double MixtureLaw::quantile(double u) const {
  if (u < 0.0 || u >= 1.0) throw std::invalid_argument("quantile level must be in [0, 1)");
  if (u <= atom_weight()) return 0.0;
  return -m_ * std::log(m_ * (1.0 - u));
}

Rational MixtureLaw::moment(int k) const {
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (k == 0) return 1;
  Rational out = 1;
  for (int i = 0; i < k - 1; ++i) out *= Rational(parent_count_);
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

double MixtureLaw::sample(Rng& rng) const {
  if (rng.below(parent_count_) != 0) return 0.0;
  return -m_ * std::log1p(-rng.uniform());
}

double ks_distance(std::span<const double> samples, const MixtureLaw& law) {
  if (samples.empty()) throw std::invalid_argument("ks_distance needs at least one sample");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());

  double worst = 0.0;
  // The atom may fall between samples, where F_n is flat.
  {
    const auto below_zero = std::lower_bound(sorted.begin(), sorted.end(), 0.0) - sorted.begin();
    const auto at_most_zero = std::upper_bound(sorted.begin(), sorted.end(), 0.0) - sorted.begin();
    worst = std::max(worst, std::abs(static_cast<double>(below_zero) / n - law.cdf_left(0.0)));
    worst = std::max(worst, std::abs(static_cast<double>(at_most_zero) / n - law.cdf(0.0)));
  }
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double x = sorted[i];
    worst = std::max(worst, std::abs(static_cast<double>(i) / n - law.cdf_left(x)));
    worst = std::max(worst, std::abs(static_cast<double>(j) / n - law.cdf(x)));
    i = j;
  }
  return worst;
}

}  // namespace moran
