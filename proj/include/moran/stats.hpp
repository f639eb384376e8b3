#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

namespace moran::stats {

struct MeanInterval {
  double mean = 0.0;
  double std_error = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  /// Two-sided p-value of the z test against the reference value.
  double p_value = 1.0;

  bool covers(double value) const { return lower <= value && value <= upper; }
};

/// Normal-approximation interval for the mean at `confidence`, with the
/// p-value for H0: mean == reference.
MeanInterval mean_interval(std::span<const double> values, double confidence,
                           double reference);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool covers(double value) const { return lower <= value && value <= upper; }
};

/// Percentile bootstrap interval for the mean.
Interval bootstrap_mean_interval(std::span<const double> values, double confidence,
                                 std::size_t resamples, std::uint64_t seed);

double sample_variance(std::span<const double> values);
double covariance(std::span<const double> a, std::span<const double> b);
double correlation(std::span<const double> a, std::span<const double> b);

/// Kolmogorov survival function Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_survival(double lambda);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// (Stephens' small-sample correction on the effective size).
TestResult ks_two_sample(std::span<const double> a, std::span<const double> b);

/// Pearson chi-square test of counts against the uniform distribution.
TestResult chi_square_uniform(std::span<const std::uint64_t> counts);

/// Two-sided p-value of a standard normal score.
double normal_two_sided_p(double z);

/// Upper quantile z with P(|Z| <= z) = confidence.
double normal_two_sided_quantile(double confidence);

}  // namespace moran::stats
