#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "moran/model.hpp"
#include "moran/rational.hpp"
#include "moran/stats.hpp"

namespace moran {

struct ExperimentSpec {
  ModelConfig model;
  std::size_t replicates = 1;
  /// Ancestors 0..tracked-1 are followed in every replicate.
  std::size_t tracked = 1;
  double epsilon = 1e-9;
  /// 0 selects default_max_steps(N).
  std::uint64_t max_steps = 0;
  /// Steps at which run_martingale records M_n.
  std::vector<std::uint64_t> checkpoints;
  /// Worker threads; 0 selects std::thread::hardware_concurrency().
  std::size_t jobs = 0;

  /// Throws ConfigError.
  void validate() const;
  std::uint64_t effective_max_steps() const;
  std::size_t effective_jobs() const;
};

/// A replicate threw; carries its index. No partial SampleSet is returned.
class ReplicateError : public std::runtime_error {
 public:
  ReplicateError(std::size_t replicate, const std::string& what)
      : std::runtime_error("replicate " + std::to_string(replicate) + ": " + what),
        replicate_(replicate) {}
  std::size_t replicate() const { return replicate_; }

 private:
  std::size_t replicate_;
};

struct ReplicateRecord {
  std::uint64_t seed = 0;
  std::uint64_t steps = 0;
  std::vector<char> extinct;
  std::vector<char> converged;
};

/// R x l matrix of M_inf estimates plus per-replicate metadata.
struct SampleSet {
  ExperimentSpec spec;
  std::vector<double> values;  // row-major, replicate-major
  std::vector<ReplicateRecord> records;

  std::size_t replicates() const { return records.size(); }
  std::size_t tracked() const { return spec.tracked; }
  double at(std::size_t replicate, std::size_t ancestor) const {
    return values[replicate * spec.tracked + ancestor];
  }
  std::vector<double> column(std::size_t ancestor) const;
  std::size_t nonconverged() const;
};

/// Replicate r uses seed derive_seed(spec.model.seed, r); results do not
/// depend on the number of workers.
SampleSet run_experiment(const ExperimentSpec& spec);

/// values[c][r * l + j] = M_n(j) of replicate r at checkpoint c.
struct MartingaleSamples {
  std::vector<std::uint64_t> checkpoints;
  std::size_t tracked = 0;
  std::vector<std::vector<double>> values;

  std::vector<double> column(std::size_t checkpoint, std::size_t ancestor) const;
};

/// Runs each replicate's pedigree up to the last checkpoint. Replicate seeds
/// match run_experiment for the same spec.
MartingaleSamples run_martingale(const ExperimentSpec& spec);

struct MomentEstimate {
  std::string label;
  std::vector<int> exponents;
  stats::MeanInterval normal;
  stats::Interval bootstrap;
};

struct Summary {
  std::size_t replicates = 0;
  std::size_t tracked = 0;
  double confidence = 0.99;
  /// per_ancestor[j][k-1] estimates E[M(j)^k].
  std::vector<std::vector<MomentEstimate>> per_ancestor;
  /// E[M(a) M(b)] for a < b.
  std::vector<MomentEstimate> cross;
  std::vector<std::vector<double>> covariance;
  std::vector<std::vector<double>> correlation;
  /// Fraction of exactly-extinct columns per ancestor, and pooled.
  std::vector<double> zero_fraction;
  double pooled_zero_fraction = 0.0;
  /// Non-extinct estimates below 1e-12, pooled.
  std::size_t near_zero = 0;
  std::vector<double> ks_distance;
  double pooled_ks_distance = 0.0;
  std::size_t nonconverged = 0;
};

Summary summarize(const SampleSet& samples, int k_max, double confidence = 0.99,
                  std::size_t bootstrap_resamples = 1000);

struct LayerRow {
  std::string label;
  std::vector<int> exponents;
  MomentEstimate monte_carlo;
  std::optional<double> exact;
  std::optional<Rational> exact_rational;
  Rational limit;
  /// Bootstrap interval covers the exact value (or the limit when no exact value exists).
  bool covered = false;
};

struct LayerReport {
  std::vector<LayerRow> rows;
  bool all_covered() const;
};

/// Monte Carlo vs exact finite-N vs limit for E[M(1)^k], k = 1..k_max, and
/// E[M(1) M(2)] when two or more ancestors are tracked. The exact column needs
/// the DistinctTuple variant and N > k.
LayerReport compare_layers(const SampleSet& samples, int k_max, double confidence = 0.99);
LayerReport compare_layers(const ExperimentSpec& spec, int k_max, double confidence = 0.99);

}  // namespace moran
