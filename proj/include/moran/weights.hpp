#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "moran/model.hpp"
#include "moran/rng.hpp"

namespace moran {

/// min_i / max_i of one ancestor's weight column.
struct SpreadBounds {
  double lower = 0.0;
  double upper = 0.0;
  double spread() const { return upper - lower; }
};

/// Weight columns A_n(., j) for a tracked set of time-0 ancestors. Column j
/// holds, for every individual alive at step n, the fraction of its genome
/// inherited from ancestor j.
class AncestorWeights {
 public:
  /// Indicator columns. Throws std::invalid_argument on duplicate or
  /// out-of-range ancestors.
  AncestorWeights(std::size_t population_size, std::vector<std::size_t> tracked);

  std::size_t population_size() const { return population_size_; }
  const std::vector<std::size_t>& tracked() const { return tracked_; }
  std::uint64_t step() const { return step_; }

  /// Column position of a tracked ancestor; throws std::out_of_range if untracked.
  std::size_t slot_of(std::size_t ancestor) const;

  std::span<const double> column_at(std::size_t slot) const {
    return {columns_.data() + slot * population_size_, population_size_};
  }
  std::span<const double> column(std::size_t ancestor) const { return column_at(slot_of(ancestor)); }

  /// Replaces the child's entry in every column by the mean of its parent
  /// slots. Throws SequencingError if event.time != step().
  void apply(const ReproductionEvent& event);

  /// Same update without the sequencing check; used by the hot loops.
  void apply_unchecked(const ReproductionEvent& event);

  double marginal_at(std::size_t slot) const;
  SpreadBounds bounds_at(std::size_t slot) const;
  bool extinct_at(std::size_t slot) const;

  double marginal(std::size_t ancestor) const { return marginal_at(slot_of(ancestor)); }
  SpreadBounds bounds(std::size_t ancestor) const { return bounds_at(slot_of(ancestor)); }
  bool extinct(std::size_t ancestor) const { return extinct_at(slot_of(ancestor)); }

 private:
  std::size_t population_size_;
  std::vector<std::size_t> tracked_;
  std::vector<double> columns_;  // tracked_.size() columns of length N, contiguous
  std::uint64_t step_ = 0;
};

AncestorWeights init_weights(std::size_t population_size, std::vector<std::size_t> tracked);
void apply_event(AncestorWeights& weights, const ReproductionEvent& event);

/// M_n(j) = sum_i A_n(i, j).
double marginal_weight(const AncestorWeights& weights, std::size_t ancestor);

struct AncestorConvergence {
  std::size_t ancestor = 0;
  /// N * (lower + upper) / 2 at the stop time; the M_inf estimate.
  double estimate = 0.0;
  SpreadBounds bounds;
  bool extinct = false;
  bool converged = false;
};

struct ConvergenceReport {
  std::vector<AncestorConvergence> ancestors;
  std::uint64_t steps = 0;

  bool all_converged() const;
};

inline constexpr double kDefaultEpsilon = 1e-9;

/// Default step budget, 100 * N^2.
std::uint64_t default_max_steps(std::size_t population_size);

/// Streams fresh events until every tracked column has spread < epsilon or
/// n_max events have been applied. Spreads are checked at n = 0 and then every
/// N events (and at n_max); the bounds are monotone so a late check never
/// reports a false convergence.
ConvergenceReport run_to_convergence(const ModelConfig& config,
                                     std::span<const std::size_t> tracked, double epsilon,
                                     std::uint64_t n_max, Rng& rng);

struct TrajectoryPoint {
  std::uint64_t step = 0;
  std::size_t ancestor = 0;
  double marginal = 0.0;
  SpreadBounds bounds;
};

/// Marginal weights and bounds of the tracked ancestors at each checkpoint
/// (sorted ascending). Rows are ordered by checkpoint, then by ancestor.
std::vector<TrajectoryPoint> record_trajectory(const ModelConfig& config,
                                               std::span<const std::size_t> tracked,
                                               std::span<const std::uint64_t> checkpoints,
                                               Rng& rng);

/// CSV `n,j,M_n,l_n,L_n` (j 1-based) with a header row.
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryPoint> points);

}  // namespace moran
