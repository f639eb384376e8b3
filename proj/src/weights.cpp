#include "moran/weights.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "moran/error.hpp"

namespace moran {

AncestorWeights::AncestorWeights(std::size_t population_size, std::vector<std::size_t> tracked)
    : population_size_(population_size), tracked_(std::move(tracked)) {
  if (population_size_ == 0) throw std::invalid_argument("population size must be positive");
  for (std::size_t i = 0; i < tracked_.size(); ++i) {
    if (tracked_[i] >= population_size_) {
      throw std::invalid_argument("tracked ancestor " + std::to_string(tracked_[i]) +
                                  " outside population of size " +
                                  std::to_string(population_size_));
    }
    for (std::size_t q = 0; q < i; ++q) {
      if (tracked_[q] == tracked_[i]) {
        throw std::invalid_argument("ancestor " + std::to_string(tracked_[i]) +
                                    " tracked twice");
      }
    }
  }
  columns_.assign(tracked_.size() * population_size_, 0.0);
  for (std::size_t s = 0; s < tracked_.size(); ++s) {
    columns_[s * population_size_ + tracked_[s]] = 1.0;
  }
}

std::size_t AncestorWeights::slot_of(std::size_t ancestor) const {
  auto it = std::find(tracked_.begin(), tracked_.end(), ancestor);
  if (it == tracked_.end()) {
    throw std::out_of_range("ancestor " + std::to_string(ancestor) + " is not tracked");
  }
  return static_cast<std::size_t>(it - tracked_.begin());
}

void AncestorWeights::apply(const ReproductionEvent& event) {
  if (event.time != step_) {
    throw SequencingError("event time " + std::to_string(event.time) +
                          " does not match weight step " + std::to_string(step_));
  }
  apply_unchecked(event);
}

void AncestorWeights::apply_unchecked(const ReproductionEvent& event) {
  const double share = 1.0 / static_cast<double>(event.parents.size());
  double* col = columns_.data();
  for (std::size_t s = 0; s < tracked_.size(); ++s, col += population_size_) {
    double sum = 0.0;
    for (auto p : event.parents) sum += col[p];
    col[event.child] = sum * share;
  }
  ++step_;
}

double AncestorWeights::marginal_at(std::size_t slot) const {
  auto c = column_at(slot);
  return std::accumulate(c.begin(), c.end(), 0.0);
}

SpreadBounds AncestorWeights::bounds_at(std::size_t slot) const {
  auto c = column_at(slot);
  auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  return {*lo, *hi};
}

bool AncestorWeights::extinct_at(std::size_t slot) const {
  auto c = column_at(slot);
  return std::all_of(c.begin(), c.end(), [](double w) { return w == 0.0; });
}

AncestorWeights init_weights(std::size_t population_size, std::vector<std::size_t> tracked) {
  return AncestorWeights(population_size, std::move(tracked));
}

void apply_event(AncestorWeights& weights, const ReproductionEvent& event) {
  weights.apply(event);
}

double marginal_weight(const AncestorWeights& weights, std::size_t ancestor) {
  return weights.marginal(ancestor);
}

bool ConvergenceReport::all_converged() const {
  return std::all_of(ancestors.begin(), ancestors.end(),
                     [](const AncestorConvergence& a) { return a.converged; });
}

std::uint64_t default_max_steps(std::size_t population_size) {
  const auto n = static_cast<std::uint64_t>(population_size);
  return 100 * n * n;
}

ConvergenceReport run_to_convergence(const ModelConfig& config,
                                     std::span<const std::size_t> tracked, double epsilon,
                                     std::uint64_t n_max, Rng& rng) {
  config.validate();
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");

  const std::size_t n = config.population_size;
  AncestorWeights weights(n, {tracked.begin(), tracked.end()});
  const std::size_t slots = tracked.size();
  std::vector<SpreadBounds> bounds(slots);
  std::vector<char> done(slots, 0);

  auto check = [&] {
    bool all = true;
    for (std::size_t s = 0; s < slots; ++s) {
      if (done[s]) continue;
      bounds[s] = weights.bounds_at(s);
      if (bounds[s].spread() < epsilon) {
        done[s] = 1;
      } else {
        all = false;
      }
    }
    return all;
  };

  ReproductionEvent event;
  std::uint64_t step = 0;
  bool finished = check();
  while (!finished && step < n_max) {
    const std::uint64_t stop = std::min<std::uint64_t>(n_max, step + n);
    for (; step < stop; ++step) {
      sample_event_into(config, step, rng, event);
      weights.apply_unchecked(event);
    }
    finished = check();
  }

  ConvergenceReport report;
  report.steps = step;
  report.ancestors.reserve(slots);
  for (std::size_t s = 0; s < slots; ++s) {
    AncestorConvergence a;
    a.ancestor = tracked[s];
    a.bounds = bounds[s];
    a.extinct = bounds[s].upper == 0.0;
    a.converged = done[s] != 0;
    a.estimate = a.extinct ? 0.0 : static_cast<double>(n) * 0.5 * (bounds[s].lower + bounds[s].upper);
    report.ancestors.push_back(a);
  }
  return report;
}

std::vector<TrajectoryPoint> record_trajectory(const ModelConfig& config,
                                               std::span<const std::size_t> tracked,
                                               std::span<const std::uint64_t> checkpoints,
                                               Rng& rng) {
  config.validate();
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw std::invalid_argument("checkpoints must be sorted ascending");
  }
  AncestorWeights weights(config.population_size, {tracked.begin(), tracked.end()});
  std::vector<TrajectoryPoint> points;
  points.reserve(checkpoints.size() * tracked.size());
  ReproductionEvent event;
  std::uint64_t step = 0;
  for (auto target : checkpoints) {
    for (; step < target; ++step) {
      sample_event_into(config, step, rng, event);
      weights.apply_unchecked(event);
    }
    for (std::size_t s = 0; s < tracked.size(); ++s) {
      points.push_back({step, tracked[s], weights.marginal_at(s), weights.bounds_at(s)});
    }
  }
  return points;
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryPoint> points) {
  out << "n,j,M_n,l_n,L_n\n" << std::setprecision(17);
  for (const auto& p : points) {
    out << p.step << ',' << p.ancestor + 1 << ',' << p.marginal << ',' << p.bounds.lower << ','
        << p.bounds.upper << '\n';
  }
}

}  // namespace moran
