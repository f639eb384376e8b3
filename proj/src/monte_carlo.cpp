#include "moran/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "moran/config_chain.hpp"
#include "moran/error.hpp"
#include "moran/limit_law.hpp"
#include "moran/weights.hpp"

namespace moran {

namespace {

// Runs body(i) for i in [0, count) on `jobs` threads. If any call throws, the
// lowest failing index is rethrown as ReplicateError after all workers stop.
template <class Body>
void parallel_replicates(std::size_t count, std::size_t jobs, Body&& body) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::size_t error_index = count;
  std::string error_message;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count || failed.load()) return;
      try {
        body(i);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        failed = true;
        if (i < error_index) {
          error_index = i;
          error_message = e.what();
        }
      }
    }
  };

  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failed) throw ReplicateError(error_index, error_message);
}

std::vector<std::size_t> first_ancestors(std::size_t count) {
  std::vector<std::size_t> out(count);
  for (std::size_t j = 0; j < count; ++j) out[j] = j;
  return out;
}

constexpr std::uint64_t kBootstrapStream = 0x626f6f7473747261ULL;

std::string moment_label(std::span<const int> exponents) {
  std::string out = "E[";
  bool first = true;
  for (std::size_t j = 0; j < exponents.size(); ++j) {
    if (exponents[j] == 0) continue;
    if (!first) out += ' ';
    first = false;
    out += "M" + std::to_string(j + 1);
    if (exponents[j] > 1) out += "^" + std::to_string(exponents[j]);
  }
  return out + "]";
}

MomentEstimate estimate(const SampleSet& samples, std::vector<int> exponents, double confidence,
                        std::size_t resamples, std::uint64_t stream, double reference) {
  std::vector<double> products(samples.replicates(), 1.0);
  for (std::size_t r = 0; r < samples.replicates(); ++r) {
    for (std::size_t j = 0; j < exponents.size(); ++j) {
      products[r] *= std::pow(samples.at(r, j), exponents[j]);
    }
  }
  MomentEstimate out;
  out.label = moment_label(exponents);
  out.exponents = std::move(exponents);
  out.normal = stats::mean_interval(products, confidence, reference);
  out.bootstrap = stats::bootstrap_mean_interval(
      products, confidence, resamples, derive_seed(samples.spec.model.seed, kBootstrapStream + stream));
  return out;
}

}  // namespace

void ExperimentSpec::validate() const {
  model.validate();
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (tracked < 1 || tracked > model.population_size) {
    throw ConfigError("tracked count must be in [1, N]");
  }
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw ConfigError("checkpoints must be sorted ascending");
  }
}

std::uint64_t ExperimentSpec::effective_max_steps() const {
  return max_steps == 0 ? default_max_steps(model.population_size) : max_steps;
}

std::size_t ExperimentSpec::effective_jobs() const {
  if (jobs > 0) return jobs;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> SampleSet::column(std::size_t ancestor) const {
  std::vector<double> out(replicates());
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = at(r, ancestor);
  return out;
}

std::size_t SampleSet::nonconverged() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& rec) {
    return std::any_of(rec.converged.begin(), rec.converged.end(), [](char c) { return !c; });
  }));
}

SampleSet run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  SampleSet out;
  out.spec = spec;
  const std::size_t l = spec.tracked;
  out.values.assign(spec.replicates * l, 0.0);
  out.records.resize(spec.replicates);
  const auto tracked = first_ancestors(l);
  const auto n_max = spec.effective_max_steps();

  parallel_replicates(spec.replicates, spec.effective_jobs(), [&](std::size_t r) {
    const auto seed = derive_seed(spec.model.seed, r);
    Rng rng(seed);
    const auto report = run_to_convergence(spec.model, tracked, spec.epsilon, n_max, rng);
    auto& rec = out.records[r];
    rec.seed = seed;
    rec.steps = report.steps;
    rec.extinct.resize(l);
    rec.converged.resize(l);
    for (std::size_t j = 0; j < l; ++j) {
      out.values[r * l + j] = report.ancestors[j].estimate;
      rec.extinct[j] = report.ancestors[j].extinct;
      rec.converged[j] = report.ancestors[j].converged;
    }
  });
  return out;
}

std::vector<double> MartingaleSamples::column(std::size_t checkpoint, std::size_t ancestor) const {
  const auto& row = values.at(checkpoint);
  std::vector<double> out(row.size() / tracked);
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = row[r * tracked + ancestor];
  return out;
}

MartingaleSamples run_martingale(const ExperimentSpec& spec) {
  spec.validate();
  if (spec.checkpoints.empty()) throw ConfigError("martingale run needs checkpoints");
  MartingaleSamples out;
  out.checkpoints = spec.checkpoints;
  out.tracked = spec.tracked;
  out.values.assign(spec.checkpoints.size(), std::vector<double>(spec.replicates * spec.tracked));
  const auto tracked = first_ancestors(spec.tracked);

  parallel_replicates(spec.replicates, spec.effective_jobs(), [&](std::size_t r) {
    Rng rng(derive_seed(spec.model.seed, r));
    const auto points = record_trajectory(spec.model, tracked, spec.checkpoints, rng);
    for (std::size_t c = 0; c < spec.checkpoints.size(); ++c) {
      for (std::size_t j = 0; j < spec.tracked; ++j) {
        out.values[c][r * spec.tracked + j] = points[c * spec.tracked + j].marginal;
      }
    }
  });
  return out;
}

Summary summarize(const SampleSet& samples, int k_max, double confidence,
                  std::size_t bootstrap_resamples) {
  if (samples.replicates() == 0) throw std::invalid_argument("summary of an empty sample set");
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  Summary s;
  s.replicates = samples.replicates();
  s.tracked = samples.tracked();
  s.confidence = confidence;
  const MixtureLaw law(samples.spec.model.parent_count);

  std::uint64_t stream = 0;
  std::vector<std::vector<double>> columns;
  for (std::size_t j = 0; j < s.tracked; ++j) columns.push_back(samples.column(j));

  std::vector<double> pooled;
  std::size_t pooled_zero = 0;
  for (std::size_t j = 0; j < s.tracked; ++j) {
    std::vector<MomentEstimate> row;
    for (int k = 1; k <= k_max; ++k) {
      std::vector<int> exponents(s.tracked, 0);
      exponents[j] = k;
      row.push_back(estimate(samples, exponents, confidence, bootstrap_resamples, stream++,
                             to_double(law.moment(k))));
    }
    s.per_ancestor.push_back(std::move(row));

    std::size_t zeros = 0;
    for (std::size_t r = 0; r < s.replicates; ++r) {
      if (samples.records[r].extinct[j]) {
        ++zeros;
      } else if (samples.at(r, j) < 1e-12) {
        ++s.near_zero;
      }
    }
    pooled_zero += zeros;
    s.zero_fraction.push_back(static_cast<double>(zeros) / static_cast<double>(s.replicates));
    s.ks_distance.push_back(ks_distance(columns[j], law));
    pooled.insert(pooled.end(), columns[j].begin(), columns[j].end());
  }
  s.pooled_zero_fraction =
      static_cast<double>(pooled_zero) / static_cast<double>(s.replicates * s.tracked);
  s.pooled_ks_distance = ks_distance(pooled, law);

  s.covariance.assign(s.tracked, std::vector<double>(s.tracked, 0.0));
  s.correlation.assign(s.tracked, std::vector<double>(s.tracked, 0.0));
  for (std::size_t a = 0; a < s.tracked; ++a) {
    for (std::size_t b = 0; b < s.tracked; ++b) {
      s.covariance[a][b] = stats::covariance(columns[a], columns[b]);
      s.correlation[a][b] = stats::correlation(columns[a], columns[b]);
    }
    for (std::size_t b = a + 1; b < s.tracked; ++b) {
      std::vector<int> exponents(s.tracked, 0);
      exponents[a] = exponents[b] = 1;
      s.cross.push_back(estimate(samples, exponents, confidence, bootstrap_resamples, stream++, 1.0));
    }
  }
  s.nonconverged = samples.nonconverged();
  return s;
}

bool LayerReport::all_covered() const {
  return std::all_of(rows.begin(), rows.end(), [](const LayerRow& r) { return r.covered; });
}

LayerReport compare_layers(const SampleSet& samples, int k_max, double confidence) {
  const auto& model = samples.spec.model;
  const std::size_t n = model.population_size;
  const std::size_t m = model.parent_count;
  std::vector<std::vector<int>> wanted;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<int> e(samples.tracked(), 0);
    e[0] = k;
    wanted.push_back(e);
  }
  if (samples.tracked() >= 2) {
    std::vector<int> e(samples.tracked(), 0);
    e[0] = e[1] = 1;
    wanted.push_back(e);
  }

  LayerReport report;
  std::uint64_t stream = 1000;
  for (auto& exponents : wanted) {
    LayerRow row;
    row.exponents = exponents;
    std::vector<int> parts;
    for (int e : exponents)
      if (e > 0) parts.push_back(e);
    const Configuration config(parts);
    row.limit = K_closed_form(config, m);
    if (model.variant == Variant::DistinctTuple && n > static_cast<std::size_t>(config.order())) {
      const auto exact = joint_moment(n, m, exponents);
      row.exact = exact.value;
      row.exact_rational = exact.exact;
    }
    const double reference = row.exact.value_or(to_double(row.limit));
    row.monte_carlo = estimate(samples, exponents, confidence, 1000, stream++, reference);
    row.label = row.monte_carlo.label;
    row.covered = row.monte_carlo.bootstrap.covers(reference);
    report.rows.push_back(std::move(row));
  }
  return report;
}

LayerReport compare_layers(const ExperimentSpec& spec, int k_max, double confidence) {
  return compare_layers(run_experiment(spec), k_max, confidence);
}

}  // namespace moran
