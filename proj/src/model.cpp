#include "moran/model.hpp"

#include <algorithm>
#include <ostream>
#include <string>

#include "moran/error.hpp"

namespace moran {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::DistinctTuple:
      return "distinct";
    case Variant::IndependentTuple:
      return "independent";
  }
  return "unknown";
}

Variant parse_variant(std::string_view text) {
  if (text == "distinct") return Variant::DistinctTuple;
  if (text == "independent") return Variant::IndependentTuple;
  throw ConfigError("unknown variant '" + std::string(text) + "' (expected distinct|independent)");
}

void ModelConfig::validate() const {
  if (parent_count < 2) {
    throw ConfigError("parent count must be at least 2, got " + std::to_string(parent_count));
  }
  if (population_size < 1) {
    throw ConfigError("population size must be at least 1");
  }
  if (variant == Variant::DistinctTuple && population_size < parent_count + 1) {
    throw ConfigError("distinct variant needs N >= m + 1 (N=" + std::to_string(population_size) +
                      ", m=" + std::to_string(parent_count) + ")");
  }
}

namespace {

// Draws `count` distinct values from [0, n) into out[0..count), uniformly over
// ordered tuples. Each draw picks a rank among the values not yet taken and
// maps it past the taken ones in increasing order.
void draw_distinct(std::size_t n, std::size_t count, Rng& rng, std::size_t* out,
                   std::size_t* sorted_scratch) {
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t v = rng.below(n - i);
    std::size_t pos = 0;
    for (; pos < i && sorted_scratch[pos] <= v; ++pos) ++v;
    for (std::size_t q = i; q > pos; --q) sorted_scratch[q] = sorted_scratch[q - 1];
    sorted_scratch[pos] = v;
    out[i] = v;
  }
}

}  // namespace

void sample_event_into(const ModelConfig& config, std::uint64_t t, Rng& rng,
                       ReproductionEvent& event) {
  const std::size_t n = config.population_size;
  const std::size_t m = config.parent_count;
  event.time = t;
  event.parents.resize(m);
  if (config.variant == Variant::IndependentTuple) {
    for (auto& p : event.parents) p = rng.below(n);
    event.child = rng.below(n);
    return;
  }
  // Small fixed buffers cover every practical m; fall back to the heap otherwise.
  constexpr std::size_t kInline = 16;
  std::size_t tuple_inline[kInline];
  std::size_t scratch_inline[kInline];
  std::vector<std::size_t> tuple_heap;
  std::vector<std::size_t> scratch_heap;
  std::size_t* tuple = tuple_inline;
  std::size_t* scratch = scratch_inline;
  if (m + 1 > kInline) {
    tuple_heap.resize(m + 1);
    scratch_heap.resize(m + 1);
    tuple = tuple_heap.data();
    scratch = scratch_heap.data();
  }
  draw_distinct(n, m + 1, rng, tuple, scratch);
  std::copy(tuple, tuple + m, event.parents.begin());
  event.child = tuple[m];
}

ReproductionEvent sample_event(const ModelConfig& config, std::uint64_t t, Rng& rng) {
  config.validate();
  ReproductionEvent event;
  sample_event_into(config, t, rng, event);
  return event;
}

Pedigree generate_pedigree(const ModelConfig& config, std::uint64_t n_steps, Rng& rng) {
  config.validate();
  Pedigree pedigree{config, {}};
  pedigree.events.resize(n_steps);
  for (std::uint64_t t = 0; t < n_steps; ++t) {
    sample_event_into(config, t, rng, pedigree.events[t]);
  }
  return pedigree;
}

Pedigree generate_pedigree(const ModelConfig& config, std::uint64_t n_steps) {
  Rng rng(config.seed);
  return generate_pedigree(config, n_steps, rng);
}

void write_pedigree_csv(std::ostream& out, const Pedigree& pedigree) {
  for (const auto& e : pedigree.events) {
    out << e.time << ',' << e.child + 1;
    for (auto p : e.parents) out << ',' << p + 1;
    out << '\n';
  }
}

}  // namespace moran
