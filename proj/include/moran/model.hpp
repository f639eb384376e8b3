#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "moran/rng.hpp"

namespace moran {

/// How the (parents..., child) tuple of one reproduction step is drawn.
enum class Variant {
  /// Uniform over ordered tuples of m+1 pairwise-distinct individuals.
  DistinctTuple,
  /// Every slot independently uniform; slots may coincide.
  IndependentTuple,
};

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

struct ModelConfig {
  std::size_t population_size = 0;
  std::size_t parent_count = 2;
  Variant variant = Variant::DistinctTuple;
  std::uint64_t seed = 0;

  /// Throws ConfigError if the parameters do not describe a valid model.
  void validate() const;
};

/// One Moran step. Individuals are indexed 0..N-1 in the API; file exports
/// shift to 1..N.
struct ReproductionEvent {
  std::uint64_t time = 0;
  std::size_t child = 0;
  std::vector<std::size_t> parents;

  bool operator==(const ReproductionEvent&) const = default;
};

struct Pedigree {
  ModelConfig config;
  std::vector<ReproductionEvent> events;
};

/// Draws the event for step t. Under DistinctTuple the parents are drawn
/// first, then the child, sequentially without replacement.
ReproductionEvent sample_event(const ModelConfig& config, std::uint64_t t, Rng& rng);

/// Same as sample_event but reuses `event`'s parent storage.
void sample_event_into(const ModelConfig& config, std::uint64_t t, Rng& rng,
                       ReproductionEvent& event);

Pedigree generate_pedigree(const ModelConfig& config, std::uint64_t n_steps, Rng& rng);

/// Generator seeded from config.seed.
Pedigree generate_pedigree(const ModelConfig& config, std::uint64_t n_steps);

/// CSV lines `t,child,parent1,...,parentm` with 1-based individual indices.
void write_pedigree_csv(std::ostream& out, const Pedigree& pedigree);

}  // namespace moran
