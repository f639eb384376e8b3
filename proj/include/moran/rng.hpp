#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace moran {

/// SplitMix64 finaliser. Used to derive independent stream seeds from a
/// master seed so any replicate can be regenerated in isolation.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for stream `stream` of master seed `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Seedable 64-bit generator. The raw engine is std::mt19937_64 (its output
/// sequence is fixed by the standard); bounded integers and uniforms are
/// derived here rather than through <random> distributions, whose algorithms
/// are implementation-defined.
class Rng {
 public:
  static constexpr std::string_view algorithm = "mt19937_64+splitmix64-streams+lemire-bounded";

  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Child generator for stream `stream`; does not advance this one.
  Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace moran
