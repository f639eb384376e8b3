#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace moran {

/// Multiset {k_1, ..., k_l} of lineage multiplicities: how k lineages sit on
/// l distinct individuals. Parts are kept non-increasing, so equality of
/// Configuration objects is multiset equality.
class Configuration {
 public:
  Configuration() = default;
  /// Throws std::invalid_argument on a non-positive part or an empty list.
  explicit Configuration(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  /// Number of lineages k.
  int order() const;
  /// Number of occupied individuals l.
  std::size_t size() const { return parts_.size(); }
  bool all_singletons() const;

  /// "{2,1,1}"
  std::string label() const;

  auto operator<=>(const Configuration&) const = default;

 private:
  std::vector<int> parts_;
};

/// Integer partitions of k in reverse-lexicographic order: {k}, {k-1,1}, ..., {1,...,1}.
/// Throws std::invalid_argument for k <= 0.
std::vector<Configuration> partitions(int k);

/// Multiplicities of the distinct values of x. Empty input gives an empty configuration.
Configuration configuration_of(std::span<const std::size_t> x);

/// Parses "{2,1,1}" (braces optional, any order). Throws std::invalid_argument.
Configuration parse_configuration(std::string_view text);

}  // namespace moran
