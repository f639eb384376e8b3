#pragma once

#include <cstddef>
#include <vector>

#include "moran/configuration.hpp"

namespace moran {

/// The unlumped k-lineage chain on I^k, built by enumerating every ordered
/// (parents..., child) tuple of distinct individuals and every assignment of
/// the child's lineages to parent slots. Only practical for tiny N^k; it is
/// the reference the lumped chain is checked against.
struct VectorChain {
  std::size_t population_size = 0;
  std::size_t parent_count = 2;
  int order = 0;
  std::vector<std::vector<double>> matrix;  // N^k x N^k

  std::size_t state_count() const { return matrix.size(); }
  std::vector<std::size_t> decode(std::size_t index) const;
};

/// Throws CapabilityError when N^k exceeds max_states, RegimeError when N < m + 1.
VectorChain build_vector_chain(std::size_t population_size, std::size_t parent_count, int order,
                               std::size_t max_states = 4096);

std::vector<double> vector_stationary(const VectorChain& chain);

struct LumpingCheck {
  std::size_t population_size = 0;
  int order = 0;
  /// Largest spread of per-vector stationary values within one configuration.
  double max_within_configuration = 0.0;
  /// Largest |sum of per-vector values - lumped nu({x})|.
  double max_aggregate_error = 0.0;
  /// Largest |per-vector value - lift_to_vector(lumped nu({x}))|.
  double max_lift_error = 0.0;
  bool passed = false;
};

LumpingCheck check_lumping(std::size_t population_size, std::size_t parent_count, int order,
                           double tolerance = 1e-12);

}  // namespace moran
