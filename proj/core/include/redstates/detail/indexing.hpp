// Index arithmetic for operations that act on a subset of tensor factors
// without permuting the composite basis.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "redstates/space.hpp"

namespace redstates::detail {

// Splits the composite row-major index set of `space` along the factors at
// `split_positions` (sorted ascending): every composite index decomposes
// uniquely as kept_offsets[a] + split_offsets[m].
struct IndexSplit {
  std::vector<Eigen::Index> kept_offsets;   // size: product of kept dims
  std::vector<Eigen::Index> split_offsets;  // size: product of split dims
};

IndexSplit split_offsets(const SpaceSpec& space, const std::vector<int>& split_positions);

}  // namespace redstates::detail
