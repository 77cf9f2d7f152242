// The classical companion: grid densities on the unit square, block
// coarse-graining, an exact cell-permutation baker map, and the contrast
// between invariant fine-grained support and decaying coarse distance.
#pragma once

#include <vector>

namespace redstates {

class DensityField {
 public:
  // n x n nonnegative values with cell measure 1/n^2; total mass must be 1
  // within 1e-10.
  DensityField(int resolution, std::vector<double> values);

  static DensityField uniform(int n);
  // Indicator of the left half {column < n/2}, normalized to unit mass.
  static DensityField left_half(int n);

  int resolution() const { return n_; }
  const std::vector<double>& values() const { return values_; }
  double value(int row, int col) const { return values_[static_cast<std::size_t>(row) * n_ + col]; }

  double mass() const;
  int occupied_cells() const;  // cells with value != 0

 private:
  int n_;
  std::vector<double> values_;
};

struct CellPartition {
  int cells_per_side = 1;  // k x k coarse cells; k must divide the resolution
};

// Block coarse-graining at the fine resolution: each coarse cell becomes
// constant at its average; an identically zero cell stays exactly zero.
DensityField coarse_grain_classical(const DensityField& field, const CellPartition& partition);

// One step of the baker map as an exact permutation of fine cells
// (power-of-two resolution). Mass and occupied-cell count are preserved
// bit-for-bit.
DensityField mixing_step(const DensityField& field);

struct LiouvilleReport {
  std::vector<int> occupied_counts;
  bool constant = false;
};

// Fine-grained support invariance across a sampled evolution.
LiouvilleReport liouville_check(const std::vector<DensityField>& fields_over_time);

struct EquilibriumSeries {
  std::vector<double> coarse_l1;  // L1 distance of the coarse-grained field to uniform
  std::vector<double> fine_l1;    // same for the fine field
  std::vector<double> mass;
  std::vector<int> occupied;
};

// Iterates the mixing map `steps` times from `initial` (series include the
// initial field). The coarse partition must be strictly coarser than the
// fine grid.
EquilibriumSeries equilibrium_approach(const DensityField& initial,
                                       const CellPartition& partition, int steps);

// integral |f - 1| over the unit square.
double l1_distance_to_uniform(const DensityField& field);

}  // namespace redstates
