#include "redstates/classical.hpp"

#include <cmath>
#include <stdexcept>

namespace redstates {

namespace {

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void require_exact_cell_mode(int n) {
  if (n < 2 || !power_of_two(n))
    throw std::invalid_argument("mixing_step: resolution must be a power of two (exact-cell mode)");
}

}  // namespace

DensityField::DensityField(int resolution, std::vector<double> values)
    : n_(resolution), values_(std::move(values)) {
  if (n_ < 1) throw std::invalid_argument("DensityField: resolution must be positive");
  if (values_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_))
    throw std::invalid_argument("DensityField: value count does not match the resolution");
  double total = 0.0;
  for (double v : values_) {
    if (v < 0.0) throw std::invalid_argument("DensityField: negative value");
    total += v;
  }
  total /= static_cast<double>(n_) * static_cast<double>(n_);
  if (std::abs(total - 1.0) > 1e-10)
    throw std::invalid_argument("DensityField: total mass differs from 1");
}

DensityField DensityField::uniform(int n) {
  return DensityField(n, std::vector<double>(static_cast<std::size_t>(n) * n, 1.0));
}

DensityField DensityField::left_half(int n) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("DensityField::left_half: resolution must be even");
  std::vector<double> v(static_cast<std::size_t>(n) * n, 0.0);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n / 2; ++col) v[static_cast<std::size_t>(row) * n + col] = 2.0;
  return DensityField(n, std::move(v));
}

double DensityField::mass() const {
  double total = 0.0;
  for (double v : values_) total += v;
  return total / (static_cast<double>(n_) * static_cast<double>(n_));
}

int DensityField::occupied_cells() const {
  int count = 0;
  for (double v : values_)
    if (v != 0.0) ++count;
  return count;
}

DensityField coarse_grain_classical(const DensityField& field, const CellPartition& partition) {
  const int n = field.resolution();
  const int k = partition.cells_per_side;
  if (k < 1 || n % k != 0)
    throw std::invalid_argument("coarse_grain_classical: partition does not tile the grid");
  const int m = n / k;  // fine cells per coarse cell side
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int bi = 0; bi < k; ++bi)
    for (int bj = 0; bj < k; ++bj) {
      double sum = 0.0;
      bool any_nonzero = false;
      for (int r = bi * m; r < (bi + 1) * m; ++r)
        for (int c = bj * m; c < (bj + 1) * m; ++c) {
          const double v = field.value(r, c);
          sum += v;
          if (v != 0.0) any_nonzero = true;
        }
      // A cell on which the density vanishes identically stays exactly zero.
      const double avg = any_nonzero ? sum / (static_cast<double>(m) * m) : 0.0;
      for (int r = bi * m; r < (bi + 1) * m; ++r)
        for (int c = bj * m; c < (bj + 1) * m; ++c)
          out[static_cast<std::size_t>(r) * n + c] = avg;
    }
  return DensityField(n, std::move(out));
}

// Baker transform as an exact permutation of fine cells: the column index is
// halved (its parity feeds the doubled row index) and the halves are stacked
// side by side, so every cell value is carried to exactly one target cell.
DensityField mixing_step(const DensityField& field) {
  const int n = field.resolution();
  require_exact_cell_mode(n);
  std::vector<double> out(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int parity = j & 1;
      const int col = (j >> 1) + (i >= n / 2 ? n / 2 : 0);
      const int row = ((2 * i) % n) + parity;
      out[static_cast<std::size_t>(row) * n + col] = field.value(i, j);
    }
  return DensityField(n, std::move(out));
}

LiouvilleReport liouville_check(const std::vector<DensityField>& fields_over_time) {
  LiouvilleReport report;
  report.occupied_counts.reserve(fields_over_time.size());
  for (const DensityField& f : fields_over_time) report.occupied_counts.push_back(f.occupied_cells());
  report.constant = true;
  for (int c : report.occupied_counts)
    if (c != report.occupied_counts.front()) report.constant = false;
  return report;
}

double l1_distance_to_uniform(const DensityField& field) {
  const int n = field.resolution();
  double total = 0.0;
  for (double v : field.values()) total += std::abs(v - 1.0);
  return total / (static_cast<double>(n) * static_cast<double>(n));
}

EquilibriumSeries equilibrium_approach(const DensityField& initial,
                                       const CellPartition& partition, int steps) {
  const int n = initial.resolution();
  require_exact_cell_mode(n);
  if (partition.cells_per_side >= n)
    throw std::invalid_argument("equilibrium_approach: partition must be strictly coarser than the grid");
  if (partition.cells_per_side < 1 || n % partition.cells_per_side != 0)
    throw std::invalid_argument("equilibrium_approach: partition does not tile the grid");
  if (steps < 0) throw std::invalid_argument("equilibrium_approach: negative step count");

  EquilibriumSeries series;
  DensityField field = initial;
  for (int s = 0; s <= steps; ++s) {
    series.coarse_l1.push_back(l1_distance_to_uniform(coarse_grain_classical(field, partition)));
    series.fine_l1.push_back(l1_distance_to_uniform(field));
    series.mass.push_back(field.mass());
    series.occupied.push_back(field.occupied_cells());
    if (s < steps) field = mixing_step(field);
  }
  return series;
}

}  // namespace redstates
