// Seeded random generation of states, observables and couplings.
// All draws go through explicit bit-to-double mappings so that a given seed
// reproduces the same sequence everywhere.
#pragma once

#include <cstdint>
#include <random>

#include "redstates/states.hpp"

namespace redstates {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform();                        // [0, 1)
  double uniform(double lo, double hi);    // [lo, hi)
  double gaussian();                       // standard normal (Box-Muller)
  std::complex<double> complex_gaussian();

 private:
  std::mt19937_64 engine_;
};

StateVector random_state(const SpaceSpec& space, Rng& rng);
LinOp random_hermitian(const SpaceSpec& space, Rng& rng);
DensityOperator random_density(const SpaceSpec& space, Rng& rng);
std::vector<double> random_couplings(int count, double lo, double hi, Rng& rng);

}  // namespace redstates
