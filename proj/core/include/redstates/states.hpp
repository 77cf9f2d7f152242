// Density operators with validated physical invariants and provenance tags,
// pure-state vectors, expectation values and purity.
#pragma once

#include <string_view>
#include <vector>

#include "redstates/linop.hpp"

namespace redstates {

// How a density operator came about. Pure metadata: it never changes any
// matrix element, only reporting.
enum class Provenance { Fundamental, Reduced, CoarseGrained, ProperMixture };

std::string_view provenance_name(Provenance p);

class StateVector {
 public:
  // Amplitudes must have unit norm within `tol`.
  StateVector(SpaceSpec space, Eigen::VectorXcd amplitudes, double tol = kDefaultTol);

  static StateVector basis_state(const SpaceSpec& space, int index);

  const SpaceSpec& space() const { return space_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

 private:
  SpaceSpec space_;
  Eigen::VectorXcd amplitudes_;
};

StateVector tensor_product(const StateVector& a, const StateVector& b);

class DensityOperator {
 public:
  // Validates unit trace (1e-10), Hermiticity (1e-10, Frobenius) and
  // positive semidefiniteness (min eigenvalue >= -1e-10).
  explicit DensityOperator(LinOp op, Provenance provenance = Provenance::Fundamental);

  const LinOp& op() const { return op_; }
  const SpaceSpec& space() const { return op_.space(); }
  const Eigen::MatrixXcd& matrix() const { return op_.matrix(); }
  Provenance provenance() const { return provenance_; }

  DensityOperator with_provenance(Provenance p) const;

 private:
  LinOp op_;
  Provenance provenance_;
};

// |psi><psi| with provenance = Fundamental.
DensityOperator pure(const StateVector& v);

// Convex combination with provenance = ProperMixture. Weights must be
// nonnegative and sum to 1 within 1e-10; all components share one space.
DensityOperator proper_mixture(const std::vector<double>& weights,
                               const std::vector<DensityOperator>& components);

// Tr(rho O) for a Hermitian observable; the imaginary part must vanish
// within 1e-10 and is discarded after the check.
double expectation(const DensityOperator& rho, const LinOp& observable);

// Tr(rho^2), in [1/d, 1].
double purity(const DensityOperator& rho);

}  // namespace redstates
