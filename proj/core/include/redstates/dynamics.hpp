// Hamiltonians with an explicit bipartite decomposition H1 + H2 + H_int,
// exact unitary propagation via Hermitian eigendecomposition, and the
// factorization of the propagator in the interaction-free case.
#pragma once

#include <string>
#include <vector>

#include "redstates/states.hpp"

namespace redstates {

class Hamiltonian {
 public:
  // `first_labels` selects one block of the partition; the second block is
  // its complement in `space` (both must be nonempty). h1 lives on the first
  // block's subspace, h2 on the second's, h_int on the full space. Every
  // part must be Hermitian within 1e-10.
  Hamiltonian(SpaceSpec space, std::vector<std::string> first_labels,
              LinOp h1, LinOp h2, LinOp h_int);

  static Hamiltonian noninteracting(SpaceSpec space, std::vector<std::string> first_labels,
                                    LinOp h1, LinOp h2);

  const SpaceSpec& space() const { return space_; }
  const std::vector<std::string>& first_labels() const { return first_labels_; }
  const std::vector<std::string>& second_labels() const { return second_labels_; }
  const LinOp& local_first() const { return h1_; }
  const LinOp& local_second() const { return h2_; }
  const LinOp& interaction() const { return h_int_; }

  // lift(h1) + lift(h2) + h_int, assembled once.
  const LinOp& total() const { return total_; }

  bool interaction_free(double tol = 1e-12) const;

 private:
  SpaceSpec space_;
  std::vector<std::string> first_labels_;
  std::vector<std::string> second_labels_;
  LinOp h1_;
  LinOp h2_;
  LinOp h_int_;
  LinOp total_;
};

// Spectral decomposition of a Hermitian generator, reused across times.
// U(t) = V exp(-i Lambda t) V^dagger; hbar = 1 throughout.
class EvolutionPlan {
 public:
  explicit EvolutionPlan(const LinOp& hermitian_generator);
  explicit EvolutionPlan(const Hamiltonian& h) : EvolutionPlan(h.total()) {}

  const SpaceSpec& space() const { return space_; }

  LinOp unitary(double t) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& amplitudes, double t) const;
  StateVector evolve(const StateVector& psi, double t) const;
  DensityOperator evolve(const DensityOperator& rho, double t) const;

 private:
  SpaceSpec space_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd vectors_;  // unused on the diagonal fast path
  bool diagonal_ = false;
};

// U(t) = exp(-i H t).
LinOp propagator(const Hamiltonian& h, double t);

// U rho U^dagger. Preserves trace, spectrum, purity and provenance.
DensityOperator evolve(const DensityOperator& rho, const Hamiltonian& h, double t);

struct FactorizationResult {
  bool factorizes = false;  // true iff h_int = 0 and residual < 1e-10
  double residual = 0.0;    // || exp(-iHt) - exp(-iH1t) exp(-iH2t) ||_F
};

FactorizationResult factorization_check(const Hamiltonian& h, double t);

// Local unitary evolution of a reduced state; equals the partial trace of
// the full evolution whenever h_int = 0.
DensityOperator evolve_reduced_noninteracting(const DensityOperator& reduced,
                                              const LinOp& h_local, double t);

}  // namespace redstates
