// Partial traces, the expectation-value definition of reduced states, and
// the coarse-graining projector that maps a state to its reduced state
// tensored with the normalized identity on the traced factors.
#pragma once

#include <string>
#include <vector>

#include "redstates/dynamics.hpp"
#include "redstates/states.hpp"

namespace redstates {

// Reduced state on the retained factors. `traced` must be a nonempty proper
// subset of the space's labels. Provenance of the result is Reduced.
DensityOperator partial_trace(const DensityOperator& rho,
                              const std::vector<std::string>& traced);

// Reduction of a pure state, computed without forming the full projector.
DensityOperator partial_trace(const StateVector& psi, const std::vector<std::string>& traced);

// Max residual |<lift(O1)>_rho - <O1>_rho_r| over a complete Hermitian
// operator basis of the retained factors. The basis elements have unit
// maximal entry, so a diagonal perturbation of rho_r by eps shows up as a
// residual >= eps.
double verify_reduced_definition(const DensityOperator& rho,
                                 const DensityOperator& rho_r,
                                 const std::vector<std::string>& retained);

// Complete Hermitian operator basis of a space (d^2 elements): E_kk, then
// E_kl + E_lk and i(E_kl - E_lk) for k < l.
std::vector<LinOp> hermitian_basis(const SpaceSpec& space);

struct CoarseGrainedState {
  DensityOperator rho_cg;                   // on the full space, CoarseGrained
  std::vector<std::string> traced_labels;
  LinOp normalized_identity;                // I/d on the traced subspace
};

// rho_cg = (reduced state) (x) I/d_traced, a valid density operator on the
// full space; fixed point of the same map.
CoarseGrainedState coarse_grain(const DensityOperator& rho,
                                const std::vector<std::string>& traced);

// Tracing the coarse-grained state over its traced factors gives back the
// reduced state exactly.
DensityOperator recover_reduced(const CoarseGrainedState& cg);

// |<lift(o1)>_{Pi rho} - <o1>_{rho_r}| for a Hermitian observable on the
// retained factors.
double coarse_grained_expectation_check(const DensityOperator& rho, const LinOp& o1,
                                        const std::vector<std::string>& traced);

// Pi applied to the exactly evolved state at each sample time. The purity of
// the result may vary in t when the partition interacts.
std::vector<CoarseGrainedState> coarse_grained_trajectory(
    const DensityOperator& rho0, const Hamiltonian& h,
    const std::vector<double>& times, const std::vector<std::string>& traced);

// The linear action of the coarse-graining map on an arbitrary operator.
LinOp apply_coarse_graining(const LinOp& op, const std::vector<std::string>& traced);

// The coarse-graining map materialized as a d^2 x d^2 matrix over the
// column-major operator basis. Test-only path: requires total_dim <= 36.
Eigen::MatrixXcd materialize_projector(const SpaceSpec& space,
                                       const std::vector<std::string>& traced);

}  // namespace redstates
