// Collapse-free von Neumann measurement chains: premeasurement couplings
// that correlate system eigenstates with pointer states, joint and
// conditional pointer probabilities computed on the uncollapsed state, and
// the factorized predictions a reduced-state reading would make.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "redstates/states.hpp"

namespace redstates {

struct PointerFactor {
  std::string label;
  int dim = 0;
  int ready_index = 0;
  std::vector<int> outcome_indices;  // measured-eigenvalue index -> pointer level

  // dim = outcomes + 1, ready level 0, outcome i at level i + 1.
  static PointerFactor standard(std::string label, int outcomes);

  void validate() const;
};

struct MeasurementStep {
  LinOp observable;             // on the system space; eigenvalues report-only
  Eigen::MatrixXcd eigenbasis;  // orthonormal columns
  Eigen::VectorXd eigenvalues;
  PointerFactor pointer;
};

// Immutable record of premeasurements applied to a growing composite space
// (system factors first, then one factor per attached pointer).
class MeasurementChain {
 public:
  explicit MeasurementChain(StateVector system_initial);

  const SpaceSpec& system_space() const { return system_space_; }
  const StateVector& state() const { return state_; }
  const std::vector<MeasurementStep>& steps() const { return steps_; }

  friend MeasurementChain premeasure(const MeasurementChain& chain, const LinOp& observable,
                                     const Eigen::MatrixXcd& eigenbasis,
                                     const PointerFactor& pointer);

 private:
  MeasurementChain(SpaceSpec system_space, std::vector<MeasurementStep> steps, StateVector state);

  SpaceSpec system_space_;
  std::vector<MeasurementStep> steps_;
  StateVector state_;
};

// Appends the pointer in its ready state and applies the coupling unitary
// U = sum_i P_i (x) T_i, where P_i projects onto eigenvector i and T_i swaps
// the pointer's ready level with the outcome level for i. No collapse.
MeasurementChain premeasure(const MeasurementChain& chain, const LinOp& observable,
                            const Eigen::MatrixXcd& eigenbasis, const PointerFactor& pointer);

struct PointerEvent {
  std::string pointer_label;
  int outcome = 0;  // measured-eigenvalue index
};

// || P_events |Psi> ||^2. The event projectors live on distinct factors and
// therefore commute; a commutator assertion guards the conjunction anyway.
double joint_probability(const MeasurementChain& chain, const std::vector<PointerEvent>& events);

// pr(target and given) / pr(given); requires pr(given) > 0.
double conditional_probability(const MeasurementChain& chain, const PointerEvent& target,
                               const std::vector<PointerEvent>& given);

// What a second, identical measurement predicts when the reduced state of
// the system is (wrongly) fed in as its quantum state, next to what the
// uncollapsed chain actually yields.
struct ReducedPredictorReport {
  int outcomes = 0;
  std::vector<double> first_marginals;           // pr of each first outcome
  std::vector<double> flawed_second_marginals;   // from the reduced-state pipeline
  std::vector<std::vector<double>> flawed_joint; // factorized: p_k * q_l
  std::vector<std::vector<double>> true_joint;   // from the full chain state
  double max_discrepancy = 0.0;
  bool disagrees = false;                        // max_discrepancy > 1e-10
};

ReducedPredictorReport reduced_chain_predictor(const MeasurementChain& chain);

// |x+-> = (|z+> +- |z->)/sqrt(2) for an orthonormal input pair. Applying the
// rotation twice returns the original basis.
std::pair<Eigen::Vector2cd, Eigen::Vector2cd> spin_basis_rotation(const Eigen::Vector2cd& z_plus,
                                                                  const Eigen::Vector2cd& z_minus);

}  // namespace redstates
