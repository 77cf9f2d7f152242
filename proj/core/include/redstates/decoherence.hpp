// Central-spin/spin-bath experiments: exact closed-system evolution, reduced
// trajectories of the central qubit, off-diagonal decay and revival, and
// convergence of system expectation values.
//
// Default model: H_int = sum_k (g_k/2) sigma_z^S (x) sigma_z^(k), zero local
// Hamiltonians, bath spins prepared in (|0> + |1>)/sqrt(2).
#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "redstates/dynamics.hpp"

namespace redstates {

struct SpinBathOptions {
  // 2x2 Hermitian system Hamiltonian; zero when absent.
  std::optional<Eigen::Matrix2cd> system_hamiltonian;
  // Per-spin bath amplitudes (up, down); (1/sqrt(2), 1/sqrt(2)) when empty.
  std::vector<std::pair<std::complex<double>, std::complex<double>>> bath_amplitudes;
};

class SpinBathModel {
 public:
  SpinBathModel(int bath_size, std::vector<double> couplings, SpinBathOptions options);

  int bath_size() const { return bath_size_; }
  const std::vector<double>& couplings() const { return couplings_; }
  const SpaceSpec& space() const { return hamiltonian_.space(); }
  const Hamiltonian& hamiltonian() const { return hamiltonian_; }
  const SpaceSpec& system_space() const { return system_space_; }

  // Product state of all bath spins.
  StateVector bath_state() const;

 private:
  int bath_size_;
  std::vector<double> couplings_;
  std::vector<std::pair<std::complex<double>, std::complex<double>>> bath_amplitudes_;
  SpaceSpec system_space_;
  Hamiltonian hamiltonian_;
};

// Bath size 1..11 (total dimension 2^(N+1) within the cap), one coupling per
// bath spin.
SpinBathModel build_spin_bath(int bath_size, const std::vector<double>& couplings,
                              const SpinBathOptions& options = {});

struct DecoherenceTrajectory {
  std::complex<double> c_plus;
  std::complex<double> c_minus;
  std::vector<double> times;
  std::vector<DensityOperator> reduced_states;  // provenance Reduced
  std::vector<double> offdiag_magnitudes;       // |<0|rho_r(t)|1>|, recomputed from reduced_states
  std::vector<double> purity_series;            // Tr(rho_r^2)
  std::vector<double> full_purity;              // closed-system check, = 1 to rounding
};

// Exact evolution of (c+|0> + c-|1>) (x) bath, reduced by tracing the bath
// at each sample time. Times must be sorted ascending.
DecoherenceTrajectory run_trajectory(const SpinBathModel& model,
                                     std::complex<double> c_plus, std::complex<double> c_minus,
                                     const std::vector<double>& times);

// First sampled time with |rho01(t)| <= threshold * |rho01(0)|; empty when
// never crossed. Requires nonzero initial coherence.
std::optional<double> decoherence_time(const DecoherenceTrajectory& trajectory,
                                       double threshold_fraction = 0.36787944117144233);

struct RevivalReport {
  double revival_time = 0.0;          // pi/g (0 in the g = 0 case)
  double initial_coherence = 0.0;
  double revived_coherence = 0.0;
  bool revived = false;               // within 1e-8 of the initial coherence
  // A proper mixture with the same matrix as the decohered reduced state,
  // prepared as a product with the same bath, never develops coherence.
  std::vector<double> mixture_coherences;  // |rho01| series on the trajectory grid
  double mixture_max_coherence = 0.0;
  bool mixture_stays_diagonal = false;  // max over the grid < 1e-12
};

// Requires all couplings equal (commensurate case). For g = 0 the coherence
// is constant and the revival is reported as trivial.
RevivalReport recoherence_check(const SpinBathModel& model,
                                const DecoherenceTrajectory& trajectory);

struct ObservableConvergence {
  std::string name;
  double initial_value = 0.0;
  double late_mean = 0.0;
  double fluctuation = 0.0;  // mean absolute deviation from the late-window mean
  bool converged = false;    // fluctuation <= epsilon * max(|initial|, 1e-12)
};

struct ConvergenceReport {
  double epsilon = 0.05;
  double window_fraction = 0.5;
  std::vector<ObservableConvergence> entries;
};

// Late-window statistics of <O>(t) for Hermitian observables on the system
// factor.
ConvergenceReport expectation_convergence(
    const DecoherenceTrajectory& trajectory,
    const std::vector<std::pair<std::string, LinOp>>& observables,
    double epsilon = 0.05, double window_fraction = 0.5);

}  // namespace redstates
