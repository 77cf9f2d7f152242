#include "redstates/decoherence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "redstates/reduction.hpp"

namespace redstates {

namespace {

constexpr int kMaxBathSize = 11;

SpaceSpec spin_bath_space(int bath_size) {
  std::vector<Factor> factors;
  factors.push_back({"S", 2});
  for (int k = 1; k <= bath_size; ++k) factors.push_back({"E" + std::to_string(k), 2});
  return SpaceSpec(std::move(factors));
}

// H_int = sum_k (g_k/2) sigma_z^S (x) sigma_z^(k): diagonal in the product
// basis, assembled entry by entry.
LinOp interaction_term(const SpaceSpec& space, const std::vector<double>& couplings) {
  const int n = static_cast<int>(couplings.size());
  const Eigen::Index dim = space.total_dim();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    const double zs = ((idx >> n) & 1) ? -1.0 : 1.0;
    double value = 0.0;
    for (int k = 0; k < n; ++k) {
      const double zk = ((idx >> (n - 1 - k)) & 1) ? -1.0 : 1.0;
      value += 0.5 * couplings[static_cast<std::size_t>(k)] * zs * zk;
    }
    h(idx, idx) = value;
  }
  return LinOp(space, std::move(h));
}

Hamiltonian spin_bath_hamiltonian(const SpaceSpec& space, const std::vector<double>& couplings,
                                  const std::optional<Eigen::Matrix2cd>& system_h) {
  const SpaceSpec system = space.subspace({"S"});
  LinOp h1 = system_h ? LinOp(system, *system_h) : LinOp::zero(system);
  std::vector<std::string> bath_labels = space.complement({"S"});
  LinOp h2 = LinOp::zero(space.subspace(bath_labels));
  return Hamiltonian(space, {"S"}, std::move(h1), std::move(h2),
                     interaction_term(space, couplings));
}

}  // namespace

SpinBathModel::SpinBathModel(int bath_size, std::vector<double> couplings, SpinBathOptions options)
    : bath_size_(bath_size),
      couplings_(std::move(couplings)),
      bath_amplitudes_(std::move(options.bath_amplitudes)),
      system_space_(SpaceSpec::single("S", 2)),
      hamiltonian_(spin_bath_hamiltonian(spin_bath_space(bath_size), couplings_,
                                         options.system_hamiltonian)) {
  if (bath_size_ < 1 || bath_size_ > kMaxBathSize)
    throw std::invalid_argument("SpinBathModel: bath size must be in 1.." +
                                std::to_string(kMaxBathSize));
  if (static_cast<int>(couplings_.size()) != bath_size_)
    throw std::invalid_argument("SpinBathModel: coupling count must equal the bath size");
  for (double g : couplings_)
    if (!std::isfinite(g)) throw std::invalid_argument("SpinBathModel: non-finite coupling");
  if (bath_amplitudes_.empty()) {
    const double a = 1.0 / std::numbers::sqrt2;
    bath_amplitudes_.assign(static_cast<std::size_t>(bath_size_), {a, a});
  }
  if (static_cast<int>(bath_amplitudes_.size()) != bath_size_)
    throw std::invalid_argument("SpinBathModel: bath amplitude count must equal the bath size");
}

StateVector SpinBathModel::bath_state() const {
  const auto& amp0 = bath_amplitudes_.front();
  Eigen::Vector2cd first;
  first << amp0.first, amp0.second;
  StateVector bath(SpaceSpec::single("E1", 2), first);
  for (int k = 2; k <= bath_size_; ++k) {
    const auto& a = bath_amplitudes_[static_cast<std::size_t>(k - 1)];
    Eigen::Vector2cd v;
    v << a.first, a.second;
    bath = tensor_product(bath, StateVector(SpaceSpec::single("E" + std::to_string(k), 2), v));
  }
  return bath;
}

SpinBathModel build_spin_bath(int bath_size, const std::vector<double>& couplings,
                              const SpinBathOptions& options) {
  return SpinBathModel(bath_size, couplings, options);
}

DecoherenceTrajectory run_trajectory(const SpinBathModel& model,
                                     std::complex<double> c_plus, std::complex<double> c_minus,
                                     const std::vector<double>& times) {
  if (std::abs(std::norm(c_plus) + std::norm(c_minus) - 1.0) > kDefaultTol)
    throw std::invalid_argument("run_trajectory: system amplitudes are not normalized");
  if (!std::is_sorted(times.begin(), times.end()))
    throw std::invalid_argument("run_trajectory: times must be sorted ascending");

  Eigen::Vector2cd sys;
  sys << c_plus, c_minus;
  StateVector psi0 = tensor_product(StateVector(model.system_space(), sys), model.bath_state());

  EvolutionPlan plan(model.hamiltonian());
  const std::vector<std::string> bath_labels = model.space().complement({"S"});

  DecoherenceTrajectory traj;
  traj.c_plus = c_plus;
  traj.c_minus = c_minus;
  traj.times = times;
  traj.reduced_states.reserve(times.size());
  for (double t : times) {
    StateVector psi(model.space(), plan.apply(psi0.amplitudes(), t));
    traj.reduced_states.push_back(partial_trace(psi, bath_labels));
    const double norm2 = psi.amplitudes().squaredNorm();
    traj.full_purity.push_back(norm2 * norm2);
  }
  for (const DensityOperator& rho : traj.reduced_states) {
    traj.offdiag_magnitudes.push_back(std::abs(rho.matrix()(0, 1)));
    traj.purity_series.push_back(purity(rho));
  }
  return traj;
}

std::optional<double> decoherence_time(const DecoherenceTrajectory& trajectory,
                                       double threshold_fraction) {
  if (trajectory.times.empty())
    throw std::invalid_argument("decoherence_time: empty trajectory");
  const double initial = trajectory.offdiag_magnitudes.front();
  if (initial < 1e-15)
    throw std::invalid_argument("decoherence_time: zero initial coherence");
  const double threshold = threshold_fraction * initial;
  for (std::size_t i = 0; i < trajectory.times.size(); ++i)
    if (trajectory.offdiag_magnitudes[i] <= threshold) return trajectory.times[i];
  return std::nullopt;
}

RevivalReport recoherence_check(const SpinBathModel& model,
                                const DecoherenceTrajectory& trajectory) {
  const std::vector<double>& g = model.couplings();
  for (double gk : g)
    if (std::abs(gk - g.front()) > 1e-12)
      throw std::invalid_argument("recoherence_check: couplings are not commensurate");

  RevivalReport report;
  report.initial_coherence = trajectory.offdiag_magnitudes.front();

  const double g0 = std::abs(g.front());
  if (g0 == 0.0) {
    // No interaction: the coherence never decays, revival is trivial.
    report.revival_time = 0.0;
    double max_dev = 0.0;
    for (double v : trajectory.offdiag_magnitudes)
      max_dev = std::max(max_dev, std::abs(v - report.initial_coherence));
    report.revived_coherence = report.initial_coherence;
    report.revived = max_dev <= 1e-8;
  } else {
    report.revival_time = std::numbers::pi / g0;
    DecoherenceTrajectory at_revival =
        run_trajectory(model, trajectory.c_plus, trajectory.c_minus, {report.revival_time});
    report.revived_coherence = at_revival.offdiag_magnitudes.front();
    report.revived = std::abs(report.revived_coherence - report.initial_coherence) <= 1e-8;
  }

  // Comparison state: the proper mixture with the same matrix as the
  // decohered reduced state, prepared as a product with the same bath. Its
  // off-diagonal stays exactly zero under the same dynamics.
  StateVector bath = model.bath_state();
  StateVector up = StateVector::basis_state(model.system_space(), 0);
  StateVector down = StateVector::basis_state(model.system_space(), 1);
  DensityOperator mixture =
      proper_mixture({std::norm(trajectory.c_plus), std::norm(trajectory.c_minus)},
                     {pure(tensor_product(up, bath)), pure(tensor_product(down, bath))});

  EvolutionPlan plan(model.hamiltonian());
  const std::vector<std::string> bath_labels = model.space().complement({"S"});
  double max_coherence = 0.0;
  for (double t : trajectory.times) {
    DensityOperator reduced = partial_trace(plan.evolve(mixture, t), bath_labels);
    const double coherence = std::abs(reduced.matrix()(0, 1));
    report.mixture_coherences.push_back(coherence);
    max_coherence = std::max(max_coherence, coherence);
  }
  report.mixture_max_coherence = max_coherence;
  report.mixture_stays_diagonal = max_coherence < 1e-12;
  return report;
}

ConvergenceReport expectation_convergence(
    const DecoherenceTrajectory& trajectory,
    const std::vector<std::pair<std::string, LinOp>>& observables,
    double epsilon, double window_fraction) {
  const std::size_t n = trajectory.reduced_states.size();
  if (n == 0) throw std::invalid_argument("expectation_convergence: empty trajectory");
  std::size_t window = static_cast<std::size_t>(std::floor(static_cast<double>(n) * window_fraction));
  window = std::clamp<std::size_t>(window, 1, n);
  const std::size_t start = n - window;

  ConvergenceReport report;
  report.epsilon = epsilon;
  report.window_fraction = window_fraction;
  for (const auto& [name, obs] : observables) {
    std::vector<double> series;
    series.reserve(n);
    for (const DensityOperator& rho : trajectory.reduced_states)
      series.push_back(expectation(rho, obs));

    double mean = 0.0;
    for (std::size_t i = start; i < n; ++i) mean += series[i];
    mean /= static_cast<double>(window);
    // Mean absolute deviation from the late-window mean.
    double fluctuation = 0.0;
    for (std::size_t i = start; i < n; ++i) fluctuation += std::abs(series[i] - mean);
    fluctuation /= static_cast<double>(window);

    ObservableConvergence entry;
    entry.name = name;
    entry.initial_value = series.front();
    entry.late_mean = mean;
    entry.fluctuation = fluctuation;
    entry.converged = fluctuation <= epsilon * std::max(std::abs(series.front()), 1e-12);
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace redstates
