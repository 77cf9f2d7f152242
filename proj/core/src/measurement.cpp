#include "redstates/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "redstates/reduction.hpp"

namespace redstates {

PointerFactor PointerFactor::standard(std::string label, int outcomes) {
  PointerFactor p;
  p.label = std::move(label);
  p.dim = outcomes + 1;
  p.ready_index = 0;
  p.outcome_indices.resize(static_cast<std::size_t>(outcomes));
  for (int i = 0; i < outcomes; ++i) p.outcome_indices[static_cast<std::size_t>(i)] = i + 1;
  return p;
}

void PointerFactor::validate() const {
  if (dim < 1 + static_cast<int>(outcome_indices.size()))
    throw std::invalid_argument("PointerFactor: dim must be at least 1 + outcomes");
  if (ready_index < 0 || ready_index >= dim)
    throw std::invalid_argument("PointerFactor: ready index out of range");
  std::unordered_set<int> seen;
  for (int idx : outcome_indices) {
    if (idx < 0 || idx >= dim)
      throw std::invalid_argument("PointerFactor: outcome index out of range");
    if (idx == ready_index)
      throw std::invalid_argument("PointerFactor: outcome index collides with the ready index");
    if (!seen.insert(idx).second)
      throw std::invalid_argument("PointerFactor: duplicate outcome index");
  }
}

MeasurementChain::MeasurementChain(StateVector system_initial)
    : system_space_(system_initial.space()), state_(std::move(system_initial)) {}

MeasurementChain::MeasurementChain(SpaceSpec system_space, std::vector<MeasurementStep> steps,
                                   StateVector state)
    : system_space_(std::move(system_space)), steps_(std::move(steps)), state_(std::move(state)) {}

namespace {

// Transposition swapping the pointer's ready level with the outcome level;
// Hermitian, self-inverse, manifestly unitary.
Eigen::MatrixXcd pointer_flip(const PointerFactor& pointer, int outcome) {
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(pointer.dim, pointer.dim);
  const int a = pointer.ready_index;
  const int b = pointer.outcome_indices[static_cast<std::size_t>(outcome)];
  t(a, a) = 0.0;
  t(b, b) = 0.0;
  t(a, b) = 1.0;
  t(b, a) = 1.0;
  return t;
}

const MeasurementStep& find_step(const MeasurementChain& chain, const std::string& pointer_label) {
  for (const MeasurementStep& s : chain.steps())
    if (s.pointer.label == pointer_label) return s;
  throw std::invalid_argument("measurement: unknown pointer '" + pointer_label + "'");
}

LinOp event_projector(const MeasurementChain& chain, const PointerEvent& event) {
  const MeasurementStep& step = find_step(chain, event.pointer_label);
  if (event.outcome < 0 ||
      event.outcome >= static_cast<int>(step.pointer.outcome_indices.size()))
    throw std::invalid_argument("measurement: unknown outcome for pointer '" +
                                event.pointer_label + "'");
  const int level = step.pointer.outcome_indices[static_cast<std::size_t>(event.outcome)];
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(step.pointer.dim, step.pointer.dim);
  p(level, level) = 1.0;
  return lift(LinOp(SpaceSpec::single(step.pointer.label, step.pointer.dim), std::move(p)),
              chain.state().space());
}

}  // namespace

MeasurementChain premeasure(const MeasurementChain& chain, const LinOp& observable,
                            const Eigen::MatrixXcd& eigenbasis, const PointerFactor& pointer) {
  pointer.validate();
  const SpaceSpec& system = chain.system_space();
  if (observable.space() != system)
    throw std::invalid_argument("premeasure: observable does not live on the system space");
  const Eigen::Index d_sys = system.total_dim();
  if (eigenbasis.rows() != d_sys || eigenbasis.cols() != d_sys)
    throw std::invalid_argument("premeasure: eigenbasis does not span the system space");
  if ((eigenbasis.adjoint() * eigenbasis - Eigen::MatrixXcd::Identity(d_sys, d_sys)).norm() >
      kDefaultTol)
    throw std::invalid_argument("premeasure: eigenbasis is not orthonormal");
  if (static_cast<Eigen::Index>(pointer.outcome_indices.size()) != d_sys)
    throw std::invalid_argument("premeasure: outcome map incomplete");
  if (chain.state().space().has_label(pointer.label))
    throw std::invalid_argument("premeasure: pointer label '" + pointer.label + "' already in use");

  const SpaceSpec pointer_space = SpaceSpec::single(pointer.label, pointer.dim);
  const SpaceSpec full = concat(chain.state().space(), pointer_space);

  // Attach the pointer in its ready state.
  StateVector ready = StateVector::basis_state(pointer_space, pointer.ready_index);
  StateVector appended = tensor_product(chain.state(), ready);

  // U = sum_i P_i (x) T_i over the measured eigenbasis.
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(full.total_dim(), full.total_dim());
  for (Eigen::Index i = 0; i < d_sys; ++i) {
    const Eigen::VectorXcd v = eigenbasis.col(i);
    LinOp projector = lift(LinOp(system, v * v.adjoint()), full);
    LinOp flip = lift(LinOp(pointer_space, pointer_flip(pointer, static_cast<int>(i))), full);
    u += (projector * flip).matrix();
  }

  StateVector coupled(full, u * appended.amplitudes());

  std::vector<MeasurementStep> steps = chain.steps();
  MeasurementStep step{observable, eigenbasis,
                       (eigenbasis.adjoint() * observable.matrix() * eigenbasis)
                           .diagonal()
                           .real(),
                       pointer};
  steps.push_back(std::move(step));
  return MeasurementChain(system, std::move(steps), std::move(coupled));
}

double joint_probability(const MeasurementChain& chain, const std::vector<PointerEvent>& events) {
  std::vector<LinOp> projectors;
  projectors.reserve(events.size());
  for (const PointerEvent& e : events) projectors.push_back(event_projector(chain, e));
  // Distinct factors guarantee commutation; keep the guard as an assertion.
  for (std::size_t i = 0; i < projectors.size(); ++i)
    for (std::size_t j = i + 1; j < projectors.size(); ++j)
      if (commutator(projectors[i], projectors[j]).frobenius_norm() > 1e-12)
        throw std::logic_error("joint_probability: event projectors do not commute");
  Eigen::VectorXcd projected = chain.state().amplitudes();
  for (const LinOp& p : projectors) projected = p.matrix() * projected;
  return projected.squaredNorm();
}

double conditional_probability(const MeasurementChain& chain, const PointerEvent& target,
                               const std::vector<PointerEvent>& given) {
  const double pr_given = joint_probability(chain, given);
  if (pr_given == 0.0)
    throw std::invalid_argument("conditional_probability: conditioning on a zero-probability event");
  std::vector<PointerEvent> all = given;
  all.push_back(target);
  return std::clamp(joint_probability(chain, all) / pr_given, 0.0, 1.0);
}

ReducedPredictorReport reduced_chain_predictor(const MeasurementChain& chain) {
  if (chain.steps().empty())
    throw std::invalid_argument("reduced_chain_predictor: no completed measurement");
  const MeasurementStep& last = chain.steps().back();
  const int outcomes = static_cast<int>(last.pointer.outcome_indices.size());

  std::string fresh = last.pointer.label + "'";
  while (chain.state().space().has_label(fresh)) fresh += "'";
  PointerFactor repeat = last.pointer;
  repeat.label = fresh;

  // What the uncollapsed chain actually predicts for a repeated measurement.
  MeasurementChain extended = premeasure(chain, last.observable, last.eigenbasis, repeat);
  std::vector<double> first_marginals(static_cast<std::size_t>(outcomes), 0.0);
  for (int k = 0; k < outcomes; ++k)
    first_marginals[static_cast<std::size_t>(k)] =
        joint_probability(chain, {{last.pointer.label, k}});
  std::vector<std::vector<double>> true_joint(
      static_cast<std::size_t>(outcomes), std::vector<double>(static_cast<std::size_t>(outcomes)));
  for (int k = 0; k < outcomes; ++k)
    for (int l = 0; l < outcomes; ++l)
      true_joint[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] =
          joint_probability(extended, {{last.pointer.label, k}, {fresh, l}});

  // The reduced-state pipeline: trace out every pointer, feed the result into
  // a fresh premeasurement as if it were the system's quantum state, and
  // read the second outcome off the reduced apparatus state. All correlation
  // with the first pointer is gone, so the joint factorizes.
  std::vector<std::string> pointer_labels;
  for (const MeasurementStep& s : chain.steps()) pointer_labels.push_back(s.pointer.label);
  DensityOperator rho_sys = partial_trace(pure(chain.state()), pointer_labels);

  const SpaceSpec pointer_space = SpaceSpec::single(fresh, repeat.dim);
  const SpaceSpec flawed_space = concat(chain.system_space(), pointer_space);
  Eigen::MatrixXcd ready = Eigen::MatrixXcd::Zero(repeat.dim, repeat.dim);
  ready(repeat.ready_index, repeat.ready_index) = 1.0;
  LinOp rho0 = tensor_product(rho_sys.op(), LinOp(pointer_space, std::move(ready)));

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(flawed_space.total_dim(), flawed_space.total_dim());
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(outcomes); ++i) {
    const Eigen::VectorXcd v = last.eigenbasis.col(i);
    LinOp projector = lift(LinOp(chain.system_space(), v * v.adjoint()), flawed_space);
    LinOp flip = lift(LinOp(pointer_space, pointer_flip(repeat, static_cast<int>(i))), flawed_space);
    u += (projector * flip).matrix();
  }
  DensityOperator rho2(
      LinOp(flawed_space, u * rho0.matrix() * u.adjoint()), Provenance::Reduced);

  std::vector<double> flawed_second(static_cast<std::size_t>(outcomes), 0.0);
  for (int l = 0; l < outcomes; ++l) {
    const int level = repeat.outcome_indices[static_cast<std::size_t>(l)];
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(repeat.dim, repeat.dim);
    p(level, level) = 1.0;
    flawed_second[static_cast<std::size_t>(l)] =
        expectation(rho2, lift(LinOp(pointer_space, std::move(p)), flawed_space));
  }

  ReducedPredictorReport report;
  report.outcomes = outcomes;
  report.first_marginals = first_marginals;
  report.flawed_second_marginals = flawed_second;
  report.true_joint = true_joint;
  report.flawed_joint.assign(static_cast<std::size_t>(outcomes),
                             std::vector<double>(static_cast<std::size_t>(outcomes), 0.0));
  for (int k = 0; k < outcomes; ++k)
    for (int l = 0; l < outcomes; ++l) {
      const double flawed = first_marginals[static_cast<std::size_t>(k)] *
                            flawed_second[static_cast<std::size_t>(l)];
      report.flawed_joint[static_cast<std::size_t>(k)][static_cast<std::size_t>(l)] = flawed;
      report.max_discrepancy =
          std::max(report.max_discrepancy,
                   std::abs(flawed - true_joint[static_cast<std::size_t>(k)]
                                               [static_cast<std::size_t>(l)]));
    }
  report.disagrees = report.max_discrepancy > kDefaultTol;
  return report;
}

std::pair<Eigen::Vector2cd, Eigen::Vector2cd> spin_basis_rotation(const Eigen::Vector2cd& z_plus,
                                                                  const Eigen::Vector2cd& z_minus) {
  if (std::abs(z_plus.norm() - 1.0) > kDefaultTol || std::abs(z_minus.norm() - 1.0) > kDefaultTol ||
      std::abs(z_plus.dot(z_minus)) > kDefaultTol)
    throw std::invalid_argument("spin_basis_rotation: input vectors are not orthonormal");
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  return {inv_sqrt2 * (z_plus + z_minus), inv_sqrt2 * (z_plus - z_minus)};
}

}  // namespace redstates
