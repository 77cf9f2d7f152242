#include "redstates/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace redstates {

namespace {

LinOp assemble_total(const SpaceSpec& space, const LinOp& h1, const LinOp& h2, const LinOp& h_int) {
  return lift(h1, space) + lift(h2, space) + h_int;
}

}  // namespace

Hamiltonian::Hamiltonian(SpaceSpec space, std::vector<std::string> first_labels,
                         LinOp h1, LinOp h2, LinOp h_int)
    : space_(std::move(space)),
      first_labels_(std::move(first_labels)),
      second_labels_(space_.complement(first_labels_)),
      h1_(std::move(h1)),
      h2_(std::move(h2)),
      h_int_(std::move(h_int)),
      total_(assemble_total(space_, h1_, h2_, h_int_)) {
  if (first_labels_.empty() || second_labels_.empty())
    throw std::invalid_argument("Hamiltonian: both partition blocks must be nonempty");
  if (h1_.space() != space_.subspace(first_labels_))
    throw std::invalid_argument("Hamiltonian: h1 does not live on the first block");
  if (h2_.space() != space_.subspace(second_labels_))
    throw std::invalid_argument("Hamiltonian: h2 does not live on the second block");
  if (h_int_.space() != space_)
    throw std::invalid_argument("Hamiltonian: h_int does not live on the full space");
  if (!h1_.is_hermitian(kDefaultTol) || !h2_.is_hermitian(kDefaultTol) ||
      !h_int_.is_hermitian(kDefaultTol))
    throw std::invalid_argument("Hamiltonian: parts must be Hermitian");
}

Hamiltonian Hamiltonian::noninteracting(SpaceSpec space, std::vector<std::string> first_labels,
                                        LinOp h1, LinOp h2) {
  LinOp zero = LinOp::zero(space);
  return Hamiltonian(std::move(space), std::move(first_labels), std::move(h1), std::move(h2),
                     std::move(zero));
}

bool Hamiltonian::interaction_free(double tol) const {
  return h_int_.frobenius_norm() <= tol;
}

EvolutionPlan::EvolutionPlan(const LinOp& hermitian_generator)
    : space_(hermitian_generator.space()) {
  if (!hermitian_generator.is_hermitian(kDefaultTol))
    throw std::invalid_argument("EvolutionPlan: generator is not Hermitian");
  const Eigen::MatrixXcd& h = hermitian_generator.matrix();
  const Eigen::Index d = h.rows();
  double offdiag = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      if (i != j) offdiag += std::norm(h(i, j));
  if (offdiag == 0.0) {
    diagonal_ = true;
    eigenvalues_ = h.diagonal().real();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    eigenvalues_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }
}

LinOp EvolutionPlan::unitary(double t) const {
  const Eigen::Index d = eigenvalues_.size();
  Eigen::VectorXcd phases(d);
  for (Eigen::Index i = 0; i < d; ++i)
    phases(i) = std::polar(1.0, -eigenvalues_(i) * t);
  if (diagonal_) return LinOp(space_, phases.asDiagonal().toDenseMatrix());
  return LinOp(space_, vectors_ * phases.asDiagonal() * vectors_.adjoint());
}

Eigen::VectorXcd EvolutionPlan::apply(const Eigen::VectorXcd& amplitudes, double t) const {
  const Eigen::Index d = eigenvalues_.size();
  if (amplitudes.size() != d)
    throw std::invalid_argument("EvolutionPlan::apply: size mismatch");
  Eigen::VectorXcd phases(d);
  for (Eigen::Index i = 0; i < d; ++i)
    phases(i) = std::polar(1.0, -eigenvalues_(i) * t);
  if (diagonal_) return phases.cwiseProduct(amplitudes);
  return vectors_ * phases.cwiseProduct(vectors_.adjoint() * amplitudes);
}

StateVector EvolutionPlan::evolve(const StateVector& psi, double t) const {
  if (psi.space() != space_) throw std::invalid_argument("EvolutionPlan::evolve: space mismatch");
  return StateVector(space_, apply(psi.amplitudes(), t));
}

DensityOperator EvolutionPlan::evolve(const DensityOperator& rho, double t) const {
  if (rho.space() != space_) throw std::invalid_argument("EvolutionPlan::evolve: space mismatch");
  const Eigen::MatrixXcd u = unitary(t).matrix();
  return DensityOperator(LinOp(space_, u * rho.matrix() * u.adjoint()), rho.provenance());
}

LinOp propagator(const Hamiltonian& h, double t) { return EvolutionPlan(h).unitary(t); }

DensityOperator evolve(const DensityOperator& rho, const Hamiltonian& h, double t) {
  return EvolutionPlan(h).evolve(rho, t);
}

FactorizationResult factorization_check(const Hamiltonian& h, double t) {
  const LinOp u = propagator(h, t);
  const LinOp u1 = lift(EvolutionPlan(h.local_first()).unitary(t), h.space());
  const LinOp u2 = lift(EvolutionPlan(h.local_second()).unitary(t), h.space());
  FactorizationResult result;
  result.residual = frobenius_distance(u, u1 * u2);
  result.factorizes = h.interaction_free() && result.residual < kDefaultTol;
  return result;
}

DensityOperator evolve_reduced_noninteracting(const DensityOperator& reduced,
                                              const LinOp& h_local, double t) {
  if (h_local.space() != reduced.space())
    throw std::invalid_argument("evolve_reduced_noninteracting: space mismatch");
  if (!h_local.is_hermitian(kDefaultTol))
    throw std::invalid_argument("evolve_reduced_noninteracting: generator is not Hermitian");
  return EvolutionPlan(h_local).evolve(reduced, t);
}

}  // namespace redstates
