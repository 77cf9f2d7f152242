#include "redstates/states.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace redstates {

std::string_view provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Fundamental: return "fundamental";
    case Provenance::Reduced: return "reduced";
    case Provenance::CoarseGrained: return "coarse-grained";
    case Provenance::ProperMixture: return "proper-mixture";
  }
  return "unknown";
}

StateVector::StateVector(SpaceSpec space, Eigen::VectorXcd amplitudes, double tol)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() != space_.total_dim())
    throw std::invalid_argument("StateVector: amplitude count does not match " + space_.describe());
  if (std::abs(amplitudes_.norm() - 1.0) > tol)
    throw std::invalid_argument("StateVector: amplitudes are not normalized");
}

StateVector StateVector::basis_state(const SpaceSpec& space, int index) {
  if (index < 0 || index >= space.total_dim())
    throw std::invalid_argument("StateVector::basis_state: index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(space.total_dim());
  v(index) = 1.0;
  return StateVector(space, std::move(v));
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  SpaceSpec product = concat(a.space(), b.space());
  const Eigen::Index db = b.amplitudes().size();
  Eigen::VectorXcd out(product.total_dim());
  for (Eigen::Index i = 0; i < a.amplitudes().size(); ++i)
    out.segment(i * db, db) = a.amplitudes()(i) * b.amplitudes();
  return StateVector(std::move(product), std::move(out));
}

DensityOperator::DensityOperator(LinOp op, Provenance provenance)
    : op_(std::move(op)), provenance_(provenance) {
  const Eigen::MatrixXcd& m = op_.matrix();
  const std::complex<double> tr = m.trace();
  if (std::abs(tr - 1.0) > kDefaultTol)
    throw std::invalid_argument("DensityOperator: trace differs from 1");
  if (!op_.is_hermitian(kDefaultTol))
    throw std::invalid_argument("DensityOperator: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kDefaultTol)
    throw std::invalid_argument("DensityOperator: matrix is not positive semidefinite");
}

DensityOperator DensityOperator::with_provenance(Provenance p) const {
  DensityOperator copy = *this;
  copy.provenance_ = p;
  return copy;
}

DensityOperator pure(const StateVector& v) {
  Eigen::MatrixXcd m = v.amplitudes() * v.amplitudes().adjoint();
  return DensityOperator(LinOp(v.space(), std::move(m)), Provenance::Fundamental);
}

DensityOperator proper_mixture(const std::vector<double>& weights,
                               const std::vector<DensityOperator>& components) {
  if (weights.empty() || weights.size() != components.size())
    throw std::invalid_argument("proper_mixture: weights and components must pair up");
  double sum = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw std::invalid_argument("proper_mixture: negative weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > kDefaultTol)
    throw std::invalid_argument("proper_mixture: weights do not sum to 1");
  const SpaceSpec& space = components.front().space();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.total_dim(), space.total_dim());
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (components[i].space() != space)
      throw std::invalid_argument("proper_mixture: component space mismatch");
    m += weights[i] * components[i].matrix();
  }
  return DensityOperator(LinOp(space, std::move(m)), Provenance::ProperMixture);
}

double expectation(const DensityOperator& rho, const LinOp& observable) {
  if (observable.space() != rho.space())
    throw std::invalid_argument("expectation: space mismatch");
  if (!observable.is_hermitian(kDefaultTol))
    throw std::invalid_argument("expectation: observable is not Hermitian");
  const std::complex<double> value = (rho.matrix() * observable.matrix()).trace();
  if (std::abs(value.imag()) > kDefaultTol)
    throw std::runtime_error("expectation: value has a non-vanishing imaginary part");
  return value.real();
}

double purity(const DensityOperator& rho) {
  // Tr(rho^2) = ||rho||_F^2 for Hermitian rho.
  return rho.matrix().squaredNorm();
}

}  // namespace redstates
