// Dense complex operators bound to a SpaceSpec, with tensor products,
// embeddings into larger spaces, commutators and the Frobenius metric.
#pragma once

#include <Eigen/Dense>
#include <complex>

#include "redstates/space.hpp"

namespace redstates {

inline constexpr double kDefaultTol = 1e-10;

class LinOp {
 public:
  LinOp(SpaceSpec space, Eigen::MatrixXcd matrix);

  static LinOp identity(const SpaceSpec& space);
  static LinOp zero(const SpaceSpec& space);

  const SpaceSpec& space() const { return space_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

  LinOp adjoint() const;
  double frobenius_norm() const { return matrix_.norm(); }
  bool is_hermitian(double tol = kDefaultTol) const;

  LinOp operator+(const LinOp& other) const;
  LinOp operator-(const LinOp& other) const;
  LinOp operator*(const LinOp& other) const;  // operator composition

 private:
  SpaceSpec space_;
  Eigen::MatrixXcd matrix_;
};

LinOp operator*(std::complex<double> scalar, const LinOp& op);

// Kronecker product on the concatenated space. Requires disjoint labels.
LinOp tensor_product(const LinOp& a, const LinOp& b);

// Places a single-factor operator at the named factor of `target`, acting as
// the identity on every other factor. The operator's own label may differ
// from `at`; only the dimension must match.
LinOp embed(const LinOp& o1, const SpaceSpec& target, const std::string& at);

// Lifts an operator living on a subset of `target`'s factors (same labels,
// same relative order) to the full space, acting as identity elsewhere.
LinOp lift(const LinOp& op, const SpaceSpec& target);

LinOp commutator(const LinOp& a, const LinOp& b);

double frobenius_distance(const LinOp& a, const LinOp& b);

// Spin-1/2 matrices.
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd pauli_y();
Eigen::Matrix2cd pauli_z();

}  // namespace redstates
