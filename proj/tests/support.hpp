// Shared helpers and independent oracles for the test suites. The oracles
// deliberately avoid the library's index machinery: Kronecker products are
// spelled out directly, partial traces go through an explicit basis
// permutation, and chain probabilities use the textbook collapse recipe.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "redstates/space.hpp"

namespace testsupport {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Plain Kronecker product, written out as the definition.
inline MatrixXcd kron_oracle(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline VectorXcd kron_vec_oracle(const VectorXcd& a, const VectorXcd& b) {
  VectorXcd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index k = 0; k < b.size(); ++k) out(i * b.size() + k) = a(i) * b(k);
  return out;
}

// Row-major multi-index decode for a dim list.
inline std::vector<int> decode_index(int index, const std::vector<int>& dims) {
  std::vector<int> digits(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    digits[static_cast<std::size_t>(k)] = index % dims[static_cast<std::size_t>(k)];
    index /= dims[static_cast<std::size_t>(k)];
  }
  return digits;
}

// Permutation matrix that reorders tensor factors: new factor order is
// `order` (a permutation of 0..n-1 referring to the old positions).
inline MatrixXcd factor_permutation(const std::vector<int>& dims, const std::vector<int>& order) {
  int total = 1;
  for (int d : dims) total *= d;
  std::vector<int> new_dims;
  for (int o : order) new_dims.push_back(dims[static_cast<std::size_t>(o)]);
  MatrixXcd p = MatrixXcd::Zero(total, total);
  for (int idx = 0; idx < total; ++idx) {
    const std::vector<int> digits = decode_index(idx, dims);
    int new_idx = 0;
    for (std::size_t k = 0; k < order.size(); ++k)
      new_idx = new_idx * new_dims[k] + digits[static_cast<std::size_t>(order[k])];
    p(new_idx, idx) = 1.0;
  }
  return p;
}

// Trace over the trailing factor of dimension d_last.
inline MatrixXcd trace_last(const MatrixXcd& m, int d_last) {
  const Eigen::Index d_kept = m.rows() / d_last;
  MatrixXcd out = MatrixXcd::Zero(d_kept, d_kept);
  for (Eigen::Index a = 0; a < d_kept; ++a)
    for (Eigen::Index b = 0; b < d_kept; ++b)
      for (Eigen::Index k = 0; k < d_last; ++k) out(a, b) += m(a * d_last + k, b * d_last + k);
  return out;
}

// Permute-then-trace partial trace: moves the traced factors to the back,
// then block-traces them one by one.
inline MatrixXcd partial_trace_oracle(const MatrixXcd& m, const std::vector<int>& dims,
                                      const std::vector<int>& traced_positions) {
  std::vector<int> order;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    bool traced = false;
    for (int t : traced_positions) traced = traced || t == k;
    if (!traced) order.push_back(k);
  }
  for (int t : traced_positions) order.push_back(t);
  const MatrixXcd p = factor_permutation(dims, order);
  MatrixXcd work = p * m * p.transpose();
  for (int i = static_cast<int>(traced_positions.size()) - 1; i >= 0; --i)
    work = trace_last(work, dims[static_cast<std::size_t>(traced_positions[static_cast<std::size_t>(i)])]);
  return work;
}

// Textbook collapse recipe for a sequence of projective measurements on one
// system: joint probability of the outcome sequence, collapsing after each
// step.
inline double collapse_joint_oracle(const VectorXcd& psi0,
                                    const std::vector<MatrixXcd>& eigenbases,
                                    const std::vector<int>& outcomes) {
  VectorXcd psi = psi0;
  double probability = 1.0;
  for (std::size_t step = 0; step < eigenbases.size(); ++step) {
    const VectorXcd e = eigenbases[step].col(outcomes[step]);
    const std::complex<double> amp = e.dot(psi);
    const double p = std::norm(amp);
    probability *= p;
    if (p == 0.0) return 0.0;
    psi = e;  // ideal first-kind measurement: collapse onto the eigenvector
  }
  return probability;
}

}  // namespace testsupport
