#include "redstates/random.hpp"

#include <cmath>
#include <numbers>

namespace redstates {

double Rng::uniform() {
  // 53 random bits -> [0, 1); identical on every platform.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> Rng::complex_gaussian() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * std::numbers::pi * u2), r * std::sin(2.0 * std::numbers::pi * u2)};
}

StateVector random_state(const SpaceSpec& space, Rng& rng) {
  Eigen::VectorXcd v(space.total_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.complex_gaussian();
  v.normalize();
  return StateVector(space, std::move(v));
}

LinOp random_hermitian(const SpaceSpec& space, Rng& rng) {
  const Eigen::Index d = space.total_dim();
  Eigen::MatrixXcd g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
  Eigen::MatrixXcd h = 0.5 * (g + g.adjoint());
  return LinOp(space, std::move(h));
}

DensityOperator random_density(const SpaceSpec& space, Rng& rng) {
  const Eigen::Index d = space.total_dim();
  Eigen::MatrixXcd g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
  Eigen::MatrixXcd m = g * g.adjoint();
  m /= m.trace();
  return DensityOperator(LinOp(space, std::move(m)), Provenance::Fundamental);
}

std::vector<double> random_couplings(int count, double lo, double hi, Rng& rng) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (double& v : g) v = rng.uniform(lo, hi);
  return g;
}

}  // namespace redstates
