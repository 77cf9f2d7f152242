#include <doctest.h>

#include <numbers>

#include "redstates/random.hpp"
#include "redstates/reduction.hpp"
#include "redstates/states.hpp"

using namespace redstates;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

StateVector correlated_pair(std::complex<double> c1, std::complex<double> c2) {
  // c1 |a1 r1> + c2 |a2 r2> on S (x) R, with a1 and r1 at index 0.
  SpaceSpec space({{"S", 2}, {"R", 2}});
  Eigen::Vector4cd amp = Eigen::Vector4cd::Zero();
  amp(0) = c1;
  amp(3) = c2;
  return StateVector(space, amp);
}

}  // namespace

TEST_CASE("pure-state projectors") {
  SpaceSpec q = SpaceSpec::single("S", 2);
  DensityOperator ground = pure(StateVector::basis_state(q, 0));
  CHECK(ground.matrix()(0, 0) == std::complex<double>(1.0));
  CHECK(ground.matrix()(1, 1) == std::complex<double>(0.0));
  CHECK(ground.provenance() == Provenance::Fundamental);

  Eigen::Vector2cd plus;
  plus << kInvSqrt2, kInvSqrt2;
  DensityOperator uniform = pure(StateVector(q, plus));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(uniform.matrix()(i, j).real() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("correlated pure state has the four corner entries") {
  DensityOperator rho = pure(correlated_pair(kInvSqrt2, kInvSqrt2));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool corner = (i == 0 || i == 3) && (j == 0 || j == 3);
      CHECK(std::abs(rho.matrix()(i, j) - (corner ? 0.5 : 0.0)) < 1e-14);
    }
}

TEST_CASE("state vectors reject non-normalized amplitudes") {
  SpaceSpec q = SpaceSpec::single("S", 2);
  Eigen::Vector2cd bad;
  bad << 1.0, 0.5;
  CHECK_THROWS_AS(StateVector(q, bad), std::invalid_argument);
}

TEST_CASE("density operator validation") {
  SpaceSpec q = SpaceSpec::single("S", 3);
  Eigen::Matrix3cd ok = Eigen::Matrix3cd::Zero();
  ok(0, 0) = 0.5 + 2.5e-11;
  ok(1, 1) = 0.5 + 2.5e-11;
  ok(2, 2) = -5e-11;  // within the -1e-10 floor
  CHECK_NOTHROW(DensityOperator(LinOp(q, ok)));

  Eigen::Matrix3cd negative = Eigen::Matrix3cd::Zero();
  negative(0, 0) = 0.5 + 5e-9;
  negative(1, 1) = 0.5 + 5e-9;
  negative(2, 2) = -1e-8;
  CHECK_THROWS_AS(DensityOperator(LinOp(q, negative)), std::invalid_argument);

  Eigen::Matrix3cd wrong_trace = Eigen::Matrix3cd::Identity();
  CHECK_THROWS_AS(DensityOperator(LinOp(q, wrong_trace)), std::invalid_argument);

  Eigen::Matrix3cd skew = Eigen::Matrix3cd::Zero();
  skew(0, 0) = 1.0;
  skew(0, 1) = 1e-3;
  CHECK_THROWS_AS(DensityOperator(LinOp(q, skew)), std::invalid_argument);
}

TEST_CASE("proper mixtures") {
  SpaceSpec q = SpaceSpec::single("S", 2);
  DensityOperator up = pure(StateVector::basis_state(q, 0));
  DensityOperator down = pure(StateVector::basis_state(q, 1));

  DensityOperator singleton = proper_mixture({1.0}, {up});
  CHECK(frobenius_distance(singleton.op(), up.op()) == 0.0);
  CHECK(singleton.provenance() == Provenance::ProperMixture);

  DensityOperator half = proper_mixture({0.5, 0.5}, {up, down});
  CHECK(frobenius_distance(half.op(),
                           LinOp(q, Eigen::Matrix2cd::Identity() * 0.5)) == 0.0);

  CHECK_THROWS_AS(proper_mixture({0.6, 0.6}, {up, down}), std::invalid_argument);
  CHECK_THROWS_AS(proper_mixture({-0.1, 1.1}, {up, down}), std::invalid_argument);
  DensityOperator other = pure(StateVector::basis_state(SpaceSpec::single("T", 2), 0));
  CHECK_THROWS_AS(proper_mixture({0.5, 0.5}, {up, other}), std::invalid_argument);
}

TEST_CASE("proper and improper mixtures share the matrix but not the tag") {
  const std::complex<double> c1 = std::sqrt(0.36), c2 = std::sqrt(0.64);
  DensityOperator improper = partial_trace(pure(correlated_pair(c1, c2)), {"R"});
  SpaceSpec q = SpaceSpec::single("S", 2);
  DensityOperator proper =
      proper_mixture({0.36, 0.64}, {pure(StateVector::basis_state(q, 0)),
                                    pure(StateVector::basis_state(q, 1))});
  CHECK(frobenius_distance(improper.op(), proper.op()) < 1e-15);
  CHECK(improper.provenance() == Provenance::Reduced);
  CHECK(proper.provenance() == Provenance::ProperMixture);
  CHECK(improper.provenance() != proper.provenance());
}

TEST_CASE("expectation values") {
  SpaceSpec q = SpaceSpec::single("S", 2);
  DensityOperator up = pure(StateVector::basis_state(q, 0));
  CHECK(expectation(up, LinOp::identity(q)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(expectation(up, LinOp(q, pauli_z())) == doctest::Approx(1.0).epsilon(1e-14));

  // <sigma_z (x) I> on the correlated state with |c1|^2 = 0.36.
  DensityOperator rho = pure(correlated_pair(std::sqrt(0.36), std::sqrt(0.64)));
  LinOp sz_i = embed(LinOp(SpaceSpec::single("x", 2), pauli_z()), rho.space(), "S");
  CHECK(expectation(rho, sz_i) == doctest::Approx(-0.28).epsilon(1e-12));

  Eigen::Matrix2cd skew = Eigen::Matrix2cd::Zero();
  skew(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(expectation(up, LinOp(q, skew)), std::invalid_argument);
}

TEST_CASE("expectation is linear in the observable") {
  Rng rng(5);
  SpaceSpec space = SpaceSpec::single("S", 4);
  for (int trial = 0; trial < 10; ++trial) {
    DensityOperator rho = random_density(space, rng);
    LinOp a = random_hermitian(space, rng);
    LinOp b = random_hermitian(space, rng);
    const double alpha = rng.uniform(-2.0, 2.0), beta = rng.uniform(-2.0, 2.0);
    LinOp combined = std::complex<double>(alpha) * a + std::complex<double>(beta) * b;
    CHECK(std::abs(expectation(rho, combined) -
                   (alpha * expectation(rho, a) + beta * expectation(rho, b))) < 1e-10);
  }
}

TEST_CASE("purity") {
  SpaceSpec q = SpaceSpec::single("S", 2);
  CHECK(purity(pure(StateVector::basis_state(q, 0))) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(purity(DensityOperator(LinOp(q, Eigen::Matrix2cd::Identity() * 0.5))) ==
        doctest::Approx(0.5).epsilon(1e-14));

  DensityOperator reduced = partial_trace(pure(correlated_pair(std::sqrt(0.36), std::sqrt(0.64))),
                                          {"R"});
  CHECK(purity(reduced) == doctest::Approx(0.5392).epsilon(1e-12));
}

TEST_CASE("constructors keep the density invariants on random input") {
  Rng rng(11);
  SpaceSpec space({{"A", 2}, {"B", 3}});
  for (int trial = 0; trial < 25; ++trial) {
    DensityOperator rho = random_density(space, rng);
    CHECK(std::abs(rho.matrix().trace().real() - 1.0) < 1e-10);
    CHECK((rho.matrix() - rho.matrix().adjoint()).norm() < 1e-10);
    const double p = purity(rho);
    CHECK(p <= 1.0 + 1e-10);
    CHECK(p >= 1.0 / space.total_dim() - 1e-10);
  }
}

TEST_CASE("mixture purity never exceeds the largest component purity") {
  Rng rng(13);
  SpaceSpec space = SpaceSpec::single("S", 3);
  for (int trial = 0; trial < 20; ++trial) {
    DensityOperator a = random_density(space, rng);
    DensityOperator b = random_density(space, rng);
    const double w = rng.uniform(0.05, 0.95);
    DensityOperator mix = proper_mixture({w, 1.0 - w}, {a, b});
    CHECK(purity(mix) <= std::max(purity(a), purity(b)) + 1e-12);
  }
  // Equality when every component is the same state.
  DensityOperator a = random_density(space, rng);
  DensityOperator same = proper_mixture({0.3, 0.7}, {a, a});
  CHECK(purity(same) == doctest::Approx(purity(a)).epsilon(1e-12));
}
