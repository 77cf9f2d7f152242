#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <numbers>

#include "redstates/measurement.hpp"
#include "redstates/random.hpp"
#include "support.hpp"

using namespace redstates;

namespace {

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

MeasurementChain qubit_chain(std::complex<double> c_plus, std::complex<double> c_minus) {
  Eigen::Vector2cd amp;
  amp << c_plus, c_minus;
  return MeasurementChain{StateVector(SpaceSpec::single("S", 2), amp)};
}

MeasurementChain measure_z(const MeasurementChain& chain, const std::string& label) {
  return premeasure(chain, LinOp(chain.system_space(), pauli_z()),
                    Eigen::Matrix2cd::Identity(), PointerFactor::standard(label, 2));
}

MeasurementChain measure_x(const MeasurementChain& chain, const std::string& label) {
  auto [x_plus, x_minus] = spin_basis_rotation(Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1));
  Eigen::Matrix2cd basis;
  basis.col(0) = x_plus;
  basis.col(1) = x_minus;
  return premeasure(chain, LinOp(chain.system_space(), pauli_x()), basis,
                    PointerFactor::standard(label, 2));
}

// Amplitude of |sys> (x) |pointer levels...> in the chain state.
std::complex<double> component(const MeasurementChain& chain, const Eigen::VectorXcd& sys,
                               const std::vector<int>& pointer_levels) {
  Eigen::VectorXcd probe = sys;
  for (std::size_t i = 0; i < pointer_levels.size(); ++i) {
    const int dim = chain.steps()[i].pointer.dim;
    Eigen::VectorXcd level = Eigen::VectorXcd::Zero(dim);
    level(pointer_levels[i]) = 1.0;
    probe = testsupport::kron_vec_oracle(probe, level);
  }
  return probe.dot(chain.state().amplitudes());
}

}  // namespace

TEST_CASE("pointer factors validate their level map") {
  PointerFactor p = PointerFactor::standard("P", 2);
  CHECK(p.dim == 3);
  CHECK(p.ready_index == 0);
  CHECK_NOTHROW(p.validate());

  p.outcome_indices = {0, 2};  // collides with ready
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.outcome_indices = {2, 2};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.outcome_indices = {1, 2, 3};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);  // dim too small
}

TEST_CASE("the first premeasurement correlates eigenstates with pointer levels") {
  const std::complex<double> c_plus = std::sqrt(0.36), c_minus = std::sqrt(0.64);
  MeasurementChain chain = measure_z(qubit_chain(c_plus, c_minus), "Pz");
  CHECK(chain.state().space().total_dim() == 6);
  // c+|z+>|p+z> + c-|z->|p-z>, nothing on the ready level.
  CHECK(std::abs(component(chain, Eigen::Vector2cd(1, 0), {1}) - c_plus) < 1e-14);
  CHECK(std::abs(component(chain, Eigen::Vector2cd(0, 1), {2}) - c_minus) < 1e-14);
  CHECK(std::abs(component(chain, Eigen::Vector2cd(1, 0), {0})) < 1e-14);
  CHECK(std::abs(component(chain, Eigen::Vector2cd(0, 1), {1})) < 1e-14);
}

TEST_CASE("measuring an eigenstate gives its outcome with certainty") {
  MeasurementChain chain = measure_z(qubit_chain(1.0, 0.0), "Pz");
  CHECK(joint_probability(chain, {{"Pz", 0}}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(joint_probability(chain, {{"Pz", 1}}) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("the second premeasurement yields the four-term state with its signs") {
  const std::complex<double> c_plus = std::sqrt(0.36), c_minus = std::sqrt(0.64);
  MeasurementChain chain = measure_x(measure_z(qubit_chain(c_plus, c_minus), "Pz"), "Px");

  const Eigen::Vector2cd x_plus(kInvSqrt2, kInvSqrt2), x_minus(kInvSqrt2, -kInvSqrt2);
  CHECK(std::abs(component(chain, x_plus, {1, 1}) - c_plus * kInvSqrt2) < 1e-12);
  CHECK(std::abs(component(chain, x_plus, {2, 1}) - c_minus * kInvSqrt2) < 1e-12);
  CHECK(std::abs(component(chain, x_minus, {1, 2}) - c_plus * kInvSqrt2) < 1e-12);
  CHECK(std::abs(component(chain, x_minus, {2, 2}) + c_minus * kInvSqrt2) < 1e-12);
  CHECK(std::abs(chain.state().amplitudes().norm() - 1.0) < 1e-12);
}

TEST_CASE("premeasurement rejects bad inputs") {
  MeasurementChain chain = qubit_chain(kInvSqrt2, kInvSqrt2);
  Eigen::Matrix2cd not_orthonormal;
  not_orthonormal << 1, 1, 0, 0;
  CHECK_THROWS_AS(premeasure(chain, LinOp(chain.system_space(), pauli_z()), not_orthonormal,
                             PointerFactor::standard("P", 2)),
                  std::invalid_argument);
  MeasurementChain once = measure_z(chain, "Pz");
  CHECK_THROWS_AS(measure_z(once, "Pz"), std::invalid_argument);  // label collision
  PointerFactor incomplete = PointerFactor::standard("Q", 1);
  CHECK_THROWS_AS(premeasure(chain, LinOp(chain.system_space(), pauli_z()),
                             Eigen::Matrix2cd::Identity(), incomplete),
                  std::invalid_argument);
}

TEST_CASE("the coupling is unitary for random eigenbases and pointer dims") {
  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const int d_sys = 2 + static_cast<int>(rng.next() % 2);
    SpaceSpec system = SpaceSpec::single("S", d_sys);
    StateVector psi = random_state(system, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(random_hermitian(system, rng).matrix());
    PointerFactor pointer = PointerFactor::standard("P", d_sys);
    pointer.dim += static_cast<int>(rng.next() % 3);  // spare levels are fine
    MeasurementChain chain = premeasure(MeasurementChain{psi},
                                        LinOp(system, es.eigenvectors() * es.eigenvalues().asDiagonal() *
                                                          es.eigenvectors().adjoint()),
                                        es.eigenvectors(), pointer);
    // The coupled state stays normalized; probabilities add to one.
    CHECK(std::abs(chain.state().amplitudes().norm() - 1.0) < 1e-10);
    double total = 0.0;
    for (int i = 0; i < d_sys; ++i) total += joint_probability(chain, {{"P", i}});
    CHECK(std::abs(total - 1.0) < 1e-10);
  }
}

TEST_CASE("collapse-free born rule: pr(r_i) = |c_i|^2") {
  Rng rng(53);
  for (int trial = 0; trial < 10; ++trial) {
    const double p = rng.uniform(0.02, 0.98);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    MeasurementChain chain =
        measure_z(qubit_chain(std::sqrt(p), std::polar(std::sqrt(1.0 - p), phase)), "Pz");
    CHECK(std::abs(joint_probability(chain, {{"Pz", 0}}) - p) < 1e-10);
    CHECK(std::abs(joint_probability(chain, {{"Pz", 1}}) - (1.0 - p)) < 1e-10);
  }
}

TEST_CASE("joint and conditional probabilities of the z-then-x chain") {
  const double p = 0.36;
  MeasurementChain chain = measure_x(measure_z(qubit_chain(std::sqrt(p), std::sqrt(1 - p)), "Pz"),
                                     "Px");
  CHECK(std::abs(joint_probability(chain, {{"Px", 0}, {"Pz", 0}}) - p / 2) < 1e-12);
  CHECK(std::abs(joint_probability(chain, {{"Pz", 0}}) - p) < 1e-12);
  CHECK(conditional_probability(chain, {"Px", 0}, {{"Pz", 0}}) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(conditional_probability(chain, {"Px", 1}, {{"Pz", 0}}) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("joint and conditional probabilities of the z-then-z chain") {
  const double p = 0.36;
  MeasurementChain chain =
      measure_z(measure_z(qubit_chain(std::sqrt(p), std::sqrt(1 - p)), "Pz1"), "Pz2");
  CHECK(conditional_probability(chain, {"Pz2", 0}, {{"Pz1", 0}}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(conditional_probability(chain, {"Pz2", 1}, {{"Pz1", 0}}) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("conditioning on an impossible event is an error") {
  MeasurementChain chain = measure_z(qubit_chain(1.0, 0.0), "Pz");
  CHECK_THROWS_AS(conditional_probability(chain, {"Pz", 0}, {{"Pz", 1}}), std::invalid_argument);
}

TEST_CASE("joint probabilities are invariant under event permutation") {
  MeasurementChain chain =
      measure_x(measure_z(qubit_chain(std::sqrt(0.3), std::sqrt(0.7)), "Pz"), "Px");
  const double ab = joint_probability(chain, {{"Pz", 0}, {"Px", 1}});
  const double ba = joint_probability(chain, {{"Px", 1}, {"Pz", 0}});
  CHECK(ab == ba);  // diagonal projector masks commute bitwise
}

TEST_CASE("conditional distributions normalize") {
  Rng rng(59);
  for (int trial = 0; trial < 5; ++trial) {
    const double p = rng.uniform(0.1, 0.9);
    MeasurementChain chain =
        measure_x(measure_z(qubit_chain(std::sqrt(p), std::sqrt(1 - p)), "Pz"), "Px");
    for (int k = 0; k < 2; ++k) {
      double total = 0.0;
      for (int l = 0; l < 2; ++l) total += conditional_probability(chain, {"Px", l}, {{"Pz", k}});
      CHECK(std::abs(total - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("the reduced-state predictor loses the repeat correlation") {
  MeasurementChain chain = measure_z(qubit_chain(std::sqrt(0.36), std::sqrt(0.64)), "Pz");
  const ReducedPredictorReport report = reduced_chain_predictor(chain);

  CHECK(report.outcomes == 2);
  // Factorized prediction: pr(+ and -) = 0.36 * 0.64 = 0.2304; the chain
  // gives zero.
  CHECK(report.flawed_joint[0][1] == doctest::Approx(0.2304).epsilon(1e-12));
  CHECK(std::abs(report.true_joint[0][1]) < 1e-14);
  CHECK(std::abs(report.true_joint[1][0]) < 1e-14);
  CHECK(report.true_joint[0][0] == doctest::Approx(0.36).epsilon(1e-12));
  CHECK(report.disagrees);
  CHECK(report.max_discrepancy == doctest::Approx(0.2304).epsilon(1e-10));

  // The marginals of both pipelines agree.
  for (int l = 0; l < 2; ++l) {
    double true_marginal = 0.0;
    for (int k = 0; k < 2; ++k) true_marginal += report.true_joint[k][l];
    CHECK(std::abs(true_marginal - report.flawed_second_marginals[l]) < 1e-12);
  }
}

TEST_CASE("the predictor and the chain coincide for an eigenstate input") {
  MeasurementChain chain = measure_z(qubit_chain(1.0, 0.0), "Pz");
  const ReducedPredictorReport report = reduced_chain_predictor(chain);
  CHECK_FALSE(report.disagrees);
  CHECK(report.max_discrepancy < 1e-12);
  CHECK(report.flawed_joint[0][0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("the predictor requires a completed measurement") {
  MeasurementChain chain = qubit_chain(kInvSqrt2, kInvSqrt2);
  CHECK_THROWS_AS(reduced_chain_predictor(chain), std::invalid_argument);
}

TEST_CASE("spin basis rotation") {
  auto [x_plus, x_minus] = spin_basis_rotation(Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1));
  CHECK(std::abs(x_plus(0) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(x_plus(1) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(x_minus(0) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(x_minus(1) + kInvSqrt2) < 1e-15);

  // Expansion coefficients of |z+-> in the rotated basis.
  CHECK(std::abs(x_plus.dot(Eigen::Vector2cd(1, 0)) - kInvSqrt2) < 1e-15);
  CHECK(std::abs(x_minus.dot(Eigen::Vector2cd(0, 1)) + kInvSqrt2) < 1e-15);

  // Applying the rotation twice returns the original basis.
  auto [back_plus, back_minus] = spin_basis_rotation(x_plus, x_minus);
  CHECK((back_plus - Eigen::Vector2cd(1, 0)).norm() < 1e-14);
  CHECK((back_minus - Eigen::Vector2cd(0, 1)).norm() < 1e-14);

  CHECK_THROWS_AS(spin_basis_rotation(Eigen::Vector2cd(1, 0), Eigen::Vector2cd(1, 0)),
                  std::invalid_argument);
}

TEST_CASE("three-step chains agree with the stepwise collapse recipe") {
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    StateVector psi0 = random_state(SpaceSpec::single("S", 2), rng);
    MeasurementChain chain{psi0};
    std::vector<Eigen::MatrixXcd> bases;
    for (int step = 0; step < 3; ++step) {
      LinOp observable = random_hermitian(chain.system_space(), rng);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(observable.matrix());
      bases.push_back(es.eigenvectors());
      chain = premeasure(chain, observable, es.eigenvectors(),
                         PointerFactor::standard("P" + std::to_string(step), 2));
    }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          const double chain_joint =
              joint_probability(chain, {{"P0", i}, {"P1", j}, {"P2", k}});
          const double oracle =
              testsupport::collapse_joint_oracle(psi0.amplitudes(), bases, {i, j, k});
          CHECK(std::abs(chain_joint - oracle) < 1e-10);
          const double given = joint_probability(chain, {{"P0", i}, {"P1", j}});
          if (given > 1e-6) {
            const double conditional =
                conditional_probability(chain, {"P2", k}, {{"P0", i}, {"P1", j}});
            CHECK(std::abs(conditional - oracle / given) < 1e-10);
          }
        }
  }
}
