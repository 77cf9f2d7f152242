#include <doctest.h>

#include "redstates/classical.hpp"
#include "redstates/random.hpp"

using namespace redstates;

namespace {

DensityField random_field(int n, Rng& rng) {
  std::vector<double> values(static_cast<std::size_t>(n) * n);
  double total = 0.0;
  for (double& v : values) {
    v = rng.uniform();
    total += v;
  }
  const double scale = static_cast<double>(n) * n / total;
  for (double& v : values) v *= scale;
  return DensityField(n, std::move(values));
}

}  // namespace

TEST_CASE("density fields validate mass and sign") {
  CHECK_THROWS_AS(DensityField(2, {1.0, 1.0, 1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(DensityField(2, {2.0, 2.0, 1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DensityField(2, {1.0, 1.0}), std::invalid_argument);
  CHECK(DensityField::uniform(8).mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(DensityField::left_half(8).occupied_cells() == 32);
}

TEST_CASE("coarse graining replaces blocks by their averages") {
  // A uniform field is a fixed point, exactly.
  DensityField uniform = DensityField::uniform(8);
  CHECK(coarse_grain_classical(uniform, {4}).values() == uniform.values());

  // Mass on a single fine cell spreads over its coarse cell only.
  std::vector<double> one(16, 0.0);
  one[0] = 16.0;
  DensityField spike(4, std::move(one));
  DensityField coarse = coarse_grain_classical(spike, {2});
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      CHECK(coarse.value(r, c) == ((r < 2 && c < 2) ? 4.0 : 0.0));

  // Checkerboard: every 2x2 block averages its four values.
  std::vector<double> boarded(16);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) boarded[static_cast<std::size_t>(r) * 4 + c] = (r + c) % 2 ? 2.0 : 0.0;
  DensityField check(4, std::move(boarded));
  DensityField averaged = coarse_grain_classical(check, {2});
  for (double v : averaged.values()) CHECK(v == 1.0);

  CHECK_THROWS_AS(coarse_grain_classical(uniform, {3}), std::invalid_argument);
}

TEST_CASE("coarse graining is exactly idempotent") {
  Rng rng(91);
  DensityField field = random_field(16, rng);
  DensityField once = coarse_grain_classical(field, {4});
  DensityField twice = coarse_grain_classical(once, {4});
  CHECK(once.values() == twice.values());
}

TEST_CASE("the mixing step is an exact permutation") {
  // The uniform field is invariant, bit for bit.
  DensityField uniform = DensityField::uniform(8);
  CHECK(mixing_step(uniform).values() == uniform.values());

  // One step of the left-half indicator: two parallel strips at columns
  // [0, n/4) and [n/2, 3n/4), all rows, value 2.
  const int n = 8;
  DensityField half = DensityField::left_half(n);
  DensityField stepped = mixing_step(half);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const bool in_strip = (c < n / 4) || (c >= n / 2 && c < 3 * n / 4);
      CHECK(stepped.value(r, c) == (in_strip ? 2.0 : 0.0));
    }
  CHECK(stepped.mass() == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(mixing_step(DensityField::uniform(6)), std::invalid_argument);
}

TEST_CASE("mass survives fifty mixing steps") {
  Rng rng(93);
  DensityField field = random_field(32, rng);
  for (int s = 0; s < 50; ++s) field = mixing_step(field);
  CHECK(std::abs(field.mass() - 1.0) < 1e-10);
}

TEST_CASE("fine-grained support is invariant (the Liouville analog)") {
  // An L-shaped three-cell support stays three cells for ten steps.
  const int n = 8;
  std::vector<double> values(static_cast<std::size_t>(n) * n, 0.0);
  const double v = static_cast<double>(n) * n / 3.0;
  values[0] = v;                       // (0,0)
  values[1] = v;                       // (0,1)
  values[static_cast<std::size_t>(n)] = v;  // (1,0)
  DensityField field(n, std::move(values));

  std::vector<DensityField> history = {field};
  for (int s = 0; s < 10; ++s) history.push_back(mixing_step(history.back()));
  const LiouvilleReport report = liouville_check(history);
  CHECK(report.constant);
  for (int c : report.occupied_counts) CHECK(c == 3);

  // The uniform field occupies every cell at every step.
  std::vector<DensityField> flat = {DensityField::uniform(n)};
  for (int s = 0; s < 5; ++s) flat.push_back(mixing_step(flat.back()));
  const LiouvilleReport full = liouville_check(flat);
  CHECK(full.constant);
  CHECK(full.occupied_counts.front() == n * n);
}

TEST_CASE("coarse distance decays while the fine distance is stuck") {
  const EquilibriumSeries series =
      equilibrium_approach(DensityField::left_half(256), {4}, 10);
  REQUIRE(series.coarse_l1.size() == 11);

  // The fine-grained indicator is only permuted, never averaged.
  for (double d : series.fine_l1) CHECK(d == doctest::Approx(1.0).epsilon(1e-14));
  for (double m : series.mass) CHECK(std::abs(m - 1.0) < 1e-10);
  for (int o : series.occupied) CHECK(o == series.occupied.front());

  double best = series.coarse_l1.front();
  CHECK(best == doctest::Approx(1.0).epsilon(1e-14));
  for (double d : series.coarse_l1) best = std::min(best, d);
  CHECK(best < 0.01);

  // A uniform start sits at distance zero forever.
  const EquilibriumSeries flat = equilibrium_approach(DensityField::uniform(64), {4}, 5);
  for (double d : flat.coarse_l1) CHECK(d == 0.0);
  for (double d : flat.fine_l1) CHECK(d == 0.0);

  CHECK_THROWS_AS(equilibrium_approach(DensityField::uniform(64), {64}, 3),
                  std::invalid_argument);
}
