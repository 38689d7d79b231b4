#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "idsim/beta_numerics.hpp"
#include "idsim/rng.hpp"

using namespace idsim;

namespace {

// log-uniform shape draw over [1e-3, 1e3]
double random_shape(Rng& rng) {
  return std::pow(10.0, -3.0 + 6.0 * rng.uniform01());
}

}  // namespace

TEST_CASE("reg_inc_beta closed forms") {
  CHECK_THAT(reg_inc_beta(0.5, ShapePair::make(1, 1)),
             Catch::Matchers::WithinAbs(0.5, 1e-12));
  // I_x(2,2) = 3x^2 - 2x^3
  CHECK_THAT(reg_inc_beta(0.25, ShapePair::make(2, 2)),
             Catch::Matchers::WithinAbs(0.15625, 1e-12));
  CHECK(reg_inc_beta(0.0, ShapePair::make(3, 7)) == 0.0);
  CHECK(reg_inc_beta(1.0, ShapePair::make(3, 7)) == 1.0);
}

TEST_CASE("uniform case is the identity") {
  const auto uniform = ShapePair::make(1, 1);
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    REQUIRE_THAT(reg_inc_beta(x, uniform), Catch::Matchers::WithinAbs(x, 1e-12));
  }
  CHECK_THAT(inv_reg_inc_beta(0.7, uniform), Catch::Matchers::WithinAbs(0.7, 1e-10));
}

TEST_CASE("reflection symmetry I_x(a,b) + I_{1-x}(b,a) = 1") {
  CHECK_THAT(reg_inc_beta(0.3, ShapePair::make(2, 5)) +
                 reg_inc_beta(0.7, ShapePair::make(5, 2)),
             Catch::Matchers::WithinAbs(1.0, 1e-12));
  Rng rng(17);
  for (int i = 0; i < 2000; ++i) {
    const double a = random_shape(rng);
    const double b = random_shape(rng);
    const double x = rng.uniform01();
    const double sum = reg_inc_beta(x, ShapePair::make(a, b)) +
                       reg_inc_beta(1.0 - x, ShapePair::make(b, a));
    REQUIRE_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-12));
  }
}

TEST_CASE("reg_inc_beta is increasing in x") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto shapes = ShapePair::make(random_shape(rng), random_shape(rng));
    double prev = 0.0;
    double prev_x = 0.0;
    for (int i = 1; i < 60; ++i) {
      const double x = i / 60.0;
      const double v = reg_inc_beta(x, shapes);
      REQUIRE(v >= prev);
      // strict increase wherever the density is resolvable in double
      // precision; saturated stretches of the CDF are flat at this scale
      if (beta_pdf(prev_x, shapes) > 1e-10 || beta_pdf(x, shapes) > 1e-10)
        REQUIRE(v > prev);
      prev = v;
      prev_x = x;
    }
  }
}

TEST_CASE("inverse round trip") {
  CHECK_THAT(inv_reg_inc_beta(0.15625, ShapePair::make(2, 2)),
             Catch::Matchers::WithinAbs(0.25, 1e-10));
  CHECK_THAT(inv_reg_inc_beta(0.5, ShapePair::make(7.3, 7.3)),
             Catch::Matchers::WithinAbs(0.5, 1e-10));
  CHECK(inv_reg_inc_beta(0.0, ShapePair::make(2, 3)) == 0.0);
  CHECK(inv_reg_inc_beta(1.0, ShapePair::make(2, 3)) == 1.0);

  Rng rng(31);
  for (int i = 0; i < 2000; ++i) {
    const auto shapes = ShapePair::make(random_shape(rng), random_shape(rng));
    const double x = 1e-6 + (1.0 - 2e-6) * rng.uniform01();
    const double u = reg_inc_beta(x, shapes);
    const double back = inv_reg_inc_beta(u, shapes);
    // Where the CDF is numerically flat, distinct x collapse to one double
    // u and only the u-space contract is checkable.
    if (beta_pdf(x, shapes) >= 1e-2 && u > 1e-10 && u < 1.0 - 1e-10) {
      REQUIRE_THAT(back, Catch::Matchers::WithinAbs(x, 1e-8));
    } else {
      REQUIRE_THAT(reg_inc_beta(back, shapes),
                   Catch::Matchers::WithinAbs(u, 1e-10));
    }
  }
}

TEST_CASE("small equal shapes approach the Bernoulli(1/2) limit") {
  const auto shapes = ShapePair::make(1e-3, 1e-3);
  const double mid = reg_inc_beta(0.5, shapes);
  CHECK(mid > 0.5 - 1e-2);
  CHECK(mid < 0.5 + 1e-2);
  const double interior_mass =
      reg_inc_beta(0.99, shapes) - reg_inc_beta(0.01, shapes);
  CHECK(interior_mass <= 0.05);
}

TEST_CASE("degenerate shapes are flagged and rejected by the numerics") {
  const auto shapes = ShapePair::make(1e-9, 0.5);
  CHECK(shapes.degenerate_a);
  CHECK_FALSE(shapes.degenerate_b);
  CHECK(shapes.degenerate());
  CHECK_THROWS_AS(reg_inc_beta(0.5, shapes), std::invalid_argument);
  CHECK_THROWS_AS(inv_reg_inc_beta(0.5, shapes), std::invalid_argument);
}
