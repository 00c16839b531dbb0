#include <doctest.h>

#include <cmath>

#include "ckgf/frames.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ckgf;

TEST_CASE("discretize_interval uses midpoint nodes") {
  const MeasureSpace one = discretize_interval(0, 1, 1);
  REQUIRE(one.size() == 1);
  CHECK(one.node(0) == 0.5);
  CHECK(one.atom(0).mu == 1.0);

  const MeasureSpace two = discretize_interval(0, 1, 2);
  CHECK(two.node(0) == 0.25);
  CHECK(two.node(1) == 0.75);
  CHECK(two.atom(0).mu == 0.5);
  CHECK(two.atom(1).mu == 0.5);
  CHECK(two.atom(1).label == "0.75");
}

TEST_CASE("midpoint rule is second order on a smooth integrand") {
  const double exact = 2.0 / M_PI;
  const auto integrate = [](std::size_t n) {
    const MeasureSpace m = discretize_interval(0, 1, n);
    double s = 0;
    for (std::size_t i = 0; i < m.size(); ++i) s += m.atom(i).mu * std::sin(M_PI * m.node(i));
    return s;
  };
  for (std::size_t n : {4, 8, 16, 32}) {
    const double ratio = std::abs(integrate(n) - exact) / std::abs(integrate(2 * n) - exact);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("interval errors and mass") {
  try {
    discretize_interval(1, 1, 3);
    FAIL("expected InvalidInterval");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidInterval);
  }
  CHECK_THROWS_AS(discretize_interval(2, 1, 3), Error);
  CHECK_THROWS_AS(discretize_interval(0, 1, 0), Error);

  // Dyadic widths make the mass exact.
  for (std::size_t n : {1, 2, 4, 8, 64, 1024}) {
    CHECK(discretize_interval(0, 1, n).total_mass() == 1.0);
    CHECK(discretize_interval(-2, 6, n).total_mass() == 8.0);
  }
  // Other cases agree to rounding.
  for (std::size_t n : {3, 7, 10, 33}) {
    CHECK(discretize_interval(0.1, 0.7, n).total_mass() == doctest::Approx(0.6).epsilon(1e-14));
  }
}

TEST_CASE("refinement halves the mesh and keeps weights positive") {
  for (std::size_t n : {1, 3, 8, 21}) {
    const MeasureSpace a = discretize_interval(-1, 2, n);
    const MeasureSpace b = discretize_interval(-1, 2, 2 * n);
    CHECK(b.atom(0).mu == doctest::Approx(a.atom(0).mu / 2).epsilon(1e-15));
    for (const auto& at : b.atoms()) CHECK(at.mu > 0.0);
  }
}

TEST_CASE("counting measure") {
  CHECK(counting_measure(1).size() == 1);
  const MeasureSpace m = counting_measure(3);
  REQUIRE(m.size() == 3);
  for (const auto& a : m.atoms()) CHECK(a.mu == 1.0);
  CHECK_FALSE(m.is_quadrature());
  CHECK_THROWS_AS(counting_measure(0), Error);
}

TEST_CASE("counting-measure frame operator equals the discrete sum oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::pair<Matrix, Matrix>> atoms;
    for (int i = 0; i < 5; ++i) {
      atoms.push_back({gaussian_matrix(rng, 3, 1 + i % 2, ScalarField::complex),
                       gaussian_matrix(rng, 2, 1 + i % 2, ScalarField::complex)});
    }
    const FrameFamily fam = th::family(3, atoms, {0.5, 1, 1.5, 2, 0.75});
    const ControlContext ctx = ControlContext::identity(3);
    CHECK(frame_operator(fam, ctx).op == oracle::discrete_sum(fam, ctx.T(), ctx.U()));
  }
}

TEST_CASE("weights and discrete measures validate") {
  CHECK_THROWS_AS(WeightFunction({1.0, 0.0}), Error);
  CHECK_THROWS_AS(WeightFunction({1.0, NAN}), Error);
  try {
    MeasureSpace::discrete({{"a", -1.0}});
    FAIL("expected InvalidWeight");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidWeight);
  }
  CHECK_THROWS_AS(MeasureSpace::discrete({}), Error);
  const MeasureSpace q = discretize_interval(0, 1, 4);
  const WeightFunction w = WeightFunction::sample(q, [](double x) { return 1 + x; });
  CHECK(w[0] == 1.125);
  CHECK(w[3] == 1.875);
}
