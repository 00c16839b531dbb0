#include <doctest.h>

#include <cmath>

#include "ckgf/gen.hpp"
#include "ckgf/stability.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace ckgf;
using th::diag;
using th::dist;
using th::mat;

namespace {

FrameOperatorResult op_of(const Matrix& s) { return {s, 0.0, s}; }

}  // namespace

TEST_CASE("quotient_bound examples") {
  QuotientReport q = quotient_bound(identity(2), op_of(2 * identity(2)));
  CHECK(q.bounded);
  CHECK(q.b_min == doctest::Approx(0.5));
  CHECK(q.consistent);

  q = quotient_bound(diag({0, 1}), op_of(diag({1, 0})));
  CHECK_FALSE(q.bounded);
  CHECK(std::isinf(q.b_min));
  CHECK_FALSE(q.range_ok);
  CHECK_FALSE(q.frame_predicate);
  CHECK(q.consistent);

  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix s = oracle::random_psd(rng, 4, 4);
    const Matrix k = psd_sqrt(s).matrix();
    q = quotient_bound(k, op_of(s));
    CHECK(q.b_min == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(oracle::bisect_upper(k * k.adjoint(), s) == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("quotient bound and frame predicate agree across the rank boundary") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 3 + trial % 4;
    const Index r = 1 + trial % (n - 1);
    const Matrix a = gaussian_matrix(rng, n, r, ScalarField::complex);
    const Matrix s = a * a.adjoint();
    const Matrix k = trial % 2 ? Matrix(a * gaussian_matrix(rng, r, n, ScalarField::complex))
                               : gaussian_matrix(rng, n, n, ScalarField::complex);
    const QuotientReport q = quotient_bound(k, op_of(s));
    CHECK(q.consistent);
    CHECK(q.bounded == (trial % 2 == 1));
    if (q.bounded) CHECK(q.a_opt * q.b_min == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("three_equivalences examples") {
  const FrameFamily p = th::parseval2();
  const ControlContext id = ControlContext::identity(2);
  EquivalencesReport r = three_equivalences(p, id, identity(2));
  CHECK(r.frame_i);
  CHECK(r.bounded_ii);
  CHECK(r.b_ii == doctest::Approx(1.0));

  r = three_equivalences(p, id, 2 * identity(2));
  CHECK(r.frame_i);
  CHECK(r.bounded_ii);
  CHECK(r.bounded_iii);
  CHECK(r.b_ii == doctest::Approx(1.0));
  CHECK(r.b_iii == doctest::Approx(1.0));

  const FrameFamily e1 = th::family(2, {{mat({{1}, {0}}), mat({{1}})}});
  r = three_equivalences(e1, id.with_target(diag({0, 1})), identity(2));
  CHECK(r.agree);
  CHECK_FALSE(r.frame_i);
  CHECK_FALSE(r.bounded_ii);
  CHECK_FALSE(r.bounded_iii);
  CHECK(r.rank_s == 1);
}

TEST_CASE("frame_operator_distance examples") {
  CHECK(frame_operator_distance(op_of(identity(2)), op_of(identity(2))) == 0.0);
  CHECK(frame_operator_distance(op_of(identity(2)), op_of(2 * identity(2))) == doctest::Approx(1.0));
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = oracle::random_psd(rng, 4, 4);
    const Matrix b = oracle::random_psd(rng, 4, 4);
    const double expected = std::max(std::abs(oracle::min_eig(a - b)), std::abs(oracle::max_eig(a - b)));
    CHECK(frame_operator_distance(op_of(a), op_of(b)) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("dual_stability_check examples") {
  const FrameFamily p = th::parseval2();
  const ControlContext id = ControlContext::identity(2);
  StabilityReport r = dual_stability_check(p, p, id);
  CHECK(r.d == 0.0);
  CHECK(r.lhs_operator == 0.0);
  CHECK(r.holds);

  const FrameFamily q(2, MeasureSpace::discrete({{"a", 1.5}, {"b", 1.5}}), WeightFunction::constant(2), p.atoms());
  r = dual_stability_check(p, q, id);
  CHECK(r.d == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.a1 == doctest::Approx(1.0));
  CHECK(r.a2 == doctest::Approx(1.5));
  CHECK(std::abs(r.lhs_operator - 1.0 / 3.0) <= 1e-10);
  CHECK(std::abs(r.rhs - 1.0 / 3.0) <= 1e-10);
  CHECK(std::abs(r.lhs_functional - 1.0 / 3.0) <= 1e-10);
  CHECK(r.holds);

  const FrameFamily e1 = th::family(2, {{mat({{1}, {0}}), mat({{1}})}, {mat({{1}, {0}}), mat({{1}})}});
  try {
    dual_stability_check(p, e1, id);
    FAIL("expected NotAFrame");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotAFrame);
  }
}

TEST_CASE("dual stability holds on commuting-diagonal perturbation pairs") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenSpec spec;
    spec.seed = seed;
    spec.dim = 2 + static_cast<Index>(seed % 5);
    spec.atom_count = static_cast<std::size_t>(spec.dim) + 3;
    spec.subspace_dim_max = spec.dim;
    spec.controller = ControllerMode::commuting_diagonal;
    const Instance inst = generate(spec);
    Rng rng(seed * 7 + 1);
    std::vector<double> w = inst.family.weights().values();
    for (double& x : w) x *= rng.uniform(0.7, 1.3);
    const StabilityReport r = dual_stability_check(inst.family, inst.family.with_weights(WeightFunction(w)), inst.ctx);
    CHECK(r.holds);
    CHECK(r.chain_holds);
  }
}
