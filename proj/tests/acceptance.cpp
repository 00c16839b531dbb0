// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>

#include "ckgf/constructions.hpp"
#include "ckgf/gen.hpp"
#include "ckgf/stability.hpp"
#include "oracles.hpp"

using namespace ckgf;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Tracks the worst value seen and whether every check passed.
struct Tally {
  bool pass = true;
  std::size_t count = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  std::string first_failure;

  void check(bool ok, double value, const std::string& what) {
    ++count;
    worst = std::max(worst, value);
    if (!ok) {
      pass = false;
      if (failures++ == 0) first_failure = what;
    }
  }
  void require(bool ok, const std::string& what) { check(ok, 0.0, what); }
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << x;
  return s.str();
}

std::string summary(const Tally& t, const std::string& label) {
  std::string s = std::to_string(t.count) + " checks, " + label + " " + fmt(t.worst);
  if (!t.pass) s += "; " + std::to_string(t.failures) + " failed, first: " + t.first_failure;
  return s;
}

Matrix diag(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v.asDiagonal();
}

FrameFamily coordinate_family(Index n) {
  std::vector<FrameAtom> atoms;
  for (Index i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, 1);
    e(i, 0) = 1.0;
    atoms.push_back({Subspace::from_basis(e, 1e-12), identity(1)});
  }
  return FrameFamily(n, counting_measure(static_cast<std::size_t>(n)),
                     WeightFunction::constant(static_cast<std::size_t>(n)), atoms);
}

GenSpec spec_for(std::uint64_t seed, ControllerMode mode) {
  GenSpec spec;
  spec.seed = seed;
  spec.dim = 2 + static_cast<Index>(seed % 7);
  spec.atom_count = static_cast<std::size_t>(spec.dim) + 1 + seed % 4;
  spec.subspace_dim_max = std::min<Index>(spec.dim, 3);
  spec.local_dim_max = 3;
  spec.controller = mode;
  spec.k_mode = static_cast<KMode>(seed % 3);
  spec.k_rank = 1 + static_cast<Index>(seed / 3) % (spec.dim - 1);
  spec.field = (seed / 2) % 2 ? ScalarField::real : ScalarField::complex;
  spec.measure = (seed / 5) % 2 ? MeasureKind::weighted : MeasureKind::counting;
  return spec;
}

const ControllerMode kModes[] = {ControllerMode::identity, ControllerMode::commuting_diagonal,
                                 ControllerMode::polynomial_of_common_hermitian};

std::string id(const Instance& inst) {
  return std::string(to_string(inst.spec.controller)) + " seed " + std::to_string(inst.spec.seed);
}

Outcome parseval_reduction() {
  const FrameFamily fam = coordinate_family(2);
  const FrameCheck fc = is_controlled_k_g_fusion_frame(fam, ControlContext::identity(2));
  const double op_err = spectral_norm(fc.frame_op.op - identity(2));
  const double a_err = std::abs(fc.certificate.lower - 1.0);
  const double b_err = std::abs(fc.certificate.upper - 1.0);
  const bool pass = fc.is_frame && op_err <= 1e-10 && a_err <= 1e-10 && b_err <= 1e-10;
  return {pass, "||S_C - I|| " + fmt(op_err) + ", |A-1| " + fmt(a_err) + ", |B-1| " + fmt(b_err)};
}

Outcome bound_oracle_agreement() {
  Tally t;
  std::size_t deficient = 0;
  for (ControllerMode mode : kModes) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Instance inst = generate(spec_for(seed, mode));
      const FrameCheck fc = is_controlled_k_g_fusion_frame(inst.family, inst.ctx);
      const Matrix& h = fc.frame_op.hermitian_part;
      const Matrix kk = inst.ctx.K() * inst.ctx.K().adjoint();
      if (inst.spec.k_mode == KMode::rank_deficient) ++deficient;
      const double a_ref = oracle::bisect_lower(h, kk);
      const double b_ref = oracle::bisect_upper(h, identity(inst.family.dim()));
      const double ea = std::abs(fc.certificate.lower - a_ref) / std::max(std::abs(a_ref), 1e-300);
      const double eb = std::abs(fc.certificate.upper - b_ref) / b_ref;
      t.check(ea <= 1e-8, ea, "A " + id(inst));
      t.check(eb <= 1e-8, eb, "B " + id(inst));
    }
  }
  t.require(deficient > 0, "no rank-deficient K");
  return {t.pass, summary(t, "max relative error") + ", " + std::to_string(deficient) + " rank-deficient K"};
}

Outcome certificate_sandwich() {
  Tally t;
  for (ControllerMode mode : kModes) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const Instance inst = generate(spec_for(seed + 500, mode));
      const FrameCheck fc = is_controlled_k_g_fusion_frame(inst.family, inst.ctx);
      const BoundsCertificate& c = fc.certificate;
      const Matrix& h = fc.frame_op.hermitian_part;
      const Matrix kk = inst.ctx.K() * inst.ctx.K().adjoint();
      const double lower_res = oracle::min_eig(h - c.lower * kk);
      const double upper_res = oracle::max_eig(h) - c.upper;
      t.check(lower_res >= -1e-9, -lower_res, "lower " + id(inst));
      t.check(upper_res <= 1e-9, upper_res, "upper " + id(inst));
      t.require(oracle::min_eig(h - c.lower * (1 + 1e-6) * kk) < 0.0, "lower not optimal " + id(inst));
      t.require(oracle::max_eig(h) > c.upper * (1 - 1e-6), "upper not optimal " + id(inst));
    }
  }
  return {t.pass, summary(t, "max violation")};
}

Outcome transform_envelopes() {
  Tally forward, inverse;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Instance inst = generate(spec_for(seed + 1000, kModes[seed % 3]));
    Rng rng(seed + 77);
    const Matrix v = commuting_invertible(rng, inst);
    const TransformedFamily img = transform_by_invertible(inst.family, inst.ctx, v);
    const double f_excess = std::max(img.predicted.lower - img.recomputed.lower,
                                     img.recomputed.upper - img.predicted.upper);
    forward.check(img.envelope_holds(1e-8), std::max(f_excess, 0.0), "forward " + id(inst));
    const TransformedFamily back = inverse_transform_check(img.family, inst.ctx, v);
    const double b_excess = std::max(back.predicted.lower - back.recomputed.lower,
                                     back.recomputed.upper - back.predicted.upper);
    inverse.check(back.envelope_holds(1e-8), std::max(b_excess, 0.0), "inverse " + id(inst));
  }
  return {forward.pass && inverse.pass,
          "forward: " + summary(forward, "max excess") + "; inverse: " + summary(inverse, "max excess")};
}

Outcome douglas() {
  Tally t;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenSpec spec = spec_for(seed + 2000, kModes[seed % 3]);
    if (spec.k_mode == KMode::identity) spec.k_mode = KMode::rank_deficient;
    const Instance inst = generate(spec);
    Rng rng(seed + 5);
    const Index n = inst.family.dim();
    const Matrix v = inst.ctx.K() * gaussian_matrix(rng, n, n, spec.field);
    const DouglasTransfer d = douglas_transfer(inst.family, inst.ctx, v);
    const Matrix kk = inst.ctx.K() * inst.ctx.K().adjoint();
    const Matrix vv = v * v.adjoint();
    const double res = oracle::min_eig(d.lambda * kk - vv);
    t.check(res >= -1e-9, std::max(-res, 0.0), "domination " + id(inst));
    t.require(oracle::min_eig((1 - 1e-6) * d.lambda * kk - vv) < 0.0, "lambda not minimal " + id(inst));
  }
  return {t.pass, summary(t, "max domination violation")};
}

Outcome operator_identities() {
  Tally k, dual;
  std::size_t admissible = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    GenSpec spec = spec_for(seed + 3000, kModes[seed % 3]);
    if (spec.k_mode == KMode::rank_deficient) spec.k_mode = KMode::invertible;
    const Instance inst = generate(spec);
    std::optional<TransformedFamily> built;
    try {
      built = canonical_k_construction(inst.family, inst.ctx);
    } catch (const Error& e) {
      // Only precondition failures make an instance inadmissible.
      if (e.code() != ErrorCode::CommutationViolated && e.code() != ErrorCode::NotAFrame) throw;
      continue;
    }
    ++admissible;
    const TransformedFamily& g = *built;
    k.check(g.operator_identity_holds(), g.operator_defect / std::max(g.operator_tolerance, 1e-300),
            "K S^-1 K* " + id(inst));
    const TransformedFamily d = canonical_dual(inst.family, inst.ctx);
    const Matrix s_inv = frame_operator(inst.family, inst.ctx).hermitian_part.inverse();
    const double err = spectral_norm(d.frame_op.op - s_inv);
    dual.check(err <= 1e-8, err, "dual " + id(inst));
  }
  return {k.pass && dual.pass && admissible > 0,
          std::to_string(admissible) + " admissible; K-construction " + summary(k, "max defect/tolerance") +
              "; dual " + summary(dual, "max ||S_G - S^-1||")};
}

Outcome equivalences() {
  Tally t;
  std::size_t frames = 0, non_frames = 0;
  double min_gap = INFINITY;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GenSpec spec;
    spec.seed = seed + 4000;
    spec.dim = 3 + static_cast<Index>(seed % 5);
    spec.controller = kModes[seed % 3];
    spec.field = (seed / 3) % 2 ? ScalarField::real : ScalarField::complex;
    spec.atom_count = static_cast<std::size_t>(spec.dim) + 2;
    spec.subspace_dim_max = 2;
    // Frame operator of rank r; K of rank k inside or outside its range.
    const Index r = 1 + static_cast<Index>(seed / 6) % (spec.dim - 1);
    spec.span_rank = r;
    spec.k_mode = KMode::rank_deficient;
    spec.k_rank = std::max<Index>(1, r - static_cast<Index>(seed % 2));
    spec.k_in_span = (seed / 2) % 2 == 0;
    const Instance inst = generate(spec);

    const FrameCheck fc = is_controlled_k_g_fusion_frame(inst.family, inst.ctx);
    const QuotientReport q = quotient_bound(inst.ctx.K(), fc.frame_op, inst.ctx.tol());
    t.require(q.consistent && q.bounded == fc.is_frame, "quotient " + id(inst));
    Rng rng(seed);
    const Matrix v = commuting_invertible(rng, inst);
    try {
      const EquivalencesReport e = three_equivalences(inst.family, inst.ctx, v);
      t.require(e.agree && e.frame_i == fc.is_frame, "three statements " + id(inst));
      min_gap = std::min(min_gap, e.rank_gap);
      t.require(e.rank_gap > 10.0, "rank gap " + fmt(e.rank_gap) + " " + id(inst));
    } catch (const Error& e) {
      t.require(false, std::string(to_string(e.code())) + " " + id(inst));
    }
    (fc.is_frame ? frames : non_frames)++;
  }
  t.require(frames > 0 && non_frames > 0, "one side of the boundary is empty");
  return {t.pass, std::to_string(frames) + " frames, " + std::to_string(non_frames) + " non-frames, " +
                      std::to_string(t.count) + " checks, min rank-gap factor " + fmt(min_gap) +
                      (t.pass ? "" : "; first failure: " + t.first_failure)};
}

Outcome stability() {
  Tally t;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenSpec spec = spec_for(seed + 5000, kModes[seed % 3]);
    spec.atom_count = static_cast<std::size_t>(spec.dim) + 3;
    spec.subspace_dim_max = spec.dim;
    const Instance inst = generate(spec);
    Rng rng(seed + 11);
    std::vector<double> w = inst.family.weights().values();
    for (double& x : w) x *= rng.uniform(0.7, 1.3);
    const StabilityReport r = dual_stability_check(inst.family, inst.family.with_weights(WeightFunction(w)), inst.ctx);
    t.check(r.holds, r.lhs_operator / std::max(r.rhs, 1e-300), "bound " + id(inst));
  }
  const FrameFamily p = coordinate_family(2);
  const FrameFamily q(2, MeasureSpace::discrete({{"a", 1.5}, {"b", 1.5}}), WeightFunction::constant(2), p.atoms());
  const StabilityReport s = dual_stability_check(p, q, ControlContext::identity(2));
  const double lhs_err = std::abs(s.lhs_operator - 1.0 / 3.0);
  const double rhs_err = std::abs(s.rhs - 1.0 / 3.0);
  t.require(lhs_err <= 1e-10 && rhs_err <= 1e-10, "scalar pair equality");
  return {t.pass, summary(t, "max lhs/rhs") + "; scalar pair lhs " + fmt(s.lhs_operator) + " rhs " + fmt(s.rhs)};
}

Outcome strict_factorization() {
  Tally t;
  std::size_t succeeded = 0;
  for (ControllerMode mode : kModes) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const Instance inst = generate(spec_for(seed + 6000, mode));
      AnalysisOperator a;
      try {
        a = analysis_operator(inst.family, inst.ctx);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonPositiveBlock) throw;
        continue;
      }
      ++succeeded;
      const double err = spectral_norm(a.composed() - frame_operator(inst.family, inst.ctx).op);
      t.check(err <= 1e-8, err, "factorization " + id(inst));
    }
  }
  // The block T* P L* L P U is not Hermitian when T mixes F out of itself.
  Matrix e1 = Matrix::Zero(2, 1);
  e1(0, 0) = 1.0;
  const FrameFamily bad(2, counting_measure(1), WeightFunction::constant(1),
                        {{Subspace::from_basis(e1, 1e-12), identity(1)}});
  Matrix t_mix(2, 2);
  t_mix << 2, 1, 1, 2;
  bool raised = false;
  try {
    analysis_operator(bad, ControlContext::make(t_mix, identity(2), identity(2)));
  } catch (const Error& e) {
    raised = e.code() == ErrorCode::NonPositiveBlock;
  }
  t.require(raised, "NonPositiveBlock not raised");
  return {t.pass && succeeded > 0, std::to_string(succeeded) + " factorizations, " + summary(t, "max ||T T* - S||") +
                                       (raised ? ", NonPositiveBlock raised" : "")};
}

Outcome quadrature_convergence() {
  const auto op = [](std::size_t n) {
    const MeasureSpace m = discretize_interval(0.0, 1.0, n);
    std::vector<FrameAtom> atoms;
    for (std::size_t i = 0; i < m.size(); ++i) {
      Matrix u(2, 1);
      u << std::cos(m.node(i)), std::sin(m.node(i));
      atoms.push_back({Subspace::from_basis(u, 1e-12), identity(1)});
    }
    const FrameFamily fam(2, m, WeightFunction::sample(m, [](double x) { return 1.0 + x; }), atoms);
    return frame_operator(fam, ControlContext::identity(2)).op;
  };
  std::vector<double> diffs;
  for (std::size_t n = 4; n < 64; n *= 2) diffs.push_back(spectral_norm(op(n) - op(2 * n)));
  bool pass = true;
  std::string detail = "ratios";
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i) {
    const double ratio = diffs[i] / diffs[i + 1];
    pass = pass && ratio >= 3.5 && ratio <= 4.5;
    std::ostringstream s;
    s.precision(4);
    s << " " << ratio;
    detail += s.str();
  }
  return {pass, detail};
}

Outcome discrete_reduction() {
  Tally t;
  for (ControllerMode mode : kModes) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
      GenSpec spec = spec_for(seed + 7000, mode);
      spec.measure = MeasureKind::counting;
      const Instance inst = generate(spec);
      const Matrix lib = frame_operator(inst.family, inst.ctx).op;
      const Matrix ref = oracle::discrete_sum(inst.family, inst.ctx.T(), inst.ctx.U());
      const double diff = (lib - ref).cwiseAbs().maxCoeff();
      t.check(lib == ref, diff, "bitwise " + id(inst));
    }
  }
  return {t.pass, summary(t, "max entry difference")};
}

Outcome projection_commutation() {
  Tally general, unitary;
  Rng rng(8080);
  for (int trial = 0; trial < 100; ++trial) {
    const Index n = 2 + trial % 7;
    const ScalarField field = trial % 4 < 2 ? ScalarField::complex : ScalarField::real;
    const Index m_dim = 1 + trial % n;
    const Subspace m = Subspace::span_of(gaussian_matrix(rng, n, m_dim, field), 1e-12);
    const bool is_unitary = trial % 2 == 0;
    const Matrix t = is_unitary ? random_unitary(rng, n, field) : random_invertible(rng, n, field);
    const ProjectionCommutationReport r = projection_commutation_check(m, t);
    general.check(r.general_defect <= 1e-12, r.general_defect, "general trial " + std::to_string(trial));
    if (is_unitary) {
      const double u = r.unitary_defect.value_or(INFINITY);
      unitary.check(u <= 1e-12, u, "unitary trial " + std::to_string(trial));
    }
  }
  return {general.pass && unitary.pass && unitary.count == 50,
          "general: " + summary(general, "max defect") + "; unitary: " + summary(unitary, "max defect")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Parseval reduction", parseval_reduction},
      {"bound-oracle agreement", bound_oracle_agreement},
      {"certificate sandwich", certificate_sandwich},
      {"transform envelopes", transform_envelopes},
      {"Douglas transfer", douglas},
      {"operator identities", operator_identities},
      {"equivalences across the rank boundary", equivalences},
      {"dual stability", stability},
      {"strict-mode factorization", strict_factorization},
      {"quadrature convergence", quadrature_convergence},
      {"discrete reduction", discrete_reduction},
      {"projection commutation", projection_commutation},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s [%2d] %s: %s\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.c_str());
  }
  std::printf("%d/%d criteria passed\n", index - failed, index);
  return failed == 0 ? 0 : 1;
}
