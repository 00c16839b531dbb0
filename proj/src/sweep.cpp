#include "ckgf/sweep.hpp"

#include <cmath>
#include <functional>

#include "ckgf/constructions.hpp"
#include "ckgf/stability.hpp"

namespace ckgf {

namespace {

constexpr double kTighten = 1e-6;

using Check = std::function<std::string(std::uint64_t, const Tolerances&)>;

std::string bounds_check(std::uint64_t s, const Tolerances& tol) {
  const Instance inst = generate(sweep_spec(s, tol));
  const FrameCheck fc = is_controlled_k_g_fusion_frame(inst.family, inst.ctx);
  const BoundsCertificate& c = fc.certificate;
  const Matrix h = fc.frame_op.hermitian_part;
  const Matrix kk = inst.ctx.K() * inst.ctx.K().adjoint();
  const Index n = h.rows();
  if (c.lower_residual < -10 * tol.psd) return "lower sandwich fails";
  if (lambda_max(h) > c.upper + 10 * tol.psd) return "upper sandwich fails";
  if (lambda_min((c.upper - kTighten * (1 + c.upper)) * identity(n) - h) >= 0.0) {
    return "tightened upper bound still valid";
  }
  if (!c.lower_vacuous && lambda_min(h - (c.lower + kTighten * (1 + c.lower)) * kk) >= 0.0) {
    return "tightened lower bound still valid";
  }
  return {};
}

std::string envelope_check(std::uint64_t s, const Tolerances& tol) {
  const Instance inst = generate(sweep_spec(s, tol));
  Rng rng(s ^ 0x5eedULL);
  const Matrix v = commuting_invertible(rng, inst);
  const TransformedFamily t = transform_by_invertible(inst.family, inst.ctx, v);
  if (!t.envelope_holds(tol.eq)) return "forward envelope violated";
  const TransformedFamily back = inverse_transform_check(t.family, inst.ctx, v);
  if (!back.envelope_holds(tol.eq)) return "inverse envelope violated";
  return {};
}

std::string douglas_check(std::uint64_t s, const Tolerances& tol) {
  const Instance inst = generate(sweep_spec(s, tol));
  Rng rng(s ^ 0xd0091a5ULL);
  const Matrix v = inst.ctx.K() * gaussian_matrix(rng, inst.family.dim(), inst.family.dim(), inst.spec.field);
  const DouglasTransfer d = douglas_transfer(inst.family, inst.ctx, v);
  if (!d.verified) return "transfer not verified";
  if (!d.vacuous) {
    const Matrix kk = inst.ctx.K() * inst.ctx.K().adjoint();
    if (lambda_min((1 - kTighten) * d.lambda * kk - v * v.adjoint()) >= 0.0) return "lambda is not minimal";
  }
  return {};
}

std::string dual_check(std::uint64_t s, const Tolerances& tol) {
  GenSpec spec = sweep_spec(s, tol);
  if (spec.k_mode == KMode::rank_deficient) spec.k_mode = KMode::invertible;
  const Instance inst = generate(spec);
  const TransformedFamily kc = canonical_k_construction(inst.family, inst.ctx);
  if (!kc.operator_identity_holds()) return "K S^-1 K* identity fails";
  if (!kc.envelope_holds(tol.eq)) return "K-construction envelope violated";
  const TransformedFamily dual = canonical_dual(inst.family, inst.ctx);
  if (spectral_norm(dual.frame_op.op - *dual.expected_operator) > tol.eq) return "dual operator identity fails";
  if (!dual.envelope_holds(tol.eq)) return "dual envelope violated";
  const TransformedFamily back = canonical_dual(dual.family, inst.ctx);
  const FrameOperatorResult orig = frame_operator(inst.family, inst.ctx);
  if (spectral_norm(back.frame_op.op - orig.op) > tol.eq * std::max(1.0, spectral_norm(orig.op))) {
    return "dual involution fails";
  }
  return {};
}

std::string quotient_check(std::uint64_t s, const Tolerances& tol) {
  GenSpec spec = sweep_spec(s, tol);
  if (s % 2 == 1 && spec.dim > 2) {
    spec.span_rank = spec.dim - 1;
    spec.subspace_dim_max = std::min(spec.subspace_dim_max, spec.span_rank);
    spec.k_in_span = s % 4 == 1;
    if (spec.k_mode != KMode::rank_deficient) spec.k_mode = s % 4 == 1 ? KMode::rank_deficient : spec.k_mode;
    spec.k_rank = std::min(spec.k_rank, spec.span_rank);
  }
  const Instance inst = generate(spec);
  const QuotientReport q = quotient_bound(inst.ctx.K(), frame_operator(inst.family, inst.ctx), tol);
  if (!q.consistent) return "quotient predicates disagree";
  Rng rng(s ^ 0x9107ULL);
  three_equivalences(inst.family, inst.ctx, commuting_invertible(rng, inst));
  return {};
}

std::string stability_check(std::uint64_t s, const Tolerances& tol) {
  GenSpec spec = sweep_spec(s, tol);
  spec.k_mode = KMode::identity;
  const Instance inst = generate(spec);
  Rng rng(s ^ 0x57ab1eULL);
  std::vector<double> w = inst.family.weights().values();
  for (double& x : w) x *= 1.0 + rng.uniform(-0.2, 0.2);
  const FrameFamily other = inst.family.with_weights(WeightFunction(std::move(w)));
  const StabilityReport r = dual_stability_check(inst.family, other, inst.ctx);
  if (!r.holds) return "stability inequality fails";
  return {};
}

std::string strict_check(std::uint64_t s, const Tolerances& tol) {
  const Instance inst = generate(sweep_spec(s, tol));
  try {
    const AnalysisOperator a = analysis_operator(inst.family, inst.ctx);
    const FrameOperatorResult r = frame_operator(inst.family, inst.ctx);
    if (spectral_norm(a.composed() - r.op) > tol.eq) return "T_C T_C* differs from S_C";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NonPositiveBlock) throw;
  }
  return {};
}

const std::vector<std::pair<std::string, Check>>& registry() {
  static const std::vector<std::pair<std::string, Check>> r{
      {"bounds", bounds_check},   {"envelopes", envelope_check},   {"douglas", douglas_check},
      {"duals", dual_check},      {"quotient", quotient_check},    {"stability", stability_check},
      {"strict", strict_check}};
  return r;
}

}  // namespace

GenSpec sweep_spec(std::uint64_t s, const Tolerances& tol) {
  Rng rng(s * 0x9e3779b97f4a7c15ULL + 1);
  GenSpec spec;
  spec.seed = s;
  spec.tol = tol;
  spec.controller = static_cast<ControllerMode>(s % 3);
  spec.k_mode = static_cast<KMode>((s / 3) % 3);
  spec.field = (s / 9) % 2 == 0 ? ScalarField::complex : ScalarField::real;
  spec.dim = rng.integer(2, 6);
  spec.atom_count = static_cast<std::size_t>(spec.dim) + static_cast<std::size_t>(rng.integer(0, 4));
  spec.subspace_dim_max = rng.integer(1, static_cast<int>(spec.dim));
  spec.local_dim_max = 3;
  spec.k_rank = rng.integer(1, static_cast<int>(spec.dim) - 1);
  spec.measure = (s / 18) % 2 == 0 ? MeasureKind::counting : MeasureKind::weighted;
  return spec;
}

const std::vector<std::string>& sweep_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, check] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

std::vector<SweepResult> run_sweep(const std::string& suite, std::uint64_t seed, std::size_t count,
                                   const Tolerances& tol) {
  std::vector<SweepResult> out;
  bool found = false;
  for (const auto& [name, check] : registry()) {
    if (suite != "all" && suite != name) continue;
    found = true;
    SweepResult r;
    r.suite = name;
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t s = seed + i;
      ++r.instances;
      std::string msg;
      try {
        msg = check(s, tol);
      } catch (const Error& e) {
        msg = e.what();
      }
      if (msg.empty()) {
        ++r.passed;
      } else {
        r.failures.push_back({s, msg});
      }
    }
    out.push_back(std::move(r));
  }
  if (!found) throw Error(ErrorCode::InputError, "unknown sweep suite '" + suite + "'");
  return out;
}

}  // namespace ckgf
