#include "ckgf/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ckgf {

namespace {

// Smallest factor by which a relative singular value of m clears the rank
// cutoff, on either side. Exact zeros clear it by an infinite factor.
double rank_gap(const Matrix& m, double rel_tol) {
  const RealVector s = singular_values(m);
  double gap = std::numeric_limits<double>::infinity();
  if (s.size() == 0 || s(0) == 0.0) return gap;
  for (Index i = 0; i < s.size(); ++i) {
    const double r = s(i) / s(0);
    if (r == 0.0) continue;
    gap = std::min(gap, r > rel_tol ? r / rel_tol : rel_tol / r);
  }
  return gap;
}

double largest_abs_eigenvalue(const Matrix& m) {
  const HermitianEigen eig = hermitian_eigen(m);
  return std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
}

}  // namespace

QuotientReport quotient_bound(const Matrix& k, const FrameOperatorResult& s, const Tolerances& tol) {
  require_square(k, "K");
  if (k.rows() != s.op.rows()) throw Error(ErrorCode::DimensionMismatch, "K and S_C differ in size");
  const HermitianOperator h = s.hermitian(tol);
  const HermitianOperator kk = HermitianOperator::from(k * k.adjoint(), tol.herm);
  QuotientReport r;
  const PencilExtreme p = pencil_max(kk, h, tol);
  r.bounded = p.bounded;
  r.b_min = p.value;
  r.range_ok = range_contained(k, h.matrix(), tol.rank);
  const BoundsCertificate cert = optimal_bounds(s, k, tol);
  r.a_opt = cert.lower;
  r.frame_predicate = cert.lower_vacuous || cert.is_frame;
  r.consistent = r.bounded == r.range_ok && r.bounded == r.frame_predicate;
  return r;
}

EquivalencesReport three_equivalences(const FrameFamily& fam, const ControlContext& ctx, const Matrix& v) {
  const Tolerances& tol = ctx.tol();
  // Shares the invertibility and commutation gate of the transform.
  const TransformedFamily image = transform_by_invertible(fam, ctx, v);
  const Matrix vk = v * ctx.K();

  EquivalencesReport r;
  r.transformed = optimal_bounds(image.frame_op, vk, tol);
  r.frame_i = r.transformed.lower_vacuous || r.transformed.is_frame;

  const FrameOperatorResult s = frame_operator(fam, ctx);
  const Matrix sh = s.hermitian(tol).matrix();
  const HermitianOperator num = HermitianOperator::from(vk * vk.adjoint(), tol.herm);

  const Matrix root_s = psd_sqrt(sh, tol).matrix();
  const Matrix r_ii = root_s * v.adjoint();
  const HermitianOperator g_ii = HermitianOperator::from(r_ii.adjoint() * r_ii, tol.herm);
  const PencilExtreme p_ii = pencil_max(num, g_ii, tol);
  r.b_ii = p_ii.value;
  r.bounded_ii = p_ii.bounded;

  const Matrix root_vsv = psd_sqrt(v * sh * v.adjoint(), tol).matrix();
  const HermitianOperator g_iii = HermitianOperator::from(root_vsv * root_vsv, tol.herm);
  const PencilExtreme p_iii = pencil_max(num, g_iii, tol);
  r.b_iii = p_iii.value;
  r.bounded_iii = p_iii.bounded;

  r.rank_s = numerical_rank(sh, tol.rank);
  r.rank_vk = numerical_rank(vk, tol.rank);
  r.rank_gap = std::min(rank_gap(sh, tol.rank), rank_gap(vk, tol.rank));
  r.agree = r.frame_i == r.bounded_ii && r.frame_i == r.bounded_iii;
  if (!r.agree) {
    throw Error(ErrorCode::EquivalenceViolation,
                "statements disagree (frame " + std::to_string(r.frame_i) + ", bounded " +
                    std::to_string(r.bounded_ii) + "/" + std::to_string(r.bounded_iii) + "; rank S = " +
                    std::to_string(r.rank_s) + ", rank VK = " + std::to_string(r.rank_vk) +
                    ", rank gap = " + std::to_string(r.rank_gap) + ")");
  }
  return r;
}

double frame_operator_distance(const FrameOperatorResult& s1, const FrameOperatorResult& s2, const Tolerances& tol) {
  const HermitianOperator h1 = s1.hermitian(tol);
  const HermitianOperator h2 = s2.hermitian(tol);
  if (h1.dim() != h2.dim()) throw Error(ErrorCode::DimensionMismatch, "frame operators differ in size");
  return largest_abs_eigenvalue(h1.matrix() - h2.matrix());
}

StabilityReport dual_stability_check(const FrameFamily& fam1, const FrameFamily& fam2, const ControlContext& ctx) {
  const Tolerances& tol = ctx.tol();
  if (fam1.dim() != fam2.dim()) throw Error(ErrorCode::DimensionMismatch, "families act on different spaces");
  const ControlContext plain = ctx.with_target(identity(fam1.dim()));

  // canonical_dual checks the frame property and the commutation of S^-1.
  const TransformedFamily dual1 = canonical_dual(fam1, plain);
  const TransformedFamily dual2 = canonical_dual(fam2, plain);

  StabilityReport r;
  r.d = frame_operator_distance(frame_operator(fam1, plain), frame_operator(fam2, plain), tol);
  r.a1 = dual1.source_bounds.lower;
  r.a2 = dual2.source_bounds.lower;
  r.lhs_functional = frame_operator_distance(dual1.frame_op, dual2.frame_op, tol);

  const Matrix inv1 = *dual1.expected_operator;
  const Matrix inv2 = *dual2.expected_operator;
  r.lhs_operator = spectral_norm(inv1 - inv2);
  r.chain_middle = spectral_norm(inv1) * r.d * spectral_norm(inv2);
  r.rhs = r.d / (r.a1 * r.a2);

  const double slack = tol.eq;
  r.chain_holds = r.lhs_operator <= r.chain_middle + slack && r.chain_middle <= r.rhs + slack;
  r.holds_functional = r.lhs_functional <= r.rhs + slack;
  r.holds_operator = r.lhs_operator <= r.rhs + slack;
  r.holds = r.chain_holds && r.holds_functional && r.holds_operator;
  return r;
}

}  // namespace ckgf
