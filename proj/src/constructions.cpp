#include "ckgf/constructions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ckgf/random.hpp"

namespace ckgf {

namespace {

constexpr double kCertificateSlack = 10.0;

void require_invertible(const Matrix& v, const Tolerances& tol, const char* what) {
  require_square(v, what);
  require_finite(v, what);
  const RealVector s = singular_values(v);
  if (s.size() == 0 || s(0) == 0.0 || s(s.size() - 1) <= tol.rank * s(0)) {
    throw Error(ErrorCode::NotInvertible, std::string(what) + " is not invertible");
  }
}

void require_commutes(const Matrix& x, const ControlContext& ctx, const std::string& what) {
  const double dt = commutation_defect(x, ctx.T());
  const double du = commutation_defect(x, ctx.U());
  if (dt > ctx.tol().eq || du > ctx.tol().eq) {
    throw Error(ErrorCode::CommutationViolated, what + " does not commute with the controllers (defects " +
                                                    std::to_string(dt) + ", " + std::to_string(du) + ")");
  }
}

Matrix hermitian_inverse(const HermitianOperator& h) {
  const HermitianEigen eig = hermitian_eigen(h.matrix());
  const RealVector inv = eig.values.cwiseInverse();
  const Matrix m = eig.vectors * inv.cast<Scalar>().asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (m + m.adjoint());
}

bool is_zero(const Matrix& m) { return m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

std::string_view to_string(Construction c) {
  switch (c) {
    case Construction::invertible_transform: return "invertible_transform";
    case Construction::inverse_transform: return "inverse_transform";
    case Construction::k_construction: return "k_construction";
    case Construction::canonical_dual: return "canonical_dual";
  }
  return "unknown";
}

bool TransformedFamily::envelope_holds(double tol) const {
  return predicted.lower <= recomputed.lower + tol && recomputed.upper <= predicted.upper + tol;
}

FrameFamily push_forward(const FrameFamily& fam, const Matrix& w, const Matrix& a, double rel_tol) {
  if (w.rows() != fam.dim() || w.cols() != fam.dim() || a.rows() != fam.dim() || a.cols() != fam.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "transform size differs from H");
  }
  std::vector<FrameAtom> atoms;
  atoms.reserve(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const FrameAtom& src = fam.atom(i);
    const Matrix& q = src.subspace.basis();
    Subspace image = Subspace::span_of(w * q, rel_tol);
    if (image.dim() == 0) throw Error(ErrorCode::NotInvertible, "transform annihilates F(" + std::to_string(i) + ")");
    Matrix local = src.local * (q.adjoint() * (a * image.basis()));
    atoms.push_back({std::move(image), std::move(local)});
  }
  return FrameFamily(fam.dim(), fam.measure(), fam.weights(), std::move(atoms));
}

TransformedFamily transform_by_invertible(const FrameFamily& fam, const ControlContext& ctx, const Matrix& v) {
  const Tolerances& tol = ctx.tol();
  if (v.rows() != fam.dim()) throw Error(ErrorCode::DimensionMismatch, "V size differs from H");
  require_invertible(v, tol, "V");
  require_commutes(v.adjoint(), ctx, "V*");

  const FrameOperatorResult source_op = frame_operator(fam, ctx);
  const BoundsCertificate source_bounds = optimal_bounds(source_op, ctx.K(), tol);
  const double nv2 = std::pow(spectral_norm(v), 2);

  TransformedFamily out{push_forward(fam, v, v.adjoint(), tol.rank),
                        fam,
                        Construction::invertible_transform,
                        v,
                        v * ctx.K() * v.adjoint(),
                        source_bounds,
                        {source_bounds.lower / nv2, source_bounds.upper * nv2},
                        {},
                        {},
                        std::nullopt,
                        0.0,
                        0.0};
  out.frame_op = frame_operator(out.family, ctx);
  out.recomputed = optimal_bounds(out.frame_op, out.target, tol);
  out.expected_operator = v * source_op.hermitian_part * v.adjoint();
  out.operator_defect = spectral_norm(out.frame_op.op - *out.expected_operator);
  out.operator_tolerance = tol.eq * std::max(1.0, nv2 * spectral_norm(source_op.hermitian_part));
  return out;
}

TransformedFamily inverse_transform_check(const FrameFamily& image, const ControlContext& ctx, const Matrix& v) {
  const Tolerances& tol = ctx.tol();
  if (v.rows() != image.dim()) throw Error(ErrorCode::DimensionMismatch, "V size differs from H");
  require_invertible(v, tol, "V");
  const Matrix v_inv = v.partialPivLu().inverse();
  require_commutes(v_inv.adjoint(), ctx, "(V^-1)*");

  const FrameOperatorResult image_op = frame_operator(image, ctx);
  const BoundsCertificate image_bounds = optimal_bounds(image_op, ctx.K(), tol);
  const double nv2 = std::pow(spectral_norm(v), 2);
  const double ninv2 = std::pow(spectral_norm(v_inv), 2);

  TransformedFamily out{push_forward(image, v_inv, v_inv.adjoint(), tol.rank),
                        image,
                        Construction::inverse_transform,
                        v,
                        v_inv * ctx.K() * v,
                        image_bounds,
                        {image_bounds.lower / nv2, image_bounds.upper * ninv2},
                        {},
                        {},
                        std::nullopt,
                        0.0,
                        0.0};
  out.frame_op = frame_operator(out.family, ctx);
  out.recomputed = optimal_bounds(out.frame_op, out.target, tol);
  out.expected_operator = v_inv * image_op.hermitian_part * v_inv.adjoint();
  out.operator_defect = spectral_norm(out.frame_op.op - *out.expected_operator);
  out.operator_tolerance = tol.eq * std::max(1.0, ninv2 * spectral_norm(image_op.hermitian_part));
  return out;
}

WeakenedBounds weaken_to_k_frame(const FrameOperatorResult& s, const BoundsCertificate& identity_cert,
                                 const Matrix& k, const Tolerances& tol) {
  if (!identity_cert.is_frame) throw Error(ErrorCode::NotAFrame, "family is not a g-fusion frame (K = I)");
  require_square(k, "K");
  if (k.rows() != s.op.rows()) throw Error(ErrorCode::DimensionMismatch, "K and S_C differ in size");
  const double nk = spectral_norm(k);
  if (nk == 0.0) throw Error(ErrorCode::ZeroOperator, "K = 0 makes the lower bound undefined");
  WeakenedBounds w;
  w.lower = identity_cert.lower / (nk * nk);
  w.upper = identity_cert.upper;
  const HermitianOperator h = s.hermitian(tol);
  w.residual = lambda_min(h.matrix() - w.lower * (k * k.adjoint()));
  w.verified = w.residual >= -kCertificateSlack * tol.psd && lambda_max(h.matrix()) <= w.upper + kCertificateSlack * tol.psd;
  return w;
}

RangeRestriction restrict_to_range(const FrameFamily& fam, const ControlContext& ctx, const BoundsCertificate& cert,
                                   std::uint64_t seed, std::size_t samples) {
  const Tolerances& tol = ctx.tol();
  const Matrix& k = ctx.K();
  RangeRestriction r;
  r.upper = cert.upper;
  if (is_zero(k)) {
    r.vacuous = true;
    r.verified = true;
    return r;
  }
  if (!cert.is_frame) throw Error(ErrorCode::NotAFrame, "family is not a K-frame");
  const double np = spectral_norm(pseudo_inverse(k, tol.rank));
  r.lower = cert.lower / (np * np);

  const Matrix range = orthonormal_range(k, tol.rank);
  r.range_dim = range.cols();
  std::vector<Vector> probes;
  for (Index j = 0; j < range.cols(); ++j) probes.push_back(range.col(j));
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i) {
    probes.push_back(range * gaussian_vector(rng, range.cols(), ScalarField::complex));
  }
  r.min_margin = std::numeric_limits<double>::infinity();
  for (const Vector& f : probes) {
    const double n2 = f.squaredNorm();
    if (n2 == 0.0) continue;
    const double margin = (frame_functional(fam, ctx, f) - r.lower * n2) / n2;
    r.min_margin = std::min(r.min_margin, margin);
    ++r.checked;
  }
  r.verified = r.checked > 0 && r.min_margin >= -tol.eq;
  return r;
}

DouglasTransfer douglas_transfer(const FrameFamily& fam, const ControlContext& ctx, const Matrix& v) {
  const Tolerances& tol = ctx.tol();
  require_square(v, "V");
  require_finite(v, "V");
  if (v.rows() != fam.dim()) throw Error(ErrorCode::DimensionMismatch, "V size differs from H");
  const Matrix& k = ctx.K();
  if (!range_contained(v, k, tol.rank)) throw Error(ErrorCode::RangeNotContained, "R(V) is not inside R(K)");
  const FrameCheck check = is_controlled_k_g_fusion_frame(fam, ctx);
  if (!check.is_frame) throw Error(ErrorCode::NotAFrame, "family is not a K-frame");

  DouglasTransfer d;
  d.upper = check.certificate.upper;
  if (is_zero(v)) {
    d.vacuous = true;
    d.lower = check.certificate.lower;
    d.verified = true;
    return d;
  }
  const HermitianOperator vv = HermitianOperator::from(v * v.adjoint(), tol.herm);
  const HermitianOperator kk = HermitianOperator::from(k * k.adjoint(), tol.herm);
  const PencilExtreme p = pencil_max(vv, kk, tol);
  if (!p.bounded) throw Error(ErrorCode::RangeNotContained, "V V* is not dominated by any multiple of K K*");
  d.lambda = p.value;
  if (d.lambda == 0.0) {
    d.vacuous = true;
    d.lower = check.certificate.lower;
    d.verified = true;
    return d;
  }
  d.lower = check.certificate.lower / d.lambda;
  d.domination_residual = lambda_min(d.lambda * kk.matrix() - vv.matrix());
  const HermitianOperator h = check.frame_op.hermitian(tol);
  d.sandwich_residual = lambda_min(h.matrix() - d.lower * vv.matrix());
  d.verified = d.domination_residual >= -kCertificateSlack * tol.psd &&
               d.sandwich_residual >= -kCertificateSlack * tol.psd;
  return d;
}

TransformedFamily canonical_k_construction(const FrameFamily& fam, const ControlContext& ctx) {
  const Tolerances& tol = ctx.tol();
  const Matrix& k = ctx.K();
  require_invertible(k, tol, "K");

  const FrameOperatorResult source_op = frame_operator(fam, ctx);
  const BoundsCertificate base = optimal_bounds(source_op, identity(fam.dim()), tol);
  if (!base.is_frame) throw Error(ErrorCode::NotAFrame, "family is not a g-fusion frame (K = I)");
  const Matrix s_inv = hermitian_inverse(source_op.hermitian(tol));
  const Matrix a = s_inv * k.adjoint();
  require_commutes(a, ctx, "S_C^-1 K*");
  const Matrix w = k * s_inv;
  const double nk2 = std::pow(spectral_norm(k), 2);

  TransformedFamily out{push_forward(fam, w, a, tol.rank),
                        fam,
                        Construction::k_construction,
                        w,
                        k,
                        base,
                        {base.lower / (base.upper * base.upper), base.upper * nk2 / (base.lower * base.lower)},
                        {},
                        {},
                        std::nullopt,
                        0.0,
                        0.0};
  out.frame_op = frame_operator(out.family, ctx);
  out.recomputed = optimal_bounds(out.frame_op, k, tol);
  out.expected_operator = k * s_inv * k.adjoint();
  out.operator_defect = spectral_norm(out.frame_op.op - *out.expected_operator);
  out.operator_tolerance = tol.eq * nk2 / base.lower;
  return out;
}

TransformedFamily canonical_dual(const FrameFamily& fam, const ControlContext& ctx) {
  TransformedFamily out = canonical_k_construction(fam, ctx.with_target(identity(fam.dim())));
  out.construction = Construction::canonical_dual;
  out.predicted = {1.0 / out.source_bounds.upper, 1.0 / out.source_bounds.lower};
  return out;
}

PairReport pairwise_k_frame_check(const FrameFamily& lambda, const FrameFamily& gamma, const ControlContext& ctx) {
  if (lambda.size() != gamma.size()) {
    throw Error(ErrorCode::MeasureMismatch, "families live on measure spaces with different atom counts");
  }
  if (lambda.dim() != gamma.dim()) throw Error(ErrorCode::DimensionMismatch, "families act on different spaces");
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda.measure().atom(i).mu != gamma.measure().atom(i).mu) {
      throw Error(ErrorCode::MeasureMismatch, "atom " + std::to_string(i) + " has different masses");
    }
  }
  const Tolerances& tol = ctx.tol();
  const AnalysisOperator al = analysis_operator(lambda, ctx);
  const AnalysisOperator ag = analysis_operator(gamma, ctx);

  PairReport r;
  r.composite = Matrix::Zero(lambda.dim(), lambda.dim());
  for (std::size_t i = 0; i < al.size(); ++i) {
    r.composite += (al.mass(i) * ag.weight(i) * al.weight(i)) * (ag.root(i) * al.root(i));
  }
  const Matrix k = r.composite.adjoint();
  const FrameOperatorResult lam_op = frame_operator(lambda, ctx);
  const FrameOperatorResult gam_op = frame_operator(gamma, ctx);
  r.bessel_lambda = std::max(lambda_max(lam_op.hermitian(tol).matrix()), 0.0);
  r.bessel_gamma = std::max(lambda_max(gam_op.hermitian(tol).matrix()), 0.0);
  r.lambda_bounds = optimal_bounds(lam_op, k, tol);
  r.gamma_bounds = optimal_bounds(gam_op, r.composite, tol);
  r.lambda_claim = r.bessel_gamma > 0.0 ? 1.0 / r.bessel_gamma : 0.0;
  r.gamma_claim = r.bessel_lambda > 0.0 ? 1.0 / r.bessel_lambda : 0.0;
  const auto meets = [&](const BoundsCertificate& c, double claim) {
    return c.lower_vacuous || c.lower >= claim - tol.eq * std::max(1.0, claim);
  };
  r.holds = meets(r.lambda_bounds, r.lambda_claim) && meets(r.gamma_bounds, r.gamma_claim);
  return r;
}

ControlEquivalenceReport controlled_uncontrolled_equivalence_check(const FrameFamily& fam, const ControlContext& ctx) {
  const Tolerances& tol = ctx.tol();
  const ControlContext plain = ctx.uncontrolled();
  const FrameOperatorResult sgf = frame_operator(fam, plain);
  ControlEquivalenceReport r;
  r.defect_sgf_t = commutation_defect(sgf.op, ctx.T());
  r.defect_k_t = commutation_defect(ctx.K(), ctx.T());
  r.defect_k_u = commutation_defect(ctx.K(), ctx.U());
  if (r.defect_sgf_t > tol.eq || r.defect_k_t > tol.eq || r.defect_k_u > tol.eq) {
    throw Error(ErrorCode::HypothesisViolated, "commutation hypotheses fail (defects " + std::to_string(r.defect_sgf_t) +
                                                   ", " + std::to_string(r.defect_k_t) + ", " +
                                                   std::to_string(r.defect_k_u) + ")");
  }
  r.controlled = optimal_bounds(frame_operator(fam, ctx), ctx.K(), tol);
  r.uncontrolled = optimal_bounds(sgf, ctx.K(), tol);
  r.agree = r.controlled.is_frame == r.uncontrolled.is_frame;
  if (!r.agree) {
    throw Error(ErrorCode::EquivalenceViolation, "controlled and uncontrolled predicates disagree (A = " +
                                                     std::to_string(r.controlled.lower) + " vs " +
                                                     std::to_string(r.uncontrolled.lower) + ")");
  }
  return r;
}

}  // namespace ckgf
