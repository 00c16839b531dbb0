#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "ckgf/frames.hpp"

namespace ckgf {

enum class Construction {
  invertible_transform,  // (V F(x), Lambda_x P_F(x) V*, v(x)) for target V K V*
  inverse_transform,     // base family recovered from its V-image, target V^-1 K V
  k_construction,        // (K S^-1 F(x), Lambda_x P_F(x) S^-1 K*, v(x))
  canonical_dual,        // k_construction with K = I
};

std::string_view to_string(Construction c);

/// Bounds predicted for a constructed family by the transfer inequalities.
struct Envelope {
  double lower = 0.0;
  double upper = 0.0;
};

/// A family built from another one, with the bounds the construction
/// predicts and the optimal bounds recomputed from scratch.
struct TransformedFamily {
  FrameFamily family;
  FrameFamily source;
  Construction construction;
  /// Operator V pushed through the family.
  Matrix transform;
  /// Operator the constructed family is certified against.
  Matrix target;
  BoundsCertificate source_bounds;
  Envelope predicted;
  FrameOperatorResult frame_op;
  BoundsCertificate recomputed;
  /// Closed-form frame operator and the residual against it, when the
  /// construction predicts one.
  std::optional<Matrix> expected_operator;
  double operator_defect = 0.0;
  double operator_tolerance = 0.0;

  bool envelope_holds(double tol) const;
  bool operator_identity_holds() const { return !expected_operator || operator_defect <= operator_tolerance; }
};

/// Subspaces W F(x) and local operators Lambda_x P_F(x) A re-expressed in
/// orthonormal coordinates of the new subspaces. With W invertible and
/// A = W*, the ambient action Lambda_x P_F(x) W* P_WF(x) is preserved.
FrameFamily push_forward(const FrameFamily& fam, const Matrix& w, const Matrix& a, double rel_tol);

/// Invertible-operator transform; envelope (A/||V||^2, B ||V||^2).
TransformedFamily transform_by_invertible(const FrameFamily& fam, const ControlContext& ctx, const Matrix& v);

/// Recovers the base family from its V-image `image` and certifies it for
/// V^-1 K V with envelope (A/||V||^2, B ||V^-1||^2), (A, B) the image's bounds for K.
TransformedFamily inverse_transform_check(const FrameFamily& image, const ControlContext& ctx, const Matrix& v);

struct WeakenedBounds {
  double lower = 0.0;
  double upper = 0.0;
  double residual = 0.0;
  bool verified = false;
};

/// A g-fusion frame (bounds for K = I) is a K-frame with bounds (A/||K||^2, B).
WeakenedBounds weaken_to_k_frame(const FrameOperatorResult& s, const BoundsCertificate& identity_cert,
                                 const Matrix& k, const Tolerances& tol = {});

struct RangeRestriction {
  double lower = 0.0;
  double upper = 0.0;
  Index range_dim = 0;
  std::size_t checked = 0;
  /// min over checked f of functional(f) - lower ||f||^2, normalized to ||f|| = 1.
  double min_margin = 0.0;
  bool verified = false;
  bool vacuous = false;
};

/// On R(K) the family is a frame with bounds (A/||K^+||^2, B); verified on a
/// basis of R(K) plus `samples` seeded random range vectors.
RangeRestriction restrict_to_range(const FrameFamily& fam, const ControlContext& ctx, const BoundsCertificate& cert,
                                   std::uint64_t seed = 0, std::size_t samples = 100);

struct DouglasTransfer {
  /// Minimal lambda with V V* <= lambda K K*.
  double lambda = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool vacuous = false;
  double domination_residual = 0.0;  // lambda_min(lambda K K* - V V*)
  double sandwich_residual = 0.0;    // lambda_min(S - lower V V*)
  bool verified = false;
};

/// With R(V) inside R(K), a K-frame is a V-frame with bounds (A/lambda, B).
DouglasTransfer douglas_transfer(const FrameFamily& fam, const ControlContext& ctx, const Matrix& v);

/// Family with frame operator K S_C^-1 K*, built from a g-fusion frame and
/// an invertible K.
TransformedFamily canonical_k_construction(const FrameFamily& fam, const ControlContext& ctx);

/// Canonical dual with frame operator S_C^-1; bounds within [1/B, 1/A].
TransformedFamily canonical_dual(const FrameFamily& fam, const ControlContext& ctx);

struct PairReport {
  /// T'_C T_C* (Gamma's synthesis after Lambda's analysis); equals K*.
  Matrix composite;
  double bessel_lambda = 0.0;
  double bessel_gamma = 0.0;
  BoundsCertificate lambda_bounds;  // Lambda against K
  BoundsCertificate gamma_bounds;   // Gamma against K*
  double lambda_claim = 0.0;        // 1 / bessel_gamma
  double gamma_claim = 0.0;         // 1 / bessel_lambda
  bool holds = false;
};

/// Two strict-mode families whose synthesis operators compose to K* are a
/// K-frame and a K*-frame with lower bounds 1/D and 1/B respectively.
PairReport pairwise_k_frame_check(const FrameFamily& lambda, const FrameFamily& gamma, const ControlContext& ctx);

struct ControlEquivalenceReport {
  double defect_sgf_t = 0.0;
  double defect_k_t = 0.0;
  double defect_k_u = 0.0;
  BoundsCertificate controlled;
  BoundsCertificate uncontrolled;
  bool agree = false;
};

/// Under [S_gF, T] = 0 and K commuting with T and U, the controlled and
/// uncontrolled K-frame predicates coincide.
ControlEquivalenceReport controlled_uncontrolled_equivalence_check(const FrameFamily& fam, const ControlContext& ctx);

}  // namespace ckgf
