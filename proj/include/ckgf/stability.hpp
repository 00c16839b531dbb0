#pragma once

#include "ckgf/constructions.hpp"

namespace ckgf {

/// Boundedness of the quotient operator [K* / S^{1/2}].
struct QuotientReport {
  bool bounded = false;
  /// Minimal B with K K* <= B S; +infinity when unbounded.
  double b_min = 0.0;
  bool range_ok = false;
  /// is_frame of the optimal certificate for K.
  bool frame_predicate = false;
  double a_opt = 0.0;
  /// bounded, range_ok and frame_predicate all agree.
  bool consistent = false;
};

QuotientReport quotient_bound(const Matrix& k, const FrameOperatorResult& s, const Tolerances& tol = {});

struct EquivalencesReport {
  /// (i): transformed family against V K.
  BoundsCertificate transformed;
  bool frame_i = false;
  /// (ii) and (iii): minimal B for (VK)(VK)* <= B G, G formed two ways.
  double b_ii = 0.0;
  double b_iii = 0.0;
  bool bounded_ii = false;
  bool bounded_iii = false;
  Index rank_s = 0;
  Index rank_vk = 0;
  /// Smallest factor separating a relative singular value of S or V K from
  /// the rank cutoff tol.rank; 10 means every value is above 10 tol.rank
  /// or below tol.rank / 10.
  double rank_gap = 0.0;
  bool agree = false;
};

/// The three equivalent statements for an invertible V commuting with the
/// controllers. Throws EquivalenceViolation, with ranks, if they disagree.
EquivalencesReport three_equivalences(const FrameFamily& fam, const ControlContext& ctx, const Matrix& v);

/// ||S1 - S2|| through the largest absolute eigenvalue of the Hermitian difference.
double frame_operator_distance(const FrameOperatorResult& s1, const FrameOperatorResult& s2,
                               const Tolerances& tol = {});

struct StabilityReport {
  double d = 0.0;
  double a1 = 0.0;
  double a2 = 0.0;
  /// sup over unit f of the difference of the dual frame functionals.
  double lhs_functional = 0.0;
  /// ||S1^-1 - S2^-1||.
  double lhs_operator = 0.0;
  double rhs = 0.0;
  /// ||S1^-1|| ||S1 - S2|| ||S2^-1||, the middle link of the chain.
  double chain_middle = 0.0;
  bool chain_holds = false;
  bool holds_functional = false;
  bool holds_operator = false;
  bool holds = false;
};

/// Dual stability: ||S1^-1 - S2^-1|| <= D / (A1 A2) with D = ||S1 - S2||.
StabilityReport dual_stability_check(const FrameFamily& fam1, const FrameFamily& fam2, const ControlContext& ctx);

}  // namespace ckgf
