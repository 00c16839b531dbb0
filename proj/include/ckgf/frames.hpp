#pragma once

#include <functional>
#include <vector>

#include "ckgf/linalg.hpp"
#include "ckgf/measure.hpp"

namespace ckgf {

/// One member (F(x), Lambda_x) of a family. `local` is the k x d matrix of
/// Lambda_x in the orthonormal coordinates of F(x), so Lambda_x P_F(x) acts
/// on H as local * basis*.
struct FrameAtom {
  Subspace subspace;
  Matrix local;
};

/// The family {(F(x), Lambda_x, v(x))} over a discretized measure space.
class FrameFamily {
 public:
  FrameFamily(Index dim, MeasureSpace measure, WeightFunction weights, std::vector<FrameAtom> atoms);

  /// Samples F, Lambda and v at every quadrature node of `measure`.
  static FrameFamily sample(Index dim, const MeasureSpace& measure, const std::function<double(double)>& weight,
                            const std::function<FrameAtom(double)>& atom_at);

  Index dim() const { return dim_; }
  std::size_t size() const { return atoms_.size(); }
  const MeasureSpace& measure() const { return measure_; }
  const WeightFunction& weights() const { return weights_; }
  const std::vector<FrameAtom>& atoms() const { return atoms_; }
  const FrameAtom& atom(std::size_t i) const { return atoms_.at(i); }

  /// The same subspaces and local operators with new weights.
  FrameFamily with_weights(WeightFunction weights) const;

 private:
  Index dim_;
  MeasureSpace measure_;
  WeightFunction weights_;
  std::vector<FrameAtom> atoms_;
};

/// Controllers T, U in GB+(H), the target operator K and the tolerance policy.
class ControlContext {
 public:
  static ControlContext make(const Matrix& t, const Matrix& u, const Matrix& k, const Tolerances& tol = {});
  static ControlContext identity(Index n, const Tolerances& tol = {});

  const Matrix& T() const { return t_.matrix(); }
  const Matrix& U() const { return u_.matrix(); }
  const Matrix& K() const { return k_; }
  const Tolerances& tol() const { return tol_; }
  Index dim() const { return k_.rows(); }

  ControlContext with_target(const Matrix& k) const;
  ControlContext with_tolerances(const Tolerances& tol) const;
  /// Same K, identity controllers.
  ControlContext uncontrolled() const;

 private:
  ControlContext(PositiveOperator t, PositiveOperator u, Matrix k, Tolerances tol)
      : t_(std::move(t)), u_(std::move(u)), k_(std::move(k)), tol_(tol) {}
  PositiveOperator t_;
  PositiveOperator u_;
  Matrix k_;
  Tolerances tol_;
};

/// S_C as computed, with its Hermitian deviation. Bound computations use the
/// Hermitian part and refuse when the deviation exceeds tol_herm.
struct FrameOperatorResult {
  Matrix op;
  double herm_deviation = 0.0;
  Matrix hermitian_part;

  /// Throws NonHermitianFrameOperator above tol_herm.
  HermitianOperator hermitian(const Tolerances& tol) const;
};

/// Optimal constants in A ||K* f||^2 <= <S_C f, f> <= B ||f||^2.
///
/// `lower` is the optimal constant of the lower inequality on its own; it
/// can exceed `upper` when ||K|| < 1, in which case (upper, upper) is the
/// admissible pair with A <= B. `lower_vacuous` marks K = 0.
struct BoundsCertificate {
  double lower = 0.0;
  double upper = 0.0;
  Vector lower_witness;
  Vector upper_witness;
  bool is_frame = false;
  bool lower_vacuous = false;
  /// lambda_min(S - lower K K*), certified >= -10 tol_psd.
  double lower_residual = 0.0;
  /// upper - lambda_max(S), certified >= -10 tol_psd.
  double upper_residual = 0.0;

  double admissible_lower() const { return lower < upper ? lower : upper; }
};

/// Element of the discretized L^2(X, K): one length-n block per atom.
struct CoefficientVector {
  std::vector<Vector> blocks;
};

FrameOperatorResult frame_operator(const FrameFamily& fam, const ControlContext& ctx);

/// sum_x mu_x v(x)^2 <L_x Q_x* U f, L_x Q_x* T f>. Throws NonRealFunctional
/// when the imaginary part exceeds tol_herm ||f||^2.
double frame_functional(const FrameFamily& fam, const ControlContext& ctx, const Vector& f);

BoundsCertificate optimal_bounds(const FrameOperatorResult& s, const Matrix& k, const Tolerances& tol = {});

struct FrameCheck {
  bool is_frame = false;
  BoundsCertificate certificate;
  FrameOperatorResult frame_op;
};

FrameCheck is_controlled_k_g_fusion_frame(const FrameFamily& fam, const ControlContext& ctx);

/// Analysis operator with blocks v(x) (T* P Lambda* Lambda P U)^{1/2} and its
/// adjoint (synthesis) with respect to the mu-weighted inner product.
class AnalysisOperator {
 public:
  CoefficientVector analyze(const Vector& g) const;
  Vector synthesize(const CoefficientVector& phi) const;
  /// sum_x mu_x <phi_x, psi_x>
  Scalar inner(const CoefficientVector& phi, const CoefficientVector& psi) const;
  /// Matrix of T_C T_C*.
  Matrix composed() const;

  std::size_t size() const { return roots_.size(); }
  const Matrix& root(std::size_t i) const { return roots_.at(i); }
  double weight(std::size_t i) const { return weights_.at(i); }
  double mass(std::size_t i) const { return masses_.at(i); }

  friend AnalysisOperator analysis_operator(const FrameFamily& fam, const ControlContext& ctx);

 private:
  Index dim_ = 0;
  std::vector<Matrix> roots_;
  std::vector<double> weights_;
  std::vector<double> masses_;
};

/// Strict mode: every block T* Q L* L Q* U must be Hermitian PSD, otherwise
/// NonPositiveBlock.
AnalysisOperator analysis_operator(const FrameFamily& fam, const ControlContext& ctx);

}  // namespace ckgf
