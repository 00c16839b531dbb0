#pragma once

#include <complex>
#include <optional>

#include <Eigen/Dense>

#include "ckgf/errors.hpp"

namespace ckgf {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Scalar field of a Hilbert space. Storage is always complex; a real space
/// only ever carries entries with zero imaginary part.
enum class ScalarField { real, complex };

/// Numerical tolerance policy shared by every operation.
///
/// `herm` bounds the Hermitian deviation accepted before symmetrizing,
/// `psd` the negative eigenvalue slack treated as round-off, `eq` the
/// operator-identity residual, `rank` the relative singular value cutoff
/// and `pd` the smallest eigenvalue counted as strictly positive.
struct Tolerances {
  double herm = 1e-8;
  double psd = 1e-10;
  double eq = 1e-8;
  double rank = 1e-10;
  double pd = 1e-10;

  bool operator==(const Tolerances&) const = default;
};

Matrix identity(Index n);
Matrix adjoint(const Matrix& m);
bool all_finite(const Matrix& m);
void require_finite(const Matrix& m, const char* what);
void require_square(const Matrix& m, const char* what);

/// Largest singular value.
double spectral_norm(const Matrix& m);

/// Singular values in descending order.
RealVector singular_values(const Matrix& m);

/// Count of singular values above `rel_tol` times the largest one.
Index numerical_rank(const Matrix& m, double rel_tol);

/// Orthonormal basis (as columns) of the numerical range of `m`.
Matrix orthonormal_range(const Matrix& m, double rel_tol);

/// Eigen-decomposition of the Hermitian part, eigenvalues ascending.
struct HermitianEigen {
  RealVector values;
  Matrix vectors;
};
HermitianEigen hermitian_eigen(const Matrix& m);

double lambda_min(const Matrix& m);
double lambda_max(const Matrix& m);

/// Square operator whose Hermitian deviation was checked at construction.
/// The stored matrix is the exact Hermitian part (M + M*)/2.
class HermitianOperator {
 public:
  static HermitianOperator from(const Matrix& m, double tol_herm);

  const Matrix& matrix() const { return m_; }
  double deviation() const { return deviation_; }
  Index dim() const { return m_.rows(); }

 private:
  HermitianOperator(Matrix m, double deviation) : m_(std::move(m)), deviation_(deviation) {}
  Matrix m_;
  double deviation_ = 0.0;
};

/// Positive semidefinite operator (within tolerance). `min_eig` may be
/// slightly negative, never below -tol_psd.
class PositiveOperator {
 public:
  static PositiveOperator from(const HermitianOperator& h, double tol_psd);
  static PositiveOperator from(const Matrix& m, const Tolerances& tol);
  /// Members of GB+(H): min_eig >= tol_pd, hence invertible.
  static PositiveOperator strictly(const Matrix& m, const Tolerances& tol);

  const HermitianOperator& hermitian() const { return h_; }
  const Matrix& matrix() const { return h_.matrix(); }
  double min_eig() const { return min_eig_; }
  Index dim() const { return h_.dim(); }

 private:
  PositiveOperator(HermitianOperator h, double min_eig) : h_(std::move(h)), min_eig_(min_eig) {}
  HermitianOperator h_;
  double min_eig_ = 0.0;
};

/// Subspace of C^n held through an orthonormal basis. A zero-dimensional
/// subspace is allowed (basis with no columns).
class Subspace {
 public:
  /// Validates that `basis` has orthonormal columns within `tol_eq`.
  static Subspace from_basis(Matrix basis, double tol_eq);
  /// Orthonormalized numerical span of the columns of `columns`.
  static Subspace span_of(const Matrix& columns, double rel_tol);
  static Subspace whole(Index n);

  Index ambient_dim() const { return basis_.rows(); }
  Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

HermitianOperator projection(const Subspace& w);

/// Positive square root. Eigenvalues in (-tol_psd, 0) are clamped to zero.
PositiveOperator psd_sqrt(const PositiveOperator& p);
PositiveOperator psd_sqrt(const Matrix& m, const Tolerances& tol = {});

/// Moore-Penrose pseudo-inverse; singular values at or below
/// `rel_tol * sigma_max` are treated as zero.
Matrix pseudo_inverse(const Matrix& m, double rel_tol = 1e-10);

/// Extreme value of a Hermitian pencil with an attaining vector.
/// `bounded == false` encodes +infinity (pencil_max range violation).
struct PencilExtreme {
  double value = 0.0;
  bool bounded = true;
  Vector witness;
};

/// inf over <Gf,f> > 0 of <Sf,f>/<Gf,f>: the largest A with S - A G >= 0.
/// Throws ZeroDenominator when G is the zero operator.
PencilExtreme pencil_min(const HermitianOperator& s, const HermitianOperator& g,
                         const Tolerances& tol = {});

/// Smallest B with S <= B G, or unbounded when range(S) is not inside range(G).
PencilExtreme pencil_max(const HermitianOperator& s, const HermitianOperator& g,
                         const Tolerances& tol = {});

/// R(V) contained in R(K), decided by comparing numerical ranks of K and [K | V].
bool range_contained(const Matrix& v, const Matrix& k, double rel_tol = 1e-10);

/// Spectral norm of the commutator AB - BA.
double commutation_defect(const Matrix& a, const Matrix& b);

struct ProjectionCommutationReport {
  /// || P_M T* - P_M T* P_TM ||
  double general_defect = 0.0;
  /// || P_TM T - T P_M ||, only evaluated when T is unitary.
  std::optional<double> unitary_defect;
  bool holds = false;
};

ProjectionCommutationReport projection_commutation_check(const Subspace& m, const Matrix& t,
                                                         const Tolerances& tol = {});

}  // namespace ckgf
