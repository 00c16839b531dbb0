#include "ckgf/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ckgf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidInterval: return "InvalidInterval";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::NonRealFunctional: return "NonRealFunctional";
    case ErrorCode::NonHermitianFrameOperator: return "NonHermitianFrameOperator";
    case ErrorCode::NotPositiveSemidefinite: return "NotPositiveSemidefinite";
    case ErrorCode::NonPositiveBlock: return "NonPositiveBlock";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::CommutationViolated: return "CommutationViolated";
    case ErrorCode::ZeroOperator: return "ZeroOperator";
    case ErrorCode::RangeNotContained: return "RangeNotContained";
    case ErrorCode::MeasureMismatch: return "MeasureMismatch";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::EquivalenceViolation: return "EquivalenceViolation";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::CertificateFailure: return "CertificateFailure";
    case ErrorCode::InputError: return "InputError";
  }
  return "Unknown";
}

bool is_input_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch:
    case ErrorCode::InvalidInterval:
    case ErrorCode::InvalidWeight:
    case ErrorCode::MeasureMismatch:
    case ErrorCode::InvalidSpec:
    case ErrorCode::InputError:
      return true;
    default:
      return false;
  }
}

Matrix identity(Index n) { return Matrix::Identity(n, n); }

Matrix adjoint(const Matrix& m) { return m.adjoint(); }

bool all_finite(const Matrix& m) { return m.allFinite(); }

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(ErrorCode::InputError, std::string(what) + " has non-finite entries");
}

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " must be a non-empty square operator, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

RealVector singular_values(const Matrix& m) {
  if (m.size() == 0) return RealVector();
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

Index numerical_rank(const Matrix& m, double rel_tol) {
  const RealVector s = singular_values(m);
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cut = rel_tol * s(0);
  return static_cast<Index>((s.array() > cut).count());
}

Matrix orthonormal_range(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  if (s(0) == 0.0) return Matrix(m.rows(), 0);
  const Index r = static_cast<Index>((s.array() > rel_tol * s(0)).count());
  return svd.matrixU().leftCols(r);
}

HermitianEigen hermitian_eigen(const Matrix& m) {
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

double lambda_min(const Matrix& m) {
  const Matrix h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

double lambda_max(const Matrix& m) {
  const Matrix h = 0.5 * (m + m.adjoint());
  const RealVector ev = Eigen::SelfAdjointEigenSolver<Matrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
  return ev(ev.size() - 1);
}

// ---------------------------------------------------------------------------

HermitianOperator HermitianOperator::from(const Matrix& m, double tol_herm) {
  require_square(m, "Hermitian operator");
  require_finite(m, "Hermitian operator");
  const double dev = spectral_norm(m - m.adjoint());
  if (dev > tol_herm) {
    throw Error(ErrorCode::NotHermitian, "||M - M*|| = " + std::to_string(dev) + " exceeds tolerance");
  }
  return HermitianOperator(0.5 * (m + m.adjoint()), dev);
}

PositiveOperator PositiveOperator::from(const HermitianOperator& h, double tol_psd) {
  const double mn = lambda_min(h.matrix());
  if (mn < -tol_psd) {
    throw Error(ErrorCode::NotPositive, "smallest eigenvalue " + std::to_string(mn) + " is below -tol_psd");
  }
  return PositiveOperator(h, mn);
}

PositiveOperator PositiveOperator::from(const Matrix& m, const Tolerances& tol) {
  return from(HermitianOperator::from(m, tol.herm), tol.psd);
}

PositiveOperator PositiveOperator::strictly(const Matrix& m, const Tolerances& tol) {
  HermitianOperator h = HermitianOperator::from(m, tol.herm);
  const double mn = lambda_min(h.matrix());
  if (mn < tol.pd) {
    throw Error(ErrorCode::NotPositive,
                "operator is not positive definite (smallest eigenvalue " + std::to_string(mn) + ")");
  }
  return PositiveOperator(std::move(h), mn);
}

Subspace Subspace::from_basis(Matrix basis, double tol_eq) {
  if (basis.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "subspace basis has no rows");
  require_finite(basis, "subspace basis");
  if (basis.cols() > 0) {
    const double dev = spectral_norm(basis.adjoint() * basis - identity(basis.cols()));
    if (dev > tol_eq) {
      throw Error(ErrorCode::InputError,
                  "subspace basis is not orthonormal (||Q*Q - I|| = " + std::to_string(dev) + ")");
    }
  }
  return Subspace(std::move(basis));
}

Subspace Subspace::span_of(const Matrix& columns, double rel_tol) {
  if (columns.rows() == 0) throw Error(ErrorCode::DimensionMismatch, "spanning set has no rows");
  return Subspace(orthonormal_range(columns, rel_tol));
}

Subspace Subspace::whole(Index n) { return Subspace(identity(n)); }

HermitianOperator projection(const Subspace& w) {
  const Matrix& q = w.basis();
  return HermitianOperator::from(q * q.adjoint(), std::numeric_limits<double>::infinity());
}

PositiveOperator psd_sqrt(const PositiveOperator& p) {
  const HermitianEigen eig = hermitian_eigen(p.matrix());
  const RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  const Matrix root = eig.vectors * roots.cast<Scalar>().asDiagonal() * eig.vectors.adjoint();
  const double inf = std::numeric_limits<double>::infinity();
  return PositiveOperator::from(HermitianOperator::from(root, inf), inf);
}

PositiveOperator psd_sqrt(const Matrix& m, const Tolerances& tol) {
  return psd_sqrt(PositiveOperator::from(m, tol));
}

Matrix pseudo_inverse(const Matrix& m, double rel_tol) {
  Matrix out = Matrix::Zero(m.cols(), m.rows());
  if (m.size() == 0) return out;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  if (s(0) == 0.0) return out;
  const double cut = rel_tol * s(0);
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) <= cut) break;
    out += svd.matrixV().col(i) * (1.0 / s(i)) * svd.matrixU().col(i).adjoint();
  }
  return out;
}

namespace {

// Pseudo-inverse of a Hermitian PSD block with an absolute eigenvalue cutoff.
Matrix hermitian_pinv(const Matrix& m, double cutoff) {
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  if (m.size() == 0) return out;
  const HermitianEigen eig = hermitian_eigen(m);
  for (Index i = 0; i < eig.values.size(); ++i) {
    if (eig.values(i) > cutoff) {
      out += eig.vectors.col(i) * (1.0 / eig.values(i)) * eig.vectors.col(i).adjoint();
    }
  }
  return out;
}

struct RangeSplit {
  Matrix range;       // orthonormal eigenvectors of G with significant eigenvalue
  Matrix null;        // complement
  RealVector values;  // eigenvalues of G on `range`
};

RangeSplit split_range(const Matrix& g, double rel_tol) {
  const HermitianEigen eig = hermitian_eigen(g);
  const Index n = g.rows();
  const double gmax = eig.values(n - 1);
  Index r = 0;
  for (Index i = 0; i < n; ++i) {
    if (eig.values(i) > rel_tol * gmax) ++r;
  }
  // Eigenvalues are ascending: the range occupies the trailing columns.
  return {eig.vectors.rightCols(r), eig.vectors.leftCols(n - r), eig.values.tail(r)};
}

void require_same_dims(const HermitianOperator& s, const HermitianOperator& g) {
  if (s.dim() != g.dim()) throw Error(ErrorCode::DimensionMismatch, "pencil operators differ in size");
}

}  // namespace

PencilExtreme pencil_min(const HermitianOperator& s, const HermitianOperator& g, const Tolerances& tol) {
  require_same_dims(s, g);
  if (g.matrix().cwiseAbs().maxCoeff() == 0.0 || lambda_max(g.matrix()) <= 0.0) {
    throw Error(ErrorCode::ZeroDenominator, "pencil denominator is the zero operator");
  }
  const RangeSplit split = split_range(g.matrix(), tol.rank);
  const Matrix& w = split.range;
  const Matrix& nb = split.null;
  const Matrix& sm = s.matrix();

  // Minimizing <Sf,f> over the null(G) component leaves the Schur complement
  // of S onto range(G).
  Matrix schur = w.adjoint() * sm * w;
  Matrix lift = Matrix::Zero(nb.cols(), w.cols());
  if (nb.cols() > 0) {
    const Matrix s_nn = nb.adjoint() * sm * nb;
    const Matrix s_nw = nb.adjoint() * sm * w;
    const double cutoff = tol.rank * std::max(spectral_norm(sm), std::numeric_limits<double>::min());
    lift = -hermitian_pinv(s_nn, cutoff) * s_nw;
    schur += s_nw.adjoint() * lift;
  }
  const RealVector inv_sqrt = split.values.cwiseSqrt().cwiseInverse();
  const Matrix reduced = inv_sqrt.cast<Scalar>().asDiagonal() * schur * inv_sqrt.cast<Scalar>().asDiagonal();
  const HermitianEigen eig = hermitian_eigen(reduced);

  const Vector a = inv_sqrt.cast<Scalar>().asDiagonal() * eig.vectors.col(0);
  Vector witness = w * a;
  if (nb.cols() > 0) witness += nb * (lift * a);
  witness.normalize();
  return {std::max(eig.values(0), 0.0), true, witness};
}

PencilExtreme pencil_max(const HermitianOperator& s, const HermitianOperator& g, const Tolerances& tol) {
  require_same_dims(s, g);
  const Index n = s.dim();
  if (s.matrix().cwiseAbs().maxCoeff() == 0.0) {
    return {0.0, true, Vector::Zero(n)};
  }
  if (!range_contained(s.matrix(), g.matrix(), tol.rank)) {
    const RangeSplit split = split_range(g.matrix(), tol.rank);
    const Matrix outside = s.matrix() - split.range * (split.range.adjoint() * s.matrix());
    const Matrix dir = orthonormal_range(outside, tol.rank);
    Vector witness = dir.cols() > 0 ? Vector(dir.col(0)) : Vector(Vector::Zero(n));
    return {std::numeric_limits<double>::infinity(), false, witness};
  }
  const RangeSplit split = split_range(g.matrix(), tol.rank);
  const RealVector inv_sqrt = split.values.cwiseSqrt().cwiseInverse();
  const Matrix reduced = inv_sqrt.cast<Scalar>().asDiagonal() * (split.range.adjoint() * s.matrix() * split.range) *
                         inv_sqrt.cast<Scalar>().asDiagonal();
  const HermitianEigen eig = hermitian_eigen(reduced);
  const Index top = eig.values.size() - 1;
  Vector witness = split.range * (inv_sqrt.cast<Scalar>().asDiagonal() * eig.vectors.col(top));
  witness.normalize();
  return {std::max(eig.values(top), 0.0), true, witness};
}

bool range_contained(const Matrix& v, const Matrix& k, double rel_tol) {
  if (v.rows() != k.rows()) throw Error(ErrorCode::DimensionMismatch, "range test needs equal row counts");
  const double nv = spectral_norm(v);
  if (nv == 0.0) return true;
  const double nk = spectral_norm(k);
  if (nk == 0.0) return false;
  // Column scaling leaves the range unchanged; matching scales keeps the
  // relative rank cutoff meaningful for both blocks.
  Matrix joined(k.rows(), k.cols() + v.cols());
  joined << k, v * (nk / nv);
  return numerical_rank(joined, rel_tol) == numerical_rank(k, rel_tol);
}

double commutation_defect(const Matrix& a, const Matrix& b) {
  require_square(a, "commutator operand");
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "commutator operands differ in size");
  }
  return spectral_norm(a * b - b * a);
}

ProjectionCommutationReport projection_commutation_check(const Subspace& m, const Matrix& t,
                                                         const Tolerances& tol) {
  require_square(t, "T");
  if (t.rows() != m.ambient_dim()) throw Error(ErrorCode::DimensionMismatch, "T and M live in different spaces");
  const Subspace tm = Subspace::span_of(t * m.basis(), tol.rank);
  const Matrix pm = projection(m).matrix();
  const Matrix ptm = projection(tm).matrix();
  const Matrix t_adj = t.adjoint();

  ProjectionCommutationReport report;
  report.general_defect = spectral_norm(pm * t_adj - pm * t_adj * ptm);
  if (spectral_norm(t_adj * t - identity(t.rows())) <= tol.eq) {
    report.unitary_defect = spectral_norm(ptm * t - t * pm);
  }
  report.holds = report.general_defect <= tol.eq && (!report.unitary_defect || *report.unitary_defect <= tol.eq);
  return report;
}

}  // namespace ckgf
