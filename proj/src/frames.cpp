#include "ckgf/frames.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ckgf {

namespace {

constexpr double kUnchecked = std::numeric_limits<double>::infinity();

// Certificate checks allow ten times the PSD slack.
constexpr double kCertificateSlack = 10.0;

HermitianOperator outer_gram(const Matrix& k) { return HermitianOperator::from(k * k.adjoint(), kUnchecked); }

}  // namespace

FrameFamily::FrameFamily(Index dim, MeasureSpace measure, WeightFunction weights, std::vector<FrameAtom> atoms)
    : dim_(dim), measure_(std::move(measure)), weights_(std::move(weights)), atoms_(std::move(atoms)) {
  if (dim_ < 1) throw Error(ErrorCode::DimensionMismatch, "space dimension must be positive");
  if (atoms_.size() != measure_.size()) {
    throw Error(ErrorCode::MeasureMismatch, "family has " + std::to_string(atoms_.size()) + " atoms but measure has " +
                                                std::to_string(measure_.size()));
  }
  if (weights_.size() != measure_.size()) {
    throw Error(ErrorCode::MeasureMismatch, "weight count does not match the measure");
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const FrameAtom& a = atoms_[i];
    const std::string where = "atom " + std::to_string(i);
    if (a.subspace.ambient_dim() != dim_) throw Error(ErrorCode::DimensionMismatch, where + ": subspace not in H");
    if (a.subspace.dim() < 1) throw Error(ErrorCode::DimensionMismatch, where + ": subspace is trivial");
    if (a.local.cols() != a.subspace.dim() || a.local.rows() < 1) {
      throw Error(ErrorCode::DimensionMismatch, where + ": local operator must be k x dim(F(x))");
    }
    require_finite(a.local, "local operator");
  }
}

FrameFamily FrameFamily::sample(Index dim, const MeasureSpace& measure, const std::function<double(double)>& weight,
                                const std::function<FrameAtom(double)>& atom_at) {
  std::vector<FrameAtom> atoms;
  atoms.reserve(measure.size());
  for (std::size_t i = 0; i < measure.size(); ++i) atoms.push_back(atom_at(measure.node(i)));
  return FrameFamily(dim, measure, WeightFunction::sample(measure, weight), std::move(atoms));
}

FrameFamily FrameFamily::with_weights(WeightFunction weights) const {
  return FrameFamily(dim_, measure_, std::move(weights), atoms_);
}

// ---------------------------------------------------------------------------

ControlContext ControlContext::make(const Matrix& t, const Matrix& u, const Matrix& k, const Tolerances& tol) {
  require_square(k, "K");
  require_finite(k, "K");
  if (t.rows() != k.rows() || u.rows() != k.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "controllers and K must act on the same space");
  }
  return ControlContext(PositiveOperator::strictly(t, tol), PositiveOperator::strictly(u, tol), k, tol);
}

ControlContext ControlContext::identity(Index n, const Tolerances& tol) {
  const Matrix id = ckgf::identity(n);
  return make(id, id, id, tol);
}

ControlContext ControlContext::with_target(const Matrix& k) const { return make(T(), U(), k, tol_); }

ControlContext ControlContext::with_tolerances(const Tolerances& tol) const { return make(T(), U(), k_, tol); }

ControlContext ControlContext::uncontrolled() const {
  const Matrix id = ckgf::identity(dim());
  return make(id, id, k_, tol_);
}

HermitianOperator FrameOperatorResult::hermitian(const Tolerances& tol) const {
  if (herm_deviation > tol.herm) {
    throw Error(ErrorCode::NonHermitianFrameOperator,
                "||S_C - S_C*|| = " + std::to_string(herm_deviation) + " (controllers violate commutation)");
  }
  return HermitianOperator::from(hermitian_part, kUnchecked);
}

// ---------------------------------------------------------------------------

FrameOperatorResult frame_operator(const FrameFamily& fam, const ControlContext& ctx) {
  if (ctx.dim() != fam.dim()) throw Error(ErrorCode::DimensionMismatch, "context and family dimensions differ");
  const Matrix t_adj = ctx.T().adjoint();
  const Matrix& u = ctx.U();
  Matrix s = Matrix::Zero(fam.dim(), fam.dim());
  // Fixed atom order keeps the accumulation bit-stable.
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const FrameAtom& a = fam.atom(i);
    const Matrix& q = a.subspace.basis();
    const Matrix gram = a.local.adjoint() * a.local;
    const Matrix block = q * gram * q.adjoint();
    const Matrix term = t_adj * block * u;
    const double v = fam.weights()[i];
    const double c = fam.measure().atom(i).mu * v * v;
    s += c * term;
  }
  FrameOperatorResult r;
  r.herm_deviation = spectral_norm(s - s.adjoint());
  r.hermitian_part = 0.5 * (s + s.adjoint());
  r.op = std::move(s);
  return r;
}

double frame_functional(const FrameFamily& fam, const ControlContext& ctx, const Vector& f) {
  if (f.size() != fam.dim() || ctx.dim() != fam.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "vector and family dimensions differ");
  }
  const Vector uf = ctx.U() * f;
  const Vector tf = ctx.T() * f;
  Scalar acc(0.0, 0.0);
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const FrameAtom& a = fam.atom(i);
    const Matrix& q = a.subspace.basis();
    const Vector left = a.local * (q.adjoint() * uf);
    const Vector right = a.local * (q.adjoint() * tf);
    const double v = fam.weights()[i];
    // <left, right> is linear in the first slot.
    acc += (fam.measure().atom(i).mu * v * v) * right.dot(left);
  }
  const double scale = f.squaredNorm();
  if (std::abs(acc.imag()) > ctx.tol().herm * scale) {
    throw Error(ErrorCode::NonRealFunctional,
                "imaginary part " + std::to_string(acc.imag()) + " (controllers violate commutation)");
  }
  return acc.real();
}

BoundsCertificate optimal_bounds(const FrameOperatorResult& s, const Matrix& k, const Tolerances& tol) {
  require_square(k, "K");
  if (k.rows() != s.op.rows()) throw Error(ErrorCode::DimensionMismatch, "K and S_C differ in size");
  const HermitianOperator h = s.hermitian(tol);
  const HermitianEigen eig = hermitian_eigen(h.matrix());
  const Index n = h.dim();
  if (eig.values(0) < -tol.psd) {
    throw Error(ErrorCode::NotPositiveSemidefinite,
                "frame operator has eigenvalue " + std::to_string(eig.values(0)));
  }

  BoundsCertificate cert;
  cert.upper = std::max(eig.values(n - 1), 0.0);
  cert.upper_witness = eig.vectors.col(n - 1);

  const HermitianOperator g = outer_gram(k);
  if (k.cwiseAbs().maxCoeff() == 0.0) {
    cert.lower_vacuous = true;
    cert.lower = cert.upper;
    cert.lower_witness = cert.upper_witness;
  } else {
    const PencilExtreme p = pencil_min(h, g, tol);
    cert.lower = p.value;
    cert.lower_witness = p.witness;
  }
  cert.is_frame = cert.lower > tol.pd;

  cert.lower_residual = cert.lower_vacuous ? eig.values(0) : lambda_min(h.matrix() - cert.lower * g.matrix());
  cert.upper_residual = cert.upper - eig.values(n - 1);
  if (cert.lower_residual < -kCertificateSlack * tol.psd || cert.upper_residual < -kCertificateSlack * tol.psd) {
    throw Error(ErrorCode::CertificateFailure, "bound sandwich could not be certified (residual " +
                                                   std::to_string(cert.lower_residual) + ")");
  }
  return cert;
}

FrameCheck is_controlled_k_g_fusion_frame(const FrameFamily& fam, const ControlContext& ctx) {
  FrameCheck check;
  check.frame_op = frame_operator(fam, ctx);
  check.certificate = optimal_bounds(check.frame_op, ctx.K(), ctx.tol());
  check.is_frame = check.certificate.is_frame;
  return check;
}

// ---------------------------------------------------------------------------

AnalysisOperator analysis_operator(const FrameFamily& fam, const ControlContext& ctx) {
  if (ctx.dim() != fam.dim()) throw Error(ErrorCode::DimensionMismatch, "context and family dimensions differ");
  const Tolerances& tol = ctx.tol();
  const Matrix t_adj = ctx.T().adjoint();
  AnalysisOperator op;
  op.dim_ = fam.dim();
  for (std::size_t i = 0; i < fam.size(); ++i) {
    const FrameAtom& a = fam.atom(i);
    const Matrix& q = a.subspace.basis();
    const Matrix gram = a.local.adjoint() * a.local;
    const Matrix block = t_adj * (q * gram * q.adjoint()) * ctx.U();
    const double dev = spectral_norm(block - block.adjoint());
    if (dev > tol.herm) {
      throw Error(ErrorCode::NonPositiveBlock,
                  "block " + std::to_string(i) + " is not Hermitian (deviation " + std::to_string(dev) + ")");
    }
    const double mn = lambda_min(block);
    if (mn < -tol.psd) {
      throw Error(ErrorCode::NonPositiveBlock,
                  "block " + std::to_string(i) + " has negative eigenvalue " + std::to_string(mn));
    }
    op.roots_.push_back(psd_sqrt(block, tol).matrix());
    op.weights_.push_back(fam.weights()[i]);
    op.masses_.push_back(fam.measure().atom(i).mu);
  }
  return op;
}

CoefficientVector AnalysisOperator::analyze(const Vector& g) const {
  if (g.size() != dim_) throw Error(ErrorCode::DimensionMismatch, "vector size differs from H");
  CoefficientVector phi;
  phi.blocks.reserve(roots_.size());
  for (std::size_t i = 0; i < roots_.size(); ++i) phi.blocks.push_back(weights_[i] * (roots_[i] * g));
  return phi;
}

Vector AnalysisOperator::synthesize(const CoefficientVector& phi) const {
  if (phi.blocks.size() != roots_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vector has the wrong number of blocks");
  }
  Vector out = Vector::Zero(dim_);
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    if (phi.blocks[i].size() != dim_) throw Error(ErrorCode::DimensionMismatch, "coefficient block size differs from H");
    out += (masses_[i] * weights_[i]) * (roots_[i] * phi.blocks[i]);
  }
  return out;
}

Scalar AnalysisOperator::inner(const CoefficientVector& phi, const CoefficientVector& psi) const {
  if (phi.blocks.size() != roots_.size() || psi.blocks.size() != roots_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient vectors have the wrong number of blocks");
  }
  Scalar acc(0.0, 0.0);
  for (std::size_t i = 0; i < roots_.size(); ++i) acc += masses_[i] * psi.blocks[i].dot(phi.blocks[i]);
  return acc;
}

Matrix AnalysisOperator::composed() const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    out += (masses_[i] * weights_[i] * weights_[i]) * (roots_[i] * roots_[i]);
  }
  return out;
}

}  // namespace ckgf
