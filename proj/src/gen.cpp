#include "ckgf/gen.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ckgf {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); }

template <class E>
E parse_enum(std::string_view s, std::initializer_list<E> all, const char* what) {
  for (E e : all) {
    if (to_string(e) == s) return e;
  }
  bad(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

Index span_of(const GenSpec& s) { return s.span_rank == 0 ? s.dim : s.span_rank; }

bool aligned(const GenSpec& s) {
  if (s.subspaces == SubspaceMode::automatic) return s.controller != ControllerMode::identity;
  return s.subspaces == SubspaceMode::aligned;
}

Matrix diagonal_in(const Matrix& e, const RealVector& d) { return e * d.cast<Scalar>().asDiagonal() * e.adjoint(); }

// Distinct indices drawn from [0, pool), always containing `first`.
std::vector<Index> pick_columns(Rng& rng, Index pool, Index count, Index first) {
  std::vector<Index> rest;
  for (Index j = 0; j < pool; ++j) {
    if (j != first) rest.push_back(j);
  }
  std::vector<Index> out{first};
  while (static_cast<Index>(out.size()) < count) {
    const std::size_t at = rng.index(rest.size());
    out.push_back(rest[at]);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(at));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string_view to_string(ControllerMode m) {
  switch (m) {
    case ControllerMode::identity: return "identity";
    case ControllerMode::commuting_diagonal: return "commuting_diagonal";
    case ControllerMode::polynomial_of_common_hermitian: return "polynomial_of_common_hermitian";
  }
  return "identity";
}

std::string_view to_string(KMode m) {
  switch (m) {
    case KMode::identity: return "identity";
    case KMode::invertible: return "invertible";
    case KMode::rank_deficient: return "rank_deficient";
  }
  return "identity";
}

std::string_view to_string(SubspaceMode m) {
  switch (m) {
    case SubspaceMode::automatic: return "automatic";
    case SubspaceMode::generic: return "generic";
    case SubspaceMode::aligned: return "aligned";
  }
  return "automatic";
}

std::string_view to_string(MeasureKind m) { return m == MeasureKind::counting ? "counting" : "weighted"; }

ControllerMode parse_controller_mode(std::string_view s) {
  return parse_enum(s,
                    {ControllerMode::identity, ControllerMode::commuting_diagonal,
                     ControllerMode::polynomial_of_common_hermitian},
                    "controller mode");
}
KMode parse_k_mode(std::string_view s) {
  return parse_enum(s, {KMode::identity, KMode::invertible, KMode::rank_deficient}, "K mode");
}
SubspaceMode parse_subspace_mode(std::string_view s) {
  return parse_enum(s, {SubspaceMode::automatic, SubspaceMode::generic, SubspaceMode::aligned}, "subspace mode");
}
MeasureKind parse_measure_kind(std::string_view s) {
  return parse_enum(s, {MeasureKind::counting, MeasureKind::weighted}, "measure kind");
}

void validate(const GenSpec& s) {
  if (s.dim < 1) bad("dim must be positive");
  if (s.atom_count < 1) bad("atom_count must be positive");
  if (s.span_rank < 0 || s.span_rank > s.dim) bad("span_rank must lie in [0, dim]");
  const Index span = span_of(s);
  if (s.subspace_dim_min < 1 || s.subspace_dim_min > s.subspace_dim_max) bad("subspace_dims range is empty");
  if (s.subspace_dim_min > span) bad("subspace_dims exceed the available span");
  if (s.local_dim_min < 1 || s.local_dim_min > s.local_dim_max) bad("local_dims range is empty");
  if (s.k_mode == KMode::rank_deficient) {
    if (s.k_rank < 0 || s.k_rank >= s.dim) bad("rank_deficient K needs 0 <= rank < dim");
    if (s.k_in_span && s.k_rank > span) bad("rank of K exceeds the span");
  }
}

Matrix random_unitary(Rng& rng, Index n, ScalarField field) {
  const Matrix g = gaussian_matrix(rng, n, n, field);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Matrix random_invertible(Rng& rng, Index n, ScalarField field, double lo, double hi) {
  const Matrix u = random_unitary(rng, n, field);
  const Matrix w = random_unitary(rng, n, field);
  RealVector s(n);
  for (Index i = 0; i < n; ++i) s(i) = rng.uniform(lo, hi);
  return u * s.cast<Scalar>().asDiagonal() * w.adjoint();
}

Matrix commuting_invertible(Rng& rng, const Instance& inst, double lo, double hi) {
  const Index n = inst.family.dim();
  if (inst.spec.controller == ControllerMode::identity) return random_invertible(rng, n, inst.spec.field, lo, hi);
  Vector d(n);
  for (Index i = 0; i < n; ++i) {
    const double mag = rng.uniform(lo, hi);
    if (inst.spec.field == ScalarField::complex) {
      d(i) = std::polar(mag, rng.uniform(0.0, 2.0 * M_PI));
    } else {
      d(i) = rng.uniform() < 0.5 ? -mag : mag;
    }
  }
  return inst.common_basis * d.asDiagonal() * inst.common_basis.adjoint();
}

Instance generate(const GenSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const Index n = spec.dim;
  const Index span = span_of(spec);
  const bool align = aligned(spec);

  // Common eigenbasis: the standard basis for diagonal controllers.
  const Matrix e = spec.controller == ControllerMode::commuting_diagonal ? identity(n)
                                                                         : random_unitary(rng, n, spec.field);

  Matrix t = identity(n);
  Matrix u = identity(n);
  if (spec.controller == ControllerMode::commuting_diagonal) {
    RealVector dt(n), du(n);
    for (Index i = 0; i < n; ++i) dt(i) = rng.uniform(0.5, 2.0);
    for (Index i = 0; i < n; ++i) du(i) = rng.uniform(0.5, 2.0);
    t = dt.cast<Scalar>().asDiagonal();
    u = du.cast<Scalar>().asDiagonal();
  } else if (spec.controller == ControllerMode::polynomial_of_common_hermitian) {
    RealVector m(n);
    for (Index i = 0; i < n; ++i) m(i) = rng.uniform(-1.0, 1.0);
    const Matrix mm = diagonal_in(e, m);
    const Matrix id = identity(n);
    const double ct = rng.uniform(0.5, 1.0), st = rng.uniform(-1.0, 1.0);
    const double cu = rng.uniform(0.5, 1.0), su = rng.uniform(-1.0, 1.0), au = rng.uniform(0.5, 1.5);
    // p(M) = c + (M - s)^2 and q(M) = c' + a (M - s')^2 + (M - s')^4/4.
    const Matrix pt = mm - st * id;
    const Matrix pu = mm - su * id;
    const Matrix pu2 = pu * pu;
    t = ct * id + pt * pt;
    u = cu * id + au * pu2 + 0.25 * (pu2 * pu2);
  }

  std::vector<MeasureAtom> masses;
  masses.reserve(spec.atom_count);
  for (std::size_t i = 0; i < spec.atom_count; ++i) {
    const double mu = spec.measure == MeasureKind::counting ? 1.0 : rng.uniform(0.25, 2.0);
    masses.push_back({std::to_string(i), mu});
  }
  std::vector<double> weights(spec.atom_count);
  for (auto& w : weights) w = rng.uniform(0.5, 2.0);

  const Index dmax = std::min(spec.subspace_dim_max, span);
  std::vector<FrameAtom> atoms;
  atoms.reserve(spec.atom_count);
  for (std::size_t i = 0; i < spec.atom_count; ++i) {
    const Index d = rng.integer(static_cast<int>(spec.subspace_dim_min), static_cast<int>(dmax));
    if (align) {
      const std::vector<Index> cols = pick_columns(rng, span, d, static_cast<Index>(i % static_cast<std::size_t>(span)));
      Matrix q(n, d);
      for (Index j = 0; j < d; ++j) q.col(j) = e.col(cols[static_cast<std::size_t>(j)]);
      const Index k = std::max<Index>(d, rng.integer(static_cast<int>(spec.local_dim_min),
                                                    static_cast<int>(spec.local_dim_max)));
      // L = Y diag(c) with orthonormal Y keeps L* L diagonal.
      const Matrix y = random_unitary(rng, k, spec.field).leftCols(d);
      RealVector c(d);
      for (Index j = 0; j < d; ++j) c(j) = rng.uniform(0.5, 1.5);
      atoms.push_back({Subspace::from_basis(q, 1e-8), y * c.cast<Scalar>().asDiagonal()});
    } else {
      const Matrix coeffs = gaussian_matrix(rng, span, d, spec.field);
      const Subspace sub = Subspace::span_of(e.leftCols(span) * coeffs, 1e-10);
      const Index k = rng.integer(static_cast<int>(spec.local_dim_min), static_cast<int>(spec.local_dim_max));
      atoms.push_back({sub, gaussian_matrix(rng, k, sub.dim(), spec.field)});
    }
  }

  const Index pool = spec.k_in_span ? span : n;
  Matrix k = identity(n);
  if (spec.k_mode == KMode::invertible) {
    if (spec.controller == ControllerMode::identity) {
      k = random_invertible(rng, n, spec.field);
    } else {
      RealVector s(n);
      for (Index i = 0; i < n; ++i) s(i) = rng.uniform(0.5, 2.0);
      k = diagonal_in(e, s);
    }
  } else if (spec.k_mode == KMode::rank_deficient) {
    if (spec.controller == ControllerMode::identity) {
      const Matrix a = e.leftCols(pool) * gaussian_matrix(rng, pool, spec.k_rank, spec.field);
      const Matrix b = gaussian_matrix(rng, n, spec.k_rank, spec.field);
      k = a * b.adjoint();
    } else {
      std::vector<Index> idx(static_cast<std::size_t>(pool));
      std::iota(idx.begin(), idx.end(), Index{0});
      RealVector s = RealVector::Zero(n);
      for (Index r = 0; r < spec.k_rank; ++r) {
        const std::size_t at = rng.index(idx.size());
        s(idx[at]) = rng.uniform(0.5, 2.0);
        idx.erase(idx.begin() + static_cast<std::ptrdiff_t>(at));
      }
      k = diagonal_in(e, s);
    }
  }

  FrameFamily fam(n, MeasureSpace::discrete(std::move(masses)), WeightFunction(std::move(weights)), std::move(atoms));
  return Instance{spec, std::move(fam), ControlContext::make(t, u, k, spec.tol), e};
}

}  // namespace ckgf
