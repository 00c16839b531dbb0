#pragma once

#include <cstdint>
#include <string_view>

#include "ckgf/frames.hpp"
#include "ckgf/random.hpp"

namespace ckgf {

enum class ControllerMode { identity, commuting_diagonal, polynomial_of_common_hermitian };
enum class KMode { identity, invertible, rank_deficient };
/// `aligned` subspaces are spanned by columns of the common eigenbasis of
/// the controllers, which keeps every block commuting with T and U.
/// `automatic` picks aligned for non-identity controllers.
enum class SubspaceMode { automatic, generic, aligned };
enum class MeasureKind { counting, weighted };

std::string_view to_string(ControllerMode m);
std::string_view to_string(KMode m);
std::string_view to_string(SubspaceMode m);
std::string_view to_string(MeasureKind m);
ControllerMode parse_controller_mode(std::string_view s);
KMode parse_k_mode(std::string_view s);
SubspaceMode parse_subspace_mode(std::string_view s);
MeasureKind parse_measure_kind(std::string_view s);

struct GenSpec {
  std::uint64_t seed = 0;
  Index dim = 3;
  std::size_t atom_count = 4;
  Index subspace_dim_min = 1;
  Index subspace_dim_max = 2;
  Index local_dim_min = 1;
  Index local_dim_max = 3;
  ScalarField field = ScalarField::complex;
  ControllerMode controller = ControllerMode::identity;
  KMode k_mode = KMode::identity;
  /// Rank of K for KMode::rank_deficient.
  Index k_rank = 1;
  SubspaceMode subspaces = SubspaceMode::automatic;
  /// Number of common-basis directions the subspaces may use; 0 means dim.
  /// Values below dim give a rank-deficient frame operator.
  Index span_rank = 0;
  /// Place R(K) inside the span used by the subspaces.
  bool k_in_span = false;
  MeasureKind measure = MeasureKind::counting;
  Tolerances tol{};

  bool operator==(const GenSpec&) const = default;
};

struct Instance {
  GenSpec spec;
  FrameFamily family;
  ControlContext ctx;
  /// Unitary whose columns diagonalize T, U and, for aligned subspaces,
  /// every block and K (commuting modes).
  Matrix common_basis;
};

/// Throws InvalidSpec on inconsistent dimensions.
void validate(const GenSpec& spec);

/// Deterministic in `spec`: the same spec gives a bit-identical instance.
Instance generate(const GenSpec& spec);

/// Haar-like unitary (real orthogonal for a real field).
Matrix random_unitary(Rng& rng, Index n, ScalarField field);

/// Invertible operator with singular values in [lo, hi].
Matrix random_invertible(Rng& rng, Index n, ScalarField field, double lo = 0.5, double hi = 2.0);

/// Invertible operator whose adjoint commutes with the instance's
/// controllers: generic for identity controllers, diagonal in the common
/// basis otherwise.
Matrix commuting_invertible(Rng& rng, const Instance& inst, double lo = 0.5, double hi = 2.0);

}  // namespace ckgf
