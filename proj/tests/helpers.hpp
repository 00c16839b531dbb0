#pragma once

#include <doctest.h>

#include <initializer_list>

#include "ckgf/frames.hpp"

namespace th {

using ckgf::Index;
using ckgf::Matrix;
using ckgf::Scalar;
using ckgf::Vector;

inline Matrix mat(std::initializer_list<std::initializer_list<Scalar>> rows) {
  const auto r = static_cast<Index>(rows.size());
  const auto c = static_cast<Index>(rows.begin()->size());
  Matrix m(r, c);
  Index i = 0;
  for (const auto& row : rows) {
    Index j = 0;
    for (const auto& x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline Vector vec(std::initializer_list<Scalar> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (const auto& x : xs) v(i++) = x;
  return v;
}

inline Matrix diag(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v.asDiagonal();
}

inline double dist(const Matrix& a, const Matrix& b) { return ckgf::spectral_norm(a - b); }

inline ckgf::Subspace span(const Matrix& cols) { return ckgf::Subspace::span_of(cols, 1e-12); }

/// Family with one atom per column block of `bases`, counting measure, v = 1.
inline ckgf::FrameFamily family(Index n, const std::vector<std::pair<Matrix, Matrix>>& atoms,
                                std::vector<double> weights = {}) {
  std::vector<ckgf::FrameAtom> out;
  for (const auto& [q, l] : atoms) out.push_back({span(q), l});
  if (weights.empty()) weights.assign(atoms.size(), 1.0);
  return ckgf::FrameFamily(n, ckgf::counting_measure(atoms.size()), ckgf::WeightFunction(weights), out);
}

/// Two-atom coordinate family in dimension 2: F = span{e1}, span{e2}, L = [1].
inline ckgf::FrameFamily parseval2() {
  return family(2, {{mat({{1}, {0}}), mat({{1}})}, {mat({{0}, {1}}), mat({{1}})}});
}

}  // namespace th
