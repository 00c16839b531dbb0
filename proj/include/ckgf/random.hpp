#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "ckgf/linalg.hpp"

namespace ckgf {

/// Seeded generator with a fixed, versioned algorithm: mt19937_64 words,
/// 53-bit uniforms and Box-Muller normals. Standard library distributions
/// are implementation-defined, so none are used here.
class Rng {
 public:
  static constexpr std::string_view kVersion = "mt19937_64/u53/box-muller v1";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform index in [0, n).
  std::size_t index(std::size_t n);
  int integer(int lo, int hi);

 private:
  std::mt19937_64 engine_;
};

/// Standard Gaussian matrix; complex entries have independent real and
/// imaginary parts of variance 1/2.
Matrix gaussian_matrix(Rng& rng, Index rows, Index cols, ScalarField field);
Vector gaussian_vector(Rng& rng, Index n, ScalarField field);

}  // namespace ckgf
