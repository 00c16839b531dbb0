#include "ckgf/random.hpp"

#include <cmath>

namespace ckgf {

double Rng::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) return 0;
  const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
  return i < n ? i : n - 1;
}

int Rng::integer(int lo, int hi) {
  if (hi <= lo) return lo;
  return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo) + 1));
}

Matrix gaussian_matrix(Rng& rng, Index rows, Index cols, ScalarField field) {
  Matrix m(rows, cols);
  const double scale = field == ScalarField::complex ? std::sqrt(0.5) : 1.0;
  // Column-major fill order is part of the reproducibility contract.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const double re = rng.normal();
      const double im = field == ScalarField::complex ? rng.normal() : 0.0;
      m(i, j) = Scalar(scale * re, scale * im);
    }
  }
  return m;
}

Vector gaussian_vector(Rng& rng, Index n, ScalarField field) { return gaussian_matrix(rng, n, 1, field).col(0); }

}  // namespace ckgf
