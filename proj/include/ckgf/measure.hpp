#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ckgf {

struct MeasureAtom {
  std::string label;
  double mu = 0.0;
};

/// Interval sampled by the composite midpoint rule.
struct Quadrature {
  double a = 0.0;
  double b = 1.0;
  std::size_t n = 1;
  std::string rule = "midpoint";
};

/// Measure space (X, mu) held as finitely many weighted atoms. Discrete
/// measures are represented exactly; continuous ones by quadrature atoms.
class MeasureSpace {
 public:
  static MeasureSpace discrete(std::vector<MeasureAtom> atoms);

  std::size_t size() const { return atoms_.size(); }
  const std::vector<MeasureAtom>& atoms() const { return atoms_; }
  const MeasureAtom& atom(std::size_t i) const { return atoms_.at(i); }
  const std::optional<Quadrature>& quadrature() const { return quadrature_; }
  bool is_quadrature() const { return quadrature_.has_value(); }

  /// Quadrature node of atom `i`; only meaningful for quadrature measures.
  double node(std::size_t i) const;

  double total_mass() const;

  friend MeasureSpace discretize_interval(double a, double b, std::size_t n);

 private:
  MeasureSpace() = default;
  std::vector<MeasureAtom> atoms_;
  std::optional<Quadrature> quadrature_;
};

/// Composite midpoint rule on [a, b]: nodes a + (i + 1/2) h with weight h = (b - a)/n.
MeasureSpace discretize_interval(double a, double b, std::size_t n);

/// n atoms of unit mass.
MeasureSpace counting_measure(std::size_t n);

/// Positive weight v(x) per atom.
class WeightFunction {
 public:
  explicit WeightFunction(std::vector<double> values);
  static WeightFunction constant(std::size_t n, double value = 1.0);
  static WeightFunction sample(const MeasureSpace& measure, const std::function<double(double)>& v);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

}  // namespace ckgf
