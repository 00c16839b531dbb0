#include "ckgf/measure.hpp"

#include <cmath>
#include <cstdio>

#include "ckgf/errors.hpp"

namespace ckgf {

namespace {

std::string node_label(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

MeasureSpace MeasureSpace::discrete(std::vector<MeasureAtom> atoms) {
  if (atoms.empty()) throw Error(ErrorCode::InputError, "measure space needs at least one atom");
  for (const auto& a : atoms) {
    if (!(a.mu > 0.0) || !std::isfinite(a.mu)) {
      throw Error(ErrorCode::InvalidWeight, "atom '" + a.label + "' has non-positive mass");
    }
  }
  MeasureSpace m;
  m.atoms_ = std::move(atoms);
  return m;
}

double MeasureSpace::node(std::size_t i) const {
  if (!quadrature_) throw Error(ErrorCode::InputError, "discrete measure has no quadrature nodes");
  const double h = (quadrature_->b - quadrature_->a) / static_cast<double>(quadrature_->n);
  return quadrature_->a + (static_cast<double>(i) + 0.5) * h;
}

double MeasureSpace::total_mass() const {
  double total = 0.0;
  for (const auto& a : atoms_) total += a.mu;
  return total;
}

MeasureSpace discretize_interval(double a, double b, std::size_t n) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw Error(ErrorCode::InvalidInterval, "interval requires a < b");
  }
  if (n == 0) throw Error(ErrorCode::InvalidInterval, "interval needs at least one node");
  const double h = (b - a) / static_cast<double>(n);
  MeasureSpace m;
  m.quadrature_ = Quadrature{a, b, n, "midpoint"};
  m.atoms_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.atoms_.push_back({node_label(a + (static_cast<double>(i) + 0.5) * h), h});
  }
  return m;
}

MeasureSpace counting_measure(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InputError, "counting measure needs at least one atom");
  std::vector<MeasureAtom> atoms;
  atoms.reserve(n);
  for (std::size_t i = 0; i < n; ++i) atoms.push_back({std::to_string(i), 1.0});
  return MeasureSpace::discrete(std::move(atoms));
}

WeightFunction::WeightFunction(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidWeight, "weights must be positive and finite");
  }
}

WeightFunction WeightFunction::constant(std::size_t n, double value) {
  return WeightFunction(std::vector<double>(n, value));
}

WeightFunction WeightFunction::sample(const MeasureSpace& measure, const std::function<double(double)>& v) {
  std::vector<double> values(measure.size());
  for (std::size_t i = 0; i < measure.size(); ++i) values[i] = v(measure.node(i));
  return WeightFunction(std::move(values));
}

}  // namespace ckgf
