#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ckgf/gen.hpp"

namespace ckgf {

using Json = nlohmann::json;

/// Everything a command needs: a family, controllers, target, tolerances
/// and the optional extras (transform V, second family, generator spec).
struct Scenario {
  ScalarField field = ScalarField::complex;
  FrameFamily family;
  Matrix t;
  Matrix u;
  Matrix k;
  Tolerances tol{};
  std::optional<Matrix> v;
  std::optional<FrameFamily> second;
  std::optional<GenSpec> gen;

  Index dim() const { return family.dim(); }
  ControlContext context() const { return ControlContext::make(t, u, k, tol); }
};

/// Matrices are nested row-major arrays. Complex entries are [re, im]
/// pairs; a real field writes plain numbers.
Json matrix_to_json(const Matrix& m, ScalarField field);
Matrix matrix_from_json(const Json& j, const char* what);
Json vector_to_json(const Vector& v, ScalarField field);

Json tolerances_to_json(const Tolerances& tol);
Tolerances tolerances_from_json(const Json& j, Tolerances base = {});

Json gen_spec_to_json(const GenSpec& spec);
GenSpec gen_spec_from_json(const Json& j);

Json measure_to_json(const MeasureSpace& m);
MeasureSpace measure_from_json(const Json& j);

Json family_to_json(const FrameFamily& fam, ScalarField field);
FrameFamily family_from_json(const Json& j, Index dim, ScalarField field);

/// Throws Error(InputError or a more specific input code) on malformed
/// or dimensionally inconsistent documents. A document with a "gen" entry
/// and no "atoms" is generated.
Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& s);
Scenario scenario_from_instance(const Instance& inst);

Scenario load_scenario(const std::string& path);
Json load_json(const std::string& path);

}  // namespace ckgf
