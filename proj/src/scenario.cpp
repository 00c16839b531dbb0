#include "ckgf/scenario.hpp"

#include <fstream>
#include <sstream>

namespace ckgf {

namespace {

[[noreturn]] void input_error(const std::string& what) { throw Error(ErrorCode::InputError, what); }

Json scalar_to_json(const Scalar& z, ScalarField field) {
  if (field == ScalarField::real) return z.real();
  return Json::array({z.real(), z.imag()});
}

Scalar scalar_from_json(const Json& j, const char* what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  input_error(std::string(what) + ": entries must be numbers or [re, im] pairs");
}

const Json& require(const Json& j, const char* key, const char* what) {
  if (!j.is_object() || !j.contains(key)) input_error(std::string(what) + " needs '" + key + "'");
  return j.at(key);
}

void require_field(const Matrix& m, ScalarField field, const char* what) {
  if (field == ScalarField::real && m.size() > 0 && m.imag().cwiseAbs().maxCoeff() != 0.0) {
    input_error(std::string(what) + " has complex entries in a real space");
  }
}

Matrix operator_from_json(const Json& j, Index dim, ScalarField field, const char* what) {
  if (j.is_string()) {
    if (j.get<std::string>() != "identity") input_error(std::string(what) + ": only \"identity\" is a named operator");
    return identity(dim);
  }
  Matrix m = matrix_from_json(j, what);
  if (m.rows() != dim || m.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be " + std::to_string(dim) + " x " +
                                                  std::to_string(dim));
  }
  require_field(m, field, what);
  return m;
}

Json operator_to_json(const Matrix& m, ScalarField field) {
  if (m.rows() == m.cols() && m == identity(m.rows())) return "identity";
  return matrix_to_json(m, field);
}

ScalarField field_from_json(const Json& j) {
  const std::string f = j.get<std::string>();
  if (f == "real") return ScalarField::real;
  if (f == "complex") return ScalarField::complex;
  input_error("scalar_field must be \"real\" or \"complex\"");
}

std::string field_name(ScalarField f) { return f == ScalarField::real ? "real" : "complex"; }

template <class F>
auto wrap_json(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InputError, std::string("malformed document: ") + e.what());
  }
}

}  // namespace

Json matrix_to_json(const Matrix& m, ScalarField field) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j), field));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector& v, ScalarField field) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(scalar_to_json(v(i), field));
  return out;
}

Matrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    input_error(std::string(what) + " must be a non-empty array of rows");
  }
  const auto rows = static_cast<Index>(j.size());
  const auto cols = static_cast<Index>(j[0].size());
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols) input_error(std::string(what) + " is ragged");
    for (Index c = 0; c < cols; ++c) m(r, c) = scalar_from_json(row[static_cast<std::size_t>(c)], what);
  }
  if (!all_finite(m)) input_error(std::string(what) + " has non-finite entries");
  return m;
}

Json tolerances_to_json(const Tolerances& tol) {
  return {{"herm", tol.herm}, {"psd", tol.psd}, {"eq", tol.eq}, {"rank", tol.rank}, {"pd", tol.pd}};
}

Tolerances tolerances_from_json(const Json& j, Tolerances base) {
  return wrap_json([&] {
    if (!j.is_object()) input_error("tolerances must be an object");
    base.herm = j.value("herm", base.herm);
    base.psd = j.value("psd", base.psd);
    base.eq = j.value("eq", base.eq);
    base.rank = j.value("rank", base.rank);
    base.pd = j.value("pd", base.pd);
    for (double t : {base.herm, base.psd, base.eq, base.rank, base.pd}) {
      if (!(t > 0.0) || !std::isfinite(t)) input_error("tolerances must be positive and finite");
    }
    return base;
  });
}

Json gen_spec_to_json(const GenSpec& s) {
  return {{"seed", s.seed},
          {"dim", s.dim},
          {"atom_count", s.atom_count},
          {"subspace_dims", {s.subspace_dim_min, s.subspace_dim_max}},
          {"local_dims", {s.local_dim_min, s.local_dim_max}},
          {"scalar_field", field_name(s.field)},
          {"controller_mode", std::string(to_string(s.controller))},
          {"K_mode", std::string(to_string(s.k_mode))},
          {"K_rank", s.k_rank},
          {"subspace_mode", std::string(to_string(s.subspaces))},
          {"span_rank", s.span_rank},
          {"K_in_span", s.k_in_span},
          {"measure", std::string(to_string(s.measure))},
          {"tolerances", tolerances_to_json(s.tol)}};
}

GenSpec gen_spec_from_json(const Json& j) {
  return wrap_json([&] {
    if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, "gen spec must be an object");
    GenSpec s;
    s.seed = j.value("seed", s.seed);
    s.dim = j.value("dim", s.dim);
    s.atom_count = j.value("atom_count", s.atom_count);
    if (j.contains("subspace_dims")) {
      s.subspace_dim_min = j.at("subspace_dims").at(0).get<Index>();
      s.subspace_dim_max = j.at("subspace_dims").at(1).get<Index>();
    } else {
      s.subspace_dim_max = std::max<Index>(1, std::min<Index>(s.subspace_dim_max, s.dim));
    }
    if (j.contains("local_dims")) {
      s.local_dim_min = j.at("local_dims").at(0).get<Index>();
      s.local_dim_max = j.at("local_dims").at(1).get<Index>();
    }
    if (j.contains("scalar_field")) s.field = field_from_json(j.at("scalar_field"));
    if (j.contains("controller_mode")) s.controller = parse_controller_mode(j.at("controller_mode").get<std::string>());
    if (j.contains("K_mode")) s.k_mode = parse_k_mode(j.at("K_mode").get<std::string>());
    s.k_rank = j.value("K_rank", s.k_rank);
    if (j.contains("subspace_mode")) s.subspaces = parse_subspace_mode(j.at("subspace_mode").get<std::string>());
    s.span_rank = j.value("span_rank", s.span_rank);
    s.k_in_span = j.value("K_in_span", s.k_in_span);
    if (j.contains("measure")) s.measure = parse_measure_kind(j.at("measure").get<std::string>());
    if (j.contains("tolerances")) s.tol = tolerances_from_json(j.at("tolerances"));
    validate(s);
    return s;
  });
}

Json measure_to_json(const MeasureSpace& m) {
  if (m.is_quadrature()) {
    const Quadrature& q = *m.quadrature();
    return {{"kind", "interval"}, {"a", q.a}, {"b", q.b}, {"n", q.n}, {"rule", q.rule}};
  }
  Json atoms = Json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"label", a.label}, {"mu", a.mu}});
  return {{"kind", "discrete"}, {"atoms", std::move(atoms)}};
}

MeasureSpace measure_from_json(const Json& j) {
  return wrap_json([&] {
    const std::string kind = require(j, "kind", "measure").get<std::string>();
    if (kind == "interval") {
      const std::string rule = j.value("rule", std::string("midpoint"));
      if (rule != "midpoint") input_error("only the midpoint rule is supported");
      const long long n = require(j, "n", "interval measure").get<long long>();
      if (n < 1) throw Error(ErrorCode::InvalidInterval, "interval needs at least one node");
      return discretize_interval(require(j, "a", "interval measure").get<double>(),
                                 require(j, "b", "interval measure").get<double>(), static_cast<std::size_t>(n));
    }
    if (kind == "counting") {
      const long long n = require(j, "n", "counting measure").get<long long>();
      if (n < 1) input_error("counting measure needs at least one atom");
      return counting_measure(static_cast<std::size_t>(n));
    }
    if (kind == "discrete") {
      std::vector<MeasureAtom> atoms;
      for (const Json& a : require(j, "atoms", "discrete measure")) {
        atoms.push_back({a.value("label", std::to_string(atoms.size())), require(a, "mu", "atom").get<double>()});
      }
      return MeasureSpace::discrete(std::move(atoms));
    }
    input_error("measure kind must be discrete, counting or interval");
  });
}

Json family_to_json(const FrameFamily& fam, ScalarField field) {
  Json atoms = Json::array();
  for (const auto& a : fam.atoms()) {
    atoms.push_back({{"basis", matrix_to_json(a.subspace.basis(), field)}, {"local", matrix_to_json(a.local, field)}});
  }
  return {{"measure", measure_to_json(fam.measure())}, {"weights", fam.weights().values()}, {"atoms", std::move(atoms)}};
}

FrameFamily family_from_json(const Json& j, Index dim, ScalarField field) {
  return wrap_json([&] {
    MeasureSpace measure = measure_from_json(require(j, "measure", "family"));
    std::vector<double> weights(measure.size(), 1.0);
    if (j.contains("weights")) weights = j.at("weights").get<std::vector<double>>();
    std::vector<FrameAtom> atoms;
    for (const Json& a : require(j, "atoms", "family")) {
      Subspace sub = Subspace::whole(dim);
      if (a.contains("basis")) {
        Matrix q = matrix_from_json(a.at("basis"), "basis");
        require_field(q, field, "basis");
        if (q.rows() != dim) throw Error(ErrorCode::DimensionMismatch, "basis rows must equal dim");
        sub = Subspace::from_basis(std::move(q), 1e-8);
      } else if (a.contains("span")) {
        const Matrix c = matrix_from_json(a.at("span"), "span");
        require_field(c, field, "span");
        if (c.rows() != dim) throw Error(ErrorCode::DimensionMismatch, "span rows must equal dim");
        sub = Subspace::span_of(c, 1e-10);
      } else {
        input_error("atom needs 'basis' or 'span'");
      }
      Matrix local = matrix_from_json(require(a, "local", "atom"), "local");
      require_field(local, field, "local");
      atoms.push_back({std::move(sub), std::move(local)});
    }
    if (weights.size() != measure.size()) throw Error(ErrorCode::MeasureMismatch, "weights do not match the measure");
    return FrameFamily(dim, std::move(measure), WeightFunction(std::move(weights)), std::move(atoms));
  });
}

Scenario scenario_from_json(const Json& j) {
  return wrap_json([&]() -> Scenario {
    if (!j.is_object()) input_error("scenario must be an object");
    if (!j.contains("atoms") && j.contains("gen")) {
      Scenario s = scenario_from_instance(generate(gen_spec_from_json(j.at("gen"))));
      if (j.contains("tolerances")) s.tol = tolerances_from_json(j.at("tolerances"), s.tol);
      return s;
    }
    const ScalarField field = j.contains("scalar_field") ? field_from_json(j.at("scalar_field")) : ScalarField::complex;
    const Index dim = require(j, "dim", "scenario").get<Index>();
    if (dim < 1) throw Error(ErrorCode::DimensionMismatch, "dim must be positive");
    const Tolerances tol = j.contains("tolerances") ? tolerances_from_json(j.at("tolerances")) : Tolerances{};
    Scenario s{field,
               family_from_json(j, dim, field),
               operator_from_json(j.value("T", Json("identity")), dim, field, "T"),
               operator_from_json(j.value("U", Json("identity")), dim, field, "U"),
               operator_from_json(j.value("K", Json("identity")), dim, field, "K"),
               tol,
               std::nullopt,
               std::nullopt,
               std::nullopt};
    if (j.contains("V")) s.v = operator_from_json(j.at("V"), dim, field, "V");
    if (j.contains("second")) s.second = family_from_json(j.at("second"), dim, field);
    if (j.contains("gen")) s.gen = gen_spec_from_json(j.at("gen"));
    return s;
  });
}

Json scenario_to_json(const Scenario& s) {
  Json j = family_to_json(s.family, s.field);
  j["scalar_field"] = field_name(s.field);
  j["dim"] = s.dim();
  j["T"] = operator_to_json(s.t, s.field);
  j["U"] = operator_to_json(s.u, s.field);
  j["K"] = operator_to_json(s.k, s.field);
  j["tolerances"] = tolerances_to_json(s.tol);
  if (s.v) j["V"] = matrix_to_json(*s.v, s.field);
  if (s.second) j["second"] = family_to_json(*s.second, s.field);
  if (s.gen) j["gen"] = gen_spec_to_json(*s.gen);
  return j;
}

Scenario scenario_from_instance(const Instance& inst) {
  return Scenario{inst.spec.field,     inst.family, inst.ctx.T(), inst.ctx.U(), inst.ctx.K(),
                  inst.ctx.tol(),      std::nullopt, std::nullopt, inst.spec};
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) input_error("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return wrap_json([&] { return Json::parse(buf.str()); });
}

Scenario load_scenario(const std::string& path) { return scenario_from_json(load_json(path)); }

}  // namespace ckgf
