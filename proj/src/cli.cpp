#include "ckgf/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "ckgf/constructions.hpp"
#include "ckgf/scenario.hpp"
#include "ckgf/stability.hpp"
#include "ckgf/sweep.hpp"

namespace ckgf::cli {

namespace {

struct Options {
  std::string scenario;
  std::optional<double> tol_psd, tol_herm, tol_eq, tol_rank, tol_pd;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string format = "text";
  std::string out_path;
  bool inverse = false;
  std::string mode = "quotient";
  std::string suite = "all";
  std::size_t count = 100;
  std::size_t samples = 100;
  // gen overrides
  std::optional<Index> dim, span_rank, k_rank;
  std::optional<std::size_t> atoms;
  std::optional<std::string> controller, k_mode, field;
};

struct Outcome {
  int code = ok;
  Json result = Json::object();
};

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json cert_json(const BoundsCertificate& c, ScalarField f) {
  return {{"A", number(c.lower)},
          {"B", number(c.upper)},
          {"admissible_lower", number(c.admissible_lower())},
          {"is_frame", c.is_frame},
          {"lower_vacuous", c.lower_vacuous},
          {"lower_residual", number(c.lower_residual)},
          {"upper_residual", number(c.upper_residual)},
          {"lower_witness", vector_to_json(c.lower_witness, f)},
          {"upper_witness", vector_to_json(c.upper_witness, f)}};
}

Json frame_op_json(const FrameOperatorResult& s, ScalarField f) {
  return {{"S_C", matrix_to_json(s.op, f)}, {"herm_deviation", s.herm_deviation}};
}

Json transformed_json(const TransformedFamily& t, ScalarField f) {
  Json j{{"construction", std::string(to_string(t.construction))},
         {"transform", matrix_to_json(t.transform, f)},
         {"target", matrix_to_json(t.target, f)},
         {"source_bounds", cert_json(t.source_bounds, f)},
         {"predicted", {{"A", number(t.predicted.lower)}, {"B", number(t.predicted.upper)}}},
         {"recomputed", cert_json(t.recomputed, f)},
         {"frame_operator", frame_op_json(t.frame_op, f)},
         {"family", family_to_json(t.family, f)}};
  if (t.expected_operator) {
    j["expected_operator"] = matrix_to_json(*t.expected_operator, f);
    j["operator_defect"] = t.operator_defect;
    j["operator_tolerance"] = t.operator_tolerance;
    j["operator_identity_holds"] = t.operator_identity_holds();
  }
  return j;
}

int code_for(const Error& e) {
  if (is_input_error(e.code())) return input_error;
  if (e.code() == ErrorCode::NotAFrame) return predicate_false;
  return precondition_violated;
}

std::string status_for(int code) {
  switch (code) {
    case ok: return "ok";
    case predicate_false: return "predicate_false";
    case precondition_violated: return "precondition_violated";
    default: return "input_error";
  }
}

Tolerances apply_overrides(Tolerances tol, const Options& o) {
  if (o.tol_psd) tol.psd = *o.tol_psd;
  if (o.tol_herm) tol.herm = *o.tol_herm;
  if (o.tol_eq) tol.eq = *o.tol_eq;
  if (o.tol_rank) tol.rank = *o.tol_rank;
  if (o.tol_pd) tol.pd = *o.tol_pd;
  for (double t : {tol.herm, tol.psd, tol.eq, tol.rank, tol.pd}) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InputError, "tolerances must be positive");
  }
  return tol;
}

Scenario load(const Options& o) {
  if (o.scenario.empty()) throw Error(ErrorCode::InputError, "a scenario file is required");
  Scenario s = load_scenario(o.scenario);
  s.tol = apply_overrides(s.tol, o);
  return s;
}

const Matrix& need_v(const Scenario& s) {
  if (!s.v) throw Error(ErrorCode::InputError, "scenario has no transform operator 'V'");
  return *s.v;
}

const FrameFamily& need_second(const Scenario& s) {
  if (!s.second) throw Error(ErrorCode::InputError, "scenario has no 'second' family");
  return *s.second;
}

using Command = std::function<Outcome(const Options&, Tolerances&)>;

Outcome check_frame(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const FrameCheck c = is_controlled_k_g_fusion_frame(s.family, s.context());
  return {c.is_frame ? ok : predicate_false,
          {{"is_frame", c.is_frame}, {"A", number(c.certificate.lower)}, {"B", number(c.certificate.upper)},
           {"certificate", cert_json(c.certificate, s.field)}}};
}

Outcome frame_operator_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const FrameOperatorResult r = frame_operator(s.family, s.context());
  return {ok, {{"frame_operator", frame_op_json(r, s.field)}, {"hermitian", r.herm_deviation <= tol.herm}}};
}

Outcome bounds_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const FrameCheck c = is_controlled_k_g_fusion_frame(s.family, s.context());
  return {c.is_frame ? ok : predicate_false,
          {{"certificate", cert_json(c.certificate, s.field)}, {"frame_operator", frame_op_json(c.frame_op, s.field)}}};
}

Outcome analysis_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const ControlContext ctx = s.context();
  const AnalysisOperator a = analysis_operator(s.family, ctx);
  const FrameOperatorResult r = frame_operator(s.family, ctx);
  const double defect = spectral_norm(a.composed() - r.op);
  const bool holds = defect <= tol.eq;
  return {holds ? ok : predicate_false,
          {{"factorization_defect", defect},
           {"factorization_holds", holds},
           {"T_C_T_C_star", matrix_to_json(a.composed(), s.field)},
           {"frame_operator", frame_op_json(r, s.field)}}};
}

Outcome transformed_outcome(const TransformedFamily& t, ScalarField f, double tol_eq) {
  const bool holds = t.envelope_holds(tol_eq) && t.operator_identity_holds();
  Json j = transformed_json(t, f);
  j["envelope_holds"] = t.envelope_holds(tol_eq);
  return {holds ? ok : predicate_false, std::move(j)};
}

Outcome dual_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  return transformed_outcome(canonical_dual(s.family, s.context()), s.field, tol.eq);
}

Outcome k_construct_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  return transformed_outcome(canonical_k_construction(s.family, s.context()), s.field, tol.eq);
}

Outcome transform_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const TransformedFamily t = o.inverse ? inverse_transform_check(s.family, s.context(), need_v(s))
                                        : transform_by_invertible(s.family, s.context(), need_v(s));
  return transformed_outcome(t, s.field, tol.eq);
}

Outcome weaken_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const FrameOperatorResult r = frame_operator(s.family, s.context());
  const BoundsCertificate id_cert = optimal_bounds(r, identity(s.dim()), tol);
  const WeakenedBounds w = weaken_to_k_frame(r, id_cert, s.k, tol);
  return {w.verified ? ok : predicate_false,
          {{"A_K", w.lower}, {"B", w.upper}, {"residual", w.residual}, {"verified", w.verified},
           {"identity_certificate", cert_json(id_cert, s.field)}}};
}

Outcome restrict_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const ControlContext ctx = s.context();
  const FrameCheck c = is_controlled_k_g_fusion_frame(s.family, ctx);
  const RangeRestriction r = restrict_to_range(s.family, ctx, c.certificate, o.seed, o.samples);
  return {r.verified ? ok : predicate_false,
          {{"A_R", r.lower},
           {"B", r.upper},
           {"range_dim", r.range_dim},
           {"checked", r.checked},
           {"min_margin", number(r.min_margin)},
           {"verified", r.verified},
           {"vacuous", r.vacuous},
           {"certificate", cert_json(c.certificate, s.field)}}};
}

Outcome douglas_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const DouglasTransfer d = douglas_transfer(s.family, s.context(), need_v(s));
  return {d.verified ? ok : predicate_false,
          {{"lambda", d.lambda},
           {"A_V", d.lower},
           {"B", d.upper},
           {"vacuous", d.vacuous},
           {"domination_residual", d.domination_residual},
           {"sandwich_residual", d.sandwich_residual},
           {"verified", d.verified}}};
}

Outcome quotient_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const QuotientReport q = quotient_bound(s.k, frame_operator(s.family, s.context()), tol);
  Json j{{"bounded", q.bounded},   {"B_min", number(q.b_min)},          {"range_ok", q.range_ok},
         {"frame_predicate", q.frame_predicate}, {"A_opt", number(q.a_opt)}, {"consistent", q.consistent}};
  if (!q.consistent) {
    j["error"] = {{"code", "EquivalenceViolation"}, {"message", "quotient and frame predicates disagree"}};
    return {precondition_violated, std::move(j)};
  }
  return {q.bounded ? ok : predicate_false, std::move(j)};
}

Outcome equivalences_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const ControlContext ctx = s.context();
  if (o.mode == "controlled") {
    const ControlEquivalenceReport r = controlled_uncontrolled_equivalence_check(s.family, ctx);
    return {r.controlled.is_frame ? ok : predicate_false,
            {{"mode", "controlled"},
             {"defect_sgf_t", r.defect_sgf_t},
             {"defect_k_t", r.defect_k_t},
             {"defect_k_u", r.defect_k_u},
             {"controlled", cert_json(r.controlled, s.field)},
             {"uncontrolled", cert_json(r.uncontrolled, s.field)},
             {"agree", r.agree}}};
  }
  if (o.mode != "quotient") throw Error(ErrorCode::InputError, "--mode must be quotient or controlled");
  const Matrix v = s.v ? *s.v : identity(s.dim());
  const EquivalencesReport r = three_equivalences(s.family, ctx, v);
  return {r.frame_i ? ok : predicate_false,
          {{"mode", "quotient"},
           {"frame_i", r.frame_i},
           {"bounded_ii", r.bounded_ii},
           {"bounded_iii", r.bounded_iii},
           {"B_ii", number(r.b_ii)},
           {"B_iii", number(r.b_iii)},
           {"transformed", cert_json(r.transformed, s.field)},
           {"rank_S", r.rank_s},
           {"rank_VK", r.rank_vk},
           {"rank_gap", number(r.rank_gap)},
           {"agree", r.agree}}};
}

Outcome pair_check_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const PairReport r = pairwise_k_frame_check(s.family, need_second(s), s.context());
  return {r.holds ? ok : predicate_false,
          {{"composite", matrix_to_json(r.composite, s.field)},
           {"bessel_lambda", r.bessel_lambda},
           {"bessel_gamma", r.bessel_gamma},
           {"lambda_bounds", cert_json(r.lambda_bounds, s.field)},
           {"gamma_bounds", cert_json(r.gamma_bounds, s.field)},
           {"lambda_claim", r.lambda_claim},
           {"gamma_claim", r.gamma_claim},
           {"holds", r.holds}}};
}

Outcome stability_cmd(const Options& o, Tolerances& tol) {
  const Scenario s = load(o);
  tol = s.tol;
  const StabilityReport r = dual_stability_check(s.family, need_second(s), s.context());
  return {r.holds ? ok : predicate_false,
          {{"D", r.d},
           {"A1", r.a1},
           {"A2", r.a2},
           {"lhs_functional", r.lhs_functional},
           {"lhs_operator", r.lhs_operator},
           {"chain_middle", r.chain_middle},
           {"rhs", r.rhs},
           {"chain_holds", r.chain_holds},
           {"holds_functional", r.holds_functional},
           {"holds_operator", r.holds_operator},
           {"holds", r.holds}}};
}

Outcome sweep_cmd(const Options& o, Tolerances& tol) {
  tol = apply_overrides(Tolerances{}, o);
  const std::vector<SweepResult> results = run_sweep(o.suite, o.seed, o.count, tol);
  Json suites = Json::array();
  bool all_ok = true;
  for (const SweepResult& r : results) {
    Json failures = Json::array();
    for (const SweepFailure& f : r.failures) failures.push_back({{"seed", f.seed}, {"message", f.message}});
    suites.push_back({{"suite", r.suite}, {"instances", r.instances}, {"passed", r.passed}, {"failures", failures}});
    all_ok = all_ok && r.ok();
  }
  return {all_ok ? ok : predicate_false, {{"seed", o.seed}, {"count", o.count}, {"suites", suites}}};
}

GenSpec gen_spec_for(const Options& o) {
  GenSpec spec;
  if (!o.scenario.empty()) {
    const Json j = load_json(o.scenario);
    spec = gen_spec_from_json(j.contains("gen") ? j.at("gen") : j);
  }
  if (o.seed_given) spec.seed = o.seed;
  if (o.dim) {
    spec.dim = *o.dim;
    spec.subspace_dim_max = std::max<Index>(1, std::min(spec.subspace_dim_max, spec.dim));
  }
  if (o.atoms) spec.atom_count = *o.atoms;
  if (o.span_rank) spec.span_rank = *o.span_rank;
  if (o.k_rank) spec.k_rank = *o.k_rank;
  if (o.controller) spec.controller = parse_controller_mode(*o.controller);
  if (o.k_mode) spec.k_mode = parse_k_mode(*o.k_mode);
  if (o.field) {
    if (*o.field != "real" && *o.field != "complex") throw Error(ErrorCode::InvalidSpec, "field must be real or complex");
    spec.field = *o.field == "real" ? ScalarField::real : ScalarField::complex;
  }
  spec.tol = apply_overrides(spec.tol, o);
  validate(spec);
  return spec;
}

void emit(const Json& doc, const std::string& format, const Options& o, std::ostream& out) {
  std::string text;
  if (format == "structured") {
    text = doc.dump(2) + "\n";
  } else {
    std::ostringstream ss;
    ss << "command: " << doc.value("command", "") << "\n";
    ss << "status: " << doc.value("status", "") << " (exit " << doc.value("exit_code", 0) << ")\n";
    if (doc.contains("error")) ss << "error: " << doc["error"].value("code", "") << ": " << doc["error"].value("message", "") << "\n";
    if (doc.contains("result")) {
      for (const auto& [key, value] : doc["result"].items()) {
        if (value.is_primitive()) ss << key << ": " << value.dump() << "\n";
      }
      for (const auto& [key, value] : doc["result"].items()) {
        if (value.is_object() && value.contains("A") && value.contains("B")) {
          ss << key << ": A = " << value["A"].dump() << ", B = " << value["B"].dump() << "\n";
        }
      }
    }
    ss << "tolerances: " << doc["tolerances"].dump() << "\n";
    ss << "rng: " << doc.value("rng_version", "") << "\n";
    text = ss.str();
  }
  if (o.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(o.out_path);
    if (!f) throw Error(ErrorCode::InputError, "cannot write '" + o.out_path + "'");
    f << text;
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Controlled K-g-fusion frame toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--tol-psd", o.tol_psd, "PSD slack");
  app.add_option("--tol-herm", o.tol_herm, "Hermitian deviation tolerance");
  app.add_option("--tol-eq", o.tol_eq, "operator identity tolerance");
  app.add_option("--tol-rank", o.tol_rank, "relative rank cutoff");
  app.add_option("--tol-pd", o.tol_pd, "strict positivity threshold");
  app.add_option("--seed", o.seed, "seed for random sampling and generation");
  app.add_option("--format", o.format, "text or structured")->check(CLI::IsMember({"text", "structured"}));
  app.add_option("--out", o.out_path, "write the report to a file");

  const std::map<std::string, std::pair<std::string, Command>> commands{
      {"check-frame", {"certify the frame inequality for K", check_frame}},
      {"frame-operator", {"compute S_C", frame_operator_cmd}},
      {"bounds", {"optimal bounds with witnesses", bounds_cmd}},
      {"analysis", {"strict-mode synthesis/analysis factorization", analysis_cmd}},
      {"dual", {"canonical dual", dual_cmd}},
      {"k-construct", {"family with frame operator K S^-1 K*", k_construct_cmd}},
      {"transform", {"invertible transform by V", transform_cmd}},
      {"weaken", {"g-fusion frame to K-frame bounds", weaken_cmd}},
      {"restrict", {"bounds on the range of K", restrict_cmd}},
      {"douglas", {"transfer to V with R(V) in R(K)", douglas_cmd}},
      {"quotient", {"quotient operator boundedness", quotient_cmd}},
      {"equivalences", {"equivalence checks", equivalences_cmd}},
      {"pair-check", {"K-frame pair from composed synthesis", pair_check_cmd}},
      {"stability", {"dual stability bound", stability_cmd}},
      {"sweep", {"seeded property suites", sweep_cmd}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, entry] : commands) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    if (name != "sweep") sub->add_option("scenario", o.scenario, "scenario file")->required();
    subs[name] = sub;
  }
  subs["transform"]->add_flag("--inverse", o.inverse, "treat the scenario family as the V-image");
  subs["equivalences"]->add_option("--mode", o.mode, "quotient or controlled")
      ->check(CLI::IsMember({"quotient", "controlled"}));
  subs["restrict"]->add_option("--samples", o.samples, "random range vectors to check");
  subs["sweep"]->add_option("--suite", o.suite, "suite name or all");
  subs["sweep"]->add_option("--count", o.count, "instances per suite");

  CLI::App* gen = app.add_subcommand("gen", "emit a generated scenario");
  gen->add_option("spec", o.scenario, "file holding a generator spec");
  gen->add_option("--dim", o.dim);
  gen->add_option("--atoms", o.atoms);
  gen->add_option("--controller", o.controller);
  gen->add_option("--k-mode", o.k_mode);
  gen->add_option("--k-rank", o.k_rank);
  gen->add_option("--span-rank", o.span_rank);
  gen->add_option("--field", o.field);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return input_error;
  }
  o.seed_given = app.count("--seed") > 0;

  if (gen->parsed()) {
    try {
      const Scenario s = scenario_from_instance(generate(gen_spec_for(o)));
      const std::string text = scenario_to_json(s).dump(2) + "\n";
      if (o.out_path.empty()) {
        out << text;
      } else {
        std::ofstream f(o.out_path);
        if (!f) throw Error(ErrorCode::InputError, "cannot write '" + o.out_path + "'");
        f << text;
      }
      return ok;
    } catch (const Error& e) {
      err << e.what() << "\n";
      return code_for(e);
    }
  }

  std::string name;
  for (const auto& [n, sub] : subs) {
    if (sub->parsed()) name = n;
  }
  Tolerances tol;
  Json doc{{"command", name}, {"rng_version", std::string(Rng::kVersion)}, {"seed", o.seed}};
  int code = ok;
  try {
    tol = apply_overrides(tol, o);
    Outcome r = commands.at(name).second(o, tol);
    code = r.code;
    doc["result"] = std::move(r.result);
  } catch (const Error& e) {
    code = code_for(e);
    doc["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    err << e.what() << "\n";
  }
  if (o.scenario.size() > 0) doc["scenario"] = o.scenario;
  doc["exit_code"] = code;
  doc["status"] = status_for(code);
  doc["tolerances"] = tolerances_to_json(tol);
  try {
    emit(doc, o.format, o, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return input_error;
  }
  return code;
}

}  // namespace ckgf::cli
