// Command-line front end: every pipeline stage with JSON files in and out,
// deterministic seeds, machine-readable certificates.
//
// Exit codes: 0 success / PASS, 1 verification FAIL, 2 invalid input.
// Diagnostics go to standard error as JSON lines.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vnf/json_io.hpp"

namespace {

using vnf::Json;

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw vnf::InvalidInput("cannot open file: " + path);
  Json j;
  in >> j;
  return j;
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

void diagnose(const char* kind, const std::string& message) {
  Json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

struct Options {
  double eq_tol = 1e-9;
  double spec_tol = 1e-8;
  vnf::Tolerances tolerances() const { return {eq_tol, spec_tol}; }
  vnf::FactorModel model_for(vnf::Index n) const {
    return vnf::make_model(n, tolerances());
  }
};

int run(int argc, char** argv) {
  CLI::App app{"finite type I_N factors in standard form: modular objects, "
               "spectral classes, and inverse-problem certificates"};
  app.require_subcommand(1);

  Options opt;
  app.add_option("--tol", opt.eq_tol, "relative tolerance for residual checks");
  app.add_option("--spec-tol", opt.spec_tol,
                 "relative tolerance for eigenvalue clustering");

  // model info
  auto* model_cmd = app.add_subcommand("model", "model constants");
  auto* model_info = model_cmd->add_subcommand("info", "trace vector and normalization");
  vnf::Index info_n = 2;
  model_info->add_option("--n", info_n, "matrix dimension")->required();

  // vector classify
  auto* vector_cmd = app.add_subcommand("vector", "vector classification");
  auto* vec_classify = vector_cmd->add_subcommand("classify", "cyclic/separating report");
  std::string vec_in;
  vec_classify->add_option("--in", vec_in, "HVector JSON file")->required();

  // modular compute
  auto* modular_cmd = app.add_subcommand("modular", "modular objects");
  auto* mod_compute = modular_cmd->add_subcommand("compute", "delta, J0, H0, V");
  std::string mod_in;
  bool mod_oracle = false;
  mod_compute->add_option("--in", mod_in, "HVector JSON file")->required();
  mod_compute->add_flag("--oracle", mod_oracle, "cross-check against the Tomita oracle");

  // delta factorize
  auto* delta_cmd = app.add_subcommand("delta", "modular operator factorization");
  auto* delta_fact = delta_cmd->add_subcommand("factorize", "split into L_H R_H'");
  std::string delta_in;
  delta_fact->add_option("--in", delta_in, "SuperOperator JSON file")->required();

  // classes ...
  auto* classes_cmd = app.add_subcommand("classes", "spectral class operations");
  std::string cls_in, cls_a, cls_b, cls_target, cls_ftype, cls_spec;
  vnf::Index cls_max_k = 0;
  auto* cls_validate = classes_cmd->add_subcommand("validate", "check the admissibility constraints");
  cls_validate->add_option("--in", cls_in, "SpectralData JSON file")->required();
  auto* cls_normalize = classes_cmd->add_subcommand("normalize", "rescale to unit weighted sum");
  cls_normalize->add_option("--in", cls_in, "SpectralData JSON file")->required();
  auto* cls_dual = classes_cmd->add_subcommand("dual", "inverted-eigenvalue data");
  cls_dual->add_option("--in", cls_in, "SpectralData JSON file")->required();
  auto* cls_spectrum = classes_cmd->add_subcommand("spectrum", "induced Delta spectrum");
  cls_spectrum->add_option("--in", cls_in, "SpectralData JSON file")->required();
  auto* cls_equivalent = classes_cmd->add_subcommand("equivalent", "compare two data sets");
  cls_equivalent->add_option("--a", cls_a, "first SpectralData file")->required();
  cls_equivalent->add_option("--b", cls_b, "second SpectralData file")->required();
  auto* cls_enumerate = classes_cmd->add_subcommand("enumerate", "all classes for a target spectrum");
  cls_enumerate->add_option("--target", cls_target, "DeltaSpectrum JSON file")->required();
  cls_enumerate->add_option("--ftype", cls_ftype, "factor type, e.g. I_3")->required();
  cls_enumerate->add_option("--max-k", cls_max_k, "bound on distinct eigenvalues");
  auto* cls_variants = classes_cmd->add_subcommand("variants", "type II_1 variant data");
  cls_variants->add_option("--in", cls_in, "SpectralData JSON file")->required();
  cls_variants->add_option("--spec", cls_spec, "VariantSpec JSON file")->required();

  // solve ...
  auto* solve_cmd = app.add_subcommand("solve", "inverse-problem solutions");
  std::string sol_u0, sol_data, sol_unitary, sol_ua, sol_ub;
  std::uint64_t sol_seed = 0;
  auto* sol_build = solve_cmd->add_subcommand("build", "construct a solution from data");
  sol_build->add_option("--u0", sol_u0, "HVector JSON file")->required();
  sol_build->add_option("--data", sol_data, "SpectralData JSON file")->required();
  sol_build->add_option("--seed", sol_seed, "seed for the intertwiner mixing");
  auto* sol_verify = solve_cmd->add_subcommand("verify", "certify a given unitary");
  sol_verify->add_option("--u0", sol_u0, "HVector JSON file")->required();
  sol_verify->add_option("--unitary", sol_unitary, "SuperOperator JSON file")->required();
  auto* sol_second = solve_cmd->add_subcommand("second-class", "dual vector and U1");
  sol_second->add_option("--u0", sol_u0, "HVector JSON file")->required();
  auto* sol_equiv = solve_cmd->add_subcommand("equivalent", "compare two solutions");
  sol_equiv->add_option("--u0", sol_u0, "HVector JSON file")->required();
  sol_equiv->add_option("--ua", sol_ua, "first unitary JSON file")->required();
  sol_equiv->add_option("--ub", sol_ub, "second unitary JSON file")->required();

  CLI11_PARSE(app, argc, argv);
  const vnf::Tolerances tol = opt.tolerances();
  tol.validate();

  if (model_info->parsed()) {
    const vnf::FactorModel model = opt.model_for(info_n);
    Json j;
    j["n"] = model.n;
    j["u_tr"] = vnf::matrix_to_json(model.u_tr());
    j["trace_normalization"] = 1.0 / static_cast<double>(model.n);
    j["u_tr_norm"] = model.norm(model.u_tr());
    j["tolerances"] = vnf::tolerances_to_json(model.tol);
    emit(j);
    return 0;
  }

  if (vec_classify->parsed()) {
    const vnf::HVector u = vnf::hvector_from_json(read_json(vec_in));
    const vnf::FactorModel model = opt.model_for(u.mat.rows());
    emit(vnf::classification_to_json(vnf::classify_vector(model, u)));
    return 0;
  }

  if (mod_compute->parsed()) {
    const vnf::HVector u = vnf::hvector_from_json(read_json(mod_in));
    const vnf::FactorModel model = opt.model_for(u.mat.rows());
    const vnf::ModularObjects mo = vnf::modular_from_vector(model, u);
    Json j = vnf::modular_objects_to_json(mo);
    j["identities"] =
        vnf::identity_report_to_json(vnf::check_modular_identities(model, mo, u));
    if (mod_oracle) {
      const vnf::TomitaPair oracle = vnf::tomita_oracle(model, u);
      Json o;
      o["delta"] = vnf::rel_residual(oracle.delta.smat, mo.delta.smat);
      o["j0"] = vnf::rel_residual(oracle.j0.cmat, mo.j0.cmat);
      j["oracle_residual"] = std::move(o);
    }
    j["tolerances"] = vnf::tolerances_to_json(model.tol);
    emit(j);
    return 0;
  }

  if (delta_fact->parsed()) {
    const vnf::SuperOperator s = vnf::superop_from_json(read_json(delta_in));
    const vnf::FactorModel model = opt.model_for(s.n);
    emit(vnf::factorization_to_json(vnf::factorize_delta(model, s)));
    return 0;
  }

  if (cls_validate->parsed()) {
    const vnf::SpectralData d = vnf::spectral_data_from_json(read_json(cls_in));
    const auto violations = vnf::validate_data(d, tol);
    Json j;
    j["ok"] = violations.empty();
    j["violations"] = vnf::violations_to_json(violations);
    emit(j);
    return violations.empty() ? 0 : 1;
  }

  if (cls_normalize->parsed()) {
    const vnf::SpectralData d = vnf::spectral_data_from_json(read_json(cls_in));
    const vnf::NormalizedData nd = vnf::normalize_data(d, tol);
    Json j;
    j["c"] = nd.c;
    j["data"] = vnf::spectral_data_to_json(nd.data);
    emit(j);
    return 0;
  }

  if (cls_dual->parsed()) {
    const vnf::SpectralData d = vnf::spectral_data_from_json(read_json(cls_in));
    Json j;
    j["data"] = vnf::spectral_data_to_json(vnf::dual_data(d, tol));
    j["self_dual"] = vnf::is_self_dual(d, tol);
    emit(j);
    return 0;
  }

  if (cls_spectrum->parsed()) {
    const vnf::SpectralData d = vnf::spectral_data_from_json(read_json(cls_in));
    emit(vnf::delta_spectrum_to_json(vnf::induced_delta_spectrum(d, tol)));
    return 0;
  }

  if (cls_equivalent->parsed()) {
    const vnf::SpectralData a = vnf::spectral_data_from_json(read_json(cls_a));
    const vnf::SpectralData b = vnf::spectral_data_from_json(read_json(cls_b));
    Json j;
    j["equivalent"] = vnf::data_equivalent(a, b, tol);
    emit(j);
    return 0;
  }

  if (cls_enumerate->parsed()) {
    const vnf::DeltaSpectrum target =
        vnf::delta_spectrum_from_json(read_json(cls_target));
    const vnf::FactorType ftype = vnf::ftype_from_string(cls_ftype);
    emit(vnf::enumeration_to_json(
        vnf::enumerate_classes(target, ftype, cls_max_k, tol)));
    return 0;
  }

  if (cls_variants->parsed()) {
    const vnf::SpectralData d = vnf::spectral_data_from_json(read_json(cls_in));
    const Json js = read_json(cls_spec);
    vnf::VariantSpec spec;
    const std::string kind = js.at("kind").get<std::string>();
    if (kind == "permutation") {
      spec.kind = vnf::VariantSpec::Kind::permutation;
      for (const Json& s : js.at("sigma")) spec.sigma.push_back(s.get<vnf::Index>());
    } else if (kind == "epsilon_shift") {
      spec.kind = vnf::VariantSpec::Kind::epsilon_shift;
      spec.k = js.at("k").get<vnf::Index>();
      spec.l = js.at("l").get<vnf::Index>();
      spec.epsilon = js.at("epsilon").get<double>();
    } else {
      throw vnf::InvalidInput("variant kind must be permutation or epsilon_shift");
    }
    emit(vnf::variant_to_json(vnf::derive_variants(d, spec, tol)));
    return 0;
  }

  if (sol_build->parsed()) {
    const vnf::HVector u0 = vnf::hvector_from_json(read_json(sol_u0));
    const vnf::FactorModel model = opt.model_for(u0.mat.rows());
    const vnf::SpectralData d = vnf::spectral_data_from_json(read_json(sol_data));
    const vnf::SolutionCertificate cert =
        vnf::build_solution(model, u0, d, sol_seed);
    emit(vnf::certificate_to_json(cert));
    return cert.pass() ? 0 : 1;
  }

  if (sol_verify->parsed()) {
    const vnf::HVector u0 = vnf::hvector_from_json(read_json(sol_u0));
    const vnf::FactorModel model = opt.model_for(u0.mat.rows());
    const vnf::SuperOperator u_op = vnf::superop_from_json(read_json(sol_unitary));
    const vnf::SolutionCertificate cert = vnf::verify_solution(model, u0, u_op);
    emit(vnf::certificate_to_json(cert));
    return cert.pass() ? 0 : 1;
  }

  if (sol_second->parsed()) {
    const vnf::HVector u0 = vnf::hvector_from_json(read_json(sol_u0));
    const vnf::FactorModel model = opt.model_for(u0.mat.rows());
    const vnf::SecondClassResult r = vnf::build_second_class(model, u0);
    Json j = vnf::second_class_to_json(r);
    const bool pass = r.max_residual() <= model.tol.eq_tol;
    j["pass"] = pass;
    j["tolerances"] = vnf::tolerances_to_json(model.tol);
    emit(j);
    return pass ? 0 : 1;
  }

  if (sol_equiv->parsed()) {
    const vnf::HVector u0 = vnf::hvector_from_json(read_json(sol_u0));
    const vnf::FactorModel model = opt.model_for(u0.mat.rows());
    const vnf::SuperOperator ua = vnf::superop_from_json(read_json(sol_ua));
    const vnf::SuperOperator ub = vnf::superop_from_json(read_json(sol_ub));
    emit(vnf::equivalence_to_json(vnf::solutions_equivalent(model, u0, ua, ub)));
    return 0;
  }

  diagnose("Usage", "no subcommand matched");
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const vnf::InvalidInput& e) {
    diagnose("InvalidInput", e.what());
    return 2;
  } catch (const vnf::NotInvertible& e) {
    diagnose("NotInvertible", e.what());
    return 2;
  } catch (const vnf::NotAModularShape& e) {
    diagnose("NotAModularShape", e.what());
    return 2;
  } catch (const vnf::NotIntertwinable& e) {
    diagnose("NotIntertwinable", e.what());
    return 2;
  } catch (const vnf::PreconditionFailed& e) {
    diagnose("PreconditionFailed", e.what());
    return 2;
  } catch (const vnf::ConstructionFailed& e) {
    diagnose("ConstructionFailed", e.what());
    return 1;
  } catch (const nlohmann::json::exception& e) {
    diagnose("InvalidInput", e.what());
    return 2;
  } catch (const std::exception& e) {
    diagnose("Error", e.what());
    return 1;
  }
}
