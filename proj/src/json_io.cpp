#include "vnf/json_io.hpp"

#include <charconv>

namespace vnf {

Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2)
    throw InvalidInput("complex number must be a [re, im] pair");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("matrix must be a nested array");
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j[0].size());
  ComplexMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    if (static_cast<Index>(j[r].size()) != cols)
      throw InvalidInput("matrix rows have inconsistent lengths");
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[r][c]);
  }
  if (!all_finite(m)) throw InvalidInput("matrix has non-finite entries");
  return m;
}

namespace {

ComplexMatrix square_from_json(const Json& j, const char* key, Index expect) {
  if (!j.contains(key)) throw InvalidInput(std::string("missing key: ") + key);
  const ComplexMatrix m = matrix_from_json(j.at(key));
  if (m.rows() != expect || m.cols() != expect)
    throw InvalidInput(std::string(key) + " has wrong shape");
  return m;
}

Index n_from_json(const Json& j) {
  if (!j.contains("n")) throw InvalidInput("missing key: n");
  const Index n = j.at("n").get<Index>();
  if (n < 1) throw InvalidInput("n must be >= 1");
  return n;
}

}  // namespace

Json hvector_to_json(const HVector& v) {
  Json j;
  j["n"] = v.mat.rows();
  j["mat"] = matrix_to_json(v.mat);
  return j;
}

HVector hvector_from_json(const Json& j) {
  const Index n = n_from_json(j);
  return HVector{square_from_json(j, "mat", n)};
}

Json superop_to_json(const SuperOperator& s) {
  Json j;
  j["n"] = s.n;
  j["smat"] = matrix_to_json(s.smat);
  return j;
}

SuperOperator superop_from_json(const Json& j) {
  const Index n = n_from_json(j);
  return SuperOperator{n, square_from_json(j, "smat", n * n)};
}

Json antilinear_to_json(const AntilinearOp& a) {
  Json j;
  j["n"] = a.n;
  j["cmat"] = matrix_to_json(a.cmat);
  return j;
}

AntilinearOp antilinear_from_json(const Json& j) {
  const Index n = n_from_json(j);
  return AntilinearOp{n, square_from_json(j, "cmat", n * n)};
}

//==============================================================================
// Spectral data
//==============================================================================

Json mult_to_json(const Mult& m) {
  if (m.exact()) return m.str();
  return m.value();
}

Mult mult_from_json(const Json& j) {
  if (j.is_number()) return Mult::real(j.get<double>());
  if (!j.is_string()) throw InvalidInput("multiplicity must be a number or fraction string");
  const std::string s = j.get<std::string>();
  const auto slash = s.find('/');
  std::int64_t num = 0, den = 1;
  const char* begin = s.data();
  const char* end = s.data() + (slash == std::string::npos ? s.size() : slash);
  auto r1 = std::from_chars(begin, end, num);
  if (r1.ec != std::errc{} || r1.ptr != end)
    throw InvalidInput("bad fraction string: " + s);
  if (slash != std::string::npos) {
    const char* dbegin = s.data() + slash + 1;
    const char* dend = s.data() + s.size();
    auto r2 = std::from_chars(dbegin, dend, den);
    if (r2.ec != std::errc{} || r2.ptr != dend || den == 0)
      throw InvalidInput("bad fraction string: " + s);
  }
  return Mult::fraction(num, den);
}

Json spectral_data_to_json(const SpectralData& d) {
  Json j;
  j["ftype"] = d.ftype.kind == FactorType::Kind::type_ii1 ? "II_1" : "I_N";
  if (d.ftype.kind == FactorType::Kind::type_i) j["n"] = d.ftype.n;
  Json pairs = Json::array();
  for (const SpectralPair& p : d.pairs) {
    Json jp;
    jp["mu"] = p.mu;
    jp["m"] = mult_to_json(p.m);
    pairs.push_back(std::move(jp));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

SpectralData spectral_data_from_json(const Json& j) {
  SpectralData d;
  const std::string ft = j.at("ftype").get<std::string>();
  if (ft == "II_1") {
    d.ftype = FactorType::type_II1();
  } else if (ft == "I_N") {
    d.ftype = FactorType::type_I(n_from_json(j));
  } else {
    d.ftype = ftype_from_string(ft);
  }
  for (const Json& jp : j.at("pairs")) {
    SpectralPair p;
    p.mu = jp.at("mu").get<double>();
    p.m = mult_from_json(jp.at("m"));
    d.pairs.push_back(std::move(p));
  }
  return d;
}

FactorType ftype_from_string(const std::string& s) {
  if (s == "II_1") return FactorType::type_II1();
  if (s.rfind("I_", 0) == 0 && s != "I_N") {
    Index n = 0;
    const char* begin = s.data() + 2;
    const char* end = s.data() + s.size();
    auto r = std::from_chars(begin, end, n);
    if (r.ec == std::errc{} && r.ptr == end && n >= 1)
      return FactorType::type_I(n);
  }
  throw InvalidInput("bad factor type: " + s + " (expected I_<N> or II_1)");
}

Json delta_spectrum_to_json(const DeltaSpectrum& s) {
  Json pairs = Json::array();
  for (const DeltaPair& p : s.pairs) {
    Json jp;
    jp["lambda"] = p.lambda;
    if (p.infinite)
      jp["n"] = "infinite";
    else
      jp["n"] = mult_to_json(p.n);
    pairs.push_back(std::move(jp));
  }
  Json j;
  j["pairs"] = std::move(pairs);
  return j;
}

DeltaSpectrum delta_spectrum_from_json(const Json& j) {
  DeltaSpectrum s;
  for (const Json& jp : j.at("pairs")) {
    DeltaPair p;
    p.lambda = jp.at("lambda").get<double>();
    const Json& n = jp.at("n");
    if (n.is_string() && n.get<std::string>() == "infinite")
      p.infinite = true;
    else
      p.n = mult_from_json(n);
    s.pairs.push_back(std::move(p));
  }
  return s;
}

//==============================================================================
// Reports
//==============================================================================

Json tolerances_to_json(const Tolerances& t) {
  Json j;
  j["eq_tol"] = t.eq_tol;
  j["spec_tol"] = t.spec_tol;
  return j;
}

Json classification_to_json(const VectorClassification& c) {
  Json j;
  j["cyclic"] = c.cyclic;
  j["separating"] = c.separating;
  j["borderline"] = c.borderline;
  j["sigma_min"] = c.sigma_min;
  j["threshold"] = c.threshold;
  j["cyclic_dims"] = Json{{"left", c.left_dim}, {"right", c.right_dim}};
  return j;
}

Json violations_to_json(const std::vector<Violation>& v) {
  Json arr = Json::array();
  for (const Violation& item : v) {
    Json j;
    switch (item.kind) {
      case Violation::Kind::positivity: j["kind"] = "positivity"; break;
      case Violation::Kind::distinctness: j["kind"] = "distinctness"; break;
      case Violation::Kind::multiplicity_range:
        j["kind"] = "multiplicity_range";
        break;
      case Violation::Kind::multiplicity_sum:
        j["kind"] = "multiplicity_sum";
        break;
      case Violation::Kind::normalization: j["kind"] = "normalization"; break;
    }
    j["what"] = item.what;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json modular_objects_to_json(const ModularObjects& mo) {
  Json j;
  j["delta"] = superop_to_json(mo.delta);
  j["j0"] = antilinear_to_json(mo.j0);
  j["h0"] = matrix_to_json(mo.h0.mat);
  j["v"] = matrix_to_json(mo.v.mat);
  return j;
}

Json identity_report_to_json(const ModularIdentityReport& r) {
  Json j;
  j["inverse_conjugation"] = r.inverse_conjugation;
  j["fixes_vector"] = r.fixes_vector;
  j["j_fixes_vector"] = r.j_fixes_vector;
  j["algebra_invariance"] = r.algebra_invariance;
  j["max"] = r.max();
  return j;
}

Json factorization_to_json(const DeltaFactorization& f) {
  Json j;
  j["h"] = matrix_to_json(f.h.mat);
  j["h_prime"] = matrix_to_json(f.h_prime.mat);
  j["residual"] = f.c_residual;
  return j;
}

Json certificate_to_json(const SolutionCertificate& c) {
  Json j;
  j["pass"] = c.pass();
  Json residuals;
  residuals["algebra_conj"] = c.algebra_conj;
  residuals["cyclic_sep"] = c.cyclic_sep;
  residuals["modular_match"] = c.modular_match;
  residuals["j_commute"] = c.j_commute;
  residuals["vector_sign"] = c.vector_sign;
  j["residuals"] = std::move(residuals);
  j["sign"] = c.sign;
  j["sigma_min"] = c.sigma_min;
  j["data"] = spectral_data_to_json(c.data);
  j["u_solution"] = hvector_to_json(c.u_solution);
  j["unitary"] = superop_to_json(c.unitary);
  j["seed"] = c.seed;
  j["tolerances"] = tolerances_to_json(c.tol);
  return j;
}

Json second_class_to_json(const SecondClassResult& r) {
  Json j;
  j["u1"] = hvector_to_json(r.u1);
  j["u1_op"] = superop_to_json(r.u1_op);
  j["tr_h0_inv"] = r.tr_h0_inv;
  Json residuals;
  residuals["oracle_delta"] = r.oracle_delta;
  residuals["oracle_j"] = r.oracle_j;
  residuals["delta_inverted"] = r.delta_inverted;
  residuals["j_commute"] = r.j_commute;
  residuals["fixes_u0"] = r.fixes_u0;
  residuals["fixes_u1"] = r.fixes_u1;
  residuals["i_residual"] = r.i_residual;
  residuals["max"] = r.max_residual();
  j["residuals"] = std::move(residuals);
  return j;
}

Json equivalence_to_json(const EquivalenceResult& r) {
  Json j;
  j["equivalent"] = r.equivalent;
  j["has_witness"] = r.witness.has_value();
  if (r.witness) {
    j["witness"] = superop_to_json(*r.witness);
    j["witness_residual"] = r.witness_residual;
  }
  return j;
}

Json enumeration_to_json(const Enumeration& e) {
  Json j;
  j["complete"] = e.complete;
  Json classes = Json::array();
  for (const SpectralData& d : e.classes)
    classes.push_back(spectral_data_to_json(d));
  j["classes"] = std::move(classes);
  return j;
}

Json variant_to_json(const Variant& v) {
  Json j;
  j["data"] = spectral_data_to_json(v.data);
  j["equivalent"] = v.equivalent;
  j["compatible"] = v.compatible;
  return j;
}

}  // namespace vnf
