#include <doctest.h>

#include "test_helpers.hpp"
#include "vnf/json_io.hpp"

using namespace vnf;

TEST_CASE("complex matrices round-trip bit for bit") {
  Rng rng(61);
  const ComplexMatrix m = random_gaussian(3, 3, rng);
  const Json j = matrix_to_json(m);
  const ComplexMatrix back = matrix_from_json(j);
  CHECK((back - m).norm() == 0.0);
  // And the serialized form itself is stable.
  CHECK(matrix_to_json(back).dump() == j.dump());
}

TEST_CASE("awkward doubles survive the round trip") {
  for (const double x : {1.0 / 3.0, 1e-15, 6.02e23, -0.1, 1.0 + 1e-15}) {
    const Json j = x;
    const double back = Json::parse(j.dump()).get<double>();
    CHECK(back == x);
  }
}

TEST_CASE("hvector and superoperator formats carry the dimension") {
  Rng rng(67);
  const HVector u{random_gaussian(2, 2, rng)};
  const HVector u2 = hvector_from_json(hvector_to_json(u));
  CHECK((u2.mat - u.mat).norm() == 0.0);

  const SuperOperator s{2, random_gaussian(4, 4, rng)};
  const SuperOperator s2 = superop_from_json(superop_to_json(s));
  CHECK(s2.n == 2);
  CHECK((s2.smat - s.smat).norm() == 0.0);

  Json bad = superop_to_json(s);
  bad["n"] = 3;
  CHECK_THROWS_AS(superop_from_json(bad), InvalidInput);
}

TEST_CASE("spectral data serializes exact fractions as strings") {
  SpectralData d;
  d.ftype = FactorType::type_I(3);
  d.pairs = {{0.75, Mult::fraction(2, 3)}, {1.5, Mult::fraction(1, 3)}};
  const Json j = spectral_data_to_json(d);
  CHECK(j["ftype"] == "I_N");
  CHECK(j["n"] == 3);
  CHECK(j["pairs"][0]["m"] == "2/3");

  const SpectralData back = spectral_data_from_json(j);
  CHECK(back.ftype == FactorType::type_I(3));
  CHECK(back.pairs[0].m.same_as(Mult::fraction(2, 3), 0));
  CHECK(back.pairs[0].mu == 0.75);
}

TEST_CASE("type II_1 data accepts both fraction strings and floats") {
  const Json j = Json::parse(R"({
    "ftype": "II_1",
    "pairs": [{"mu": 0.75, "m": "2/3"}, {"mu": 1.5, "m": 0.3333333333333333}]
  })");
  const SpectralData d = spectral_data_from_json(j);
  CHECK(d.ftype == FactorType::type_II1());
  CHECK(d.pairs[0].m.exact());
  CHECK_FALSE(d.pairs[1].m.exact());
}

TEST_CASE("delta spectra carry the infinite marker") {
  DeltaSpectrum s;
  s.pairs = {{0.5, {}, true}, {1.0, {}, true}, {2.0, {}, true}};
  const Json j = delta_spectrum_to_json(s);
  CHECK(j["pairs"][0]["n"] == "infinite");
  const DeltaSpectrum back = delta_spectrum_from_json(j);
  CHECK(back.pairs[0].infinite);

  DeltaSpectrum fin;
  fin.pairs = {{1.0, Mult::fraction(1, 2), false},
               {3.0, Mult::fraction(1, 4), false},
               {1.0 / 3.0, Mult::fraction(1, 4), false}};
  const DeltaSpectrum fback = delta_spectrum_from_json(delta_spectrum_to_json(fin));
  CHECK(fback.pairs[0].n.same_as(Mult::fraction(1, 2), 0));
  CHECK_FALSE(fback.pairs[0].infinite);
}

TEST_CASE("factor type strings parse strictly") {
  CHECK(ftype_from_string("I_3") == FactorType::type_I(3));
  CHECK(ftype_from_string("II_1") == FactorType::type_II1());
  CHECK_THROWS_AS(ftype_from_string("I_0"), InvalidInput);
  CHECK_THROWS_AS(ftype_from_string("III"), InvalidInput);
  CHECK_THROWS_AS(ftype_from_string("I_N"), InvalidInput);
}

TEST_CASE("certificates serialize with their tolerances and seed") {
  const FactorModel m = make_model(2);
  Rng rng(71);
  const HVector u0 = vnftest::random_cs_vector(m, rng);
  const SolutionCertificate c =
      build_solution(m, u0, spectral_data_of_vector(m, u0).data, 5);
  const Json j = certificate_to_json(c);
  CHECK(j["pass"] == true);
  CHECK(j["seed"] == 5);
  CHECK(j["tolerances"]["eq_tol"] == m.tol.eq_tol);
  CHECK(j["residuals"].contains("modular_match"));
  CHECK(j["residuals"].contains("vector_sign"));
  // The embedded unitary parses back to the same matrix.
  const SuperOperator u = superop_from_json(j["unitary"]);
  CHECK((u.smat - c.unitary.smat).norm() == 0.0);
}
