#include <doctest.h>

#include "test_helpers.hpp"

using namespace vnf;
using vnftest::matrix_unit;
using vnftest::nf1_unitary;
using vnftest::random_cs_vector;
using vnftest::vector_with_data;

namespace {

const Tolerances kTol{};

SpectralData n3_data() {
  SpectralData d;
  d.ftype = FactorType::type_I(3);
  d.pairs = {{0.75, Mult::fraction(2, 3)}, {1.5, Mult::fraction(1, 3)}};
  return d;
}

SpectralData n2_data() {
  SpectralData d;
  d.ftype = FactorType::type_I(2);
  d.pairs = {{1.5, Mult::fraction(1, 2)}, {0.5, Mult::fraction(1, 2)}};
  return d;
}

}  // namespace

TEST_CASE("spectral_data_of_vector clusters the generator") {
  const FactorModel m = make_model(2);
  SUBCASE("trace vector") {
    const VectorSpectralData v = spectral_data_of_vector(m, HVector{m.u_tr()});
    REQUIRE(v.data.pairs.size() == 1);
    CHECK(v.data.pairs[0].mu == doctest::Approx(1.0));
    CHECK(v.data.pairs[0].m.same_as(Mult::fraction(1, 1), 0));
    CHECK(v.scale == doctest::Approx(1.0));
  }
  SUBCASE("diagonal vector") {
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = std::sqrt(1.5);
    d(1, 1) = std::sqrt(0.5);
    const VectorSpectralData v = spectral_data_of_vector(m, HVector{d});
    REQUIRE(v.data.pairs.size() == 2);
    CHECK(v.data.pairs[0].mu == doctest::Approx(1.5));
    CHECK(v.data.pairs[0].m.same_as(Mult::fraction(1, 2), 0));
    CHECK(v.data.pairs[1].mu == doctest::Approx(0.5));
  }
  SUBCASE("the right polar factor is irrelevant") {
    Rng rng(5);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = std::sqrt(1.5);
    d(1, 1) = std::sqrt(0.5);
    const ComplexMatrix v = random_unitary(2, rng);
    const VectorSpectralData a = spectral_data_of_vector(m, HVector{d});
    const VectorSpectralData b = spectral_data_of_vector(m, HVector{d * v});
    CHECK(data_equivalent(a.data, b.data, m.tol));
  }
  SUBCASE("singular vectors are rejected") {
    CHECK_THROWS_AS(spectral_data_of_vector(m, HVector{matrix_unit(2, 0, 0)}),
                    NotInvertible);
  }
}

TEST_CASE("projections_with_traces builds consecutive diagonal blocks") {
  SUBCASE("two halves") {
    const FactorModel m = make_model(2);
    const ProjectionFamily f = projections_with_traces(
        m, {Mult::fraction(1, 2), Mult::fraction(1, 2)});
    REQUIRE(f.projections.size() == 2);
    CHECK((f.projections[0].mat - matrix_unit(2, 0, 0)).norm() == 0.0);
    CHECK((f.projections[1].mat - matrix_unit(2, 1, 1)).norm() == 0.0);
  }
  SUBCASE("two thirds plus one third") {
    const FactorModel m = make_model(3);
    const ProjectionFamily f = projections_with_traces(
        m, {Mult::fraction(2, 3), Mult::fraction(1, 3)});
    ComplexMatrix first = ComplexMatrix::Zero(3, 3);
    first(0, 0) = first(1, 1) = 1.0;
    CHECK((f.projections[0].mat - first).norm() == 0.0);
  }
  SUBCASE("block sizes 2,1,1 in dimension four") {
    const FactorModel m = make_model(4);
    const ProjectionFamily f = projections_with_traces(
        m,
        {Mult::fraction(1, 2), Mult::fraction(1, 4), Mult::fraction(1, 4)});
    CHECK(f.projections[0].mat.trace().real() == doctest::Approx(2.0));
    CHECK(f.projections[1].mat.trace().real() == doctest::Approx(1.0));
    // Pairwise orthogonal and summing to the identity.
    ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
    for (const FactorElement& e : f.projections) sum += e.mat;
    CHECK((sum - m.u_tr()).norm() == 0.0);
    CHECK(op_norm(f.projections[0].mat * f.projections[1].mat) == 0.0);
  }
  SUBCASE("inadmissible lists are rejected") {
    const FactorModel m = make_model(2);
    CHECK_THROWS_AS(
        projections_with_traces(m, {Mult::fraction(1, 3), Mult::fraction(2, 3)}),
        InvalidInput);
    CHECK_THROWS_AS(projections_with_traces(m, {Mult::fraction(1, 2)}),
                    InvalidInput);
  }
}

TEST_CASE("build_H_from_data realizes the data on the diagonal") {
  SUBCASE("trivial data") {
    const FactorModel m = make_model(3);
    SpectralData d;
    d.ftype = FactorType::type_I(3);
    d.pairs = {{1.0, Mult::fraction(1, 1)}};
    CHECK((build_H_from_data(m, d).mat - m.u_tr()).norm() == 0.0);
  }
  SUBCASE("two-point data in the listed order") {
    const FactorModel m = make_model(2);
    const FactorElement h = build_H_from_data(m, n2_data());
    CHECK(h.mat(0, 0).real() == doctest::Approx(1.5));
    CHECK(h.mat(1, 1).real() == doctest::Approx(0.5));
  }
  SUBCASE("the uneven three-dimensional data") {
    const FactorModel m = make_model(3);
    const FactorElement h = build_H_from_data(m, n3_data());
    CHECK(h.mat(0, 0).real() == doctest::Approx(0.75));
    CHECK(h.mat(1, 1).real() == doctest::Approx(0.75));
    CHECK(h.mat(2, 2).real() == doctest::Approx(1.5));
    CHECK(m.tr(h.mat).real() == doctest::Approx(1.0));
  }
  SUBCASE("unnormalized data is rejected") {
    const FactorModel m = make_model(2);
    SpectralData d = n2_data();
    for (SpectralPair& p : d.pairs) p.mu *= 2.0;
    CHECK_THROWS_AS(build_H_from_data(m, d), InvalidInput);
  }
}

TEST_CASE("jreal_basis spans the fixed subspace of a conjugation") {
  const FactorModel m = make_model(3);
  const AntilinearOp j = trace_conjugation(m);
  const ComplexMatrix full = ComplexMatrix::Identity(9, 9);
  const ComplexMatrix f = jreal_basis(full, j);
  REQUIRE(f.cols() == 9);
  for (Index c = 0; c < 9; ++c) {
    const ComplexVector v = f.col(c);
    CHECK((j.apply_vec(v) - v).norm() < 1e-10);  // fixed vectors
  }
  CHECK(op_norm(f.adjoint() * f - ComplexMatrix::Identity(9, 9)) < 1e-10);
}

TEST_CASE("jcompatible_intertwiner carries one delta to the other") {
  const FactorModel m = make_model(3);
  Rng rng(42);
  const SpectralData d = n3_data();
  const HVector ua = vector_with_data(m, d, rng);
  const HVector ub = vector_with_data(m, d, rng);
  const ModularObjects ma = modular_from_vector(m, ua);
  const ModularObjects mb = modular_from_vector(m, ub);

  SUBCASE("same delta, no mixing") {
    const SuperOperator w =
        jcompatible_intertwiner(m, ma.delta, ma.delta, ma.j0, nullptr);
    CHECK(rel_residual(w.smat * ma.delta.smat * w.smat.adjoint(),
                       ma.delta.smat) < 1e-9);
    CHECK(op_norm(w.smat * ma.j0.cmat - ma.j0.cmat * w.smat.conjugate()) <
          1e-9);
  }
  SUBCASE("between two realizations of the same class") {
    // Same data, hence equal spectra; the conjugations must agree for the
    // intertwiner hypotheses, so use the shared-polar construction.
    const ComplexMatrix h2 = build_H_from_data(m, dual_data(d, m.tol)).mat;
    const HVector u2{herm_power(h2, 0.5) * ma.v.mat};
    const ModularObjects m2 = modular_from_vector(m, u2);
    CHECK(rel_residual(m2.j0.cmat, ma.j0.cmat) < 1e-9);
    Rng mix(9);
    const SuperOperator w =
        jcompatible_intertwiner(m, ma.delta, m2.delta, ma.j0, &mix);
    CHECK(rel_residual(w.smat * ma.delta.smat * w.smat.adjoint(),
                       m2.delta.smat) < 1e-9);
    CHECK(op_norm(w.smat * ma.j0.cmat - ma.j0.cmat * w.smat.conjugate()) <
          1e-9);
    CHECK(op_norm(w.smat.adjoint() * w.smat - ComplexMatrix::Identity(9, 9)) <
          1e-9);
  }
  SUBCASE("mismatched spectra are refused") {
    const FactorModel m2 = make_model(2);
    ComplexMatrix h1 = ComplexMatrix::Zero(2, 2);
    h1(0, 0) = 1.5;
    h1(1, 1) = 0.5;  // ratios {1, 3, 1/3}
    ComplexMatrix h2 = ComplexMatrix::Zero(2, 2);
    h2(0, 0) = 1.6;
    h2(1, 1) = 0.4;  // ratios {1, 4, 1/4}
    const HVector v1{herm_power(h1, 0.5)};
    const HVector v2{herm_power(h2, 0.5)};
    const ModularObjects o1 = modular_from_vector(m2, v1);
    const ModularObjects o2 = modular_from_vector(m2, v2);
    CHECK_THROWS_AS(
        jcompatible_intertwiner(m2, o1.delta, o2.delta, o1.j0, nullptr),
        NotIntertwinable);
  }
  (void)mb;
}

TEST_CASE("rotation_in_fixed_space moves fixed vectors into each other") {
  const FactorModel m = make_model(3);
  Rng rng(17);
  const HVector u0 = random_cs_vector(m, rng);
  const ModularObjects mo = modular_from_vector(m, u0);
  // Another vector in fix(Delta) and fix(J0) with the same norm: u0 itself
  // transported by an NF1 mixing.
  const SuperOperator w =
      jcompatible_intertwiner(m, mo.delta, mo.delta, mo.j0, &rng);
  const ComplexVector moved = w.smat * vec(u0.mat);
  const SuperOperator q =
      rotation_in_fixed_space(m, mo.delta, mo.j0, moved, vec(u0.mat));
  CHECK((q.smat * moved - vec(u0.mat)).norm() < 1e-9 * vec(u0.mat).norm());
  CHECK(rel_residual(q.smat * mo.delta.smat * q.smat.adjoint(),
                     mo.delta.smat) < 1e-9);
  CHECK(op_norm(q.smat * mo.j0.cmat - mo.j0.cmat * q.smat.conjugate()) < 1e-9);
  CHECK(op_norm(q.smat.adjoint() * q.smat - ComplexMatrix::Identity(9, 9)) <
        1e-9);
}

TEST_CASE("verify_solution certifies the trivial and recipe unitaries") {
  const FactorModel m = make_model(2);
  Rng rng(23);
  const HVector u0 = random_cs_vector(m, rng);
  SUBCASE("identity passes") {
    const SolutionCertificate c =
        verify_solution(m, u0, SuperOperator::identity(2));
    CHECK(c.pass());
    CHECK(c.max_residual() < 1e-10);
    CHECK(c.sign == 1);
  }
  SUBCASE("an inner rotation fixing the trace vector passes") {
    // For u0 = u_tr the recipe X -> W X W^dagger commutes with the modular
    // data and fixes u0.
    const HVector utr{m.u_tr()};
    const ComplexMatrix w = random_unitary(2, rng);
    const SuperOperator rot{2, multiplier_matrix(w, w.adjoint())};
    const SolutionCertificate c = verify_solution(m, utr, rot);
    CHECK(c.pass());
  }
  SUBCASE("the general recipe passes") {
    const SolutionCertificate c = verify_solution(m, u0, nf1_unitary(m, u0, 3));
    CHECK(c.pass());
  }
  SUBCASE("a unitary that ignores the conjugation fails on j_commute") {
    ComplexMatrix w = random_unitary(2, rng);
    const SuperOperator bad{2, kron(ComplexMatrix::Identity(2, 2), w)};
    const SolutionCertificate c = verify_solution(m, u0, bad);
    CHECK_FALSE(c.pass());
    CHECK(c.j_commute > 1e-3);
  }
  SUBCASE("non-unitary input is rejected") {
    CHECK_THROWS_AS(
        verify_solution(m, u0, SuperOperator{2, 2.0 * ComplexMatrix::Identity(4, 4)}),
        InvalidInput);
  }
}

TEST_CASE("build_solution reconstructs every compatible class") {
  const FactorModel m = make_model(3);
  Rng rng(31);
  const HVector u0 = vector_with_data(m, n3_data(), rng);
  SUBCASE("own data gives the trivial class") {
    const SolutionCertificate c =
        build_solution(m, u0, spectral_data_of_vector(m, u0).data, 1);
    CHECK(c.pass());
    CHECK(nf1_membership(m, u0, c.unitary).member);
  }
  SUBCASE("dual data gives the second class") {
    const SolutionCertificate c =
        build_solution(m, u0, dual_data(n3_data(), m.tol), 1);
    CHECK(c.pass());
    const Nf1Result r = nf1_membership(m, u0, c.unitary);
    CHECK_FALSE(r.member);
  }
  SUBCASE("incompatible data is rejected") {
    SpectralData wrong;
    wrong.ftype = FactorType::type_I(3);
    wrong.pairs = {{4.0 / 3.0, Mult::fraction(2, 3)},
                   {1.0 / 3.0, Mult::fraction(1, 3)}};  // ratio 4, not 2
    CHECK_THROWS_AS(build_solution(m, u0, wrong, 1), InvalidInput);
  }
}

TEST_CASE("nf1_membership recovers the intertwining witness") {
  const FactorModel m = make_model(3);
  Rng rng(37);
  const HVector u0 = random_cs_vector(m, rng);
  const Nf1Result r = nf1_membership(m, u0, SuperOperator::identity(3));
  CHECK(r.member);
  CHECK(r.witness_residual < 1e-9);
  CHECK(op_norm(r.witness.mat.adjoint() * r.witness.mat -
                ComplexMatrix::Identity(3, 3)) < 1e-9);
}

TEST_CASE("build_second_class produces the dual vector and U1") {
  SUBCASE("the trace vector is its own dual") {
    const FactorModel m = make_model(2);
    const SecondClassResult r = build_second_class(m, HVector{m.u_tr()});
    CHECK(r.max_residual() < 1e-10);
    CHECK((r.u1.mat - m.u_tr()).norm() < 1e-10);
    CHECK(op_norm(r.u1_op.smat - ComplexMatrix::Identity(4, 4)) < 1e-10);
    CHECK(r.tr_h0_inv == doctest::Approx(1.0));
  }
  SUBCASE("the diagonal example matches the hand computation") {
    const FactorModel m = make_model(2);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = std::sqrt(1.5);
    d(1, 1) = std::sqrt(0.5);
    const SecondClassResult r = build_second_class(m, HVector{d});
    CHECK(r.max_residual() < 1e-9);
    CHECK(r.tr_h0_inv == doctest::Approx(4.0 / 3.0));
    ComplexMatrix want = ComplexMatrix::Zero(2, 2);
    want(0, 0) = std::sqrt(2.0 / 3.0);
    want(1, 1) = std::sqrt(2.0);
    want /= std::sqrt(4.0 / 3.0);
    CHECK((r.u1.mat - want).norm() < 1e-9);
    // Self-dual data: the composed solution stays in the trivial class.
    const SuperOperator k = rotation_in_fixed_space(
        m, modular_from_vector(m, HVector{d}).delta,
        modular_from_vector(m, HVector{d}).j0, vec(r.u1.mat), vec(d));
    const SuperOperator u{2, k.smat * r.u1_op.smat};
    CHECK(verify_solution(m, HVector{d}, u).pass());
    CHECK(nf1_membership(m, HVector{d}, u).member);
  }
  SUBCASE("the uneven three-dimensional data leaves the trivial class") {
    const FactorModel m = make_model(3);
    Rng rng(41);
    const HVector u0 = vector_with_data(m, n3_data(), rng, true);
    const SecondClassResult r = build_second_class(m, u0);
    CHECK(r.max_residual() < 1e-9);
    const ModularObjects mo = modular_from_vector(m, u0);
    const SuperOperator k = rotation_in_fixed_space(
        m, mo.delta, mo.j0, vec(r.u1.mat) * m.norm(u0.mat), vec(u0.mat));
    const SuperOperator u{3, k.smat * r.u1_op.smat};
    CHECK(verify_solution(m, u0, u).pass());
    CHECK_FALSE(nf1_membership(m, u0, u).member);
  }
}

TEST_CASE("solutions_equivalent decides by the recovered data") {
  const FactorModel m = make_model(3);
  Rng rng(43);
  const HVector u0 = vector_with_data(m, n3_data(), rng);
  const SpectralData own = spectral_data_of_vector(m, u0).data;
  const SolutionCertificate a = build_solution(m, u0, own, 11);
  const SolutionCertificate b = build_solution(m, u0, own, 99);
  const SolutionCertificate c =
      build_solution(m, u0, dual_data(own, m.tol), 7);

  SUBCASE("a solution is equivalent to itself") {
    const EquivalenceResult r =
        solutions_equivalent(m, u0, a.unitary, a.unitary);
    CHECK(r.equivalent);
    CHECK(r.witness.has_value());
  }
  SUBCASE("same data, different seeds: equivalent with witness") {
    const EquivalenceResult r =
        solutions_equivalent(m, u0, a.unitary, b.unitary);
    CHECK(r.equivalent);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness_residual < 1e-9);
  }
  SUBCASE("dual data: inequivalent") {
    const EquivalenceResult r =
        solutions_equivalent(m, u0, a.unitary, c.unitary);
    CHECK_FALSE(r.equivalent);
    CHECK_FALSE(r.witness.has_value());
  }
}

TEST_CASE("recipe unitaries from either simple class are equivalent") {
  const FactorModel m = make_model(3);
  Rng rng(47);
  const HVector u0 = vector_with_data(m, n3_data(), rng, true);
  SUBCASE("trivial-class recipes") {
    const EquivalenceResult r = solutions_equivalent(
        m, u0, nf1_unitary(m, u0, 5), nf1_unitary(m, u0, 6));
    CHECK(r.equivalent);
    CHECK(r.witness.has_value());
  }
  SUBCASE("second-class recipes U = K U1") {
    const ModularObjects mo = modular_from_vector(m, u0);
    const SecondClassResult sc = build_second_class(m, u0);
    auto second_solution = [&](std::uint64_t seed) {
      Rng mix(seed);
      const SuperOperator wp =
          jcompatible_intertwiner(m, mo.delta, mo.delta, mo.j0, &mix);
      const ComplexVector wu1 = wp.smat * vec(sc.u1.mat);
      const SuperOperator q =
          rotation_in_fixed_space(m, mo.delta, mo.j0, wu1, vec(u0.mat));
      return SuperOperator{3, q.smat * wp.smat * sc.u1_op.smat};
    };
    const SuperOperator ua = second_solution(1);
    const SuperOperator ub = second_solution(2);
    CHECK(verify_solution(m, u0, ua).pass());
    CHECK(verify_solution(m, u0, ub).pass());
    const EquivalenceResult r = solutions_equivalent(m, u0, ua, ub);
    CHECK(r.equivalent);
  }
}

TEST_CASE("every built certificate survives independent verification") {
  // 1000 randomized round trips across dimensions 2..6; the data is drawn
  // from the vector's own class or its dual, both always compatible.
  Rng rng(59);
  for (int rep = 0; rep < 1000; ++rep) {
    const Index n = 2 + rep % 5;
    const FactorModel m = make_model(n);
    const SpectralData d0 =
        vnftest::random_admissible_data(m, 3, rng, rep % 6 == 0);
    const HVector u0 = vector_with_data(m, d0, rng);
    const SpectralData d =
        rep % 2 == 0 ? spectral_data_of_vector(m, u0).data
                     : dual_data(spectral_data_of_vector(m, u0).data, m.tol);
    const SolutionCertificate cert =
        build_solution(m, u0, d, static_cast<std::uint64_t>(rep));
    REQUIRE(cert.pass());
    const SolutionCertificate recheck = verify_solution(m, u0, cert.unitary);
    REQUIRE(recheck.pass());
    REQUIRE(recheck.max_residual() <= m.tol.eq_tol);
  }
}

TEST_CASE("generator data is blind to inner conjugation") {
  // The spectral data of W H W^dagger equals that of H, so solutions built
  // from either realization land in the same class.
  const FactorModel m = make_model(4);
  Rng rng(61);
  const ComplexMatrix h = random_positive(4, 0.3, 2.0, rng);
  const ComplexMatrix w = random_unitary(4, rng);
  const VectorSpectralData a = spectral_data_of_positive(m, h / m.tr(h).real());
  const VectorSpectralData b = spectral_data_of_positive(
      m, ComplexMatrix(w * h * w.adjoint() / m.tr(h).real()));
  CHECK(data_equivalent(a.data, b.data, m.tol));
}

TEST_CASE("self-dual data satisfies the intersection criterion") {
  // When a solution lies in both simple classes the generator data is
  // equivalent to its own inverse-eigenvalue data.
  const FactorModel m = make_model(2);
  Rng rng(53);
  const HVector u0 = vector_with_data(m, n2_data(), rng);
  const ModularObjects mo = modular_from_vector(m, u0);
  const DeltaFactorization fd = factorize_delta(m, mo.delta);
  const SpectralData data = spectral_data_of_positive(m, fd.h.mat).data;
  CHECK(is_self_dual(data, m.tol));
}
