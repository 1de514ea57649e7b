#include <doctest.h>

#include "test_helpers.hpp"

using namespace vnf;
using vnftest::matrix_unit;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("herm_eig handles the hand-solved cases") {
  SUBCASE("identity") {
    const EigSystem es = herm_eig(ComplexMatrix::Identity(2, 2));
    CHECK(es.values(0) == doctest::Approx(1.0));
    CHECK(es.values(1) == doctest::Approx(1.0));
    CHECK(op_norm(es.vectors.adjoint() * es.vectors -
                  ComplexMatrix::Identity(2, 2)) < 1e-12);
  }
  SUBCASE("diagonal values come out ascending") {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 0) = 1.5;
    a(1, 1) = 0.5;
    const EigSystem es = herm_eig(a);
    CHECK(es.values(0) == doctest::Approx(0.5));
    CHECK(es.values(1) == doctest::Approx(1.5));
  }
  SUBCASE("off-diagonal exchange matrix") {
    // Characteristic polynomial x^2 - 1: eigenpairs (-1, (1,-1)/sqrt2) and
    // (+1, (1,1)/sqrt2).
    const ComplexMatrix a = mat2(0, 1, 1, 0);
    const EigSystem es = herm_eig(a);
    CHECK(es.values(0) == doctest::Approx(-1.0));
    CHECK(es.values(1) == doctest::Approx(1.0));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(es.vectors(0, 0) - Complex(s)) < 1e-12);
    CHECK(std::abs(es.vectors(1, 0) - Complex(-s)) < 1e-12);
    CHECK(std::abs(es.vectors(0, 1) - Complex(s)) < 1e-12);
    CHECK(std::abs(es.vectors(1, 1) - Complex(s)) < 1e-12);
  }
}

TEST_CASE("herm_eig rejects bad input") {
  CHECK_THROWS_AS(herm_eig(ComplexMatrix::Zero(2, 3)), InvalidInput);
  CHECK_THROWS_AS(herm_eig(mat2(0, 1, 0, 0)), InvalidInput);
  ComplexMatrix nan = ComplexMatrix::Zero(2, 2);
  nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(herm_eig(nan), InvalidInput);
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
  Rng rng(101);
  for (Index n = 2; n <= 8; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      ComplexMatrix g = random_gaussian(n, n, rng);
      const ComplexMatrix a = (g + g.adjoint()) / 2.0;
      const EigSystem es = herm_eig(a);
      const ComplexMatrix back =
          es.vectors * es.values.asDiagonal() * es.vectors.adjoint();
      CHECK(rel_residual(back, a) < 1e-9);
      CHECK(op_norm(es.vectors.adjoint() * es.vectors -
                    ComplexMatrix::Identity(n, n)) < 1e-9);
    }
  }
}

TEST_CASE("herm_eig output is deterministic, degenerate spaces included") {
  Rng rng(7);
  const ComplexMatrix q = random_unitary(4, rng);
  RealVector vals(4);
  vals << 0.5, 0.5, 0.5, 2.0;  // threefold degeneracy
  const ComplexMatrix a = q * vals.asDiagonal() * q.adjoint();
  const EigSystem e1 = herm_eig(a);
  const EigSystem e2 = herm_eig(a);
  CHECK((e1.vectors - e2.vectors).norm() == 0.0);
  CHECK((e1.values - e2.values).norm() == 0.0);
  const ComplexMatrix back =
      e1.vectors * e1.values.asDiagonal() * e1.vectors.adjoint();
  CHECK(rel_residual(back, a) < 1e-9);
}

TEST_CASE("left_polar satisfies T = P W with P = (T T^dagger)^(1/2)") {
  SUBCASE("identity and positive diagonal") {
    const LeftPolar lp = left_polar(ComplexMatrix::Identity(2, 2));
    CHECK(op_norm(lp.p - ComplexMatrix::Identity(2, 2)) < 1e-12);
    CHECK(op_norm(lp.w - ComplexMatrix::Identity(2, 2)) < 1e-12);

    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 2.0;
    d(1, 1) = 3.0;
    const LeftPolar lp2 = left_polar(d);
    CHECK(op_norm(lp2.p - d) < 1e-12);
    CHECK(op_norm(lp2.w - ComplexMatrix::Identity(2, 2)) < 1e-12);
  }
  SUBCASE("worked 2x2 case") {
    // T T^dagger = diag(4, 1), so P = diag(2, 1) and W = P^{-1} T.
    const ComplexMatrix t = mat2(0, 2, 1, 0);
    const LeftPolar lp = left_polar(t);
    CHECK(op_norm(lp.p - mat2(2, 0, 0, 1)) < 1e-12);
    CHECK(op_norm(lp.w - mat2(0, 1, 1, 0)) < 1e-12);
  }
  SUBCASE("random consistency: P^2 = T T^dagger, W unitary") {
    Rng rng(55);
    for (Index n = 2; n <= 6; ++n) {
      const ComplexMatrix t = random_gaussian(n, n, rng);
      const LeftPolar lp = left_polar(t);
      CHECK(rel_residual(lp.p * lp.p, t * t.adjoint()) < 1e-9);
      CHECK(rel_residual(lp.p * lp.w, t) < 1e-9);
      CHECK(op_norm(lp.w.adjoint() * lp.w - ComplexMatrix::Identity(n, n)) <
            1e-9);
    }
  }
  SUBCASE("singular input still yields a unitary completion") {
    ComplexMatrix t = ComplexMatrix::Zero(3, 3);
    t(0, 1) = 2.0;  // rank 1
    const LeftPolar lp = left_polar(t);
    CHECK(op_norm(lp.w.adjoint() * lp.w - ComplexMatrix::Identity(3, 3)) <
          1e-9);
    CHECK(op_norm(lp.p * lp.w - t) < 1e-9);
  }
}

TEST_CASE("group_eigenvalues clusters by gap against the global scale") {
  SUBCASE("well separated values") {
    RealVector v(3);
    v << 1.0, 1.0, 3.0;
    const auto clusters = group_eigenvalues(v, 1e-8);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].value == doctest::Approx(1.0));
    CHECK(clusters[0].indices.size() == 2);
    CHECK(clusters[1].value == doctest::Approx(3.0));
    CHECK(clusters[1].indices.size() == 1);
  }
  SUBCASE("gap below tolerance merges") {
    RealVector v(3);
    v << 1.0, 1.0 + 1e-12, 2.0;
    const auto clusters = group_eigenvalues(v, 1e-8);
    REQUIRE(clusters.size() == 2);
    CHECK(clusters[0].indices.size() == 2);
  }
  SUBCASE("two singletons") {
    RealVector v(2);
    v << 0.5, 1.5;
    CHECK(group_eigenvalues(v, 1e-8).size() == 2);
  }
  SUBCASE("unsorted input is rejected") {
    RealVector v(2);
    v << 1.5, 0.5;
    CHECK_THROWS_AS(group_eigenvalues(v, 1e-8), InvalidInput);
  }
}

TEST_CASE("nearest_kron_rank1 recovers multiplier factors") {
  SUBCASE("identity superoperator") {
    const KronRank1 kr = nearest_kron_rank1(ComplexMatrix::Identity(4, 4), 2);
    CHECK(kr.residual < 1e-12);
    CHECK(rel_residual(kr.a, ComplexMatrix::Identity(2, 2) / std::sqrt(2.0)) <
          1e-9);
    CHECK(rel_residual(kr.b, ComplexMatrix::Identity(2, 2) * std::sqrt(2.0)) <
          1e-9);
  }
  SUBCASE("diagonal conjugation splits into the diagonal pair") {
    ComplexMatrix h = ComplexMatrix::Zero(2, 2);
    h(0, 0) = 1.5;
    h(1, 1) = 0.5;
    const ComplexMatrix hinv = h.inverse();
    const KronRank1 kr = nearest_kron_rank1(multiplier_matrix(h, hinv), 2);
    CHECK(kr.residual < 1e-12);
    CHECK(rel_residual(kr.a / kr.a.norm(), h / h.norm()) < 1e-9);
    CHECK(rel_residual(kr.b / kr.b.norm(), hinv / hinv.norm()) < 1e-9);
  }
  SUBCASE("a rank-2 rearrangement has residual bounded away from zero") {
    const ComplexMatrix s =
        ComplexMatrix::Identity(4, 4) +
        multiplier_matrix(matrix_unit(2, 0, 0), matrix_unit(2, 1, 1));
    CHECK(nearest_kron_rank1(s, 2).residual > 0.1);
  }
  SUBCASE("round trip on random positive pairs recovers (cH, G/c)") {
    Rng rng(404);
    for (Index n = 2; n <= 5; ++n) {
      const ComplexMatrix h = random_positive(n, 0.2, 2.0, rng);
      const ComplexMatrix g = random_positive(n, 0.2, 2.0, rng);
      const KronRank1 kr = nearest_kron_rank1(multiplier_matrix(h, g), n);
      CHECK(kr.residual < 1e-12);
      // Positive leading entries make the normalized factors match exactly.
      CHECK(rel_residual(kr.a / kr.a.norm(), h / h.norm()) < 1e-9);
      CHECK(rel_residual(kr.b / kr.b.norm(), g / g.norm()) < 1e-9);
      CHECK(rel_residual(multiplier_matrix(kr.a, kr.b),
                         multiplier_matrix(h, g)) < 1e-9);
    }
  }
  SUBCASE("shape mismatch is rejected") {
    CHECK_THROWS_AS(nearest_kron_rank1(ComplexMatrix::Identity(4, 4), 3),
                    InvalidInput);
  }
}

TEST_CASE("vec/unvec and multiplier_matrix follow the column convention") {
  Rng rng(9);
  const Index n = 3;
  const ComplexMatrix x = random_gaussian(n, n, rng);
  const ComplexMatrix a = random_gaussian(n, n, rng);
  const ComplexMatrix b = random_gaussian(n, n, rng);
  CHECK((unvec(vec(x), n) - x).norm() == 0.0);
  const ComplexVector lhs = multiplier_matrix(a, b) * vec(x);
  CHECK((lhs - vec((a * x * b).eval())).norm() < 1e-12 * lhs.norm());
}

TEST_CASE("herm_power computes inverses and roots") {
  Rng rng(31);
  const ComplexMatrix h = random_positive(4, 0.3, 2.0, rng);
  CHECK(rel_residual(herm_power(h, -1.0) * h, ComplexMatrix::Identity(4, 4)) <
        1e-9);
  const ComplexMatrix r = herm_power(h, 0.5);
  CHECK(rel_residual(r * r, h) < 1e-9);
  ComplexMatrix sing = ComplexMatrix::Zero(2, 2);
  sing(0, 0) = 1.0;
  CHECK_THROWS_AS(herm_power(sing, -1.0), NotInvertible);
}

TEST_CASE("tolerances validate their ranges") {
  const Tolerances zero_eq{0.0, 1e-8};
  const Tolerances huge_spec{1e-9, 2.0};
  const Tolerances defaults;
  CHECK_THROWS_AS(zero_eq.validate(), InvalidInput);
  CHECK_THROWS_AS(huge_spec.validate(), InvalidInput);
  CHECK_NOTHROW(defaults.validate());
}
