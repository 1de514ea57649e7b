#include "vnf/modular.hpp"

#include <cmath>
#include <sstream>

namespace vnf {

//==============================================================================
// modular_from_vector
//==============================================================================

ModularObjects modular_from_vector(const FactorModel& model, const HVector& u) {
  model.require_shape(u.mat, "modular_from_vector");
  if (!classify_vector(model, u).passes())
    throw NotInvertible("modular_from_vector: vector not cyclic and separating");

  const LeftPolar lp = left_polar(u.mat);
  ModularObjects mo;
  mo.v = FactorElement{lp.w};
  ComplexMatrix h0 = u.mat * u.mat.adjoint();
  h0 = (h0 + h0.adjoint()).eval() / 2.0;
  mo.h0 = FactorElement{h0};

  const AntilinearOp j = trace_conjugation(model);
  mo.j0 = AntilinearOp{model.n,
                       kron(lp.w.transpose(), lp.w) * j.cmat};

  // Route 1: J0 L_{h0}^{-1} J0 L_{h0}.
  const ComplexMatrix h0_inv = herm_power(h0, -1.0, model.tol.eq_tol);
  const SuperOperator lh0 = left_superop(model, mo.h0);
  const SuperOperator lh0_inv = left_superop(model, FactorElement{h0_inv});
  const SuperOperator sandwich = compose(mo.j0, compose(lh0_inv, mo.j0));
  const SuperOperator delta1 = compose(sandwich, lh0);

  // Route 2: X -> (u u^dagger) X (u^dagger u)^{-1}.
  const ComplexMatrix right = lp.w.adjoint() * h0_inv * lp.w;
  const ComplexMatrix delta2 = multiplier_matrix(h0, right);

  const double dev = rel_residual(delta1.smat, delta2);
  if (dev > model.tol.eq_tol) {
    std::ostringstream msg;
    msg << "modular_from_vector: the two delta routes disagree, residual "
        << dev;
    throw ConstructionFailed(msg.str());
  }
  mo.delta = delta1;
  return mo;
}

//==============================================================================
// tomita_oracle
//==============================================================================

namespace {

RealMatrix realify_antilinear(const ComplexMatrix& c) {
  const Index d = c.rows();
  RealMatrix r(2 * d, 2 * d);
  r.topLeftCorner(d, d) = c.real();
  r.topRightCorner(d, d) = c.imag();
  r.bottomLeftCorner(d, d) = c.imag();
  r.bottomRightCorner(d, d) = -c.real();
  return r;
}

}  // namespace

TomitaPair tomita_oracle(const FactorModel& model, const HVector& u) {
  model.require_shape(u.mat, "tomita_oracle");
  if (!classify_vector(model, u).passes())
    throw NotInvertible("tomita_oracle: vector not cyclic and separating");

  const Index n = model.n;
  const Index d = n * n;
  // S(Y) = (u^dagger)^{-1} Y^dagger u, the closure of A u -> A^dagger u.
  const ComplexMatrix a = u.mat.adjoint().inverse();
  const ComplexMatrix cs =
      multiplier_matrix(a, u.mat) * trace_conjugation(model).cmat;

  // Real 2N^2-dimensional representation; the real transpose of the
  // realified S is the realification of the antilinear adjoint.
  const RealMatrix sr = realify_antilinear(cs);
  const RealMatrix m = sr.transpose() * sr;

  Eigen::SelfAdjointEigenSolver<RealMatrix> es(m);
  if (es.info() != Eigen::Success)
    throw Error("tomita_oracle: real eigensolver did not converge");
  if (es.eigenvalues()(0) <= 0.0)
    throw NotInvertible("tomita_oracle: S^T S not positive definite");
  const RealVector inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
  const RealMatrix m_inv_half =
      es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  const RealMatrix jr = sr * m_inv_half;

  // De-realify; the block structure must come back linear for delta and
  // antilinear for j0.
  const double scale_m = std::max(m.norm(), kNormFallback);
  const double lin_dev =
      (m.topLeftCorner(d, d) - m.bottomRightCorner(d, d)).norm() +
      (m.topRightCorner(d, d) + m.bottomLeftCorner(d, d)).norm();
  const double anti_dev =
      (jr.topRightCorner(d, d) - jr.bottomLeftCorner(d, d)).norm() +
      (jr.topLeftCorner(d, d) + jr.bottomRightCorner(d, d)).norm();
  if (lin_dev > model.tol.eq_tol * scale_m ||
      anti_dev > model.tol.eq_tol * std::max(jr.norm(), kNormFallback))
    throw ConstructionFailed("tomita_oracle: realified blocks lost structure");

  TomitaPair out;
  ComplexMatrix delta(d, d);
  delta.real() = m.topLeftCorner(d, d);
  delta.imag() = m.bottomLeftCorner(d, d);
  out.delta = SuperOperator{n, std::move(delta)};
  ComplexMatrix j0(d, d);
  j0.real() = jr.topLeftCorner(d, d);
  j0.imag() = jr.topRightCorner(d, d);
  out.j0 = AntilinearOp{n, std::move(j0)};
  return out;
}

//==============================================================================
// factorize_delta
//==============================================================================

DeltaFactorization factorize_delta(const FactorModel& model,
                                   const SuperOperator& delta) {
  const Index n = model.n;
  if (delta.smat.rows() != n * n || delta.smat.cols() != n * n)
    throw InvalidInput("factorize_delta: superoperator has wrong shape");
  if (!is_hermitian(delta.smat, model.tol.eq_tol))
    throw InvalidInput("factorize_delta: delta not Hermitian");

  const KronRank1 kr = nearest_kron_rank1(delta.smat, n);
  if (kr.residual > model.tol.eq_tol) {
    std::ostringstream msg;
    msg << "factorize_delta: not of the L_H R_H' form, rank-1 residual "
        << kr.residual;
    throw NotAModularShape(msg.str());
  }

  ComplexMatrix h = (kr.a + kr.a.adjoint()) / 2.0;
  if (rel_residual(h, kr.a) > model.tol.eq_tol)
    throw NotAModularShape("factorize_delta: left factor not Hermitian");
  const double t = model.tr(h).real();
  if (std::abs(t) < kNormFallback)
    throw NotAModularShape("factorize_delta: left factor has zero trace");
  h /= t;
  ComplexMatrix hp = kr.b * t;
  hp = (hp + hp.adjoint()).eval() / 2.0;

  const EigSystem es = herm_eig(h, model.tol.eq_tol);
  if (es.values(0) <= 0.0)
    throw NotAModularShape("factorize_delta: left factor not positive");

  DeltaFactorization out;
  out.h = FactorElement{std::move(h)};
  out.h_prime = FactorElement{std::move(hp)};
  out.c_residual = kr.residual;
  return out;
}

//==============================================================================
// Conjugations
//==============================================================================

AntilinearOp kreal_conjugation(const SuperOperator& delta, double eq_tol) {
  const EigSystem es = herm_eig(delta.smat, eq_tol);
  return {delta.n, es.vectors * es.vectors.transpose()};
}

AntilinearOp build_invariant_conjugation(const SuperOperator& delta,
                                         const AntilinearOp& j,
                                         const HVector& v1, const HVector& v2,
                                         const Tolerances& tol) {
  const Index n = delta.n;
  const Index d = n * n;
  if (j.cmat.rows() != d)
    throw InvalidInput("build_invariant_conjugation: shape mismatch");

  const ComplexMatrix delta_inv = herm_power(delta.smat, -1.0, tol.eq_tol);
  const double r_inv =
      rel_residual(compose(j, compose(delta, j)).smat, delta_inv);
  if (r_inv > tol.eq_tol) {
    std::ostringstream msg;
    msg << "build_invariant_conjugation: j delta j != delta^{-1}, residual "
        << r_inv;
    throw PreconditionFailed(msg.str());
  }
  for (const HVector* v : {&v1, &v2}) {
    const ComplexVector vv = vec(v->mat);
    const double scale = std::max(vv.norm(), kNormFallback);
    const double r_fix = (delta.smat * vv - vv).norm() / scale;
    const double r_j = (j.apply_vec(vv) - vv).norm() / scale;
    if (r_fix > tol.eq_tol || r_j > tol.eq_tol) {
      std::ostringstream msg;
      msg << "build_invariant_conjugation: vector not fixed, delta residual "
          << r_fix << ", j residual " << r_j;
      throw PreconditionFailed(msg.str());
    }
  }

  const EigSystem es = herm_eig(delta.smat, tol.eq_tol);
  std::vector<Index> k0, k1, km1;
  for (Index i = 0; i < d; ++i) {
    const double lambda = es.values(i);
    if (std::abs(lambda - 1.0) <= tol.spec_tol)
      k0.push_back(i);
    else if (lambda > 1.0)
      k1.push_back(i);
    else
      km1.push_back(i);
  }
  if (k1.size() != km1.size())
    throw ConstructionFailed(
        "build_invariant_conjugation: spectrum not inversion symmetric");

  ComplexMatrix b0(d, static_cast<Index>(k0.size()));
  for (Index i = 0; i < b0.cols(); ++i) b0.col(i) = es.vectors.col(k0[i]);
  ComplexMatrix b1(d, static_cast<Index>(k1.size()));
  for (Index i = 0; i < b1.cols(); ++i) b1.col(i) = es.vectors.col(k1[i]);
  const ComplexMatrix bm1 = j.cmat * b1.conjugate();

  ComplexMatrix cmat = ComplexMatrix::Zero(d, d);
  if (b1.cols() > 0) {
    cmat += b1 * b1.transpose();
    cmat += bm1 * bm1.transpose();
  }
  if (b0.cols() > 0) cmat += j.cmat * b0.conjugate() * b0.transpose();
  return {n, std::move(cmat)};
}

//==============================================================================
// Identity checks
//==============================================================================

SuperOperator superop_spectral(const SuperOperator& delta,
                               const std::function<Complex(double)>& f,
                               const Tolerances& tol) {
  return {delta.n,
          spectral_apply(delta.smat, f, tol.spec_tol, tol.eq_tol)};
}

double right_commutant_residual(const FactorModel& model,
                                const SuperOperator& m) {
  const Index n = model.n;
  // Block decomposition m = sum_ab E_ab (x) M_ab gives
  // ||[m, R_{E_rs}]||_F^2 = sum_{a != s} ||M_as||^2 + sum_{b != r} ||M_rb||^2
  //                         + ||M_ss - M_rr||^2.
  RealMatrix bn(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      bn(a, b) = m.smat.block(a * n, b * n, n, n).squaredNorm();
  RealVector col_sum = bn.colwise().sum();
  RealVector row_sum = bn.rowwise().sum();

  double worst = 0.0;
  for (Index s = 0; s < n; ++s)
    for (Index r = 0; r < n; ++r) {
      const double diag_diff =
          (m.smat.block(s * n, s * n, n, n) - m.smat.block(r * n, r * n, n, n))
              .squaredNorm();
      const double total =
          (col_sum(s) - bn(s, s)) + (row_sum(r) - bn(r, r)) + diag_diff;
      worst = std::max(worst, total);
    }
  return std::sqrt(worst) / std::max(m.smat.norm(), kNormFallback);
}

double conjugated_algebra_residual(const FactorModel& model,
                                   const ComplexMatrix& t) {
  const Index n = model.n;
  const Index d = n * n;
  if (t.rows() != d || t.cols() != d)
    throw InvalidInput("conjugated_algebra_residual: wrong shape");
  // kron(I, e_p e_q^dagger) has rank n, so t kron(I, E_pq) t^dagger is the
  // outer product of the column strips t(:, {p + n j}).
  std::vector<ComplexMatrix> strips(static_cast<std::size_t>(n));
  for (Index p = 0; p < n; ++p) {
    ComplexMatrix xp(d, n);
    for (Index jcol = 0; jcol < n; ++jcol)
      xp.col(jcol) = t.col(p + n * jcol);
    strips[static_cast<std::size_t>(p)] = std::move(xp);
  }
  double worst = 0.0;
  for (Index p = 0; p < n; ++p)
    for (Index q = 0; q < n; ++q) {
      const ComplexMatrix sandwiched = strips[static_cast<std::size_t>(p)] *
                                       strips[static_cast<std::size_t>(q)].adjoint();
      worst = std::max(
          worst, right_commutant_residual(model, SuperOperator{n, sandwiched}));
    }
  return worst;
}

ModularIdentityReport check_modular_identities(const FactorModel& model,
                                               const ModularObjects& mo,
                                               const HVector& u) {
  const Index d = model.n * model.n;
  ModularIdentityReport rep;

  const SuperOperator jdj = compose(mo.j0, compose(mo.delta, mo.j0));
  rep.inverse_conjugation =
      op_norm(compose(jdj, mo.delta).smat - ComplexMatrix::Identity(d, d));

  const ComplexVector vu = vec(u.mat);
  const double scale = std::max(vu.norm(), kNormFallback);
  rep.fixes_vector = (mo.delta.smat * vu - vu).norm() / scale;
  rep.j_fixes_vector = (mo.j0.apply_vec(vu) - vu).norm() / scale;

  // Conjugation by delta^{it} must keep every left multiplication inside
  // the algebra, i.e. commuting with the right multiplications.
  for (const double t : {1.0, std::sqrt(2.0)}) {
    const SuperOperator dt = superop_spectral(
        mo.delta,
        [t](double lam) { return std::exp(Complex(0.0, t * std::log(lam))); },
        model.tol);
    rep.algebra_invariance = std::max(
        rep.algebra_invariance, conjugated_algebra_residual(model, dt.smat));
  }
  return rep;
}

}  // namespace vnf
