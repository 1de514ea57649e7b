#include "vnf/inverse_problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vnf {

//==============================================================================
// Spectral data extraction and realization
//==============================================================================

VectorSpectralData spectral_data_of_positive(const FactorModel& model,
                                             const ComplexMatrix& h) {
  model.require_shape(h, "spectral_data_of_positive");
  const EigSystem es = herm_eig(h, model.tol.eq_tol);
  if (es.values(0) <= 0.0)
    throw NotInvertible("spectral_data_of_positive: matrix not positive definite");

  SpectralData d;
  d.ftype = FactorType::type_I(model.n);
  for (const EigCluster& c : group_eigenvalues(es.values, model.tol.spec_tol))
    d.pairs.push_back(
        {c.value,
         Mult::fraction(static_cast<std::int64_t>(c.indices.size()), model.n)});

  const NormalizedData nd = normalize_data(d, model.tol);
  return {nd.data, nd.c};
}

VectorSpectralData spectral_data_of_vector(const FactorModel& model,
                                           const HVector& u) {
  model.require_shape(u.mat, "spectral_data_of_vector");
  if (!classify_vector(model, u).passes())
    throw NotInvertible("spectral_data_of_vector: vector not cyclic and separating");
  ComplexMatrix h0 = u.mat * u.mat.adjoint();
  h0 = (h0 + h0.adjoint()).eval() / 2.0;
  return spectral_data_of_positive(model, h0);
}

ProjectionFamily projections_with_traces(const FactorModel& model,
                                         const std::vector<Mult>& m_list) {
  const Index n = model.n;
  std::vector<Index> sizes;
  Index total = 0;
  for (const Mult& m : m_list) {
    if (!m.exact() || n % m.den() != 0)
      throw InvalidInput("projections_with_traces: multiplicity not l/N");
    const Index l = static_cast<Index>(m.num() * (n / m.den()));
    if (l < 1 || l > n)
      throw InvalidInput("projections_with_traces: multiplicity outside [1/N, 1]");
    sizes.push_back(l);
    total += l;
  }
  if (total != n)
    throw InvalidInput("projections_with_traces: multiplicities do not sum to 1");

  ProjectionFamily out;
  Index offset = 0;
  for (Index l : sizes) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e.block(offset, offset, l, l) = ComplexMatrix::Identity(l, l);
    out.projections.push_back(FactorElement{std::move(e)});
    offset += l;
  }
  return out;
}

FactorElement build_H_from_data(const FactorModel& model,
                                const SpectralData& d) {
  if (!(d.ftype == FactorType::type_I(model.n)))
    throw InvalidInput("build_H_from_data: factor type does not match model");
  if (!validate_data(d, model.tol).empty())
    throw InvalidInput("build_H_from_data: data fails validation");

  std::vector<Mult> ms;
  for (const SpectralPair& p : d.pairs) ms.push_back(p.m);
  const ProjectionFamily family = projections_with_traces(model, ms);

  ComplexMatrix h = ComplexMatrix::Zero(model.n, model.n);
  for (std::size_t k = 0; k < d.pairs.size(); ++k)
    h += d.pairs[k].mu * family.projections[k].mat;
  return FactorElement{std::move(h)};
}

//==============================================================================
// j-real bases, intertwiners, rotations
//==============================================================================

ComplexMatrix jreal_basis(const ComplexMatrix& basis, const AntilinearOp& j) {
  const Index d = basis.rows();
  const Index k = basis.cols();
  // Candidates e + j(e) and i(e - j(e)) span the fixed real subspace; a
  // rank-revealing QR over the realified vectors extracts an orthonormal
  // basis with respect to Re<.,.>.
  RealMatrix cand(2 * d, 2 * k);
  for (Index c = 0; c < k; ++c) {
    const ComplexVector e = basis.col(c);
    const ComplexVector je = j.cmat * e.conjugate();
    const ComplexVector plus = e + je;
    const ComplexVector minus = Complex(0.0, 1.0) * (e - je);
    cand.col(2 * c).head(d) = plus.real();
    cand.col(2 * c).tail(d) = plus.imag();
    cand.col(2 * c + 1).head(d) = minus.real();
    cand.col(2 * c + 1).tail(d) = minus.imag();
  }
  Eigen::ColPivHouseholderQR<RealMatrix> qr(cand);
  qr.setThreshold(1e-9);
  if (qr.rank() != k)
    throw ConstructionFailed("jreal_basis: fixed real subspace has wrong rank");
  const RealMatrix q = RealMatrix(qr.householderQ()).leftCols(k);
  ComplexMatrix out(d, k);
  out.real() = q.topRows(d);
  out.imag() = q.bottomRows(d);
  return out;
}

namespace {

struct ClusterBasis {
  double value;
  ComplexMatrix basis;
};

std::vector<ClusterBasis> cluster_bases(const EigSystem& es, double spec_tol) {
  std::vector<ClusterBasis> out;
  for (const EigCluster& c : group_eigenvalues(es.values, spec_tol)) {
    ClusterBasis cb;
    cb.value = c.value;
    cb.basis.resize(es.vectors.rows(), static_cast<Index>(c.indices.size()));
    for (std::size_t i = 0; i < c.indices.size(); ++i)
      cb.basis.col(static_cast<Index>(i)) = es.vectors.col(c.indices[i]);
    out.push_back(std::move(cb));
  }
  return out;
}

void require_jcompatible(const SuperOperator& delta, const AntilinearOp& j,
                         const Tolerances& tol, const char* who) {
  const ComplexMatrix delta_inv = herm_power(delta.smat, -1.0, tol.eq_tol);
  const double r = rel_residual(compose(j, compose(delta, j)).smat, delta_inv);
  if (r > tol.eq_tol) {
    std::ostringstream msg;
    msg << who << ": j delta j != delta^{-1}, residual " << r;
    throw PreconditionFailed(msg.str());
  }
}

}  // namespace

SuperOperator jcompatible_intertwiner(const FactorModel& model,
                                      const SuperOperator& delta_a,
                                      const SuperOperator& delta_b,
                                      const AntilinearOp& j0, Rng* rng) {
  const Index n = model.n;
  const Index d = n * n;
  require_jcompatible(delta_a, j0, model.tol, "jcompatible_intertwiner");
  require_jcompatible(delta_b, j0, model.tol, "jcompatible_intertwiner");

  const EigSystem ea = herm_eig(delta_a.smat, model.tol.eq_tol);
  const EigSystem eb = herm_eig(delta_b.smat, model.tol.eq_tol);
  if (ea.values(0) <= 0.0 || eb.values(0) <= 0.0)
    throw PreconditionFailed("jcompatible_intertwiner: delta not positive");
  const std::vector<ClusterBasis> ca = cluster_bases(ea, model.tol.spec_tol);
  const std::vector<ClusterBasis> cb = cluster_bases(eb, model.tol.spec_tol);

  if (ca.size() != cb.size())
    throw NotIntertwinable("jcompatible_intertwiner: cluster counts differ");
  const double scale =
      std::max(ea.values.cwiseAbs().maxCoeff(), eb.values.cwiseAbs().maxCoeff());
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (std::abs(ca[i].value - cb[i].value) > model.tol.spec_tol * scale ||
        ca[i].basis.cols() != cb[i].basis.cols())
      throw NotIntertwinable(
          "jcompatible_intertwiner: spectra or eigenspace dimensions differ");
  }

  ComplexMatrix w = ComplexMatrix::Zero(d, d);
  for (std::size_t i = 0; i < ca.size(); ++i) {
    const double lam = ca[i].value;
    const Index k = ca[i].basis.cols();
    if (std::abs(lam - 1.0) <= model.tol.spec_tol * std::max(1.0, scale)) {
      // j0-real orthonormal matching keeps the block commuting with j0.
      const ComplexMatrix fa = jreal_basis(ca[i].basis, j0);
      const ComplexMatrix fb = jreal_basis(cb[i].basis, j0);
      RealMatrix o = RealMatrix::Identity(k, k);
      if (rng) o = random_real_orthogonal(k, *rng);
      w += fb * o * fa.adjoint();
    } else if (lam > 1.0) {
      ComplexMatrix g = ComplexMatrix::Identity(k, k);
      if (rng) g = random_unitary(k, *rng);
      const ComplexMatrix wk = cb[i].basis * g * ca[i].basis.adjoint();
      w += wk;
      // Reflected block on the 1/lambda eigenspaces.
      w += j0.cmat * wk.conjugate() * j0.cmat.conjugate();
    }
  }

  const double unit_dev =
      op_norm(w.adjoint() * w - ComplexMatrix::Identity(d, d));
  if (unit_dev > 1e2 * model.tol.eq_tol) {
    std::ostringstream msg;
    msg << "jcompatible_intertwiner: result not unitary, deviation " << unit_dev;
    throw ConstructionFailed(msg.str());
  }
  return {n, std::move(w)};
}

SuperOperator rotation_in_fixed_space(const FactorModel& model,
                                      const SuperOperator& delta0,
                                      const AntilinearOp& j0,
                                      const ComplexVector& from,
                                      const ComplexVector& to) {
  const Index n = model.n;
  const Index d = n * n;
  const EigSystem es = herm_eig(delta0.smat, model.tol.eq_tol);
  const std::vector<ClusterBasis> clusters =
      cluster_bases(es, model.tol.spec_tol);

  const ClusterBasis* fixed = nullptr;
  double best = 1.0;
  for (const ClusterBasis& c : clusters) {
    const double dev = std::abs(c.value - 1.0);
    if (dev < best) {
      best = dev;
      fixed = &c;
    }
  }
  const double scale = std::max(es.values.cwiseAbs().maxCoeff(), 1.0);
  if (!fixed || best > model.tol.spec_tol * scale)
    throw ConstructionFailed(
        "rotation_in_fixed_space: delta0 has no eigenvalue-1 space");

  const ComplexMatrix f = jreal_basis(fixed->basis, j0);
  const Index k = f.cols();

  auto coords = [&](const ComplexVector& v, const char* who) {
    const ComplexVector raw = f.adjoint() * v;
    RealVector a = raw.real();
    const double resid = (v - f * a).norm() /
                         std::max(v.norm(), kNormFallback);
    if (resid > model.tol.eq_tol) {
      std::ostringstream msg;
      msg << "rotation_in_fixed_space: " << who
          << " not in the j0-fixed eigenvalue-1 space, residual " << resid;
      throw ConstructionFailed(msg.str());
    }
    return a;
  };
  RealVector a = coords(from, "source vector");
  RealVector b = coords(to, "target vector");
  const double na = a.norm();
  const double nb = b.norm();
  if (std::abs(na - nb) > model.tol.eq_tol * std::max(nb, kNormFallback))
    throw ConstructionFailed("rotation_in_fixed_space: norms differ");
  a /= na;
  b /= nb;

  RealMatrix r = RealMatrix::Identity(k, k);
  const RealVector diff = a - b;
  if (diff.norm() > 1e-14) {
    // One real Householder reflection maps a to b for unit a, b.
    const RealVector p = diff / diff.norm();
    r -= 2.0 * p * p.transpose();
  }

  ComplexMatrix q = ComplexMatrix::Identity(d, d);
  q += f * (r - RealMatrix::Identity(k, k)) * f.adjoint();
  return {n, std::move(q)};
}

//==============================================================================
// verify_solution
//==============================================================================

double mirror_commutant_residual(const FactorModel& model,
                                 const SuperOperator& u_op,
                                 const AntilinearOp& j0) {
  const Index n = model.n;
  // [U L_pq U^dagger, J0 U L_rs U^dagger J0] = U [L_pq, D R_sr D^dagger]
  // U^dagger with D = U^dagger (J0 U J0); the Frobenius norm is computed
  // from the block decomposition of G = D R_sr D^dagger.
  const ComplexMatrix uj =
      j0.cmat * u_op.smat.conjugate() * j0.cmat.conjugate();
  const ComplexMatrix dmat = u_op.smat.adjoint() * uj;

  double worst = 0.0;
  for (Index r = 0; r < n; ++r)
    for (Index s = 0; s < n; ++s) {
      const ComplexMatrix g = dmat.middleCols(r * n, n) *
                              dmat.middleCols(s * n, n).adjoint();
      for (Index p = 0; p < n; ++p)
        for (Index q = 0; q < n; ++q) {
          double total = 0.0;
          for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < n; ++b) {
              const auto blk = g.block(a * n, b * n, n, n);
              total += blk.row(q).squaredNorm() - std::norm(blk(q, q));
              total += blk.col(p).squaredNorm() - std::norm(blk(p, p));
              total += std::norm(blk(q, q) - blk(p, p));
            }
          worst = std::max(worst, total);
        }
    }
  return std::sqrt(std::max(worst, 0.0)) / static_cast<double>(n);
}

SolutionCertificate verify_solution(const FactorModel& model,
                                    const HVector& u0,
                                    const SuperOperator& u_op) {
  const Index n = model.n;
  const Index d = n * n;
  model.require_shape(u0.mat, "verify_solution");
  if (u_op.smat.rows() != d || u_op.smat.cols() != d)
    throw InvalidInput("verify_solution: unitary has wrong shape");
  const double unit_dev =
      op_norm(u_op.smat.adjoint() * u_op.smat - ComplexMatrix::Identity(d, d));
  if (unit_dev > model.tol.eq_tol)
    throw InvalidInput("verify_solution: operator not unitary");

  const ModularObjects mo0 = modular_from_vector(model, u0);

  SolutionCertificate cert;
  cert.tol = model.tol;
  cert.unitary = u_op;
  cert.u_solution = HVector{unvec(u_op.smat.adjoint() * vec(u0.mat), n)};

  const VectorClassification cls = classify_vector(model, cert.u_solution);
  cert.sigma_min = cls.sigma_min;
  cert.cyclic_sep = cls.passes() ? 0.0 : 1.0;

  const SuperOperator pulled{
      n, u_op.smat.adjoint() * mo0.delta.smat * u_op.smat};

  if (cls.passes()) {
    const ModularObjects mo_u = modular_from_vector(model, cert.u_solution);
    cert.modular_match =
        std::max(rel_residual(mo_u.delta.smat, pulled.smat),
                 rel_residual(mo_u.j0.cmat, mo0.j0.cmat));
  } else {
    cert.modular_match = 1.0;
  }

  cert.j_commute = op_norm(u_op.smat * mo0.j0.cmat -
                           mo0.j0.cmat * u_op.smat.conjugate());
  cert.algebra_conj = mirror_commutant_residual(model, u_op, mo0.j0);
  cert.vector_sign = 0.0;
  cert.sign = +1;

  cert.data.ftype = FactorType::type_I(n);
  try {
    const DeltaFactorization fd = factorize_delta(model, pulled);
    cert.data = spectral_data_of_positive(model, fd.h.mat).data;
  } catch (const Error&) {
    // Leave the data empty; the residuals already witness the failure.
  }
  return cert;
}

//==============================================================================
// build_solution
//==============================================================================

SolutionCertificate build_solution(const FactorModel& model, const HVector& u0,
                                   const SpectralData& d, std::uint64_t seed) {
  const Index n = model.n;
  const ModularObjects mo0 = modular_from_vector(model, u0);

  if (!(d.ftype == FactorType::type_I(n)))
    throw InvalidInput("build_solution: data factor type does not match model");
  if (!validate_data(d, model.tol).empty())
    throw InvalidInput("build_solution: data fails validation");
  const VectorSpectralData vsd = spectral_data_of_vector(model, u0);
  const DeltaSpectrum target = induced_delta_spectrum(vsd.data, model.tol);
  if (!compatible_with(d, target, model.tol))
    throw InvalidInput(
        "build_solution: data incompatible with the modular spectrum");

  const FactorElement h = build_H_from_data(model, d);
  const ComplexMatrix h_half = herm_power(h.mat, 0.5, model.tol.eq_tol);
  const HVector u{model.norm(u0.mat) * (h_half * mo0.v.mat)};

  const ModularObjects mo_u = modular_from_vector(model, u);
  const double j_dev = rel_residual(mo_u.j0.cmat, mo0.j0.cmat);
  if (j_dev > model.tol.eq_tol) {
    std::ostringstream msg;
    msg << "build_solution: constructed vector changed the conjugation, "
        << "residual " << j_dev;
    throw ConstructionFailed(msg.str());
  }

  Rng rng(seed);
  const SuperOperator w =
      jcompatible_intertwiner(model, mo_u.delta, mo0.delta, mo0.j0, &rng);
  const ComplexVector wu = w.smat * vec(u.mat);
  const SuperOperator q =
      rotation_in_fixed_space(model, mo0.delta, mo0.j0, wu, vec(u0.mat));
  const SuperOperator u_op{n, q.smat * w.smat};

  SolutionCertificate cert = verify_solution(model, u0, u_op);
  cert.seed = seed;

  const ComplexVector got = vec(cert.u_solution.mat);
  const ComplexVector want = vec(u.mat);
  const double rp = (got - want).norm();
  const double rm = (got + want).norm();
  cert.sign = rp <= rm ? +1 : -1;
  cert.vector_sign = std::min(rp, rm) / std::max(want.norm(), kNormFallback);

  if (!cert.pass()) {
    std::ostringstream msg;
    msg << "build_solution: certificate failed; residuals algebra_conj="
        << cert.algebra_conj << " cyclic_sep=" << cert.cyclic_sep
        << " modular_match=" << cert.modular_match
        << " j_commute=" << cert.j_commute
        << " vector_sign=" << cert.vector_sign;
    throw ConstructionFailed(msg.str());
  }
  return cert;
}

//==============================================================================
// nf1_membership
//==============================================================================

Nf1Result nf1_membership(const FactorModel& model, const HVector& u0,
                         const SuperOperator& u_op) {
  const Index n = model.n;
  const ModularObjects mo0 = modular_from_vector(model, u0);
  const SuperOperator pulled{
      n, u_op.smat.adjoint() * mo0.delta.smat * u_op.smat};

  const DeltaFactorization fd = factorize_delta(model, pulled);
  const DeltaFactorization fd0 = factorize_delta(model, mo0.delta);
  const SpectralData da = spectral_data_of_positive(model, fd.h.mat).data;
  const SpectralData d0 = spectral_data_of_positive(model, fd0.h.mat).data;

  Nf1Result out;
  out.member = data_equivalent(da, d0, model.tol);
  out.witness = FactorElement{ComplexMatrix::Identity(n, n)};
  out.witness_residual = out.member ? 1.0 : 0.0;
  if (!out.member) return out;

  // Matched eigenprojections give the intertwining unitary inside M0; both
  // generators are trace-normalized, so the constant is 1.
  const EigSystem ea = herm_eig(fd.h.mat, model.tol.eq_tol);
  const EigSystem e0 = herm_eig(fd0.h.mat, model.tol.eq_tol);
  const std::vector<ClusterBasis> cla = cluster_bases(ea, model.tol.spec_tol);
  const std::vector<ClusterBasis> cl0 = cluster_bases(e0, model.tol.spec_tol);
  if (cla.size() != cl0.size()) return out;
  ComplexMatrix w = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < cla.size(); ++i) {
    if (cla[i].basis.cols() != cl0[i].basis.cols()) return out;
    w += cl0[i].basis * cla[i].basis.adjoint();
  }
  out.witness = FactorElement{w};
  out.witness_residual = rel_residual(w * fd.h.mat * w.adjoint(), fd0.h.mat);
  return out;
}

//==============================================================================
// build_second_class
//==============================================================================

SecondClassResult build_second_class(const FactorModel& model,
                                     const HVector& u0) {
  const ModularObjects mo0 = modular_from_vector(model, u0);

  SecondClassResult out;
  const ComplexMatrix h0_inv = herm_power(mo0.h0.mat, -1.0, model.tol.eq_tol);
  out.tr_h0_inv = model.tr(h0_inv).real();

  const ComplexMatrix h0_inv_half =
      herm_power(mo0.h0.mat, -0.5, model.tol.eq_tol);
  out.u1 = HVector{(h0_inv_half * mo0.v.mat) / std::sqrt(out.tr_h0_inv)};

  const ComplexMatrix delta0_inv =
      herm_power(mo0.delta.smat, -1.0, model.tol.eq_tol);

  // Independent check that (Delta0^{-1}, J0) are the modular objects of u1.
  const TomitaPair oracle = tomita_oracle(model, out.u1);
  out.oracle_delta = rel_residual(oracle.delta.smat, delta0_inv);
  out.oracle_j = rel_residual(oracle.j0.cmat, mo0.j0.cmat);

  const AntilinearOp inv_conj =
      build_invariant_conjugation(mo0.delta, mo0.j0, u0, out.u1, model.tol);
  const double i_delta = rel_residual(
      compose(inv_conj, compose(mo0.delta, inv_conj)).smat, mo0.delta.smat);
  const double i_j = rel_residual(
      compose(inv_conj, compose(mo0.j0, inv_conj)).cmat, mo0.j0.cmat);
  out.i_residual =
      std::max({conjugation_residual(inv_conj), i_delta, i_j});

  const SuperOperator u1_op = compose(inv_conj, mo0.j0);
  out.u1_op = u1_op;

  out.delta_inverted = rel_residual(
      u1_op.smat.adjoint() * mo0.delta.smat * u1_op.smat, delta0_inv);
  out.j_commute = op_norm(u1_op.smat * mo0.j0.cmat -
                          mo0.j0.cmat * u1_op.smat.conjugate());
  const ComplexVector v0 = vec(u0.mat);
  const ComplexVector v1 = vec(out.u1.mat);
  out.fixes_u0 = (u1_op.smat * v0 - v0).norm() / v0.norm();
  out.fixes_u1 = (u1_op.smat * v1 - v1).norm() / v1.norm();
  return out;
}

//==============================================================================
// solutions_equivalent
//==============================================================================

EquivalenceResult solutions_equivalent(const FactorModel& model,
                                       const HVector& u0,
                                       const SuperOperator& ua,
                                       const SuperOperator& ub) {
  const Index n = model.n;
  const ModularObjects mo0 = modular_from_vector(model, u0);

  auto recovered_data = [&](const SuperOperator& u_op) {
    const SuperOperator pulled{
        n, u_op.smat.adjoint() * mo0.delta.smat * u_op.smat};
    return spectral_data_of_positive(model,
                                     factorize_delta(model, pulled).h.mat)
        .data;
  };

  EquivalenceResult out;
  out.equivalent =
      data_equivalent(recovered_data(ua), recovered_data(ub), model.tol);
  if (!out.equivalent) return out;

  // Candidate witness through the canonical representative; kept only when
  // it validates the defining conditions.
  const ComplexMatrix v = ua.smat * ub.smat.adjoint();
  const double r_delta =
      op_norm(v * mo0.delta.smat - mo0.delta.smat * v) /
      std::max(op_norm(mo0.delta.smat), kNormFallback);
  const double r_j = op_norm(v * mo0.j0.cmat - mo0.j0.cmat * v.conjugate());
  const ComplexVector v0 = vec(u0.mat);
  const ComplexVector pulled_v0 = v.adjoint() * v0;
  const double r_vec = std::min((pulled_v0 - v0).norm(),
                                (pulled_v0 + v0).norm()) /
                       v0.norm();
  const double residual = std::max({r_delta, r_j, r_vec});
  if (residual <= model.tol.eq_tol) {
    out.witness = SuperOperator{n, v};
    out.witness_residual = residual;
  }
  return out;
}

}  // namespace vnf
