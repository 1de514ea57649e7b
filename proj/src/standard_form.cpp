#include "vnf/standard_form.hpp"

namespace vnf {

void FactorModel::require_shape(const ComplexMatrix& m, const char* what) const {
  if (m.rows() != n || m.cols() != n)
    throw InvalidInput(std::string(what) + ": expected shape " +
                       std::to_string(n) + "x" + std::to_string(n));
  if (!all_finite(m))
    throw InvalidInput(std::string(what) + ": non-finite entries");
}

FactorModel make_model(Index n, Tolerances tol) {
  if (n < 1) throw InvalidInput("make_model: dimension must be >= 1");
  tol.validate();
  return FactorModel{n, tol};
}

//==============================================================================
// Composition algebra
//==============================================================================

SuperOperator compose(const AntilinearOp& a, const AntilinearOp& b) {
  return {a.n, a.cmat * b.cmat.conjugate()};
}

AntilinearOp compose(const AntilinearOp& a, const SuperOperator& m) {
  return {a.n, a.cmat * m.smat.conjugate()};
}

AntilinearOp compose(const SuperOperator& m, const AntilinearOp& a) {
  return {a.n, m.smat * a.cmat};
}

SuperOperator compose(const SuperOperator& a, const SuperOperator& b) {
  return {a.n, a.smat * b.smat};
}

double conjugation_residual(const AntilinearOp& j) {
  const Index d = j.cmat.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  const double involution = op_norm(j.cmat * j.cmat.conjugate() - id);
  const double isometry = op_norm(j.cmat.adjoint() * j.cmat - id);
  return std::max(involution, isometry);
}

//==============================================================================
// Standard-form operations
//==============================================================================

AntilinearOp trace_conjugation(const FactorModel& model) {
  const Index n = model.n;
  // vec(x^dagger)[i + n*j] = conj(vec(x)[j + n*i]): the cmat is the
  // transposition permutation.
  ComplexMatrix p = ComplexMatrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) p(i + n * j, j + n * i) = 1.0;
  return {n, std::move(p)};
}

SuperOperator left_superop(const FactorModel& model, const FactorElement& a) {
  model.require_shape(a.mat, "left_superop");
  return {model.n,
          kron(ComplexMatrix::Identity(model.n, model.n), a.mat)};
}

SuperOperator right_superop(const FactorModel& model, const FactorElement& b) {
  model.require_shape(b.mat, "right_superop");
  return {model.n,
          kron(b.mat.transpose(), ComplexMatrix::Identity(model.n, model.n))};
}

CyclicSubspace cyclic_subspace(const FactorModel& model, Side side,
                               const HVector& u) {
  model.require_shape(u.mat, "cyclic_subspace");
  const Index n = model.n;
  ComplexMatrix span(n * n, n * n);
  Index col = 0;
  for (Index p = 0; p < n; ++p)
    for (Index q = 0; q < n; ++q) {
      ComplexMatrix e = ComplexMatrix::Zero(n, n);
      e(p, q) = 1.0;
      span.col(col++) = vec(side == Side::left ? ComplexMatrix(e * u.mat)
                                               : ComplexMatrix(u.mat * e));
    }

  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(span);
  qr.setThreshold(model.tol.eq_tol);
  const Index rank = qr.rank();
  CyclicSubspace out;
  out.dim = rank;
  if (rank > 0) {
    const ComplexMatrix q = qr.householderQ();
    out.basis = q.leftCols(rank);
  } else {
    out.basis = ComplexMatrix::Zero(n * n, 0);
  }
  return out;
}

}  // namespace vnf
