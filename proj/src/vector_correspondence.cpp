#include "vnf/vector_correspondence.hpp"

namespace vnf {

FactorElement operator_of_vector(const FactorModel& model, const HVector& u) {
  model.require_shape(u.mat, "operator_of_vector");
  return FactorElement{u.mat};
}

VectorOfOperator vector_of_operator(const FactorModel& model,
                                    const FactorElement& t) {
  model.require_shape(t.mat, "vector_of_operator");
  VectorOfOperator out;
  out.u = HVector{t.mat * model.u_tr()};
  const double tt = model.tr(t.mat.adjoint() * t.mat).real();
  const double tt_swapped = model.tr(t.mat * t.mat.adjoint()).real();
  if (std::abs(tt - tt_swapped) >
      model.tol.eq_tol * std::max(tt, kNormFallback))
    throw Error("vector_of_operator: trace symmetry violated");
  out.hs_norm_sq = tt;
  return out;
}

VectorClassification classify_vector(const FactorModel& model,
                                     const HVector& u) {
  model.require_shape(u.mat, "classify_vector");
  VectorClassification out;
  Eigen::JacobiSVD<ComplexMatrix> svd(u.mat);
  out.sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
  const double nn = static_cast<double>(model.n) * static_cast<double>(model.n);
  out.threshold = nn * model.tol.eq_tol * model.norm(u.mat);
  out.cyclic = out.sigma_min > out.threshold;
  out.separating = out.cyclic;  // dense range = injective in finite dimension
  out.borderline = out.sigma_min > out.threshold / 10.0 &&
                   out.sigma_min < out.threshold * 10.0;
  out.left_dim = cyclic_subspace(model, Side::left, u).dim;
  out.right_dim = cyclic_subspace(model, Side::right, u).dim;
  return out;
}

double trace_of_positive(const FactorModel& model, const FactorElement& a) {
  model.require_shape(a.mat, "trace_of_positive");
  const double norm_a = std::max(op_norm(a.mat), kNormFallback);
  if (!is_hermitian(a.mat, model.tol.eq_tol))
    throw InvalidInput("trace_of_positive: input not Hermitian");
  const EigSystem es = herm_eig(a.mat, model.tol.eq_tol);
  if (es.values(0) < -model.tol.eq_tol * norm_a)
    throw InvalidInput("trace_of_positive: input not positive semidefinite");

  const ComplexMatrix utr = model.u_tr();
  double sum = 0.0;
  for (Index i = 0; i < es.values.size(); ++i) {
    const ComplexMatrix proj = es.vectors.col(i) * es.vectors.col(i).adjoint();
    const double w = model.norm(proj * utr);
    sum += es.values(i) * w * w;
  }
  const double direct = model.tr(a.mat).real();
  if (std::abs(sum - direct) > model.tol.eq_tol * std::max(1.0, std::abs(direct)))
    throw Error("trace_of_positive: spectral sum disagrees with direct trace");
  return sum;
}

}  // namespace vnf
