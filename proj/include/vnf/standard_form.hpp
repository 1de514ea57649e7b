#ifndef VNF_STANDARD_FORM_HPP
#define VNF_STANDARD_FORM_HPP

#include "vnf/matkit.hpp"

namespace vnf {

//==============================================================================
// The finite type I_N factor in standard form
//==============================================================================
//
// The Hilbert space H0 is the N x N matrices with inner product
// <x, y> = (1/N) Trace(x^dagger y), the algebra M0 acts by left
// multiplication, its commutant M0' by right multiplication, the trace
// vector u_tr is the identity matrix and tr(A) = (1/N) Trace(A) is the
// tracial state.

struct FactorModel {
  Index n = 1;
  Tolerances tol;

  ComplexMatrix u_tr() const { return ComplexMatrix::Identity(n, n); }

  // Normalized trace, tr(I) = 1.
  Complex tr(const ComplexMatrix& a) const {
    return a.trace() / static_cast<double>(n);
  }

  Complex inner(const ComplexMatrix& x, const ComplexMatrix& y) const {
    return (x.adjoint() * y).trace() / static_cast<double>(n);
  }

  double norm(const ComplexMatrix& x) const {
    return x.norm() / std::sqrt(static_cast<double>(n));
  }

  void require_shape(const ComplexMatrix& m, const char* what) const;
};

FactorModel make_model(Index n, Tolerances tol = {});

// An element of H0.
struct HVector {
  ComplexMatrix mat;
};

// An element of M0, acting on H0 by left multiplication.
struct FactorElement {
  ComplexMatrix mat;
};

//==============================================================================
// Linear and antilinear maps on H0
//==============================================================================

// Linear map on H0 as an N^2 x N^2 matrix acting on vec(x).
struct SuperOperator {
  Index n = 1;
  ComplexMatrix smat;

  ComplexMatrix apply(const ComplexMatrix& x) const {
    return unvec(smat * vec(x), n);
  }
  SuperOperator adjoint() const { return {n, smat.adjoint()}; }
  static SuperOperator identity(Index n) {
    return {n, ComplexMatrix::Identity(n * n, n * n)};
  }
};

// Antilinear map x -> unvec(cmat * conj(vec x)).  For a conjugation,
// cmat * conj(cmat) = I and cmat is unitary.
struct AntilinearOp {
  Index n = 1;
  ComplexMatrix cmat;

  ComplexMatrix apply(const ComplexMatrix& x) const {
    return unvec(cmat * vec(x).conjugate(), n);
  }
  ComplexVector apply_vec(const ComplexVector& v) const {
    return cmat * v.conjugate();
  }
  // Adjoint with respect to the H0 inner product: cmat^T.
  AntilinearOp adjoint() const { return {n, cmat.transpose()}; }
};

// Composition rules, apply-right-first in every case:
//   (antilinear o antilinear)(x) = C1 * conj(C2) * vec(x)        -> linear
//   (antilinear o linear)(x)     = C * conj(M) * conj(vec x)     -> antilinear
//   (linear o antilinear)(x)     = M * C * conj(vec x)           -> antilinear
SuperOperator compose(const AntilinearOp& a, const AntilinearOp& b);
AntilinearOp compose(const AntilinearOp& a, const SuperOperator& m);
AntilinearOp compose(const SuperOperator& m, const AntilinearOp& a);
SuperOperator compose(const SuperOperator& a, const SuperOperator& b);

// ||J^2 - id|| and deviation of cmat from unitarity, combined.
double conjugation_residual(const AntilinearOp& j);

//==============================================================================
// Standard-form operations
//==============================================================================

// The trace conjugation J: x -> x^dagger.  Conjugating left multiplications
// by J gives right multiplications: J L_A J = R_{A^dagger}.
AntilinearOp trace_conjugation(const FactorModel& model);

SuperOperator left_superop(const FactorModel& model, const FactorElement& a);
SuperOperator right_superop(const FactorModel& model, const FactorElement& b);

enum class Side { left, right };

// Orthonormal basis of span{A u : A in M0} (left) or span{u A} (right),
// computed from the N^2 spanning vectors E_pq u (resp. u E_pq) by
// rank-revealing QR with threshold eq_tol.
struct CyclicSubspace {
  ComplexMatrix basis;  // N^2 x dim, orthonormal columns (vec coordinates)
  Index dim = 0;
};
CyclicSubspace cyclic_subspace(const FactorModel& model, Side side,
                               const HVector& u);

}  // namespace vnf

#endif  // VNF_STANDARD_FORM_HPP
