#ifndef VNF_VECTOR_CORRESPONDENCE_HPP
#define VNF_VECTOR_CORRESPONDENCE_HPP

#include "vnf/standard_form.hpp"

namespace vnf {

// The dictionary between vectors u in H0 and operators T_u with
// T_u u_tr = u.  In the standard form T_u is left multiplication by the
// matrix u itself, so u is cyclic iff T_u is injective iff the matrix u is
// invertible, and separating iff T_u has dense range, which is the same
// condition.

// Unique T with T u_tr = u.
FactorElement operator_of_vector(const FactorModel& model, const HVector& u);

struct VectorOfOperator {
  HVector u;          // T u_tr
  double hs_norm_sq;  // tr(T^dagger T) = tr(T T^dagger) = ||u||^2
};
VectorOfOperator vector_of_operator(const FactorModel& model,
                                    const FactorElement& t);

struct VectorClassification {
  bool cyclic = false;
  bool separating = false;
  bool borderline = false;  // sigma_min within 10x of the rank threshold
  double sigma_min = 0.0;
  double threshold = 0.0;   // N^2 * eq_tol * ||u||
  Index left_dim = 0;       // dim [M0 u], independent subspace oracle
  Index right_dim = 0;      // dim [u M0]
  bool passes() const { return cyclic && separating; }
};

VectorClassification classify_vector(const FactorModel& model,
                                     const HVector& u);

// tr(A) evaluated as the spectral sum over eigenprojections E_i of A:
// sum_i lambda_i ||E_i u_tr||^2; asserted equal to (1/N) Trace(A).
double trace_of_positive(const FactorModel& model, const FactorElement& a);

}  // namespace vnf

#endif  // VNF_VECTOR_CORRESPONDENCE_HPP
