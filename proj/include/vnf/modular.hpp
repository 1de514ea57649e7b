#ifndef VNF_MODULAR_HPP
#define VNF_MODULAR_HPP

#include "vnf/vector_correspondence.hpp"

namespace vnf {

//==============================================================================
// Modular objects of a cyclic and separating vector
//==============================================================================
//
// For invertible u with left polar decomposition u = H V (H = (u u^dagger)^(1/2),
// V unitary) the modular data of (M0, u) is
//   J0 = L_V J L_V^dagger            (x -> V x^dagger V)
//   Delta = J0 L_{h0}^{-1} J0 L_{h0} (x -> (u u^dagger) x (u^dagger u)^{-1})
// with h0 = H^2 = u u^dagger.  Both routes to Delta are computed and
// cross-checked.

struct ModularObjects {
  SuperOperator delta;  // positive, invertible
  AntilinearOp j0;      // conjugation
  FactorElement h0;     // positive invertible, = T_u T_u^dagger
  FactorElement v;      // unitary polar factor of T_u
};

ModularObjects modular_from_vector(const FactorModel& model, const HVector& u);

// Independent Tomita oracle: builds the closure S: A u -> A^dagger u as
// S(Y) = (u^dagger)^{-1} Y^dagger u, realifies it on R^{2N^2}, and reads
// delta = S^dagger S and j0 off the real polar decomposition.  Shares no
// code path with modular_from_vector beyond basic matrix arithmetic.
struct TomitaPair {
  SuperOperator delta;
  AntilinearOp j0;
};
TomitaPair tomita_oracle(const FactorModel& model, const HVector& u);

// Recovers the left/right multiplication split delta = L_h R_{h'} by the
// nearest rank-1 Kronecker factorization; h is normalized to tr(h) = 1
// (the positive constant ambiguity of the split is absorbed into h').
struct DeltaFactorization {
  FactorElement h;
  FactorElement h_prime;
  double c_residual = 0.0;
};
DeltaFactorization factorize_delta(const FactorModel& model,
                                   const SuperOperator& delta);

// A conjugation K with K delta K = delta: entrywise conjugation in the
// eigenbasis of delta.
AntilinearOp kreal_conjugation(const SuperOperator& delta, double eq_tol = 1e-9);

// Given delta, a conjugation j with j delta j = delta^{-1}, and two vectors
// fixed by both, builds a conjugation I with I delta I = delta, I j I = j
// and I v_i = v_i.  The spectrum of delta is split at 1 (|lambda - 1| <=
// spec_tol counts as the fixed part); on the lambda > 1 part I conjugates
// coordinates in the eigenbasis {u_k}, on lambda < 1 in the reflected basis
// {j(u_k)}, and on the fixed part I acts as j.
AntilinearOp build_invariant_conjugation(const SuperOperator& delta,
                                         const AntilinearOp& j,
                                         const HVector& v1, const HVector& v2,
                                         const Tolerances& tol);

// Residual report for the defining modular identities.
struct ModularIdentityReport {
  double inverse_conjugation = 0.0;  // J0 Delta J0 * Delta - I
  double fixes_vector = 0.0;         // Delta vec(u) - vec(u)
  double j_fixes_vector = 0.0;       // J0 u - u
  double algebra_invariance = 0.0;   // Delta^{it} L_A Delta^{-it} vs M0'
  double max() const {
    return std::max(std::max(inverse_conjugation, fixes_vector),
                    std::max(j_fixes_vector, algebra_invariance));
  }
};
ModularIdentityReport check_modular_identities(const FactorModel& model,
                                               const ModularObjects& mo,
                                               const HVector& u);

// delta^{it} etc. through the clustered spectral resolution.
SuperOperator superop_spectral(const SuperOperator& delta,
                               const std::function<Complex(double)>& f,
                               const Tolerances& tol);

// max_{r,s} ||[m, R_{E_rs}]||_F / ||m||_F: distance of a superoperator from
// commuting with every right multiplication, evaluated in closed form from
// the N x N block decomposition.
double right_commutant_residual(const FactorModel& model,
                                const SuperOperator& m);

// max over matrix units E_pq of the right-commutant residual of
// t kron(I, E_pq) t^dagger: whether conjugation by t keeps the left
// multiplication algebra inside itself.
double conjugated_algebra_residual(const FactorModel& model,
                                   const ComplexMatrix& t);

}  // namespace vnf

#endif  // VNF_MODULAR_HPP
