#ifndef VNF_INVERSE_PROBLEM_HPP
#define VNF_INVERSE_PROBLEM_HPP

#include <optional>

#include "vnf/modular.hpp"
#include "vnf/spectral_classes.hpp"

namespace vnf {

//==============================================================================
// Spectral data of vectors and generating operators
//==============================================================================

struct VectorSpectralData {
  SpectralData data;  // normalized, descending mu
  double scale = 1.0; // c with tr(c * h0) = 1
};

// Clustered eigendecomposition of a positive matrix, multiplicities as exact
// fractions (eigenspace dim / N), normalized so sum m_k mu_k = 1.
VectorSpectralData spectral_data_of_positive(const FactorModel& model,
                                             const ComplexMatrix& h);

// Data of h0 = u u^dagger for a cyclic and separating u.
VectorSpectralData spectral_data_of_vector(const FactorModel& model,
                                           const HVector& u);

// Pairwise orthogonal diagonal block projections with traces m_k = l_k / N,
// consecutive index blocks in the given order.
struct ProjectionFamily {
  std::vector<FactorElement> projections;
};
ProjectionFamily projections_with_traces(const FactorModel& model,
                                         const std::vector<Mult>& m_list);

// H = sum_k mu_k E_k over the canonical projection family; tr(H) = 1.
FactorElement build_H_from_data(const FactorModel& model,
                                const SpectralData& d);

//==============================================================================
// Intertwiners and rotations commuting with (Delta, J)
//==============================================================================

// A basis over R, returned as complex columns, of the j-fixed real subspace
// of span(basis); basis columns must be orthonormal and the span j-invariant.
ComplexMatrix jreal_basis(const ComplexMatrix& basis, const AntilinearOp& j);

// Unitary W with W delta_a W^dagger = delta_b and W j0 = j0 W, built from
// matched eigenspaces: eigenvalues pair as (lambda, 1/lambda), partial
// isometries on the lambda > 1 spaces reflect through j0 to lambda < 1, and
// the lambda = 1 space is matched through j0-real orthonormal bases.  An
// optional rng mixes the matching unitarily inside each eigenspace (the
// contracts hold for every choice).
SuperOperator jcompatible_intertwiner(const FactorModel& model,
                                      const SuperOperator& delta_a,
                                      const SuperOperator& delta_b,
                                      const AntilinearOp& j0,
                                      Rng* rng = nullptr);

// Unitary commuting with delta0 and j0 that maps `from` to `to`; both must
// lie in the eigenvalue-1 space of delta0, be fixed by j0, and have equal
// norms.  Acts as a real-orthogonal map on the j0-fixed real subspace,
// extended complex-linearly and padded by the identity.
SuperOperator rotation_in_fixed_space(const FactorModel& model,
                                      const SuperOperator& delta0,
                                      const AntilinearOp& j0,
                                      const ComplexVector& from,
                                      const ComplexVector& to);

//==============================================================================
// Solution certificates
//==============================================================================

// Commutation of the conjugated algebra U M0 U^dagger with its J0 mirror:
// max over matrix units of ||[U L_pq U^dagger, J0 U L_rs U^dagger J0]||_F,
// normalized.  This is the commutant relation a solution algebra must
// satisfy with respect to the shared modular conjugation; it vanishes
// identically when U commutes with J0.
double mirror_commutant_residual(const FactorModel& model,
                                 const SuperOperator& u_op,
                                 const AntilinearOp& j0);

struct SolutionCertificate {
  HVector u_solution;      // U^dagger u0
  SuperOperator unitary;   // U
  SpectralData data;       // recovered from factorize_delta(U^dagger Delta0 U)
  double algebra_conj = 1.0;   // mirror commutant relation for U M0 U^dagger
  double cyclic_sep = 1.0;     // 0 when u_solution is cyclic and separating
  double modular_match = 1.0;  // modular objects of u vs (U^dagger Delta0 U, J0)
  double j_commute = 1.0;      // U J0 - J0 U
  double vector_sign = 0.0;    // distance of U^dagger u0 from +-(built u)
  int sign = +1;
  double sigma_min = 0.0;
  Tolerances tol;
  std::uint64_t seed = 0;

  double max_residual() const {
    return std::max({algebra_conj, cyclic_sep, modular_match, j_commute,
                     vector_sign});
  }
  bool pass() const { return max_residual() <= tol.eq_tol; }
};

// Checks the four solution conditions for a given unitary: conjugation
// stays inside the algebra, U^dagger u0 cyclic and separating, the pulled
// back pair (U^dagger Delta0 U, J0) equals the modular objects of U^dagger
// u0, and U commutes with J0.
SolutionCertificate verify_solution(const FactorModel& model,
                                    const HVector& u0,
                                    const SuperOperator& u_op);

// Constructs a solution unitary whose pulled-back generator has spectral
// data d: H from the data, u = ||u0|| H^(1/2) V u_tr with V the polar
// unitary of u0, an intertwiner W from the modular operator of u to Delta0,
// and a corrective rotation sending W u to u0 inside the fixed space.
SolutionCertificate build_solution(const FactorModel& model, const HVector& u0,
                                   const SpectralData& d,
                                   std::uint64_t seed = 0);

//==============================================================================
// Class membership and equivalence
//==============================================================================

struct Nf1Result {
  bool member = false;
  FactorElement witness;          // unitary w in M0 with w H w^dagger = H0
  double witness_residual = 0.0;  // meaningful when member
};
// Trivial-class membership: the recovered generator is unitarily equivalent
// to H0 inside M0 (same spectral data up to a positive constant).
Nf1Result nf1_membership(const FactorModel& model, const HVector& u0,
                         const SuperOperator& u_op);

struct SecondClassResult {
  HVector u1;            // H0^(-1/2) V u_tr, normalized
  SuperOperator u1_op;   // U1 = I J0
  double tr_h0_inv = 0.0;
  double oracle_delta = 1.0;    // modular operator of u1 vs Delta0^{-1}
  double oracle_j = 1.0;        // modular conjugation of u1 vs J0
  double delta_inverted = 1.0;  // U1^dagger Delta0 U1 vs Delta0^{-1}
  double j_commute = 1.0;
  double fixes_u0 = 1.0;
  double fixes_u1 = 1.0;
  double i_residual = 1.0;      // conjugation contracts of I
  double max_residual() const {
    return std::max({oracle_delta, oracle_j, delta_inverted, j_commute,
                     fixes_u0, fixes_u1, i_residual});
  }
};
// The dual vector u1 whose modular objects are (Delta0^{-1}, J0), the
// invariant conjugation I, and the unitary U1 = I J0 that carries Delta0 to
// its inverse while fixing u0 and u1.
SecondClassResult build_second_class(const FactorModel& model,
                                     const HVector& u0);

struct EquivalenceResult {
  bool equivalent = false;
  std::optional<SuperOperator> witness;  // commutes with Delta0, J0; fixes u0
  double witness_residual = 0.0;
};
// Decision through the recovered spectral data; the witness is attempted as
// Ua Ub^dagger and kept only when it validates.
EquivalenceResult solutions_equivalent(const FactorModel& model,
                                       const HVector& u0,
                                       const SuperOperator& ua,
                                       const SuperOperator& ub);

}  // namespace vnf

#endif  // VNF_INVERSE_PROBLEM_HPP
