#ifndef VNF_MATKIT_HPP
#define VNF_MATKIT_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "vnf/errors.hpp"

namespace vnf {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

//==============================================================================
// Tolerance policy
//==============================================================================

// All residual checks in the library are relative to operator (spectral)
// norms, with an absolute fallback for near-zero reference norms.
struct Tolerances {
  double eq_tol = 1e-9;    // residual checks
  double spec_tol = 1e-8;  // eigenvalue clustering

  void validate() const {
    if (!(eq_tol > 0.0 && eq_tol < 1.0) || !(spec_tol > 0.0 && spec_tol < 1.0))
      throw InvalidInput("Tolerances must lie in (0, 1)");
  }
};

inline constexpr double kNormFallback = 1e-12;

// Largest singular value.
double op_norm(const ComplexMatrix& a);

// ||x - ref|| / max(||ref||, fallback), operator norms.
template <typename A, typename B>
double rel_residual(const Eigen::MatrixBase<A>& x,
                    const Eigen::MatrixBase<B>& ref) {
  const ComplexMatrix xm = x;
  const ComplexMatrix rm = ref;
  return op_norm(xm - rm) / std::max(op_norm(rm), 1e-12);
}

bool all_finite(const ComplexMatrix& a);
bool is_hermitian(const ComplexMatrix& a, double eq_tol);

//==============================================================================
// Vectorization and Kronecker products
//==============================================================================
//
// Fixed convention used everywhere: vec stacks the columns of an N x N matrix
// top to bottom, so vec(x)[i + N*j] = x(i, j).  Under this convention the map
// X -> A*X*B has matrix kron(B^T, A), with kron(A, B)[i*q + k, j*q + l] =
// A(i, j) * B(k, l) for B of size q x q.

ComplexVector vec(const ComplexMatrix& x);
ComplexMatrix unvec(const ComplexVector& v, Index n);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Matrix of X -> A*X*B on vec coordinates, i.e. kron(B^T, A).
ComplexMatrix multiplier_matrix(const ComplexMatrix& a, const ComplexMatrix& b);

//==============================================================================
// Spectral decompositions
//==============================================================================

struct EigSystem {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // unitary, columns are eigenvectors
};

// Hermitian eigendecomposition with a deterministic canonical output.
// Degenerate eigenspaces (relative gap below ~1e-12) are re-orthonormalized
// by column-pivoted QR of the eigenprojection, and every eigenvector column
// is phase-rotated so its largest-modulus entry is real positive.
EigSystem herm_eig(const ComplexMatrix& a, double eq_tol = 1e-9);

// f applied through the spectral resolution of a Hermitian matrix,
// eigenvalue clustering at spec_tol (cluster representatives feed f).
ComplexMatrix spectral_apply(const ComplexMatrix& a,
                             const std::function<Complex(double)>& f,
                             double spec_tol, double eq_tol = 1e-9);

// a^p for Hermitian a through its eigendecomposition; requires positive
// definite a when p is negative or fractional.
ComplexMatrix herm_power(const ComplexMatrix& a, double p,
                         double eq_tol = 1e-9);

// Left polar decomposition T = P*W with P = (T T^dagger)^(1/2).
// W is unitary (for singular T the kernel/cokernel bases from the SVD
// complete W to a unitary).
struct LeftPolar {
  ComplexMatrix p;  // positive semidefinite
  ComplexMatrix w;  // unitary
};
LeftPolar left_polar(const ComplexMatrix& t);

//==============================================================================
// Eigenvalue clustering
//==============================================================================

struct EigCluster {
  double value;                // arithmetic mean of the cluster
  std::vector<Index> indices;  // ascending positions into the input list
};

// Groups an ascending list: two values share a cluster iff their gap is at
// most spec_tol * max|values|.
std::vector<EigCluster> group_eigenvalues(const RealVector& values,
                                          double spec_tol);

//==============================================================================
// Nearest rank-1 Kronecker factorization
//==============================================================================

// Best approximation of an N^2 x N^2 matrix S by the superoperator of
// X -> A*X*B, i.e. by kron(B^T, A).  residual is the relative Frobenius
// error of the rank-1 truncation of the rearranged matrix (the rearrangement
// is a Frobenius isometry, so this equals ||S - kron(B^T, A)||_F / ||S||_F).
// Scale is fixed by ||A||_F = 1 and the phase by making the first entry of A
// larger than 1e-12 in modulus real positive.
struct KronRank1 {
  ComplexMatrix a;
  ComplexMatrix b;
  double residual = 0.0;
};
KronRank1 nearest_kron_rank1(const ComplexMatrix& s, Index n);

//==============================================================================
// Seeded random matrices
//==============================================================================

using Rng = std::mt19937_64;

ComplexMatrix random_gaussian(Index rows, Index cols, Rng& rng);
ComplexMatrix random_unitary(Index n, Rng& rng);        // Haar via QR
RealMatrix random_real_orthogonal(Index n, Rng& rng);   // Haar via QR
// Random Hermitian positive definite with eigenvalues in [lo, hi].
ComplexMatrix random_positive(Index n, double lo, double hi, Rng& rng);

}  // namespace vnf

#endif  // VNF_MATKIT_HPP
