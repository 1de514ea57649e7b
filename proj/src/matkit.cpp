#include "vnf/matkit.hpp"

#include <algorithm>
#include <cmath>

namespace vnf {

double op_norm(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  if (a.rows() <= 12 && a.cols() <= 12)
    return Eigen::JacobiSVD<ComplexMatrix>(a).singularValues()(0);
  // sigma_max^2 is the top eigenvalue of A^dagger A; the eigensolver error
  // is relative to ||A^dagger A||, so the square root stays accurate.
  const ComplexMatrix gram = a.cols() <= a.rows()
                                 ? ComplexMatrix(a.adjoint() * a)
                                 : ComplexMatrix(a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram,
                                                  Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

bool all_finite(const ComplexMatrix& a) {
  return a.allFinite();
}

bool is_hermitian(const ComplexMatrix& a, double eq_tol) {
  if (a.rows() != a.cols()) return false;
  return op_norm(a - a.adjoint()) <=
         eq_tol * std::max(op_norm(a), kNormFallback);
}

//==============================================================================
// Vectorization
//==============================================================================

ComplexVector vec(const ComplexMatrix& x) {
  // MatrixXcd is column-major, so the storage order is already the
  // column-stacking convention.
  return Eigen::Map<const ComplexVector>(x.data(), x.size());
}

ComplexMatrix unvec(const ComplexVector& v, Index n) {
  if (v.size() != n * n) throw InvalidInput("unvec: size is not n^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix multiplier_matrix(const ComplexMatrix& a,
                                const ComplexMatrix& b) {
  return kron(b.transpose(), a);
}

//==============================================================================
// herm_eig
//==============================================================================

namespace {

// Rotates each column so that its largest-modulus entry (lowest index on
// ties) is real positive.
void canonicalize_phases(ComplexMatrix& vectors) {
  for (Index j = 0; j < vectors.cols(); ++j) {
    Index imax = 0;
    double best = -1.0;
    for (Index i = 0; i < vectors.rows(); ++i) {
      const double m = std::abs(vectors(i, j));
      if (m > best) {
        best = m;
        imax = i;
      }
    }
    if (best <= 0.0) continue;
    const Complex ph = vectors(imax, j) / best;
    vectors.col(j) *= std::conj(ph);
  }
}

}  // namespace

EigSystem herm_eig(const ComplexMatrix& a, double eq_tol) {
  if (a.rows() != a.cols()) throw InvalidInput("herm_eig: matrix not square");
  if (!all_finite(a)) throw InvalidInput("herm_eig: non-finite entries");
  if (!is_hermitian(a, eq_tol))
    throw InvalidInput("herm_eig: matrix not Hermitian within tolerance");

  const ComplexMatrix h = (a + a.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw Error("herm_eig: eigensolver did not converge");

  EigSystem sys{es.eigenvalues(), es.eigenvectors()};

  // Re-orthonormalize numerically degenerate eigenspaces by column-pivoted
  // QR of the eigenprojection; makes the basis independent of the solver's
  // arbitrary choices inside a degenerate block.
  const Index n = h.rows();
  const double scale = std::max(sys.values.cwiseAbs().maxCoeff(), kNormFallback);
  const double deg_tol = 1e-12 * scale;
  Index start = 0;
  while (start < n) {
    Index end = start + 1;
    while (end < n && sys.values(end) - sys.values(end - 1) <= deg_tol) ++end;
    const Index k = end - start;
    if (k > 1) {
      const ComplexMatrix basis = sys.vectors.middleCols(start, k);
      const ComplexMatrix proj = basis * basis.adjoint();
      Eigen::ColPivHouseholderQR<ComplexMatrix> qr(proj);
      const ComplexMatrix q = qr.householderQ();
      sys.vectors.middleCols(start, k) = q.leftCols(k);
    }
    start = end;
  }
  canonicalize_phases(sys.vectors);
  return sys;
}

ComplexMatrix spectral_apply(const ComplexMatrix& a,
                             const std::function<Complex(double)>& f,
                             double spec_tol, double eq_tol) {
  const EigSystem es = herm_eig(a, eq_tol);
  ComplexMatrix out = ComplexMatrix::Zero(a.rows(), a.cols());
  for (const EigCluster& c : group_eigenvalues(es.values, spec_tol)) {
    ComplexMatrix proj = ComplexMatrix::Zero(a.rows(), a.cols());
    for (Index i : c.indices)
      proj += es.vectors.col(i) * es.vectors.col(i).adjoint();
    out += f(c.value) * proj;
  }
  return out;
}

ComplexMatrix herm_power(const ComplexMatrix& a, double p, double eq_tol) {
  const EigSystem es = herm_eig(a, eq_tol);
  const bool needs_positive = p < 0.0 || p != std::floor(p);
  if (needs_positive && es.values(0) <= 0.0)
    throw NotInvertible("herm_power: matrix not positive definite");
  RealVector powered(es.values.size());
  for (Index i = 0; i < es.values.size(); ++i)
    powered(i) = std::pow(es.values(i), p);
  return es.vectors * powered.asDiagonal() * es.vectors.adjoint();
}

//==============================================================================
// left_polar
//==============================================================================

LeftPolar left_polar(const ComplexMatrix& t) {
  if (t.rows() != t.cols()) throw InvalidInput("left_polar: matrix not square");
  if (!all_finite(t)) throw InvalidInput("left_polar: non-finite entries");
  Eigen::JacobiSVD<ComplexMatrix> svd(t,
                                      Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix u = svd.matrixU();
  const ComplexMatrix v = svd.matrixV();
  LeftPolar out;
  out.p = u * svd.singularValues().asDiagonal() * u.adjoint();
  out.w = u * v.adjoint();
  return out;
}

//==============================================================================
// group_eigenvalues
//==============================================================================

std::vector<EigCluster> group_eigenvalues(const RealVector& values,
                                          double spec_tol) {
  std::vector<EigCluster> clusters;
  const Index n = values.size();
  if (n == 0) return clusters;
  for (Index i = 1; i < n; ++i)
    if (values(i) < values(i - 1))
      throw InvalidInput("group_eigenvalues: values not ascending");

  const double scale = std::max(values.cwiseAbs().maxCoeff(), kNormFallback);
  const double gap = spec_tol * scale;
  Index start = 0;
  while (start < n) {
    Index end = start + 1;
    while (end < n && values(end) - values(end - 1) <= gap) ++end;
    EigCluster c;
    double sum = 0.0;
    for (Index i = start; i < end; ++i) {
      c.indices.push_back(i);
      sum += values(i);
    }
    c.value = sum / static_cast<double>(end - start);
    clusters.push_back(std::move(c));
    start = end;
  }
  return clusters;
}

//==============================================================================
// nearest_kron_rank1
//==============================================================================

namespace {

// Van Loan-Pitsianis rearrangement: R[j*n+i, l*n+k] = S[i*n+k, j*n+l], so
// that R(kron(K1, K2)) = vec(K1) * vec(K2)^T.
ComplexMatrix rearrange(const ComplexMatrix& s, Index n) {
  ComplexMatrix r(n * n, n * n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l)
          r(j * n + i, l * n + k) = s(i * n + k, j * n + l);
  return r;
}

}  // namespace

KronRank1 nearest_kron_rank1(const ComplexMatrix& s, Index n) {
  if (s.rows() != n * n || s.cols() != n * n)
    throw InvalidInput("nearest_kron_rank1: matrix is not n^2 x n^2");
  KronRank1 out;
  const ComplexMatrix r = rearrange(s, n);
  const double total = r.norm();
  if (total <= kNormFallback) {
    out.a = ComplexMatrix::Zero(n, n);
    out.b = ComplexMatrix::Zero(n, n);
    out.residual = 0.0;
    return out;
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(r,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector sv = svd.singularValues();
  const double s1 = sv(0);
  // kron factors: S ~ kron(K1, K2) with vec(K1) = sqrt(s1)*u1,
  // vec(K2) = sqrt(s1)*conj(v1); the multiplier pair is A = K2, B = K1^T.
  const ComplexVector vk1 = std::sqrt(s1) * svd.matrixU().col(0);
  const ComplexVector vk2 = std::sqrt(s1) * svd.matrixV().col(0).conjugate();
  ComplexMatrix a = unvec(vk2, n);
  ComplexMatrix b = unvec(vk1, n).transpose();

  const double anorm = a.norm();
  a /= anorm;
  b *= anorm;
  // Phase convention: leading entry of A (row-major scan) real positive.
  for (Index i = 0; i < n; ++i) {
    bool done = false;
    for (Index j = 0; j < n; ++j) {
      if (std::abs(a(i, j)) > 1e-12) {
        const Complex ph = a(i, j) / std::abs(a(i, j));
        a *= std::conj(ph);
        b *= ph;
        done = true;
        break;
      }
    }
    if (done) break;
  }

  out.a = std::move(a);
  out.b = std::move(b);
  double tail = 0.0;
  for (Index i = 1; i < sv.size(); ++i) tail += sv(i) * sv(i);
  out.residual = std::sqrt(tail) / total;
  return out;
}

//==============================================================================
// Random matrices
//==============================================================================

ComplexMatrix random_gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = Complex(dist(rng), dist(rng));
  return g;
}

ComplexMatrix random_unitary(Index n, Rng& rng) {
  const ComplexMatrix g = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix phases so the distribution is Haar.
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double m = std::abs(d);
    if (m > 0.0) q.col(j) *= d / m;
  }
  return q;
}

RealMatrix random_real_orthogonal(Index n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  RealMatrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) g(i, j) = dist(rng);
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  RealMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

ComplexMatrix random_positive(Index n, double lo, double hi, Rng& rng) {
  if (!(0.0 < lo && lo <= hi))
    throw InvalidInput("random_positive: need 0 < lo <= hi");
  std::uniform_real_distribution<double> dist(lo, hi);
  RealVector evals(n);
  for (Index i = 0; i < n; ++i) evals(i) = dist(rng);
  const ComplexMatrix q = random_unitary(n, rng);
  return q * evals.asDiagonal() * q.adjoint();
}

}  // namespace vnf
