#ifndef VNF_SPECTRAL_CLASSES_HPP
#define VNF_SPECTRAL_CLASSES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vnf/matkit.hpp"

namespace vnf {

//==============================================================================
// Factor types and multiplicities
//==============================================================================

struct FactorType {
  enum class Kind { type_i, type_ii1 };
  Kind kind = Kind::type_i;
  Index n = 1;  // matrix dimension, only for type_i

  static FactorType type_I(Index n);
  static FactorType type_II1() { return {Kind::type_ii1, 0}; }
  bool operator==(const FactorType&) const = default;
  std::string name() const;
};

// A multiplicity value: an exact fraction in type I_N mode (values l/N),
// a floating value otherwise.
class Mult {
 public:
  Mult() : exact_(true), num_(0), den_(1), approx_(0.0) {}
  static Mult fraction(std::int64_t num, std::int64_t den);
  static Mult real(double v);

  bool exact() const { return exact_; }
  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double value() const { return exact_ ? double(num_) / double(den_) : approx_; }

  Mult operator+(const Mult& o) const;
  Mult operator*(const Mult& o) const;
  bool same_as(const Mult& o, double eq_tol) const;
  std::string str() const;  // "2/3", "1", or a decimal

 private:
  bool exact_;
  std::int64_t num_, den_;
  double approx_;
};

//==============================================================================
// Spectral data for H and the induced Delta spectrum
//==============================================================================

struct SpectralPair {
  double mu = 0.0;  // eigenvalue of H
  Mult m;           // von Neumann multiplicity, tr of the eigenprojection
};

struct SpectralData {
  std::vector<SpectralPair> pairs;
  FactorType ftype;
};

struct DeltaPair {
  double lambda = 0.0;    // eigenvalue of Delta
  Mult n;                 // normalized eigenspace dimension (finite case)
  bool infinite = false;  // type II_1 marker
};

struct DeltaSpectrum {
  std::vector<DeltaPair> pairs;  // ascending lambda, closed under inversion
};

//==============================================================================
// Validation and normalization
//==============================================================================

struct Violation {
  enum class Kind {
    positivity,
    distinctness,
    multiplicity_range,
    multiplicity_sum,
    normalization,  // sum m_k mu_k != 1; scale-free operations ignore this
  };
  Kind kind;
  std::string what;
};

std::vector<Violation> validate_data(const SpectralData& d,
                                     const Tolerances& tol);

// True when the only violations (if any) are of normalization kind.
bool valid_up_to_scale(const SpectralData& d, const Tolerances& tol);

struct NormalizedData {
  SpectralData data;  // mu' = c * mu, so that sum m_k mu'_k = 1
  double c = 1.0;
};
NormalizedData normalize_data(const SpectralData& d, const Tolerances& tol);

//==============================================================================
// The induced Delta spectrum and class comparisons
//==============================================================================

// lambda set = all pairwise ratios mu_k / mu_l, clustered at spec_tol;
// multiplicities n_j = sum of m_k * m_l over the cluster for type I, the
// infinite marker for type II_1.  The result is inversion symmetric by
// construction.
DeltaSpectrum induced_delta_spectrum(const SpectralData& d,
                                     const Tolerances& tol);

bool spectra_match(const DeltaSpectrum& a, const DeltaSpectrum& b,
                   const Tolerances& tol);

// Same eigenvalues up to one positive constant and same multiplicities.
bool data_equivalent(const SpectralData& a, const SpectralData& b,
                     const Tolerances& tol);

// (c * mu^{-1}, m): the data of the inverted operator, renormalized.
SpectralData dual_data(const SpectralData& d, const Tolerances& tol);

bool is_self_dual(const SpectralData& d, const Tolerances& tol);

// induced_delta_spectrum(d) matches the target.
bool compatible_with(const SpectralData& d, const DeltaSpectrum& target,
                     const Tolerances& tol);

//==============================================================================
// Enumeration of classes (type I_N)
//==============================================================================

// Complete list, up to data_equivalent, of spectral data compatible with the
// target.  Candidate mu-sets are scaled subsets of the target lambda values
// at most 1 containing 1 (every mu_k / mu_max is itself a ratio), and
// multiplicities are solved exactly over N-part compositions.  max_k = 0
// means no user bound; `complete` is false when a user bound may have cut
// the search.
struct Enumeration {
  std::vector<SpectralData> classes;
  bool complete = true;
};
Enumeration enumerate_classes(const DeltaSpectrum& target,
                              const FactorType& ftype, Index max_k,
                              const Tolerances& tol);

//==============================================================================
// Type II_1 variants
//==============================================================================

struct VariantSpec {
  enum class Kind { permutation, epsilon_shift };
  Kind kind = Kind::permutation;
  std::vector<Index> sigma;  // permutation of 0..K-1
  Index k = 0, l = 0;        // epsilon shift: m_k += eps, m_l -= eps
  double epsilon = 0.0;
};

struct Variant {
  SpectralData data;        // renormalized variant
  bool equivalent = false;  // data_equivalent(original, variant)
  bool compatible = false;  // variant compatible with original's spectrum
};

Variant derive_variants(const SpectralData& d, const VariantSpec& spec,
                        const Tolerances& tol);

}  // namespace vnf

#endif  // VNF_SPECTRAL_CLASSES_HPP
