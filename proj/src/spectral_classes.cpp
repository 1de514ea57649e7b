#include "vnf/spectral_classes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace vnf {

//==============================================================================
// FactorType / Mult
//==============================================================================

FactorType FactorType::type_I(Index n) {
  if (n < 1) throw InvalidInput("FactorType: type I_N needs N >= 1");
  return {Kind::type_i, n};
}

std::string FactorType::name() const {
  if (kind == Kind::type_ii1) return "II_1";
  return "I_" + std::to_string(n);
}

Mult Mult::fraction(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidInput("Mult: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  Mult m;
  m.exact_ = true;
  m.num_ = g ? num / g : num;
  m.den_ = g ? den / g : den;
  m.approx_ = 0.0;
  return m;
}

Mult Mult::real(double v) {
  Mult m;
  m.exact_ = false;
  m.num_ = 0;
  m.den_ = 1;
  m.approx_ = v;
  return m;
}

Mult Mult::operator+(const Mult& o) const {
  if (exact_ && o.exact_)
    return fraction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  return real(value() + o.value());
}

Mult Mult::operator*(const Mult& o) const {
  if (exact_ && o.exact_) return fraction(num_ * o.num_, den_ * o.den_);
  return real(value() * o.value());
}

bool Mult::same_as(const Mult& o, double eq_tol) const {
  if (exact_ && o.exact_) return num_ == o.num_ && den_ == o.den_;
  return std::abs(value() - o.value()) <= eq_tol;
}

std::string Mult::str() const {
  if (exact_) {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }
  std::ostringstream os;
  os.precision(17);
  os << approx_;
  return os.str();
}

//==============================================================================
// Validation
//==============================================================================

namespace {

// Clusters of positive values by relative gap: adjacent sorted values merge
// when b - a <= spec_tol * b.  Used for ratio combinatorics, where values
// span several decades and a global-scale gap would be too coarse.
struct ValueCluster {
  double rep;
  std::vector<std::size_t> items;
};

std::vector<ValueCluster> cluster_relative(std::vector<std::pair<double, std::size_t>>& vals,
                                           double spec_tol) {
  std::sort(vals.begin(), vals.end());
  std::vector<ValueCluster> out;
  std::size_t i = 0;
  while (i < vals.size()) {
    std::size_t j = i + 1;
    while (j < vals.size() &&
           vals[j].first - vals[j - 1].first <= spec_tol * vals[j].first)
      ++j;
    ValueCluster c;
    double sum = 0.0;
    for (std::size_t k = i; k < j; ++k) {
      c.items.push_back(vals[k].second);
      sum += vals[k].first;
    }
    c.rep = sum / static_cast<double>(j - i);
    out.push_back(std::move(c));
    i = j;
  }
  return out;
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace

std::vector<Violation> validate_data(const SpectralData& d,
                                     const Tolerances& tol) {
  std::vector<Violation> out;
  if (d.pairs.empty()) {
    out.push_back({Violation::Kind::positivity, "no spectral pairs"});
    return out;
  }

  for (const SpectralPair& p : d.pairs)
    if (!(p.mu > 0.0) || !std::isfinite(p.mu))
      out.push_back({Violation::Kind::positivity,
                     "eigenvalue not positive finite: " + std::to_string(p.mu)});

  // Distinctness after spec_tol clustering.
  {
    std::vector<std::pair<double, std::size_t>> vals;
    for (std::size_t i = 0; i < d.pairs.size(); ++i)
      vals.emplace_back(d.pairs[i].mu, i);
    for (const ValueCluster& c : cluster_relative(vals, tol.spec_tol))
      if (c.items.size() > 1)
        out.push_back({Violation::Kind::distinctness,
                       "eigenvalues coincide within spec_tol near " +
                           std::to_string(c.rep)});
  }

  Mult sum = Mult::fraction(0, 1);
  double weighted = 0.0;
  for (const SpectralPair& p : d.pairs) {
    sum = sum + p.m;
    weighted += p.m.value() * p.mu;
    if (d.ftype.kind == FactorType::Kind::type_i) {
      const Index n = d.ftype.n;
      bool ok = false;
      if (p.m.exact()) {
        ok = (n % p.m.den() == 0);
        if (ok) {
          const std::int64_t l = p.m.num() * (n / p.m.den());
          ok = l >= 1 && l <= n;
        }
      } else {
        const double ln = p.m.value() * static_cast<double>(n);
        const double l = std::round(ln);
        ok = std::abs(ln - l) <= static_cast<double>(n) * tol.eq_tol &&
             l >= 1.0 && l <= static_cast<double>(n);
      }
      if (!ok)
        out.push_back({Violation::Kind::multiplicity_range,
                       "multiplicity " + p.m.str() + " is not l/" +
                           std::to_string(n) + " with 1 <= l <= " +
                           std::to_string(n)});
    } else {
      if (!(p.m.value() > 0.0 && p.m.value() <= 1.0 + tol.eq_tol))
        out.push_back({Violation::Kind::multiplicity_range,
                       "multiplicity " + p.m.str() + " outside (0, 1]"});
    }
  }
  const bool sum_ok = sum.exact()
                          ? (sum.num() == 1 && sum.den() == 1)
                          : std::abs(sum.value() - 1.0) <= tol.eq_tol;
  if (!sum_ok)
    out.push_back({Violation::Kind::multiplicity_sum,
                   "multiplicities sum to " + sum.str() + ", expected 1"});
  if (std::abs(weighted - 1.0) > tol.eq_tol)
    out.push_back({Violation::Kind::normalization,
                   "sum of m_k mu_k is " + std::to_string(weighted) +
                       ", expected 1"});
  return out;
}

bool valid_up_to_scale(const SpectralData& d, const Tolerances& tol) {
  for (const Violation& v : validate_data(d, tol))
    if (v.kind != Violation::Kind::normalization) return false;
  return true;
}

NormalizedData normalize_data(const SpectralData& d, const Tolerances& tol) {
  if (!valid_up_to_scale(d, tol))
    throw InvalidInput("normalize_data: data invalid beyond scale");
  double weighted = 0.0;
  for (const SpectralPair& p : d.pairs) weighted += p.m.value() * p.mu;
  if (!(weighted > 0.0))
    throw InvalidInput("normalize_data: nonpositive weighted sum");
  NormalizedData out;
  out.c = 1.0 / weighted;
  out.data = d;
  for (SpectralPair& p : out.data.pairs) p.mu *= out.c;
  std::sort(out.data.pairs.begin(), out.data.pairs.end(),
            [](const SpectralPair& a, const SpectralPair& b) {
              return a.mu > b.mu;
            });
  return out;
}

//==============================================================================
// Induced Delta spectrum
//==============================================================================

DeltaSpectrum induced_delta_spectrum(const SpectralData& d,
                                     const Tolerances& tol) {
  if (!valid_up_to_scale(d, tol))
    throw InvalidInput("induced_delta_spectrum: invalid data");
  const std::size_t kk = d.pairs.size();
  const bool type_ii = d.ftype.kind == FactorType::Kind::type_ii1;

  std::vector<std::pair<double, std::size_t>> ratios;
  std::vector<Mult> weights;
  for (std::size_t k = 0; k < kk; ++k)
    for (std::size_t l = 0; l < kk; ++l) {
      ratios.emplace_back(d.pairs[k].mu / d.pairs[l].mu, weights.size());
      weights.push_back(d.pairs[k].m * d.pairs[l].m);
    }

  DeltaSpectrum out;
  for (const ValueCluster& c : cluster_relative(ratios, tol.spec_tol)) {
    DeltaPair p;
    p.lambda = c.rep;
    if (type_ii) {
      p.infinite = true;
    } else {
      Mult n = Mult::fraction(0, 1);
      for (std::size_t w : c.items) n = n + weights[w];
      p.n = n;
    }
    out.pairs.push_back(std::move(p));
  }

  // Symmetrize the representatives under inversion: the diagonal cluster is
  // pinned to 1 and each lambda > 1 representative overwrites its mirror.
  for (DeltaPair& p : out.pairs)
    if (rel_close(p.lambda, 1.0, tol.spec_tol)) p.lambda = 1.0;
  for (const DeltaPair& p : out.pairs) {
    if (p.lambda <= 1.0) continue;
    bool found = false;
    for (DeltaPair& q : out.pairs)
      if (q.lambda < 1.0 && rel_close(q.lambda, 1.0 / p.lambda, tol.spec_tol)) {
        q.lambda = 1.0 / p.lambda;
        found = true;
        break;
      }
    if (!found)
      throw Error("induced_delta_spectrum: ratio set lost inversion symmetry");
  }

  if (!type_ii) {
    Mult total = Mult::fraction(0, 1);
    for (const DeltaPair& p : out.pairs) total = total + p.n;
    if (!total.same_as(Mult::fraction(1, 1), tol.eq_tol))
      throw Error("induced_delta_spectrum: multiplicities do not sum to 1");
  }
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const DeltaPair& a, const DeltaPair& b) {
              return a.lambda < b.lambda;
            });
  return out;
}

bool spectra_match(const DeltaSpectrum& a, const DeltaSpectrum& b,
                   const Tolerances& tol) {
  if (a.pairs.size() != b.pairs.size()) return false;
  auto sorted = [](DeltaSpectrum s) {
    std::sort(s.pairs.begin(), s.pairs.end(),
              [](const DeltaPair& x, const DeltaPair& y) {
                return x.lambda < y.lambda;
              });
    return s;
  };
  const DeltaSpectrum sa = sorted(a), sb = sorted(b);
  for (std::size_t i = 0; i < sa.pairs.size(); ++i) {
    const DeltaPair& pa = sa.pairs[i];
    const DeltaPair& pb = sb.pairs[i];
    if (!rel_close(pa.lambda, pb.lambda, tol.spec_tol)) return false;
    if (pa.infinite != pb.infinite) return false;
    if (!pa.infinite && !pa.n.same_as(pb.n, tol.eq_tol)) return false;
  }
  return true;
}

//==============================================================================
// Equivalence, duality
//==============================================================================

bool data_equivalent(const SpectralData& a, const SpectralData& b,
                     const Tolerances& tol) {
  if (!(a.ftype == b.ftype))
    throw InvalidInput("data_equivalent: factor types differ");
  if (!valid_up_to_scale(a, tol) || !valid_up_to_scale(b, tol))
    throw InvalidInput("data_equivalent: invalid data");
  const SpectralData na = normalize_data(a, tol).data;
  const SpectralData nb = normalize_data(b, tol).data;
  if (na.pairs.size() != nb.pairs.size()) return false;
  for (std::size_t i = 0; i < na.pairs.size(); ++i) {
    if (!rel_close(na.pairs[i].mu, nb.pairs[i].mu, tol.spec_tol)) return false;
    if (!na.pairs[i].m.same_as(nb.pairs[i].m, tol.eq_tol)) return false;
  }
  return true;
}

SpectralData dual_data(const SpectralData& d, const Tolerances& tol) {
  if (!valid_up_to_scale(d, tol)) throw InvalidInput("dual_data: invalid data");
  SpectralData inv = d;
  for (SpectralPair& p : inv.pairs) p.mu = 1.0 / p.mu;
  return normalize_data(inv, tol).data;
}

bool is_self_dual(const SpectralData& d, const Tolerances& tol) {
  return data_equivalent(d, dual_data(d, tol), tol);
}

bool compatible_with(const SpectralData& d, const DeltaSpectrum& target,
                     const Tolerances& tol) {
  return spectra_match(induced_delta_spectrum(d, tol), target, tol);
}

//==============================================================================
// Enumeration
//==============================================================================

namespace {

// Ratio value set of a candidate mu-set, clustered.
std::vector<double> ratio_values(const std::vector<double>& mus,
                                 double spec_tol) {
  std::vector<std::pair<double, std::size_t>> ratios;
  for (double a : mus)
    for (double b : mus) ratios.emplace_back(a / b, 0);
  std::vector<double> out;
  for (const ValueCluster& c : cluster_relative(ratios, spec_tol))
    out.push_back(c.rep);
  return out;
}

void compositions(Index total, Index parts, std::vector<Index>& cur,
                  const std::function<void(const std::vector<Index>&)>& emit) {
  if (parts == 1) {
    if (total >= 1) {
      cur.push_back(total);
      emit(cur);
      cur.pop_back();
    }
    return;
  }
  for (Index first = 1; first + (parts - 1) <= total; ++first) {
    cur.push_back(first);
    compositions(total - first, parts - 1, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

Enumeration enumerate_classes(const DeltaSpectrum& target,
                              const FactorType& ftype, Index max_k,
                              const Tolerances& tol) {
  if (ftype.kind != FactorType::Kind::type_i)
    throw InvalidInput(
        "enumerate_classes: only type I_N admits a finite enumeration");
  for (const DeltaPair& p : target.pairs)
    if (p.infinite)
      throw InvalidInput("enumerate_classes: target multiplicities must be finite");
  const Index n = ftype.n;
  const std::int64_t n2 = static_cast<std::int64_t>(n) * n;

  std::vector<double> lambdas;
  for (const DeltaPair& p : target.pairs) lambdas.push_back(p.lambda);
  std::sort(lambdas.begin(), lambdas.end());

  // Candidate values: target lambdas at most 1; scale freedom fixes
  // mu_max = 1, and every mu_k / mu_max must be a ratio, hence a lambda.
  std::vector<double> candidates;
  for (double lam : lambdas)
    if (lam <= 1.0 + tol.spec_tol) candidates.push_back(lam);
  if (candidates.empty() || !rel_close(candidates.back(), 1.0, tol.spec_tol))
    throw InvalidInput("enumerate_classes: target has no eigenvalue 1");
  candidates.back() = 1.0;
  if (candidates.size() > 20)
    throw InvalidInput("enumerate_classes: candidate set too large");

  const Index hard_cap = std::min<Index>(static_cast<Index>(candidates.size()), n);
  const Index k_cap = max_k > 0 ? std::min(max_k, hard_cap) : hard_cap;

  Enumeration out;
  out.complete = max_k == 0 || max_k >= hard_cap;

  const std::size_t nc = candidates.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << nc); ++mask) {
    if (!(mask & (std::size_t{1} << (nc - 1)))) continue;  // must contain 1
    std::vector<double> mus;
    for (std::size_t i = 0; i < nc; ++i)
      if (mask & (std::size_t{1} << i)) mus.push_back(candidates[i]);
    const Index k = static_cast<Index>(mus.size());
    if (k > k_cap) continue;

    // The ratio value set must reproduce the target lambda set exactly.
    const std::vector<double> rv = ratio_values(mus, tol.spec_tol);
    if (rv.size() != lambdas.size()) continue;
    bool values_ok = true;
    for (std::size_t i = 0; i < rv.size(); ++i)
      if (!rel_close(rv[i], lambdas[i], tol.spec_tol)) {
        values_ok = false;
        break;
      }
    if (!values_ok) continue;

    // Solve the multiplicity law over all compositions of N.
    std::sort(mus.rbegin(), mus.rend());
    std::vector<Index> cur;
    compositions(n, k, cur, [&](const std::vector<Index>& ls) {
      for (const DeltaPair& tp : target.pairs) {
        std::int64_t hits = 0;
        for (Index a = 0; a < k; ++a)
          for (Index b = 0; b < k; ++b)
            if (rel_close(mus[static_cast<std::size_t>(a)] /
                              mus[static_cast<std::size_t>(b)],
                          tp.lambda, tol.spec_tol))
              hits += static_cast<std::int64_t>(ls[static_cast<std::size_t>(a)]) *
                      ls[static_cast<std::size_t>(b)];
        const Mult lhs = Mult::fraction(hits, n2);
        if (tp.infinite || !lhs.same_as(tp.n, tol.eq_tol)) return;
      }
      SpectralData d;
      d.ftype = ftype;
      for (Index a = 0; a < k; ++a)
        d.pairs.push_back({mus[static_cast<std::size_t>(a)],
                           Mult::fraction(ls[static_cast<std::size_t>(a)], n)});
      const SpectralData nd = normalize_data(d, tol).data;
      for (const SpectralData& seen : out.classes)
        if (data_equivalent(seen, nd, tol)) return;
      out.classes.push_back(nd);
    });
  }

  std::sort(out.classes.begin(), out.classes.end(),
            [](const SpectralData& a, const SpectralData& b) {
              if (a.pairs.size() != b.pairs.size())
                return a.pairs.size() < b.pairs.size();
              for (std::size_t i = 0; i < a.pairs.size(); ++i) {
                if (a.pairs[i].mu != b.pairs[i].mu)
                  return a.pairs[i].mu > b.pairs[i].mu;
                if (a.pairs[i].m.value() != b.pairs[i].m.value())
                  return a.pairs[i].m.value() > b.pairs[i].m.value();
              }
              return false;
            });
  return out;
}

//==============================================================================
// Type II_1 variants
//==============================================================================

Variant derive_variants(const SpectralData& d, const VariantSpec& spec,
                        const Tolerances& tol) {
  if (d.ftype.kind != FactorType::Kind::type_ii1)
    throw InvalidInput("derive_variants: variants are a type II_1 construction");
  if (!valid_up_to_scale(d, tol))
    throw InvalidInput("derive_variants: invalid data");
  const std::size_t kk = d.pairs.size();

  SpectralData moved = d;
  if (spec.kind == VariantSpec::Kind::permutation) {
    if (spec.sigma.size() != kk)
      throw InvalidInput("derive_variants: permutation has wrong length");
    std::vector<bool> seen(kk, false);
    for (Index s : spec.sigma) {
      if (s < 0 || static_cast<std::size_t>(s) >= kk ||
          seen[static_cast<std::size_t>(s)])
        throw InvalidInput("derive_variants: not a permutation");
      seen[static_cast<std::size_t>(s)] = true;
    }
    for (std::size_t i = 0; i < kk; ++i)
      moved.pairs[i].m = d.pairs[static_cast<std::size_t>(spec.sigma[i])].m;
  } else {
    if (spec.k < 0 || spec.l < 0 || static_cast<std::size_t>(spec.k) >= kk ||
        static_cast<std::size_t>(spec.l) >= kk || spec.k == spec.l)
      throw InvalidInput("derive_variants: bad index pair");
    const double mk = d.pairs[static_cast<std::size_t>(spec.k)].m.value();
    const double ml = d.pairs[static_cast<std::size_t>(spec.l)].m.value();
    if (!(spec.epsilon >= 0.0) || !(spec.epsilon < ml))
      throw InvalidInput("derive_variants: epsilon outside [0, m_l)");
    if (!(mk + spec.epsilon <= 1.0 + tol.eq_tol))
      throw InvalidInput("derive_variants: shifted multiplicity leaves (0, 1]");
    moved.pairs[static_cast<std::size_t>(spec.k)].m =
        Mult::real(mk + spec.epsilon);
    moved.pairs[static_cast<std::size_t>(spec.l)].m =
        Mult::real(ml - spec.epsilon);
  }

  Variant out;
  out.data = normalize_data(moved, tol).data;
  out.equivalent = data_equivalent(d, out.data, tol);
  out.compatible =
      spectra_match(induced_delta_spectrum(out.data, tol),
                    induced_delta_spectrum(d, tol), tol);
  return out;
}

}  // namespace vnf
