#pragma once

// Graded pieces of D(A, nu), minimal homogeneous generators and the
// Saito-Ziegler determinant certificate.

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "arrangement.hpp"

namespace multiarr {

using Exponents = std::vector<unsigned>;  // kept sorted ascending

inline Exponents sorted(Exponents e) {
  std::sort(e.begin(), e.end());
  return e;
}

/// Multiset inclusion small <= big.
inline bool multiset_includes(const Exponents& big, const Exponents& small) {
  std::multiset<unsigned> b(big.begin(), big.end());
  for (unsigned x : small) {
    auto it = b.find(x);
    if (it == b.end()) return false;
    b.erase(it);
  }
  return true;
}

/// big minus small as multisets; throws if small is not included.
inline Exponents multiset_difference(const Exponents& big, const Exponents& small) {
  std::multiset<unsigned> b(big.begin(), big.end());
  for (unsigned x : small) {
    auto it = b.find(x);
    if (it == b.end()) throw AlgebraError("exponent multiset is not included");
    b.erase(it);
  }
  return Exponents(b.begin(), b.end());
}

inline std::string exponents_to_string(const Exponents& e) {
  std::string s = "{";
  for (std::size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
  return s + "}";
}

/// theta = sum_i f_i D_i with homogeneous f_i of one common degree.
class Derivation {
 public:
  Derivation() = default;
  explicit Derivation(std::vector<Polynomial> components) : c_(std::move(components)) {
    if (c_.empty()) throw AlgebraError("derivation without components");
    pdeg_ = -1;
    for (const auto& f : c_) {
      if (f.is_zero()) continue;
      if (!f.is_homogeneous()) throw AlgebraError("derivation component is not homogeneous");
      if (pdeg_ >= 0 && f.degree() != pdeg_) throw AlgebraError("derivation components differ in degree");
      pdeg_ = f.degree();
    }
  }

  static Derivation zero(const FieldContext& ctx, std::size_t vars) {
    return Derivation(std::vector<Polynomial>(vars, Polynomial(ctx, vars)));
  }

  const std::vector<Polynomial>& components() const { return c_; }
  const Polynomial& operator[](std::size_t i) const { return c_[i]; }
  std::size_t num_vars() const { return c_.size(); }
  const FieldContext& context() const { return c_[0].context(); }
  /// pdeg; -1 for the zero derivation
  int pdeg() const { return pdeg_; }
  bool is_zero() const { return pdeg_ < 0; }

  /// theta(alpha) = sum f_i * alpha_i
  Polynomial apply(const Vector& alpha) const {
    Polynomial out(context(), num_vars());
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!alpha[i].is_zero() && !c_[i].is_zero()) out += c_[i] * alpha[i];
    return out;
  }
  Polynomial apply(const LinearForm& f) const { return apply(f.coefficients()); }

  Derivation times(const Polynomial& g) const {
    std::vector<Polynomial> out;
    for (const auto& f : c_) out.push_back(f * g);
    return Derivation(std::move(out));
  }
  friend Derivation operator-(const Derivation& a, const Derivation& b) {
    std::vector<Polynomial> out;
    for (std::size_t i = 0; i < a.c_.size(); ++i) out.push_back(a.c_[i] - b.c_[i]);
    return Derivation(std::move(out));
  }
  friend bool operator==(const Derivation& a, const Derivation& b) { return a.c_ == b.c_; }

  /// Whether every component is divisible by g.
  bool divisible_by(const Polynomial& g) const {
    for (const auto& f : c_)
      if (!f.is_zero() && !f.divisible_by(g)) return false;
    return true;
  }

  std::string to_string() const {
    const auto names = Polynomial::default_names(num_vars());
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + c_[i].to_string(names) + ")*D" + names[i];
    }
    return s.empty() ? "0" : s;
  }

 private:
  std::vector<Polynomial> c_;
  int pdeg_ = -1;
};

/// theta_E = sum x_i D_i
inline Derivation euler_derivation(std::size_t vars, const FieldContext& ctx) {
  std::vector<Polynomial> c;
  for (std::size_t i = 0; i < vars; ++i) c.push_back(Polynomial::variable(ctx, vars, i));
  return Derivation(std::move(c));
}

/// theta(alpha_H) in alpha_H^{nu(H)} S for every H.
inline bool is_member(const Derivation& theta, const Multiarrangement& a) {
  for (const auto& h : a.hyperplanes()) {
    if (h.multiplicity == 0) continue;
    const Polynomial v = theta.apply(h.form);
    if (v.is_zero()) continue;
    if (v.degree() < static_cast<int>(h.multiplicity)) return false;
    if (!v.divisible_by(h.form.polynomial().pow(h.multiplicity))) return false;
  }
  return true;
}

namespace detail {

/// Coefficient vector of a degree-p derivation: component i, monomial m at i*N + index(m).
inline Vector derivation_to_vector(const Derivation& d, unsigned p) {
  const auto& mb = MonomialBasis::get(d.num_vars(), p);
  Vector v(d.num_vars() * mb.size(), FieldElement(d.context(), 0));
  for (std::size_t i = 0; i < d.num_vars(); ++i)
    for (const auto& [e, c] : d[i].terms()) v[i * mb.size() + mb.index(e)] = c;
  return v;
}

inline Derivation vector_to_derivation(const FieldContext& ctx, std::size_t vars, unsigned p, const Vector& v) {
  const auto& mb = MonomialBasis::get(vars, p);
  std::vector<Polynomial> comps(vars, Polynomial(ctx, vars));
  for (std::size_t i = 0; i < vars; ++i)
    for (std::size_t m = 0; m < mb.size(); ++m) comps[i].add_term(mb[m], v[i * mb.size() + m]);
  return Derivation(std::move(comps));
}

}  // namespace detail

/// Basis of D(A, nu)_p. Each condition alpha_H^nu | theta(alpha_H) is linearized by passing
/// to coordinates where alpha_H is the pivot variable u and zeroing every term of u-degree < nu.
inline std::vector<Derivation> derivation_space(const Multiarrangement& a, unsigned p) {
  const std::size_t l = a.dimension();
  const FieldContext& ctx = a.context();
  if (l == 0) return {};
  const auto& mb = MonomialBasis::get(l, p);
  const std::size_t n = mb.size(), unknowns = l * n;
  std::vector<Vector> rows;
  for (const auto& h : a.hyperplanes()) {
    if (h.multiplicity == 0) continue;
    const std::size_t k = h.form.pivot();
    // x_k = u - sum_{j != k} c_j x_j, with u stored in slot k
    std::vector<Polynomial> images;
    for (std::size_t j = 0; j < l; ++j) {
      if (j != k) {
        images.push_back(Polynomial::variable(ctx, l, j));
        continue;
      }
      Vector lin(l, FieldElement(ctx, 0));
      lin[k] = FieldElement(ctx, 1);
      for (std::size_t t = 0; t < l; ++t)
        if (t != k) lin[t] = -h.form[t];
      images.push_back(Polynomial::linear(ctx, lin));
    }
    std::vector<Polynomial> sub;
    sub.reserve(n);
    for (std::size_t m = 0; m < n; ++m)
      sub.push_back(Polynomial::monomial(ctx, mb[m], FieldElement(ctx, 1)).substitute(images));
    // one row per output monomial with u-degree < nu
    std::map<std::size_t, Vector> by_output;
    for (std::size_t i = 0; i < l; ++i) {
      const FieldElement& ai = h.form[i];
      if (ai.is_zero()) continue;
      for (std::size_t m = 0; m < n; ++m) {
        for (const auto& [e, c] : sub[m].terms()) {
          if (e[k] >= h.multiplicity) continue;
          auto& row = by_output[mb.index(e)];
          if (row.empty()) row.assign(unknowns, FieldElement(ctx, 0));
          row[i * n + m] += ai * c;
        }
      }
    }
    for (auto& [idx, row] : by_output) rows.push_back(std::move(row));
  }
  std::vector<Derivation> out;
  if (rows.empty()) {
    for (std::size_t j = 0; j < unknowns; ++j) {
      Vector v(unknowns, FieldElement(ctx, 0));
      v[j] = FieldElement(ctx, 1);
      out.push_back(detail::vector_to_derivation(ctx, l, p, v));
    }
    return out;
  }
  for (const auto& v : matrix_kernel(Matrix::from_rows(ctx, rows, unknowns)))
    out.push_back(detail::vector_to_derivation(ctx, l, p, v));
  return out;
}

enum class Verdict { free, not_free, undetermined };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::free:
      return "free";
    case Verdict::not_free:
      return "not_free";
    default:
      return "undetermined";
  }
}

struct FreenessCertificate {
  Verdict verdict = Verdict::undetermined;
  std::vector<Derivation> basis;  // minimal generators found (a basis when free)
  Exponents exponents;            // sorted, only meaningful when free
  std::optional<FieldElement> saito_scalar;
  std::string witness;

  bool is_free() const { return verdict == Verdict::free; }
};

inline Polynomial coefficient_determinant(const std::vector<Derivation>& basis) {
  PolyMatrix m;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    std::vector<Polynomial> row;
    for (const auto& d : basis) row.push_back(d[i]);
    m.push_back(std::move(row));
  }
  return poly_matrix_determinant(m);
}

/// c with det = c * Q(A, nu), if such a nonzero scalar exists.
inline std::optional<FieldElement> saito_scalar(const std::vector<Derivation>& basis, const Multiarrangement& a) {
  if (basis.size() != a.dimension() || basis.empty()) return std::nullopt;
  const Polynomial det = coefficient_determinant(basis);
  if (det.is_zero()) return std::nullopt;
  const Polynomial q = defining_polynomial(a);
  if (det.degree() != q.degree()) return std::nullopt;
  const FieldElement c = det.leading_coefficient() / q.leading_coefficient();
  if (det != q * c) return std::nullopt;
  return c;
}

/// Minimal homogeneous generators degree by degree. With cap >= |nu| the verdict is never undetermined:
/// Q * Der(S) lies in D(A, nu), so by degree |nu| exactly l generators with nonzero determinant exist
/// iff the module could still be free.
inline FreenessCertificate exponents_oracle(const Multiarrangement& a, std::optional<unsigned> degree_cap = {}) {
  const std::size_t l = a.dimension();
  const FieldContext& ctx = a.context();
  const unsigned total = a.order();
  const unsigned cap = degree_cap.value_or(total);
  FreenessCertificate cert;
  if (l == 0) {
    cert.verdict = Verdict::free;
    cert.saito_scalar = FieldElement(ctx, 1);
    return cert;
  }
  std::vector<Derivation> gens;
  for (unsigned p = 0; p <= cap; ++p) {
    const auto& mb = MonomialBasis::get(l, p);
    EchelonSpace span(ctx, l * mb.size());
    for (const auto& g : gens) {
      const unsigned shift = p - static_cast<unsigned>(g.pdeg());
      for (const auto& e : MonomialBasis::get(l, shift).monomials()) {
        std::vector<Polynomial> comps;
        for (const auto& f : g.components()) comps.push_back(f.shifted(e));
        span.insert(detail::derivation_to_vector(Derivation(std::move(comps)), p));
      }
    }
    for (const auto& d : derivation_space(a, p)) {
      if (span.insert(detail::derivation_to_vector(d, p))) gens.push_back(d);
      if (gens.size() > l) {
        cert.verdict = Verdict::not_free;
        cert.basis = gens;
        cert.witness = "more than " + std::to_string(l) + " minimal generators in degrees <= " + std::to_string(p);
        return cert;
      }
    }
    if (gens.size() == l) {
      unsigned sum = 0;
      for (const auto& g : gens) sum += static_cast<unsigned>(g.pdeg());
      const Polynomial det = coefficient_determinant(gens);
      cert.basis = gens;
      if (det.is_zero()) {
        // a free module's minimal generators always form a basis
        cert.verdict = Verdict::not_free;
        cert.witness = std::to_string(l) + " minimal generators with vanishing determinant";
        return cert;
      }
      if (sum != total) {
        cert.verdict = Verdict::not_free;
        cert.witness = std::to_string(l) + " independent generators of degree sum " + std::to_string(sum) +
                       " > " + std::to_string(total);
        return cert;
      }
      auto c = saito_scalar(gens, a);
      if (!c) throw AlgebraError("determinant of generators is not a multiple of Q");
      cert.verdict = Verdict::free;
      cert.saito_scalar = c;
      for (const auto& g : gens) cert.exponents.push_back(static_cast<unsigned>(g.pdeg()));
      cert.exponents = sorted(cert.exponents);
      return cert;
    }
  }
  cert.basis = gens;
  cert.verdict = Verdict::undetermined;
  cert.witness = "degree cap " + std::to_string(cap) + " reached with " + std::to_string(gens.size()) + " generators";
  return cert;
}

/// Exponents of a free multiarrangement computed on its essentialization (zeros padded), or
/// nullopt if it is not free. Results are memoized on the canonical key.
inline std::optional<Exponents> free_exponents(const Multiarrangement& a) {
  static std::mutex mutex;
  static std::map<std::string, std::optional<Exponents>> cache;
  const std::string key = a.key();
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  std::optional<Exponents> out;
  const Multiarrangement e = essentialize(a);
  const FreenessCertificate cert = exponents_oracle(e);
  if (cert.is_free()) {
    Exponents ex(a.dimension() - e.dimension(), 0);
    ex.insert(ex.end(), cert.exponents.begin(), cert.exponents.end());
    out = sorted(ex);
  }
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, out);
  return out;
}

/// Minimal generators extracted from a homogeneous generating set of a graded submodule.
inline std::vector<Derivation> minimal_generators(std::vector<Derivation> gens) {
  std::vector<Derivation> nonzero;
  for (auto& g : gens)
    if (!g.is_zero()) nonzero.push_back(std::move(g));
  std::stable_sort(nonzero.begin(), nonzero.end(),
                   [](const Derivation& x, const Derivation& y) { return x.pdeg() < y.pdeg(); });
  std::vector<Derivation> kept;
  for (const auto& g : nonzero) {
    const unsigned p = static_cast<unsigned>(g.pdeg());
    const std::size_t l = g.num_vars();
    EchelonSpace span(g.context(), l * MonomialBasis::get(l, p).size());
    for (const auto& k : kept) {
      for (const auto& e : MonomialBasis::get(l, p - static_cast<unsigned>(k.pdeg())).monomials()) {
        std::vector<Polynomial> comps;
        for (const auto& f : k.components()) comps.push_back(f.shifted(e));
        span.insert(detail::derivation_to_vector(Derivation(std::move(comps)), p));
      }
    }
    if (span.insert(detail::derivation_to_vector(g, p))) kept.push_back(g);
  }
  return kept;
}

/// Homogeneous generators of Ann(H0) = {theta in D(A) : theta(alpha_0) = 0} for simple free A with 1 in exp A.
inline std::vector<Derivation> annihilator_basis(const Multiarrangement& a, std::size_t h0) {
  if (!a.is_simple()) throw AlgebraError("annihilator basis needs a simple arrangement");
  if (h0 >= a.size()) throw AlgebraError("pivot out of range");
  const auto cert = exponents_oracle(a);
  if (!cert.is_free()) throw AlgebraError("arrangement is not free");
  if (std::find(cert.exponents.begin(), cert.exponents.end(), 1u) == cert.exponents.end())
    throw AlgebraError("1 is not an exponent");
  const Polynomial alpha0 = a[h0].form.polynomial();
  const Derivation euler = euler_derivation(a.dimension(), a.context());
  std::vector<Derivation> psi;
  for (const auto& t : cert.basis) {
    const Polynomial f = t.apply(a[h0].form).divide_exact(alpha0);
    psi.push_back(t - euler.times(f));
  }
  auto out = minimal_generators(std::move(psi));
  if (out.size() + 1 != a.dimension()) throw AlgebraError("annihilator is not generated by l-1 elements");
  return out;
}

/// Explicit basis {alpha_0^{m0-1} theta_E, theta_2, ..., theta_l} of D(A, delta_{H0,m0}).
inline FreenessCertificate concentrated_basis(const Multiarrangement& a, std::size_t h0, unsigned m0) {
  if (m0 < 2) throw AlgebraError("concentrated multiplicity needs m0 > 1");
  auto ann = annihilator_basis(a, h0);
  const Multiarrangement delta = a.with_multiplicity(h0, m0);
  std::vector<Derivation> basis;
  basis.push_back(euler_derivation(a.dimension(), a.context()).times(a[h0].form.polynomial().pow(m0 - 1)));
  basis.insert(basis.end(), ann.begin(), ann.end());
  FreenessCertificate cert;
  cert.basis = basis;
  for (const auto& b : basis)
    if (!is_member(b, delta)) throw AlgebraError("concentrated basis element outside D(A, delta)");
  cert.saito_scalar = saito_scalar(basis, delta);
  if (!cert.saito_scalar) throw AlgebraError("concentrated basis fails the determinant criterion");
  cert.verdict = Verdict::free;
  for (const auto& b : basis) cert.exponents.push_back(static_cast<unsigned>(b.pdeg()));
  cert.exponents = sorted(cert.exponents);
  return cert;
}

/// Componentwise domination of sorted exponents of A1 by those of A2.
inline bool exponent_dominance_check(const Exponents& e1, const Exponents& e2) {
  if (e1.size() != e2.size()) return false;
  const auto a = sorted(e1), b = sorted(e2);
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] > b[j]) return false;
  return true;
}

}  // namespace multiarr
