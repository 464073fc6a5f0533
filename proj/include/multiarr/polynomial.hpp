#pragma once

// Sparse multivariate polynomials over a FieldContext. Terms are kept in
// graded lexicographic order with x1 > x2 > ... > xl; begin() is the leading term.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "field.hpp"

namespace multiarr {

using Exponent = std::vector<unsigned>;

inline unsigned total_degree(const Exponent& e) {
  unsigned d = 0;
  for (unsigned x : e) d += x;
  return d;
}

/// Graded lexicographic comparison; true when a is strictly larger than b.
struct GrlexGreater {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const unsigned da = total_degree(a), db = total_degree(b);
    if (da != db) return da > db;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] != b[i]) return a[i] > b[i];
    return false;
  }
};

struct ExponentHash {
  std::size_t operator()(const Exponent& e) const {
    std::size_t h = 1469598103934665603ULL;
    for (unsigned x : e) h = (h ^ x) * 1099511628211ULL;
    return h;
  }
};

/// Monomials of degree p in l variables, enumerated in descending grlex order.
class MonomialBasis {
 public:
  MonomialBasis(std::size_t vars, unsigned degree) : vars_(vars), degree_(degree) {
    Exponent e(vars, 0);
    if (vars == 0) {
      if (degree == 0) monos_.push_back(e);
    } else {
      enumerate(e, 0, degree);
    }
    for (std::size_t i = 0; i < monos_.size(); ++i) index_.emplace(monos_[i], i);
  }

  /// Shared, lazily built instance.
  static const MonomialBasis& get(std::size_t vars, unsigned degree) {
    static std::mutex mutex;
    static std::map<std::pair<std::size_t, unsigned>, std::unique_ptr<MonomialBasis>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[{vars, degree}];
    if (!slot) slot = std::make_unique<MonomialBasis>(vars, degree);
    return *slot;
  }

  std::size_t size() const { return monos_.size(); }
  std::size_t vars() const { return vars_; }
  unsigned degree() const { return degree_; }
  const Exponent& operator[](std::size_t i) const { return monos_[i]; }
  const std::vector<Exponent>& monomials() const { return monos_; }
  std::size_t index(const Exponent& e) const { return index_.at(e); }
  std::optional<std::size_t> find(const Exponent& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  void enumerate(Exponent& e, std::size_t pos, unsigned remaining) {
    if (pos + 1 == vars_) {
      e[pos] = remaining;
      monos_.push_back(e);
      return;
    }
    for (unsigned a = remaining + 1; a-- > 0;) {
      e[pos] = a;
      enumerate(e, pos + 1, remaining - a);
    }
    e[pos] = 0;
  }

  std::size_t vars_;
  unsigned degree_;
  std::vector<Exponent> monos_;
  std::unordered_map<Exponent, std::size_t, ExponentHash> index_;
};

class Polynomial {
 public:
  using Terms = std::map<Exponent, FieldElement, GrlexGreater>;

  Polynomial() = default;
  Polynomial(const FieldContext& ctx, std::size_t vars) : ctx_(ctx), vars_(vars) {}

  static Polynomial constant(const FieldContext& ctx, std::size_t vars, const FieldElement& c) {
    Polynomial p(ctx, vars);
    p.add_term(Exponent(vars, 0), c);
    return p;
  }
  static Polynomial one(const FieldContext& ctx, std::size_t vars) {
    return constant(ctx, vars, FieldElement(ctx, 1));
  }
  static Polynomial variable(const FieldContext& ctx, std::size_t vars, std::size_t i) {
    Polynomial p(ctx, vars);
    Exponent e(vars, 0);
    e.at(i) = 1;
    p.add_term(e, FieldElement(ctx, 1));
    return p;
  }
  static Polynomial monomial(const FieldContext& ctx, const Exponent& e, const FieldElement& c) {
    Polynomial p(ctx, e.size());
    p.add_term(e, c);
    return p;
  }
  /// Linear form sum_i coeffs[i] * x_i.
  static Polynomial linear(const FieldContext& ctx, const std::vector<FieldElement>& coeffs) {
    Polynomial p(ctx, coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      Exponent e(coeffs.size(), 0);
      e[i] = 1;
      p.add_term(e, coeffs[i]);
    }
    return p;
  }

  const FieldContext& context() const { return ctx_; }
  std::size_t num_vars() const { return vars_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  /// Adds c * x^e, dropping the term if the coefficient cancels.
  void add_term(const Exponent& e, const FieldElement& c) {
    if (e.size() != vars_) throw AlgebraError("exponent length does not match the number of variables");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  FieldElement coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? FieldElement(ctx_, 0) : it->second;
  }

  /// Total degree; -1 for the zero polynomial.
  int degree() const { return terms_.empty() ? -1 : static_cast<int>(total_degree(terms_.begin()->first)); }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const unsigned d = total_degree(terms_.begin()->first);
    for (const auto& [e, c] : terms_)
      if (total_degree(e) != d) return false;
    return true;
  }

  const Exponent& leading_exponent() const { return terms_.begin()->first; }
  const FieldElement& leading_coefficient() const { return terms_.begin()->second; }

  Polynomial& operator+=(const Polynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial operator-() const {
    Polynomial out(ctx_, vars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
  }
  Polynomial& operator*=(const FieldElement& s) {
    if (s.is_zero()) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const FieldElement& s) { return a *= s; }
  friend Polynomial operator*(const FieldElement& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check(b);
    Polynomial out(a.ctx_, a.vars_);
    Exponent e(a.vars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add_term(e, ca * cb);
      }
    }
    return out;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  /// Multiplication by the monomial x^e.
  Polynomial shifted(const Exponent& e) const {
    Polynomial out(ctx_, vars_);
    for (const auto& [ea, ca] : terms_) {
      Exponent s = ea;
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += e[i];
      out.terms_.emplace(std::move(s), ca);
    }
    return out;
  }

  Polynomial pow(unsigned k) const {
    Polynomial out = one(ctx_, vars_);
    for (unsigned i = 0; i < k; ++i) out *= *this;
    return out;
  }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.vars_ == b.vars_ && a.terms_ == b.terms_ && (a.terms_.empty() || a.ctx_ == b.ctx_);
  }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  /// Quotient and remainder of the multivariate division by a single divisor (grlex).
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& divisor) const {
    check(divisor);
    if (divisor.is_zero()) throw AlgebraError("polynomial division by zero");
    Polynomial quotient(ctx_, vars_), remainder(ctx_, vars_), rest = *this;
    const Exponent& lead = divisor.leading_exponent();
    const FieldElement lead_inv = divisor.leading_coefficient().inverse();
    while (!rest.is_zero()) {
      const Exponent e = rest.leading_exponent();
      const FieldElement c = rest.leading_coefficient();
      bool divisible = true;
      Exponent shift(vars_);
      for (std::size_t i = 0; i < vars_; ++i) {
        if (e[i] < lead[i]) {
          divisible = false;
          break;
        }
        shift[i] = e[i] - lead[i];
      }
      if (divisible) {
        const FieldElement q = c * lead_inv;
        quotient.add_term(shift, q);
        for (const auto& [ed, cd] : divisor.terms_) {
          Exponent s = ed;
          for (std::size_t i = 0; i < vars_; ++i) s[i] += shift[i];
          rest.add_term(s, -(q * cd));
        }
      } else {
        remainder.add_term(e, c);
        rest.terms_.erase(rest.terms_.begin());
      }
    }
    return {quotient, remainder};
  }

  bool divisible_by(const Polynomial& divisor) const { return divmod(divisor).second.is_zero(); }

  Polynomial divide_exact(const Polynomial& divisor) const {
    auto [q, r] = divmod(divisor);
    if (!r.is_zero()) throw AlgebraError("inexact polynomial division");
    return q;
  }

  /// Substitutes x_i -> images[i]; all images share a number of variables.
  Polynomial substitute(const std::vector<Polynomial>& images) const {
    if (images.size() != vars_) throw AlgebraError("substitution needs one image per variable");
    const std::size_t out_vars = images.empty() ? 0 : images[0].num_vars();
    Polynomial out(ctx_, out_vars);
    std::vector<std::vector<Polynomial>> powers(vars_);
    for (const auto& [e, c] : terms_) {
      Polynomial term = constant(ctx_, out_vars, c);
      for (std::size_t i = 0; i < vars_; ++i) {
        if (e[i] == 0) continue;
        auto& pw = powers[i];
        if (pw.empty()) pw.push_back(one(ctx_, out_vars));
        while (pw.size() <= e[i]) pw.push_back(pw.back() * images[i]);
        term *= pw[e[i]];
      }
      out += term;
    }
    return out;
  }

  Polynomial embed(const FieldContext& target) const {
    Polynomial out(target, vars_);
    for (const auto& [e, c] : terms_) out.add_term(e, c.embed(target));
    return out;
  }

  /// Terms in canonical (descending grlex) order rendered with the given variable names.
  std::string to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      std::string mono;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (!mono.empty()) mono += "*";
        mono += names.at(i);
        if (e[i] > 1) mono += "^" + std::to_string(e[i]);
      }
      std::string coef = c.to_string();
      bool neg = false;
      if (c.is_rational_value() && !coef.empty() && coef[0] == '-') {
        neg = true;
        coef = coef.substr(1);
      }
      std::string body;
      if (mono.empty()) {
        body = coef;
      } else if (coef == "1") {
        body = mono;
      } else {
        body = coef + "*" + mono;
      }
      if (first) {
        s = neg ? "-" + body : body;
      } else {
        s += neg ? " - " + body : " + " + body;
      }
      first = false;
    }
    return s;
  }

  std::string to_string() const { return to_string(default_names(vars_)); }

  static std::vector<std::string> default_names(std::size_t vars) {
    if (vars <= 3) {
      static const char* xyz[] = {"x", "y", "z"};
      return std::vector<std::string>(xyz, xyz + vars);
    }
    std::vector<std::string> names;
    for (std::size_t i = 0; i < vars; ++i) names.push_back("x" + std::to_string(i + 1));
    return names;
  }

 private:
  void check(const Polynomial& o) const {
    if (vars_ != o.vars_) throw AlgebraError("polynomials have different numbers of variables");
    if (ctx_ != o.ctx_) throw AlgebraError("polynomial field context mismatch");
  }

  FieldContext ctx_;
  std::size_t vars_ = 0;
  Terms terms_;
};

inline std::ostream& operator<<(std::ostream& os, const Polynomial& p) { return os << p.to_string(); }

}  // namespace multiarr
