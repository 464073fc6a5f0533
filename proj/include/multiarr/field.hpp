#pragma once

// Exact scalars: the rationals and cyclotomic fields Q(zeta_r), the latter stored
// as residues modulo the r-th cyclotomic polynomial.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace multiarr {

using Rational = mpq_class;

/// Error raised by exact-algebra operations (division by zero, context mismatch,
/// inexact division).
class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense univariate polynomials over Q, coefficient i is the coefficient of x^i.
namespace upoly {

using Poly = std::vector<Rational>;

inline void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  trim(out);
  return out;
}

inline Poly sub(Poly a, const Poly& b) {
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
  trim(a);
  return a;
}

/// Quotient and remainder of a by a nonzero b.
inline std::pair<Poly, Poly> divmod(Poly a, Poly b) {
  trim(a);
  trim(b);
  if (b.empty()) throw AlgebraError("univariate division by zero polynomial");
  if (a.size() < b.size()) return {Poly{}, a};
  Poly q(a.size() - b.size() + 1, Rational(0));
  const Rational lead = b.back();
  for (std::size_t k = a.size(); k-- >= b.size();) {
    if (a[k] == 0) continue;
    const std::size_t shift = k - (b.size() - 1);
    Rational c = a[k] / lead;
    q[shift] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= c * b[j];
  }
  trim(q);
  trim(a);
  return {q, a};
}

}  // namespace upoly

/// Exact r-th cyclotomic polynomial, computed as (x^r - 1) / prod_{d | r, d < r} Phi_d.
inline upoly::Poly cyclotomic_minimal_polynomial(unsigned r) {
  if (r == 0) throw AlgebraError("cyclotomic order must be positive");
  static std::mutex mutex;
  static std::map<unsigned, upoly::Poly> cache;
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(r); it != cache.end()) return it->second;
  }
  upoly::Poly numer(r + 1, Rational(0));
  numer[0] = -1;
  numer[r] = 1;
  for (unsigned d = 1; d < r; ++d) {
    if (r % d != 0) continue;
    auto [q, rem] = upoly::divmod(numer, cyclotomic_minimal_polynomial(d));
    if (!rem.empty()) throw AlgebraError("cyclotomic division left a remainder");
    numer = std::move(q);
  }
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(r, numer);
  return numer;
}

inline unsigned euler_phi(unsigned r) {
  unsigned count = 0;
  for (unsigned k = 1; k <= r; ++k)
    if (std::gcd(k, r) == 1) ++count;
  return count;
}

enum class FieldKind { rational, cyclotomic };

/// Identifies the scalar field. Contexts are interned, so copies are a pointer.
class FieldContext {
 public:
  struct Data {
    FieldKind kind;
    unsigned order;             // 1 for the rationals
    std::size_t degree;         // phi(order), 1 for the rationals
    upoly::Poly modulus;        // Phi_order, monic; {-1, 1} for the rationals
    // x^k mod modulus for degree <= k <= 2 * degree - 2
    std::vector<upoly::Poly> reductions;
  };

  FieldContext() : data_(intern(FieldKind::rational, 1)) {}

  static FieldContext rational() { return FieldContext(intern(FieldKind::rational, 1)); }
  static FieldContext cyclotomic(unsigned order) {
    if (order == 0) throw AlgebraError("cyclotomic order must be positive");
    return FieldContext(intern(FieldKind::cyclotomic, order));
  }

  FieldKind kind() const { return data_->kind; }
  bool is_rational() const { return data_->kind == FieldKind::rational; }
  unsigned order() const { return data_->order; }
  std::size_t degree() const { return data_->degree; }
  const upoly::Poly& minimal_polynomial() const { return data_->modulus; }
  const Data& data() const { return *data_; }

  friend bool operator==(const FieldContext& a, const FieldContext& b) { return a.data_ == b.data_; }
  friend bool operator!=(const FieldContext& a, const FieldContext& b) { return a.data_ != b.data_; }

  std::string name() const {
    return is_rational() ? std::string("Q") : "Q(zeta_" + std::to_string(order()) + ")";
  }

 private:
  explicit FieldContext(const Data* d) : data_(d) {}

  static const Data* intern(FieldKind kind, unsigned order) {
    static std::mutex mutex;
    static std::map<std::pair<int, unsigned>, std::unique_ptr<Data>> registry;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_pair(static_cast<int>(kind), order);
    if (auto it = registry.find(key); it != registry.end()) return it->second.get();
    auto d = std::make_unique<Data>();
    d->kind = kind;
    d->order = order;
    if (kind == FieldKind::rational) {
      d->modulus = {Rational(-1), Rational(1)};
    } else {
      d->modulus = cyclotomic_minimal_polynomial(order);
    }
    d->degree = d->modulus.size() - 1;
    for (std::size_t k = d->degree; k + 1 < 2 * d->degree; ++k) {
      upoly::Poly mono(k + 1, Rational(0));
      mono[k] = 1;
      d->reductions.push_back(upoly::divmod(mono, d->modulus).second);
    }
    const Data* raw = d.get();
    registry.emplace(key, std::move(d));
    return raw;
  }

  const Data* data_;
};

/// Smallest context containing both: Q(zeta_lcm(r, s)), or Q when both are rational.
inline FieldContext common_context(const FieldContext& a, const FieldContext& b) {
  if (a == b) return a;
  if (a.is_rational() && b.is_rational()) return a;
  return FieldContext::cyclotomic(std::lcm(a.order(), b.order()));
}

/// Element of Q or Q(zeta_r): coefficients of 1, zeta, ..., zeta^{phi(r)-1}.
class FieldElement {
 public:
  FieldElement() : FieldElement(FieldContext::rational(), 0) {}
  FieldElement(const FieldContext& ctx, long value) : ctx_(ctx), c_(ctx.degree(), Rational(0)) {
    c_[0] = value;
  }
  FieldElement(const FieldContext& ctx, const Rational& value) : ctx_(ctx), c_(ctx.degree(), Rational(0)) {
    c_[0] = value;
    c_[0].canonicalize();
  }
  FieldElement(const FieldContext& ctx, std::vector<Rational> coeffs) : ctx_(ctx), c_(std::move(coeffs)) {
    if (c_.size() > ctx_.degree()) {
      c_ = reduce(std::move(c_));
    } else {
      c_.resize(ctx_.degree(), Rational(0));
    }
    for (auto& q : c_) q.canonicalize();
  }

  /// The canonical generator zeta of the cyclotomic context (or 1 over Q).
  static FieldElement generator(const FieldContext& ctx) {
    if (ctx.is_rational()) return FieldElement(ctx, 1);
    std::vector<Rational> x(2, Rational(0));
    x[1] = 1;
    return FieldElement(ctx, std::move(x));
  }

  /// zeta^k for any integer k.
  static FieldElement root_power(const FieldContext& ctx, long k) {
    if (ctx.is_rational()) return FieldElement(ctx, 1);
    const long r = ctx.order();
    long e = ((k % r) + r) % r;
    FieldElement out(ctx, 1);
    const FieldElement z = generator(ctx);
    for (long i = 0; i < e; ++i) out *= z;
    return out;
  }

  const FieldContext& context() const { return ctx_; }
  const std::vector<Rational>& coefficients() const { return c_; }

  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; });
  }
  bool is_one() const {
    if (c_[0] != 1) return false;
    return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& q) { return q == 0; });
  }
  bool is_rational_value() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& q) { return q == 0; });
  }

  FieldElement& operator+=(const FieldElement& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  FieldElement& operator-=(const FieldElement& o) {
    check(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  FieldElement& operator*=(const FieldElement& o) {
    check(o);
    if (c_.size() == 1) {
      c_[0] *= o.c_[0];
      return *this;
    }
    upoly::Poly prod(2 * c_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      for (std::size_t j = 0; j < o.c_.size(); ++j) {
        if (o.c_[j] == 0) continue;
        prod[i + j] += c_[i] * o.c_[j];
      }
    }
    c_ = reduce(std::move(prod));
    return *this;
  }
  FieldElement& operator/=(const FieldElement& o) { return *this *= o.inverse(); }

  FieldElement operator-() const {
    FieldElement out = *this;
    for (auto& q : out.c_) q = -q;
    return out;
  }

  friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
  friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
  friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
  friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }

  /// Multiplicative inverse via the extended Euclidean algorithm in Q[x] modulo Phi_r.
  FieldElement inverse() const {
    if (is_zero()) throw AlgebraError("division by zero");
    if (c_.size() == 1) return FieldElement(ctx_, Rational(1 / c_[0]));
    upoly::Poly r0 = ctx_.minimal_polynomial(), r1 = c_;
    upoly::trim(r1);
    upoly::Poly s0{}, s1{Rational(1)};
    while (r1.size() > 1) {
      auto [q, rem] = upoly::divmod(r0, r1);
      upoly::Poly s2 = upoly::sub(s0, upoly::mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    if (r1.empty()) throw AlgebraError("element is not invertible modulo the cyclotomic polynomial");
    const Rational unit = r1[0];
    for (auto& q : s1) q /= unit;
    return FieldElement(ctx_, std::move(s1));
  }

  friend bool operator==(const FieldElement& a, const FieldElement& b) {
    return a.ctx_ == b.ctx_ && a.c_ == b.c_;
  }
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  /// Total order used for canonical sorting: lexicographic on the coefficient vector.
  friend int compare(const FieldElement& a, const FieldElement& b) {
    for (std::size_t i = 0; i < std::min(a.c_.size(), b.c_.size()); ++i) {
      int c = cmp(a.c_[i], b.c_[i]);
      if (c != 0) return c < 0 ? -1 : 1;
    }
    return a.c_.size() < b.c_.size() ? -1 : (a.c_.size() > b.c_.size() ? 1 : 0);
  }

  /// Image under the embedding Q(zeta_r) -> Q(zeta_L), zeta_r -> zeta_L^{L/r}.
  FieldElement embed(const FieldContext& target) const {
    if (target == ctx_) return *this;
    if (ctx_.is_rational() || (!target.is_rational() && c_.size() == 1)) {
      if (!is_rational_value()) throw AlgebraError("cannot embed a non-rational element");
      return FieldElement(target, c_[0]);
    }
    if (target.is_rational()) {
      if (!is_rational_value()) throw AlgebraError("cannot embed a non-rational element into Q");
      return FieldElement(target, c_[0]);
    }
    if (target.order() % ctx_.order() != 0)
      throw AlgebraError("target cyclotomic order is not a multiple of the source order");
    const long step = target.order() / ctx_.order();
    FieldElement out(target, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      out += FieldElement(target, c_[i]) * root_power(target, step * static_cast<long>(i));
    }
    return out;
  }

  /// Canonical text: a rational "p/q" (or "p"), or "[c0,c1,...]" for cyclotomic contexts.
  std::string key() const {
    if (ctx_.is_rational()) return c_[0].get_str();
    std::string s = "[";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ',';
      s += c_[i].get_str();
    }
    return s + "]";
  }

  /// Human-readable form using z for the generator.
  std::string to_string() const {
    if (c_.size() == 1) return c_[0].get_str();
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      std::string mag;
      Rational q = c_[i];
      bool neg = q < 0;
      if (neg) q = -q;
      if (i == 0) {
        mag = q.get_str();
      } else {
        std::string zpow = i == 1 ? "z" : "z^" + std::to_string(i);
        mag = q == 1 ? zpow : q.get_str() + "*" + zpow;
      }
      if (s.empty()) {
        s = neg ? "-" + mag : mag;
      } else {
        s += neg ? " - " + mag : " + " + mag;
      }
    }
    if (s.empty()) return "0";
    if (s.find(' ') != std::string::npos) return "(" + s + ")";
    return s;
  }

 private:
  void check(const FieldElement& o) const {
    if (ctx_ != o.ctx_) throw AlgebraError("field context mismatch: " + ctx_.name() + " vs " + o.ctx_.name());
  }

  std::vector<Rational> reduce(std::vector<Rational> p) const {
    const auto& d = ctx_.data();
    const std::size_t n = d.degree;
    if (p.size() <= n) {
      p.resize(n, Rational(0));
      return p;
    }
    if (p.size() > 2 * n - 1) {
      auto rem = upoly::divmod(std::move(p), d.modulus).second;
      rem.resize(n, Rational(0));
      return rem;
    }
    std::vector<Rational> out(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n));
    for (std::size_t k = n; k < p.size(); ++k) {
      if (p[k] == 0) continue;
      const auto& red = d.reductions[k - n];
      for (std::size_t j = 0; j < red.size(); ++j) out[j] += p[k] * red[j];
    }
    return out;
  }

  FieldContext ctx_;
  std::vector<Rational> c_;
};

inline std::ostream& operator<<(std::ostream& os, const FieldElement& a) { return os << a.to_string(); }

/// Parses "p", "p/q" or "-p/q" into a canonical rational.
inline Rational parse_rational(const std::string& text) {
  std::string t;
  for (char ch : text)
    if (ch != ' ') t += ch;
  if (t.empty()) throw AlgebraError("empty rational literal");
  Rational q;
  if (q.set_str(t, 10) != 0) throw AlgebraError("malformed rational literal '" + text + "'");
  if (q.get_den() == 0) throw AlgebraError("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

}  // namespace multiarr
