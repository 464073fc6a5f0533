#pragma once

// Central multiarrangements, their flats, localizations, restrictions and products.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "linear_algebra.hpp"

namespace multiarr {

class ArrangementError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// alpha_H up to scalar: the first nonzero coefficient is 1.
class LinearForm {
 public:
  LinearForm() = default;

  static LinearForm normalized(Vector coeffs) {
    if (coeffs.empty()) throw ArrangementError("linear form in zero variables");
    std::size_t p = 0;
    while (p < coeffs.size() && coeffs[p].is_zero()) ++p;
    if (p == coeffs.size()) throw ArrangementError("zero linear form does not define a hyperplane");
    if (!coeffs[p].is_one()) {
      const FieldElement inv = coeffs[p].inverse();
      for (std::size_t j = p; j < coeffs.size(); ++j) coeffs[j] *= inv;
    }
    LinearForm f;
    f.c_ = std::move(coeffs);
    f.pivot_ = p;
    return f;
  }

  const Vector& coefficients() const { return c_; }
  const FieldElement& operator[](std::size_t i) const { return c_[i]; }
  std::size_t dimension() const { return c_.size(); }
  std::size_t pivot() const { return pivot_; }
  const FieldContext& context() const { return c_.at(0).context(); }

  Polynomial polynomial() const { return Polynomial::linear(context(), c_); }

  /// alpha(v)
  FieldElement evaluate(const Vector& v) const {
    FieldElement s(context(), 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!c_[i].is_zero()) s += c_[i] * v.at(i);
    return s;
  }

  LinearForm embed(const FieldContext& target) const {
    Vector out;
    for (const auto& x : c_) out.push_back(x.embed(target));
    return normalized(std::move(out));
  }

  std::string key() const {
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ',';
      s += c_[i].key();
    }
    return s;
  }

  std::string to_string(const std::vector<std::string>& names) const { return polynomial().to_string(names); }
  std::string to_string() const { return polynomial().to_string(); }

  friend int compare(const LinearForm& a, const LinearForm& b) {
    for (std::size_t i = 0; i < std::min(a.c_.size(), b.c_.size()); ++i) {
      int c = compare(a.c_[i], b.c_[i]);
      if (c) return c;
    }
    return a.c_.size() < b.c_.size() ? -1 : (a.c_.size() > b.c_.size() ? 1 : 0);
  }
  friend bool operator<(const LinearForm& a, const LinearForm& b) { return compare(a, b) < 0; }
  friend bool operator==(const LinearForm& a, const LinearForm& b) { return a.c_ == b.c_; }
  friend bool operator!=(const LinearForm& a, const LinearForm& b) { return !(a == b); }

 private:
  Vector c_;
  std::size_t pivot_ = 0;
};

struct Hyperplane {
  LinearForm form;
  unsigned multiplicity = 1;
  std::string label;
};

/// Canonical row-reduced basis of a subspace of V* (the normals vanishing on a subspace of V).
class NormalSpan {
 public:
  NormalSpan() = default;
  NormalSpan(const FieldContext& ctx, std::size_t dim) : ctx_(ctx), dim_(dim) {}

  static NormalSpan of(const FieldContext& ctx, std::size_t dim, const std::vector<Vector>& vectors) {
    NormalSpan s(ctx, dim);
    if (vectors.empty()) return s;
    Matrix m = Matrix::from_rows(ctx, vectors, dim);
    const auto piv = m.rref();
    for (std::size_t i = 0; i < piv.size(); ++i) s.rows_.push_back(m.row(i));
    s.pivots_ = piv;
    return s;
  }

  const FieldContext& context() const { return ctx_; }
  std::size_t dimension() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  const std::vector<Vector>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  /// Remainder of v after reduction against the rows; zero iff v lies in the span.
  Vector reduce(Vector v) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t p = pivots_[k];
      if (v[p].is_zero()) continue;
      const FieldElement f = v[p];
      for (std::size_t j = p; j < dim_; ++j)
        if (!rows_[k][j].is_zero()) v[j] -= f * rows_[k][j];
    }
    return v;
  }

  bool contains(const Vector& v) const {
    for (const auto& x : reduce(v))
      if (!x.is_zero()) return false;
    return true;
  }
  bool contains(const LinearForm& f) const { return contains(f.coefficients()); }
  bool contains(const NormalSpan& other) const {
    for (const auto& r : other.rows_)
      if (!contains(r)) return false;
    return true;
  }

  NormalSpan joined(const Vector& v) const {
    auto rows = rows_;
    rows.push_back(v);
    return of(ctx_, dim_, rows);
  }

  /// Coordinates on the subspace {x : row(x) = 0 for all rows}: the non-pivot coordinates.
  std::vector<std::size_t> free_coordinates() const {
    std::vector<bool> piv(dim_, false);
    for (auto p : pivots_) piv[p] = true;
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < dim_; ++j)
      if (!piv[j]) out.push_back(j);
    return out;
  }

  /// The form's restriction to the subspace, written in the free coordinates:
  /// pivot variables are eliminated via x_p = -sum_j row[j] x_j.
  Vector restrict_form(const Vector& a) const {
    const Vector r = reduce(a);
    Vector out;
    for (auto j : free_coordinates()) out.push_back(r[j]);
    return out;
  }

  /// Image of another span after passing to the subspace's coordinates.
  NormalSpan restrict_span(const NormalSpan& other) const {
    std::vector<Vector> rows;
    for (const auto& r : other.rows_) rows.push_back(restrict_form(r));
    return of(ctx_, dim_ - rank(), rows);
  }

  std::string key() const {
    std::string s = std::to_string(dim_) + ":";
    for (const auto& r : rows_) {
      s += "(";
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (j) s += ',';
        s += r[j].key();
      }
      s += ")";
    }
    return s;
  }

  friend bool operator==(const NormalSpan& a, const NormalSpan& b) {
    return a.dim_ == b.dim_ && a.rows_ == b.rows_;
  }

 private:
  FieldContext ctx_;
  std::size_t dim_ = 0;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

/// Element X of the intersection lattice: the hyperplanes containing it and its normal span.
struct Flat {
  std::vector<std::size_t> containing;
  std::size_t rank = 0;
  NormalSpan span;

  std::string key() const { return span.key(); }
  friend bool operator==(const Flat& a, const Flat& b) { return a.span == b.span; }
};

class Multiarrangement {
 public:
  struct Input {
    Vector normal;
    unsigned multiplicity = 1;
    std::string label;
  };

  Multiarrangement() = default;
  Multiarrangement(std::size_t dimension, const FieldContext& ctx) : dim_(dimension), ctx_(ctx) {}

  /// Normalizes forms, merges equal hyperplanes (summing multiplicities) and sorts canonically.
  static Multiarrangement build(std::size_t dimension, const FieldContext& ctx, const std::vector<Input>& forms) {
    std::vector<Hyperplane> hs;
    for (const auto& in : forms) {
      if (in.normal.size() != dimension)
        throw ArrangementError("normal has " + std::to_string(in.normal.size()) + " entries, expected " +
                               std::to_string(dimension));
      for (const auto& x : in.normal)
        if (x.context() != ctx) throw ArrangementError("normal entry outside the arrangement's field");
      hs.push_back({LinearForm::normalized(in.normal), in.multiplicity, in.label});
    }
    return from_hyperplanes(dimension, ctx, std::move(hs));
  }

  static Multiarrangement from_hyperplanes(std::size_t dimension, const FieldContext& ctx, std::vector<Hyperplane> hs) {
    Multiarrangement a(dimension, ctx);
    std::stable_sort(hs.begin(), hs.end(), [](const Hyperplane& x, const Hyperplane& y) { return x.form < y.form; });
    for (auto& h : hs) {
      if (h.form.dimension() != dimension) throw ArrangementError("hyperplane dimension mismatch");
      if (!a.hs_.empty() && a.hs_.back().form == h.form) {
        a.hs_.back().multiplicity += h.multiplicity;
        if (a.hs_.back().label.empty()) a.hs_.back().label = h.label;
      } else {
        a.hs_.push_back(std::move(h));
      }
    }
    return a;
  }

  std::size_t dimension() const { return dim_; }
  const FieldContext& context() const { return ctx_; }
  const std::vector<Hyperplane>& hyperplanes() const { return hs_; }
  const Hyperplane& operator[](std::size_t i) const { return hs_.at(i); }
  std::size_t size() const { return hs_.size(); }

  /// Indices of hyperplanes with positive multiplicity.
  std::vector<std::size_t> active() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < hs_.size(); ++i)
      if (hs_[i].multiplicity > 0) out.push_back(i);
    return out;
  }
  std::size_t num_active() const { return active().size(); }

  /// |nu|
  unsigned order() const {
    unsigned s = 0;
    for (const auto& h : hs_) s += h.multiplicity;
    return s;
  }
  bool is_empty() const { return order() == 0; }
  bool is_simple() const {
    for (const auto& h : hs_)
      if (h.multiplicity != 1) return false;
    return true;
  }
  unsigned max_multiplicity() const {
    unsigned m = 0;
    for (const auto& h : hs_) m = std::max(m, h.multiplicity);
    return m;
  }

  std::string label(std::size_t i) const {
    return hs_.at(i).label.empty() ? "H" + std::to_string(i + 1) : hs_[i].label;
  }

  std::optional<std::size_t> find(const LinearForm& f) const {
    auto it = std::lower_bound(hs_.begin(), hs_.end(), f,
                               [](const Hyperplane& h, const LinearForm& g) { return h.form < g; });
    if (it == hs_.end() || it->form != f) return std::nullopt;
    return static_cast<std::size_t>(it - hs_.begin());
  }
  std::optional<std::size_t> find_label(const std::string& label) const {
    for (std::size_t i = 0; i < hs_.size(); ++i)
      if (hs_[i].label == label) return i;
    return std::nullopt;
  }
  unsigned multiplicity_of(const LinearForm& f) const {
    auto i = find(f);
    return i ? hs_[*i].multiplicity : 0;
  }

  /// Same hyperplanes, multiplicity of hyperplane i replaced (0 drops it).
  Multiarrangement with_multiplicity(std::size_t i, unsigned m) const {
    Multiarrangement out = *this;
    if (m == 0) {
      out.hs_.erase(out.hs_.begin() + static_cast<std::ptrdiff_t>(i));
    } else {
      out.hs_.at(i).multiplicity = m;
    }
    return out;
  }

  Multiarrangement added(const LinearForm& f, const std::string& label = {}) const {
    if (f.dimension() != dim_ || f.context() != ctx_) throw ArrangementError("form does not match arrangement");
    auto hs = hs_;
    hs.push_back({f, 1, label});
    return from_hyperplanes(dim_, ctx_, std::move(hs));
  }

  Multiarrangement removed(const LinearForm& f) const {
    auto i = find(f);
    if (!i || hs_[*i].multiplicity == 0) throw ArrangementError("hyperplane not present: " + f.to_string());
    return with_multiplicity(*i, hs_[*i].multiplicity - 1);
  }

  /// Drops zero-multiplicity hyperplanes.
  Multiarrangement compacted() const {
    Multiarrangement out(dim_, ctx_);
    for (const auto& h : hs_)
      if (h.multiplicity > 0) out.hs_.push_back(h);
    return out;
  }

  std::vector<Vector> normals() const {
    std::vector<Vector> out;
    for (const auto& h : hs_)
      if (h.multiplicity > 0) out.push_back(h.form.coefficients());
    return out;
  }

  NormalSpan normal_span() const { return NormalSpan::of(ctx_, dim_, normals()); }
  std::size_t rank() const { return normal_span().rank(); }

  /// Exact key of the multiset view: field, dimension, sorted forms with multiplicities.
  std::string key() const {
    std::string s = ctx_.name() + "|" + std::to_string(dim_) + "|";
    for (const auto& h : hs_) {
      if (h.multiplicity == 0) continue;
      s += h.form.key() + "^" + std::to_string(h.multiplicity) + ";";
    }
    return s;
  }

  friend bool operator==(const Multiarrangement& a, const Multiarrangement& b) {
    if (a.dim_ != b.dim_ || a.ctx_ != b.ctx_) return false;
    auto ia = a.active(), ib = b.active();
    if (ia.size() != ib.size()) return false;
    for (std::size_t k = 0; k < ia.size(); ++k) {
      const auto& ha = a.hs_[ia[k]];
      const auto& hb = b.hs_[ib[k]];
      if (ha.form != hb.form || ha.multiplicity != hb.multiplicity) return false;
    }
    return true;
  }
  friend bool operator!=(const Multiarrangement& a, const Multiarrangement& b) { return !(a == b); }

  /// (A1, nu1) subset of (A2, nu2) as multisets.
  bool is_submultiarrangement_of(const Multiarrangement& other) const {
    if (dim_ != other.dim_ || ctx_ != other.ctx_) return false;
    for (const auto& h : hs_)
      if (h.multiplicity > other.multiplicity_of(h.form)) return false;
    return true;
  }

  Multiarrangement embed(const FieldContext& target) const {
    std::vector<Hyperplane> hs;
    for (const auto& h : hs_) hs.push_back({h.form.embed(target), h.multiplicity, h.label});
    return from_hyperplanes(dim_, target, std::move(hs));
  }

  /// Multiplicities in storage order.
  std::vector<unsigned> multiplicities() const {
    std::vector<unsigned> out;
    for (const auto& h : hs_) out.push_back(h.multiplicity);
    return out;
  }

  /// Q(A, nu) written as a product of powers of linear forms.
  std::string to_string() const {
    if (is_empty()) return "1";
    std::string s;
    for (const auto& h : hs_) {
      if (h.multiplicity == 0) continue;
      s += "(" + h.form.to_string(Polynomial::default_names(dim_)) + ")";
      if (h.multiplicity > 1) s += "^" + std::to_string(h.multiplicity);
    }
    return s;
  }

 private:
  std::size_t dim_ = 0;
  FieldContext ctx_;
  std::vector<Hyperplane> hs_;
};

/// Q(A, nu) = prod alpha_H^{nu(H)}
inline Polynomial defining_polynomial(const Multiarrangement& a) {
  Polynomial q = Polynomial::one(a.context(), a.dimension());
  for (const auto& h : a.hyperplanes())
    if (h.multiplicity > 0) q *= h.form.polynomial().pow(h.multiplicity);
  return q;
}

/// The flat with the given normal span, saturated with every hyperplane containing it.
inline Flat flat_from_span(const Multiarrangement& a, const NormalSpan& span) {
  Flat f;
  f.span = span;
  f.rank = span.rank();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].multiplicity > 0 && span.contains(a[i].form)) f.containing.push_back(i);
  return f;
}

/// Intersection of the given hyperplanes as a flat of A.
inline Flat flat_from_hyperplanes(const Multiarrangement& a, const std::vector<std::size_t>& indices) {
  std::vector<Vector> normals;
  for (auto i : indices) normals.push_back(a[i].form.coefficients());
  return flat_from_span(a, NormalSpan::of(a.context(), a.dimension(), normals));
}

/// Flat X = intersection of A_U for the subspace U spanned by the given vectors.
inline Flat flat_from_vectors(const Multiarrangement& a, const std::vector<Vector>& spanning) {
  std::vector<std::size_t> above;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].multiplicity == 0) continue;
    bool all = true;
    for (const auto& u : spanning)
      if (!a[i].form.evaluate(u).is_zero()) {
        all = false;
        break;
      }
    if (all) above.push_back(i);
  }
  return flat_from_hyperplanes(a, above);
}

/// The center T_A.
inline Flat center(const Multiarrangement& a) { return flat_from_span(a, a.normal_span()); }

struct Lattice {
  std::vector<Flat> flats;  // sorted by rank, then by key; flats[0] is V

  std::optional<std::size_t> find(const NormalSpan& span) const {
    for (std::size_t i = 0; i < flats.size(); ++i)
      if (flats[i].span == span) return i;
    return std::nullopt;
  }
  std::size_t count_rank(std::size_t r) const {
    return static_cast<std::size_t>(
        std::count_if(flats.begin(), flats.end(), [r](const Flat& f) { return f.rank == r; }));
  }
};

/// L(A): closure of {V} under intersection with hyperplanes, deduplicated by normal span.
inline Lattice intersection_lattice(const Multiarrangement& a) {
  std::map<std::string, Flat> seen;
  Flat top = flat_from_span(a, NormalSpan(a.context(), a.dimension()));
  std::vector<Flat> frontier{top};
  seen.emplace(top.key(), top);
  const auto act = a.active();
  while (!frontier.empty()) {
    std::vector<Flat> next;
    for (const auto& f : frontier) {
      for (auto i : act) {
        if (std::binary_search(f.containing.begin(), f.containing.end(), i)) continue;
        Flat g = flat_from_span(a, f.span.joined(a[i].form.coefficients()));
        auto key = g.key();
        if (seen.count(key)) continue;
        seen.emplace(key, g);
        next.push_back(std::move(g));
      }
    }
    frontier = std::move(next);
  }
  Lattice l;
  for (auto& [k, f] : seen) l.flats.push_back(f);
  std::stable_sort(l.flats.begin(), l.flats.end(), [](const Flat& x, const Flat& y) { return x.rank < y.rank; });
  return l;
}

/// (A_X, nu_X) for the subspace X with the given normal span.
inline Multiarrangement localize(const Multiarrangement& a, const NormalSpan& span) {
  std::vector<Hyperplane> hs;
  for (const auto& h : a.hyperplanes())
    if (h.multiplicity > 0 && span.contains(h.form)) hs.push_back(h);
  return Multiarrangement::from_hyperplanes(a.dimension(), a.context(), std::move(hs));
}
inline Multiarrangement localize(const Multiarrangement& a, const Flat& x) { return localize(a, x.span); }

/// Localization at the subspace U spanned by the given vectors.
inline Multiarrangement localize_at_vectors(const Multiarrangement& a, const std::vector<Vector>& spanning) {
  return localize(a, flat_from_vectors(a, spanning));
}

/// Restriction A^X to a subspace, in the free coordinates of its normal span.
struct Restriction {
  Multiarrangement arrangement;                   // simple
  NormalSpan span;                                // normal span of the subspace restricted to
  std::vector<std::vector<std::size_t>> above;    // per restricted hyperplane Y: indices of A_Y in A
  std::vector<std::optional<std::size_t>> image;  // per index of A: its restricted hyperplane, if any
};

inline Restriction restrict_to_span(const Multiarrangement& a, const NormalSpan& span) {
  Restriction res;
  res.span = span;
  const std::size_t dim = a.dimension() - span.rank();
  std::map<LinearForm, std::vector<std::size_t>> groups;
  std::map<LinearForm, std::string> labels;
  std::vector<std::optional<LinearForm>> image_form(a.size());
  // A_X itself is part of every A_Y.
  std::vector<std::size_t> inside;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].multiplicity == 0) continue;
    Vector r = span.restrict_form(a[i].form.coefficients());
    bool zero = std::all_of(r.begin(), r.end(), [](const FieldElement& x) { return x.is_zero(); });
    if (zero) {
      inside.push_back(i);
      continue;
    }
    LinearForm f = LinearForm::normalized(std::move(r));
    groups[f].push_back(i);
    image_form[i] = f;
  }
  std::vector<Hyperplane> hs;
  for (auto& [f, idx] : groups) {
    std::string lab;
    for (auto i : inside) lab += (lab.empty() ? "" : "&") + a.label(i);
    lab += (lab.empty() ? "" : "&") + a.label(idx.front());
    hs.push_back({f, 1, lab});
  }
  res.arrangement = Multiarrangement::from_hyperplanes(dim, a.context(), std::move(hs));
  res.above.resize(res.arrangement.size());
  res.image.resize(a.size());
  for (std::size_t y = 0; y < res.arrangement.size(); ++y) {
    auto& group = groups.at(res.arrangement[y].form);
    std::vector<std::size_t> ay = inside;
    ay.insert(ay.end(), group.begin(), group.end());
    std::sort(ay.begin(), ay.end());
    res.above[y] = ay;
    for (auto i : group) res.image[i] = y;
  }
  return res;
}

/// A'' = A^{H0} with the flat map Y -> A_Y (indices include H0).
inline Restriction simple_restriction(const Multiarrangement& a, std::size_t h0) {
  if (h0 >= a.size() || a[h0].multiplicity == 0)
    throw ArrangementError("restriction pivot is not a hyperplane of the arrangement");
  return restrict_to_span(a, NormalSpan::of(a.context(), a.dimension(), {a[h0].form.coefficients()}));
}

/// Coordinates on the span of the normals: each form expressed in the RREF basis.
inline Multiarrangement essentialize(const Multiarrangement& a) {
  const NormalSpan span = a.normal_span();
  std::vector<Hyperplane> hs;
  for (const auto& h : a.hyperplanes()) {
    if (h.multiplicity == 0) continue;
    Vector c;
    for (auto p : span.pivots()) c.push_back(h.form[p]);
    hs.push_back({LinearForm::normalized(std::move(c)), h.multiplicity, h.label});
  }
  return Multiarrangement::from_hyperplanes(span.rank(), a.context(), std::move(hs));
}

/// (A1 x A2, nu1 x nu2) in V1 + V2; contexts are merged into a common cyclotomic field.
inline Multiarrangement product(const Multiarrangement& a1, const Multiarrangement& a2) {
  const FieldContext ctx = common_context(a1.context(), a2.context());
  const std::size_t n1 = a1.dimension(), n2 = a2.dimension();
  std::vector<Hyperplane> hs;
  for (const auto& h : a1.hyperplanes()) {
    if (h.multiplicity == 0) continue;
    Vector c;
    for (const auto& x : h.form.coefficients()) c.push_back(x.embed(ctx));
    for (std::size_t j = 0; j < n2; ++j) c.emplace_back(ctx, 0);
    hs.push_back({LinearForm::normalized(std::move(c)), h.multiplicity, h.label});
  }
  for (const auto& h : a2.hyperplanes()) {
    if (h.multiplicity == 0) continue;
    Vector c;
    for (std::size_t j = 0; j < n1; ++j) c.emplace_back(ctx, 0);
    for (const auto& x : h.form.coefficients()) c.push_back(x.embed(ctx));
    hs.push_back({LinearForm::normalized(std::move(c)), h.multiplicity, h.label});
  }
  return Multiarrangement::from_hyperplanes(n1 + n2, ctx, std::move(hs));
}

/// Set of hyperplane forms of a restriction, for simple comparisons.
inline std::set<std::string> form_keys(const Multiarrangement& a) {
  std::set<std::string> out;
  for (const auto& h : a.hyperplanes())
    if (h.multiplicity > 0) out.insert(h.form.key());
  return out;
}

/// Checks (i) B cap A_X = B_X and (ii) (B_X)^Y = (B^Y)_X for Y <= X (Y contains X).
inline bool swap_check(const Multiarrangement& a, const Multiarrangement& b, const Flat& x, const Flat& y) {
  if (!x.span.contains(y.span)) throw ArrangementError("swap_check requires Y <= X");
  if (!b.is_submultiarrangement_of(a)) throw ArrangementError("swap_check requires B to be a submultiarrangement of A");
  // (i): hyperplanes of B lying in A_X, with B's multiplicities
  const Multiarrangement ax = localize(a, x);
  std::vector<Hyperplane> meet;
  for (const auto& h : b.hyperplanes())
    if (h.multiplicity > 0 && ax.find(h.form)) meet.push_back(h);
  const Multiarrangement lhs_i = Multiarrangement::from_hyperplanes(b.dimension(), b.context(), meet);
  if (lhs_i != localize(b, x)) return false;
  // (ii)
  const Multiarrangement bx_y = restrict_to_span(localize(b, x), y.span).arrangement;
  const Multiarrangement by = restrict_to_span(b, y.span).arrangement;
  const Multiarrangement by_x = localize(by, y.span.restrict_span(x.span));
  return form_keys(bx_y) == form_keys(by_x);
}

}  // namespace multiarr
