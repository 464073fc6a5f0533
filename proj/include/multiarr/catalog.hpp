#pragma once

// Named constructions and the worked fixtures used by the tests and the CLI.

#include <map>
#include <string>
#include <vector>

#include "arrangement.hpp"

namespace multiarr::catalog {

/// Q for r <= 2 (zeta = +-1 is rational), Q(zeta_r) otherwise.
inline FieldContext root_field(unsigned r) {
  if (r == 0) throw ArrangementError("root of unity order must be positive");
  return r <= 2 ? FieldContext::rational() : FieldContext::cyclotomic(r);
}

/// zeta_r^t in root_field(r).
inline FieldElement root(unsigned r, long t) {
  const FieldContext ctx = root_field(r);
  if (ctx.is_rational()) return FieldElement(ctx, (r == 2 && ((t % 2) + 2) % 2 == 1) ? -1 : 1);
  return FieldElement::root_power(ctx, t);
}

inline std::string coordinate_label(std::size_t i) { return "X" + std::to_string(i + 1); }
inline std::string reflecting_label(std::size_t i, std::size_t j, unsigned t) {
  return "H" + std::to_string(i + 1) + "_" + std::to_string(j + 1) + "_" + std::to_string(t);
}

inline Vector unit(const FieldContext& ctx, std::size_t l, std::size_t i) {
  Vector v(l, FieldElement(ctx, 0));
  v.at(i) = FieldElement(ctx, 1);
  return v;
}

/// Phi_l
inline Multiarrangement empty(std::size_t l, const FieldContext& ctx = FieldContext::rational()) {
  return Multiarrangement(l, ctx);
}

/// Coordinate hyperplanes ker x_i with the given multiplicities (default 1).
inline Multiarrangement boolean(std::size_t l, const std::vector<unsigned>& mult = {},
                                const FieldContext& ctx = FieldContext::rational()) {
  if (!mult.empty() && mult.size() != l) throw ArrangementError("boolean: one multiplicity per coordinate");
  std::vector<Multiarrangement::Input> in;
  for (std::size_t i = 0; i < l; ++i) in.push_back({unit(ctx, l, i), mult.empty() ? 1u : mult[i], coordinate_label(i)});
  return Multiarrangement::build(l, ctx, in);
}

/// ker(x_i - zeta^t x_j), 1 <= i < j <= l, 0 <= t < r; the reflection arrangement of G(r, r, l).
inline Multiarrangement monomial_rrl(unsigned r, std::size_t l) {
  if (l < 2) throw ArrangementError("monomial arrangement needs l >= 2");
  const FieldContext ctx = root_field(r);
  std::vector<Multiarrangement::Input> in;
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = i + 1; j < l; ++j)
      for (unsigned t = 0; t < r; ++t) {
        Vector v(l, FieldElement(ctx, 0));
        v[i] = FieldElement(ctx, 1);
        v[j] = -root(r, t);
        in.push_back({v, 1, reflecting_label(i, j, t)});
      }
  return Multiarrangement::build(l, ctx, in);
}

/// Braid arrangement ker(x_i - x_j).
inline Multiarrangement braid(std::size_t l) { return monomial_rrl(1, l); }

/// A^k_l(r): monomial_rrl(r, l) plus ker x_1, ..., ker x_k.
inline Multiarrangement interpolating(std::size_t k, std::size_t l, unsigned r) {
  if (k > l) throw ArrangementError("interpolating arrangement needs k <= l");
  const Multiarrangement base = monomial_rrl(r, l);
  std::vector<Hyperplane> hs = base.hyperplanes();
  for (std::size_t i = 0; i < k; ++i)
    hs.push_back({LinearForm::normalized(unit(base.context(), l, i)), 1, coordinate_label(i)});
  return Multiarrangement::from_hyperplanes(l, base.context(), std::move(hs));
}

/// G(r, 1, l)
inline Multiarrangement full_monomial(unsigned r, std::size_t l) { return interpolating(l, l, r); }

/// delta_{H0, m0}: m0 on H0, 1 elsewhere.
inline Multiarrangement with_concentrated(const Multiarrangement& a, std::size_t h0, unsigned m0) {
  if (m0 < 2) throw ArrangementError("concentrated multiplicity needs m0 > 1");
  if (h0 >= a.size()) throw ArrangementError("concentrated multiplicity: H0 not in the arrangement");
  std::vector<Hyperplane> hs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].multiplicity == 0) continue;
    Hyperplane h = a[i];
    h.multiplicity = i == h0 ? m0 : 1;
    hs.push_back(std::move(h));
  }
  return Multiarrangement::from_hyperplanes(a.dimension(), a.context(), std::move(hs));
}

/// Places an arrangement in m variables into l variables: coordinate j goes to coords[j].
inline Multiarrangement coordinate_inclusion(const Multiarrangement& b, std::size_t l,
                                             const std::vector<std::size_t>& coords) {
  if (coords.size() != b.dimension()) throw ArrangementError("coordinate inclusion needs one target per variable");
  std::vector<Hyperplane> hs;
  for (const auto& h : b.hyperplanes()) {
    if (h.multiplicity == 0) continue;
    Vector v(l, FieldElement(b.context(), 0));
    for (std::size_t j = 0; j < coords.size(); ++j) v.at(coords[j]) = h.form[j];
    hs.push_back({LinearForm::normalized(std::move(v)), h.multiplicity, h.label});
  }
  return Multiarrangement::from_hyperplanes(l, b.context(), std::move(hs));
}

/// An arrangement with named pivots and flats (given by normal spans).
struct Fixture {
  std::string name;
  Multiarrangement arrangement;
  std::map<std::string, std::size_t> pivots;
  std::map<std::string, NormalSpan> flats;

  std::size_t pivot(const std::string& n) const { return pivots.at(n); }
  const NormalSpan& flat(const std::string& n) const { return flats.at(n); }
};

inline std::size_t index_of(const Multiarrangement& a, const std::string& label) {
  auto i = a.find_label(label);
  if (!i) throw ArrangementError("no hyperplane labelled " + label);
  return *i;
}

/// Q = x^2 y^2 (x+y)^2 (x+z)^2 (y+z)^2 with H1 = ker x, H2 = ker(y+z), Y = H1 cap H2.
inline Fixture five_lines() {
  const FieldContext q = FieldContext::rational();
  auto v = [&](long a, long b, long c) { return Vector{FieldElement(q, a), FieldElement(q, b), FieldElement(q, c)}; };
  Fixture f;
  f.name = "five_lines";
  f.arrangement = Multiarrangement::build(3, q,
                                          {{v(1, 0, 0), 2, "x"},
                                           {v(0, 1, 0), 2, "y"},
                                           {v(1, 1, 0), 2, "x+y"},
                                           {v(1, 0, 1), 2, "x+z"},
                                           {v(0, 1, 1), 2, "y+z"}});
  f.pivots["H1"] = index_of(f.arrangement, "x");
  f.pivots["H2"] = index_of(f.arrangement, "y+z");
  f.flats["Y"] = NormalSpan::of(q, 3, {v(1, 0, 0), v(0, 1, 1)});
  return f;
}

/// G(3,3,3) with delta concentrated on H1 = ker(x - y); H2 = ker(x - z), Y = H1 cap H2.
inline Fixture g333_concentrated(unsigned m1) {
  Fixture f;
  f.name = "g333_concentrated";
  const Multiarrangement g = monomial_rrl(3, 3);
  const std::size_t h1 = index_of(g, reflecting_label(0, 1, 0));
  f.arrangement = with_concentrated(g, h1, m1);
  f.pivots["H1"] = index_of(f.arrangement, reflecting_label(0, 1, 0));
  f.pivots["H2"] = index_of(f.arrangement, reflecting_label(0, 2, 0));
  f.flats["Y"] = NormalSpan::of(g.context(), 3,
                                {f.arrangement[f.pivots["H1"]].form.coefficients(),
                                 f.arrangement[f.pivots["H2"]].form.coefficients()});
  return f;
}

/// G(r,r,l) with delta on H0 = ker(x1 - x2) and X = intersection of ker x_i for 3 <= i <= l.
inline Fixture grrl_restricted(unsigned r, std::size_t l, unsigned m0 = 2) {
  Fixture f;
  f.name = "grrl";
  const Multiarrangement g = monomial_rrl(r, l);
  f.arrangement = with_concentrated(g, index_of(g, reflecting_label(0, 1, 0)), m0);
  f.pivots["H0"] = index_of(f.arrangement, reflecting_label(0, 1, 0));
  std::vector<Vector> xs;
  for (std::size_t i = 2; i < l; ++i) xs.push_back(unit(g.context(), l, i));
  f.flats["X"] = NormalSpan::of(g.context(), l, xs);
  return f;
}

/// A^k_l(r) with delta on H0 = ker(x1 - x2), Z = intersection of ker x_i for l-2 <= i <= l, X = H0 cap Z.
inline Fixture akl_restricted(std::size_t k, std::size_t l, unsigned r, unsigned m0 = 2) {
  if (l < 3) throw ArrangementError("akl_restricted fixture needs l >= 3");
  Fixture f;
  f.name = "akl";
  const Multiarrangement a = interpolating(k, l, r);
  f.arrangement = with_concentrated(a, index_of(a, reflecting_label(0, 1, 0)), m0);
  f.pivots["H0"] = index_of(f.arrangement, reflecting_label(0, 1, 0));
  std::vector<Vector> zs;
  for (std::size_t i = l - 3; i < l; ++i) zs.push_back(unit(a.context(), l, i));
  f.flats["Z"] = NormalSpan::of(a.context(), l, zs);
  zs.push_back(f.arrangement[f.pivots["H0"]].form.coefficients());
  f.flats["X"] = NormalSpan::of(a.context(), l, zs);
  return f;
}

/// Catalog entry names accepted by build().
inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n = {"empty", "boolean", "braid", "grrl", "grl", "akl", "five_lines", "g333_concentrated"};
  return n;
}

/// Builds a catalog entry from integer parameters.
inline Multiarrangement build(const std::string& name, const std::vector<long>& p) {
  auto need = [&](std::size_t n) {
    if (p.size() < n) throw ArrangementError(name + " needs " + std::to_string(n) + " parameters");
    for (long x : p)
      if (x < 0) throw ArrangementError("catalog parameters must be non-negative");
  };
  auto u = [&](std::size_t i) { return static_cast<unsigned>(p[i]); };
  if (name == "empty") {
    need(1);
    return empty(u(0));
  }
  if (name == "boolean") {
    need(1);
    std::vector<unsigned> m;
    for (std::size_t i = 1; i < p.size(); ++i) m.push_back(u(i));
    return boolean(u(0), m);
  }
  if (name == "braid") {
    need(1);
    return braid(u(0));
  }
  if (name == "grrl") {
    need(2);
    return monomial_rrl(u(0), u(1));
  }
  if (name == "grl") {
    need(2);
    return full_monomial(u(0), u(1));
  }
  if (name == "akl") {
    need(3);
    return interpolating(u(0), u(1), u(2));
  }
  if (name == "five_lines") return five_lines().arrangement;
  if (name == "g333_concentrated") {
    need(1);
    return g333_concentrated(u(0)).arrangement;
  }
  throw ArrangementError("unknown catalog entry: " + name);
}

}  // namespace multiarr::catalog
