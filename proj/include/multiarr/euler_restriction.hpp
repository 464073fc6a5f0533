#pragma once

// Deletion, Euler multiplicities, triples, iterated restrictions along a fixed
// order, and Ziegler's multiplicity.

#include <atomic>
#include <future>
#include <map>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "derivation.hpp"

namespace multiarr {

/// Worker count used for per-hyperplane Euler multiplicities (1 = sequential).
inline unsigned& euler_jobs() {
  static unsigned jobs = 1;
  return jobs;
}

/// (A', nu'): one unit of multiplicity removed from H0.
inline Multiarrangement deletion(const Multiarrangement& a, std::size_t h0) {
  if (h0 >= a.size() || a[h0].multiplicity == 0) throw ArrangementError("deletion needs nu(H0) >= 1");
  return a.with_multiplicity(h0, a[h0].multiplicity - 1);
}

namespace detail {

/// Rank-2 multiarrangement (in two variables) with a distinguished hyperplane.
inline unsigned euler_multiplicity_rank2(const Multiarrangement& loc, const LinearForm& alpha0) {
  static std::mutex mutex;
  static std::map<std::string, unsigned> cache;
  const std::string key = loc.key() + "#" + alpha0.key();
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const FreenessCertificate cert = exponents_oracle(loc);
  if (!cert.is_free() || cert.basis.size() != 2)
    throw AlgebraError("rank 2 multiarrangement did not certify free");
  const Derivation& t1 = cert.basis[0];
  const Derivation& t2 = cert.basis[1];
  const Polynomial a0 = alpha0.polynomial();
  const bool in1 = t1.divisible_by(a0), in2 = t2.divisible_by(a0);
  unsigned result = 0;
  if (in1 && in2) {
    throw AlgebraError("no basis element outside alpha_0 * Der(S)");
  } else if (in1) {
    result = static_cast<unsigned>(t2.pdeg());
  } else if (in2) {
    result = static_cast<unsigned>(t1.pdeg());
  } else {
    // Both outside: find f with theta_2 - f * theta_1 in alpha_0 Der(S). Writing the
    // components modulo alpha_0 in the coordinate where alpha_0 is the pivot makes this linear.
    const unsigned d1 = static_cast<unsigned>(t1.pdeg()), d2 = static_cast<unsigned>(t2.pdeg());
    const auto& fb = MonomialBasis::get(2, d2 - d1);
    const FieldContext& ctx = loc.context();
    const std::size_t k = alpha0.pivot();
    // x_k -> -sum_{j != k} c_j x_j sends alpha_0 S to zero
    std::vector<Polynomial> images;
    for (std::size_t j = 0; j < 2; ++j) {
      if (j != k) {
        images.push_back(Polynomial::variable(ctx, 2, j));
      } else {
        Polynomial im(ctx, 2);
        for (std::size_t t = 0; t < 2; ++t)
          if (t != k) im += Polynomial::variable(ctx, 2, t) * (-alpha0[t]);
        images.push_back(im);
      }
    }
    const auto& ob = MonomialBasis::get(2, d2);
    Matrix m(ctx, 2 * ob.size(), fb.size());
    Vector rhs(2 * ob.size(), FieldElement(ctx, 0));
    for (std::size_t i = 0; i < 2; ++i) {
      const Polynomial r2 = t2[i].substitute(images);
      for (const auto& [e, c] : r2.terms()) rhs[i * ob.size() + ob.index(e)] = c;
      for (std::size_t f = 0; f < fb.size(); ++f) {
        const Polynomial r1 = t1[i].shifted(fb[f]).substitute(images);
        for (const auto& [e, c] : r1.terms()) m(i * ob.size() + ob.index(e), f) = c;
      }
    }
    if (!solve_linear(m, rhs)) throw AlgebraError("could not adjust the rank 2 basis into alpha_0 * Der(S)");
    result = d1;
  }
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, result);
  return result;
}

}  // namespace detail

/// nu*(Y) = pdeg theta_Y, computed on the essentialized localization (A_Y, nu_Y).
inline unsigned euler_multiplicity(const Multiarrangement& a, std::size_t h0, const std::vector<std::size_t>& above) {
  if (h0 >= a.size() || a[h0].multiplicity == 0) throw ArrangementError("Euler multiplicity needs nu(H0) >= 1");
  if (std::find(above.begin(), above.end(), h0) == above.end())
    throw ArrangementError("H0 does not contain the restricted hyperplane");
  std::vector<Hyperplane> hs;
  for (auto i : above) hs.push_back(a[i]);
  const Multiarrangement loc = Multiarrangement::from_hyperplanes(a.dimension(), a.context(), hs);
  const NormalSpan span = loc.normal_span();
  if (span.rank() != 2) throw ArrangementError("localization at a restricted hyperplane must have rank 2");
  const Multiarrangement ess = essentialize(loc);
  Vector c0;
  for (auto p : span.pivots()) c0.push_back(a[h0].form[p]);
  return detail::euler_multiplicity_rank2(ess, LinearForm::normalized(std::move(c0)));
}

/// (A'', nu*) together with the flat map of the simple restriction.
struct EulerRestriction {
  Multiarrangement arrangement;
  Restriction restriction;
};

inline EulerRestriction restriction_with_euler(const Multiarrangement& a, std::size_t h0) {
  Restriction res = simple_restriction(a, h0);
  const std::size_t n = res.arrangement.size();
  std::vector<unsigned> mult(n, 0);
  const unsigned jobs = std::max(1u, euler_jobs());
  if (jobs == 1 || n < 2) {
    for (std::size_t y = 0; y < n; ++y) mult[y] = euler_multiplicity(a, h0, res.above[y]);
  } else {
    std::vector<std::future<void>> workers;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < std::min<std::size_t>(jobs, n); ++w)
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t y; (y = next++) < n;) mult[y] = euler_multiplicity(a, h0, res.above[y]);
      }));
    for (auto& f : workers) f.get();
  }
  std::vector<Hyperplane> hs = res.arrangement.hyperplanes();
  for (std::size_t y = 0; y < n; ++y) hs[y].multiplicity = mult[y];
  EulerRestriction out;
  out.arrangement = Multiarrangement::from_hyperplanes(res.arrangement.dimension(), a.context(), std::move(hs));
  out.restriction = std::move(res);
  return out;
}

struct Triple {
  Multiarrangement original;
  Multiarrangement deleted;
  Multiarrangement restricted;
  Restriction restriction;
  std::size_t pivot = 0;
  LinearForm pivot_form;
};

inline Triple triple(const Multiarrangement& a, std::size_t h0) {
  Triple t;
  t.original = a;
  t.deleted = deletion(a, h0);
  auto er = restriction_with_euler(a, h0);
  t.restricted = std::move(er.arrangement);
  t.restriction = std::move(er.restriction);
  t.pivot = h0;
  t.pivot_form = a[h0].form;
  return t;
}

/// Triple of (A, nu) at H localized at X against the triple of (A_X, nu_X) at H.
inline bool triple_localization_check(const Multiarrangement& a, const Flat& x, std::size_t h) {
  if (!x.span.contains(a[h].form)) throw ArrangementError("H does not contain X");
  const Triple whole = triple(a, h);
  const Multiarrangement ax = localize(a, x);
  const auto hx = ax.find(a[h].form);
  if (!hx) return false;
  const Triple local = triple(ax, *hx);
  if (localize(whole.deleted, x) != local.deleted) return false;
  const NormalSpan x_image = whole.restriction.span.restrict_span(x.span);
  return localize(whole.restricted, x_image) == local.restricted;
}

/// Result of iterating Euler restrictions along the minimal pivots of Y under a total order.
struct IteratedRestriction {
  Multiarrangement arrangement;
  std::vector<std::size_t> pivots;  // indices in the original arrangement, in order
  std::vector<NormalSpan> steps;    // successive hyperplane spans in the current coordinates

  /// A form on V written in the coordinates of the final restriction.
  Vector map_form(Vector v) const {
    for (const auto& s : steps) v = s.restrict_form(v);
    return v;
  }
  NormalSpan map_span(const NormalSpan& span) const {
    NormalSpan cur = span;
    for (const auto& s : steps) cur = s.restrict_span(cur);
    return cur;
  }
};

/// Default total order: the canonical storage order.
inline std::vector<std::size_t> canonical_order(const Multiarrangement& a) {
  std::vector<std::size_t> order(a.size());
  std::iota(order.begin(), order.end(), 0);
  return order;
}

/// Pivots H1 < ... < Hm in A_Y chosen greedily in the order, which is lexicographically minimal.
inline std::vector<std::size_t> restriction_pivots(const Multiarrangement& a, const Flat& y,
                                                   const std::vector<std::size_t>& order) {
  std::vector<std::size_t> pivots;
  EchelonSpace span(a.context(), a.dimension());
  for (auto i : order) {
    if (i >= a.size()) throw ArrangementError("order refers to a missing hyperplane");
    if (a[i].multiplicity == 0 || !y.span.contains(a[i].form)) continue;
    if (span.insert(a[i].form.coefficients())) pivots.push_back(i);
  }
  if (pivots.size() != y.rank) throw ArrangementError("flat is not an intersection of hyperplanes of the arrangement");
  return pivots;
}

inline IteratedRestriction iterated_restriction(const Multiarrangement& a, const Flat& y,
                                                const std::vector<std::size_t>& order) {
  IteratedRestriction out;
  out.pivots = restriction_pivots(a, y, order);
  Multiarrangement cur = a;
  for (auto p : out.pivots) {
    const Vector image = out.map_form(a[p].form.coefficients());
    const auto idx = cur.find(LinearForm::normalized(image));
    if (!idx) throw ArrangementError("pivot lost during iterated restriction");
    auto er = restriction_with_euler(cur, *idx);
    out.steps.push_back(er.restriction.span);
    cur = std::move(er.arrangement);
  }
  out.arrangement = std::move(cur);
  return out;
}
inline IteratedRestriction iterated_restriction(const Multiarrangement& a, const Flat& y) {
  return iterated_restriction(a, y, canonical_order(a));
}

/// Translates an order given on A to the induced order on a sub-multiarrangement B (matching forms).
inline std::vector<std::size_t> induced_order(const Multiarrangement& a, const std::vector<std::size_t>& order,
                                              const Multiarrangement& b) {
  std::vector<std::size_t> out;
  for (auto i : order)
    if (auto j = b.find(a[i].form)) out.push_back(*j);
  return out;
}

/// ((A_X)^Y, nu*) against ((A^Y)_X, nu*) for Y in L(A_X), i.e. X contained in Y.
inline bool iterated_localization_check(const Multiarrangement& a, const Flat& x, const Flat& y,
                                        const std::vector<std::size_t>& order) {
  if (!x.span.contains(y.span)) throw ArrangementError("Y must be a flat of A_X");
  const IteratedRestriction whole = iterated_restriction(a, y, order);
  const Multiarrangement ax = localize(a, x);
  const IteratedRestriction local = iterated_restriction(ax, flat_from_span(ax, y.span), induced_order(a, order, ax));
  if (local.pivots.size() != whole.pivots.size()) return false;
  const NormalSpan x_image = whole.map_span(x.span);
  return localize(whole.arrangement, x_image) == local.arrangement;
}

/// (A'', kappa) with kappa(Y) = |A_Y| - 1.
inline Multiarrangement ziegler_multiplicity(const Multiarrangement& a, std::size_t h0) {
  if (!a.compacted().is_simple()) throw ArrangementError("Ziegler multiplicity needs a simple arrangement");
  const Restriction res = simple_restriction(a, h0);
  std::vector<Hyperplane> hs = res.arrangement.hyperplanes();
  for (std::size_t y = 0; y < hs.size(); ++y) hs[y].multiplicity = static_cast<unsigned>(res.above[y].size() - 1);
  return Multiarrangement::from_hyperplanes(res.arrangement.dimension(), a.context(), std::move(hs));
}

}  // namespace multiarr
