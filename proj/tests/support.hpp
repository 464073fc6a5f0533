#pragma once

// Small builders and seeded generators shared by the test binaries.

#include <random>
#include <set>

#include "multiarr/multiarr.hpp"

namespace testing_support {

using namespace multiarr;

inline const FieldContext& Q() {
  static const FieldContext q = FieldContext::rational();
  return q;
}

inline Vector vec(std::initializer_list<long> xs, const FieldContext& ctx = Q()) {
  Vector v;
  for (long x : xs) v.emplace_back(ctx, x);
  return v;
}

inline Vector vec(const std::vector<long>& xs, const FieldContext& ctx = Q()) {
  Vector v;
  for (long x : xs) v.emplace_back(ctx, x);
  return v;
}

inline Polynomial var(std::size_t n, std::size_t i, const FieldContext& ctx = Q()) {
  return Polynomial::variable(ctx, n, i);
}

inline Polynomial cst(std::size_t n, long c, const FieldContext& ctx = Q()) {
  return Polynomial::constant(ctx, n, FieldElement(ctx, c));
}

/// Multiarrangement from integer normals and multiplicities.
inline Multiarrangement arr(std::size_t dim, const std::vector<std::pair<std::vector<long>, unsigned>>& hs) {
  std::vector<Multiarrangement::Input> in;
  for (const auto& [n, m] : hs) in.push_back({vec(n), m, ""});
  return Multiarrangement::build(dim, Q(), in);
}

/// Random distinct lines through the origin in the plane (small integer normals).
inline std::vector<std::vector<long>> random_lines(std::mt19937& rng, std::size_t count) {
  std::uniform_int_distribution<long> d(-3, 3);
  std::set<std::string> seen;
  std::vector<std::vector<long>> out;
  while (out.size() < count) {
    std::vector<long> n{d(rng), d(rng)};
    if (n[0] == 0 && n[1] == 0) continue;
    const auto key = LinearForm::normalized(vec(n)).key();
    if (seen.insert(key).second) out.push_back(n);
  }
  return out;
}

/// Random rank-2 multiarrangement in the plane with |nu| <= max_order.
inline Multiarrangement random_rank2(std::mt19937& rng, std::size_t lines, unsigned max_order) {
  auto ls = random_lines(rng, lines);
  std::vector<unsigned> m(lines, 1);
  unsigned total = static_cast<unsigned>(lines);
  std::uniform_int_distribution<std::size_t> pick(0, lines - 1);
  std::uniform_int_distribution<unsigned> extra(0, max_order > total ? max_order - total : 0);
  for (unsigned e = extra(rng); e > 0; --e) ++m[pick(rng)];
  std::vector<std::pair<std::vector<long>, unsigned>> hs;
  for (std::size_t i = 0; i < lines; ++i) hs.push_back({ls[i], m[i]});
  return arr(2, hs);
}

/// Hyperplanes of the braid-type and coordinate arrangement in three variables, as a pool.
inline std::vector<std::vector<long>> rank3_pool() {
  return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, -1, 0}, {1, 0, -1}, {0, 1, -1}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};
}

/// Random essential rank-3 multiarrangement drawn from the pool.
inline Multiarrangement random_rank3(std::mt19937& rng, std::size_t count, unsigned max_mult) {
  auto pool = rank3_pool();
  for (;;) {
    std::shuffle(pool.begin(), pool.end(), rng);
    std::uniform_int_distribution<unsigned> m(1, max_mult);
    std::vector<std::pair<std::vector<long>, unsigned>> hs;
    for (std::size_t i = 0; i < count; ++i) hs.push_back({pool[i], m(rng)});
    auto a = arr(3, hs);
    if (a.rank() == 3) return a;
  }
}

/// Expected kappa(Y) for the restriction of A^k_l(r) (or G(r,r,l) when k = 0) to ker(x1 - x2), read off from
/// the label of any hyperplane H != H0 lying over Y. Labels are "Hi_j_t" and "Xi" with 1-based indices.
inline unsigned expected_kappa(const std::string& label, std::size_t k, unsigned r) {
  if (label[0] == 'X') {
    const std::size_t i = std::stoul(label.substr(1));
    if (i <= 2) return k >= 2 ? r + 1 : (k == 1 ? r : r - 1);
    return 1;
  }
  const auto u = label.find('_');
  const std::size_t i = std::stoul(label.substr(1, u - 1));
  const std::size_t j = std::stoul(label.substr(u + 1, label.find('_', u + 1) - u - 1));
  if (i == 1 && j == 2) return k >= 2 ? r + 1 : (k == 1 ? r : r - 1);
  if (i <= 2) return 2;
  return 1;
}

/// Compares a restricted multiplicity against expected_kappa at every Y; returns the number of mismatches.
inline std::size_t kappa_table_mismatches(const Multiarrangement& a, std::size_t h0, const Multiarrangement& restricted,
                                          const Restriction& res, std::size_t k, unsigned r) {
  std::size_t bad = 0;
  for (std::size_t y = 0; y < res.arrangement.size(); ++y) {
    const unsigned got = restricted.multiplicity_of(res.arrangement[y].form);
    for (auto i : res.above[y]) {
      if (i == h0) continue;
      if (expected_kappa(a.label(i), k, r) != got) ++bad;
    }
  }
  return bad;
}

}  // namespace testing_support
