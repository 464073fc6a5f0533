#include <gtest/gtest.h>

#include <map>

#include "support.hpp"

using namespace multiarr;
using namespace testing_support;

namespace {

// Flats counted by rank by intersecting every subset of hyperplanes.
std::map<std::size_t, std::size_t> subset_flat_counts(const Multiarrangement& a) {
  const auto act = a.active();
  std::map<std::size_t, std::set<std::string>> keys;
  for (unsigned mask = 0; mask < (1u << act.size()); ++mask) {
    std::vector<Vector> ns;
    for (std::size_t i = 0; i < act.size(); ++i)
      if (mask & (1u << i)) ns.push_back(a[act[i]].form.coefficients());
    const auto s = NormalSpan::of(a.context(), a.dimension(), ns);
    keys[s.rank()].insert(s.key());
  }
  std::map<std::size_t, std::size_t> out;
  for (auto& [r, k] : keys) out[r] = k.size();
  return out;
}

}  // namespace

TEST(Multiarrangement, Construction) {
  const auto f = catalog::five_lines();
  EXPECT_EQ(f.arrangement.num_active(), 5u);
  EXPECT_EQ(f.arrangement.order(), 10u);
  EXPECT_FALSE(f.arrangement.is_simple());

  const auto e = catalog::empty(3);
  EXPECT_TRUE(e.is_empty());
  EXPECT_EQ(e.rank(), 0u);

  const auto merged = arr(2, {{{1, 0}, 1}, {{2, 0}, 1}});
  ASSERT_EQ(merged.num_active(), 1u);
  EXPECT_EQ(merged[0].multiplicity, 2u);
}

TEST(Multiarrangement, Errors) {
  EXPECT_THROW(arr(2, {{{0, 0}, 1}}), ArrangementError);
  EXPECT_THROW(arr(3, {{{1, 0}, 1}}), ArrangementError);
  const auto c3 = FieldContext::cyclotomic(3);
  EXPECT_THROW(Multiarrangement::build(1, Q(), {{vec({1}, c3), 1, ""}}), ArrangementError);
}

TEST(Multiarrangement, EqualityIgnoresOrderAndScaling) {
  const auto a = arr(2, {{{1, 0}, 2}, {{1, 1}, 1}});
  const auto b = arr(2, {{{-2, -2}, 1}, {{3, 0}, 2}});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, arr(2, {{{1, 0}, 1}, {{1, 1}, 1}}));
  EXPECT_EQ(a.key(), b.key());
}

TEST(DefiningPolynomial, Examples) {
  EXPECT_EQ(defining_polynomial(catalog::empty(2)), Polynomial::one(Q(), 2));
  const auto x = var(2, 0), y = var(2, 1);
  EXPECT_EQ(defining_polynomial(catalog::boolean(2, {2, 3})), x * x * y * y * y);
}

TEST(DefiningPolynomial, MonomialGroupProductOfBinomials) {
  const auto g = catalog::monomial_rrl(3, 3);
  const auto& ctx = g.context();
  const auto x = var(3, 0, ctx), y = var(3, 1, ctx), z = var(3, 2, ctx);
  const Polynomial expect = (x.pow(3) - y.pow(3)) * (x.pow(3) - z.pow(3)) * (y.pow(3) - z.pow(3));
  const Polynomial q = defining_polynomial(g);
  ASSERT_EQ(q.degree(), 9);
  // equal up to a nonzero scalar
  const FieldElement c = q.leading_coefficient() / expect.leading_coefficient();
  EXPECT_EQ(q, expect * c);
}

TEST(DefiningPolynomial, DegreeIsOrder) {
  std::mt19937 rng(21);
  for (int t = 0; t < 25; ++t) {
    const auto a = random_rank3(rng, 5, 3);
    EXPECT_EQ(defining_polynomial(a).degree(), static_cast<int>(a.order()));
  }
}

TEST(Lattice, SmallExamples) {
  EXPECT_EQ(intersection_lattice(catalog::boolean(3)).flats.size(), 8u);
  EXPECT_EQ(intersection_lattice(arr(2, {{{1, 1}, 4}})).flats.size(), 2u);
  const auto l = intersection_lattice(catalog::empty(2));
  ASSERT_EQ(l.flats.size(), 1u);
  EXPECT_EQ(l.flats[0].rank, 0u);
}

TEST(Lattice, MonomialGroupRankTwoFlats) {
  const auto g = catalog::monomial_rrl(3, 3);
  const auto l = intersection_lattice(g);
  const auto brute = subset_flat_counts(g);
  EXPECT_EQ(l.count_rank(2), brute.at(2));
  EXPECT_EQ(l.count_rank(2), 12u);
  // every pair of hyperplanes lies in exactly one rank-2 flat
  std::size_t pairs = 0;
  for (const auto& f : l.flats)
    if (f.rank == 2) pairs += f.containing.size() * (f.containing.size() - 1) / 2;
  EXPECT_EQ(pairs, 36u);
}

TEST(Lattice, AgreesWithSubsetIntersections) {
  std::mt19937 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_rank3(rng, 6, 2);
    const auto l = intersection_lattice(a);
    for (const auto& [r, n] : subset_flat_counts(a)) EXPECT_EQ(l.count_rank(r), n) << a.to_string();
    for (const auto& f : l.flats) {
      EXPECT_EQ(f.rank, f.span.rank());
      EXPECT_EQ(localize(a, f).rank(), f.rank);
    }
  }
}

TEST(Localization, Examples) {
  const auto f = catalog::five_lines();
  const auto& a = f.arrangement;
  EXPECT_EQ(localize(a, center(a)), a);
  EXPECT_TRUE(localize(a, NormalSpan(Q(), 3)).is_empty());
  const auto ay = localize(a, f.flat("Y"));
  EXPECT_EQ(ay, arr(3, {{{1, 0, 0}, 2}, {{0, 1, 1}, 2}}));
}

TEST(Localization, IdempotentAndContainsX) {
  std::mt19937 rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_rank3(rng, 6, 3);
    for (const auto& x : intersection_lattice(a).flats) {
      const auto ax = localize(a, x);
      EXPECT_EQ(localize(ax, x), ax);
      for (auto i : ax.active()) EXPECT_TRUE(x.span.contains(ax[i].form));
      EXPECT_TRUE(ax.is_submultiarrangement_of(a));
    }
  }
}

TEST(Restriction, SimpleRestrictionSizes) {
  EXPECT_EQ(simple_restriction(catalog::boolean(3), 0).arrangement.num_active(), 2u);
  const auto f = catalog::five_lines();
  EXPECT_EQ(simple_restriction(f.arrangement, f.pivot("H1")).arrangement.num_active(), 3u);
  EXPECT_EQ(simple_restriction(f.arrangement, f.pivot("H2")).arrangement.num_active(), 4u);
  EXPECT_THROW(simple_restriction(f.arrangement, 17), ArrangementError);
}

TEST(Restriction, FlatMapCoversEveryHyperplane) {
  std::mt19937 rng(15);
  for (int t = 0; t < 20; ++t) {
    const auto a = random_rank3(rng, 6, 2);
    for (auto h0 : a.active()) {
      const auto r = simple_restriction(a, h0);
      EXPECT_TRUE(r.arrangement.is_simple());
      for (auto i : a.active()) EXPECT_EQ(r.image[i].has_value(), i != h0);
      for (std::size_t y = 0; y < r.above.size(); ++y) {
        EXPECT_GE(r.above[y].size(), 2u);
        EXPECT_TRUE(std::count(r.above[y].begin(), r.above[y].end(), h0));
      }
    }
  }
}

TEST(Product, Examples) {
  EXPECT_EQ(product(catalog::empty(2), catalog::empty(3)), catalog::empty(5));
  EXPECT_EQ(product(catalog::boolean(1, {2}), catalog::boolean(1, {3})), catalog::boolean(2, {2, 3}));
  const auto p = product(catalog::braid(3), catalog::monomial_rrl(3, 2));
  EXPECT_EQ(p.context(), FieldContext::cyclotomic(3));
  EXPECT_EQ(p.dimension(), 5u);
  EXPECT_EQ(p.num_active(), 6u);
}

TEST(Product, CountsAndDefiningPolynomial) {
  std::mt19937 rng(6);
  for (int t = 0; t < 15; ++t) {
    const auto a1 = random_rank2(rng, 3, 6), a2 = random_rank3(rng, 4, 2);
    const auto p = product(a1, a2);
    EXPECT_EQ(p.order(), a1.order() + a2.order());
    EXPECT_EQ(p.num_active(), a1.num_active() + a2.num_active());
    const auto& ctx = p.context();
    std::vector<Polynomial> first, second;
    for (std::size_t i = 0; i < 2; ++i) first.push_back(var(5, i, ctx));
    for (std::size_t i = 0; i < 3; ++i) second.push_back(var(5, 2 + i, ctx));
    EXPECT_EQ(defining_polynomial(p),
              defining_polynomial(a1).substitute(first) * defining_polynomial(a2).substitute(second));
    const auto a3 = catalog::boolean(1, {2});
    EXPECT_EQ(product(product(a1, a2), a3), product(a1, product(a2, a3)));
  }
}

TEST(Product, LocalizingAtAFactorsCenter) {
  std::mt19937 rng(10);
  for (int t = 0; t < 10; ++t) {
    const auto a1 = random_rank2(rng, 3, 6), a2 = random_rank3(rng, 4, 2);
    const auto p = product(a1, a2);
    std::vector<Vector> normals;
    for (std::size_t i = 0; i < 2; ++i) normals.push_back(catalog::unit(Q(), 5, i));
    EXPECT_EQ(localize(p, NormalSpan::of(Q(), 5, normals)), catalog::coordinate_inclusion(a1, 5, {0, 1}));
  }
}

TEST(SwapCheck, Examples) {
  const auto f = catalog::five_lines();
  const auto& a = f.arrangement;
  const auto lat = intersection_lattice(a);
  for (const auto& x : lat.flats) {
    EXPECT_TRUE(swap_check(a, a, x, lat.flats[0]));
    EXPECT_TRUE(swap_check(a, catalog::empty(3), x, lat.flats[0]));
  }
}

TEST(SwapCheck, RandomSubarrangementsAndNestedFlats) {
  std::mt19937 rng(12);
  std::size_t checked = 0;
  for (int t = 0; t < 10; ++t) {
    const auto a = random_rank3(rng, 6, 3);
    Multiarrangement b = a;
    std::uniform_int_distribution<unsigned> coin(0, 2);
    const auto act = a.active();
    for (auto it = act.rbegin(); it != act.rend(); ++it)
      b = b.with_multiplicity(*it, std::min(a[*it].multiplicity, coin(rng)));
    const auto lat = intersection_lattice(a);
    for (const auto& x : lat.flats)
      for (const auto& y : lat.flats)
        if (x.span.contains(y.span)) {
          EXPECT_TRUE(swap_check(a, b, x, y));
          ++checked;
        }
  }
  EXPECT_GT(checked, 100u);
}

TEST(Essentialize, DropsCenter) {
  const auto a = arr(3, {{{1, 1, 0}, 2}, {{1, -1, 0}, 1}, {{1, 0, 0}, 3}});
  const auto e = essentialize(a);
  EXPECT_EQ(e.dimension(), 2u);
  EXPECT_EQ(e.order(), a.order());
  EXPECT_EQ(e.rank(), 2u);
}
