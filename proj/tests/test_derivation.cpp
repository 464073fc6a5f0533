#include <gtest/gtest.h>

#include "support.hpp"

using namespace multiarr;
using namespace testing_support;

namespace {

// dim D(A, nu)_p computed by reducing theta(alpha_H) modulo alpha_H^nu with polynomial division.
// For a principal ideal the remainder is a normal form, hence linear in theta.
std::size_t division_dimension(const Multiarrangement& a, unsigned p) {
  const std::size_t l = a.dimension();
  const auto& mb = MonomialBasis::get(l, p);
  const std::size_t unknowns = l * mb.size();
  std::vector<std::vector<Polynomial>> images(unknowns);  // per basis derivation: remainders per hyperplane
  std::map<std::pair<std::size_t, Exponent>, std::size_t> row_of;
  std::vector<std::vector<std::pair<std::size_t, FieldElement>>> cols(unknowns);
  for (std::size_t u = 0; u < unknowns; ++u) {
    const std::size_t comp = u / mb.size();
    const Polynomial mono = Polynomial::monomial(a.context(), mb[u % mb.size()], FieldElement(a.context(), 1));
    std::size_t hi = 0;
    for (const auto& h : a.hyperplanes()) {
      ++hi;
      if (h.multiplicity == 0) continue;
      const Polynomial val = mono * h.form[comp];
      const Polynomial rem = val.divmod(h.form.polynomial().pow(h.multiplicity)).second;
      for (const auto& [e, c] : rem.terms()) {
        auto key = std::make_pair(hi, e);
        auto it = row_of.find(key);
        if (it == row_of.end()) it = row_of.emplace(key, row_of.size()).first;
        cols[u].push_back({it->second, c});
      }
    }
  }
  Matrix m(a.context(), row_of.size(), unknowns);
  for (std::size_t u = 0; u < unknowns; ++u)
    for (const auto& [r, c] : cols[u]) m(r, u) += c;
  return unknowns - m.rank();
}

// Characteristic polynomial coefficients (index = power of t) of a simple arrangement.
std::vector<long> characteristic_polynomial(const Multiarrangement& a) {
  const auto lat = intersection_lattice(a);
  std::vector<long> mu(lat.flats.size(), 0);
  std::vector<long> chi(a.dimension() + 1, 0);
  for (std::size_t i = 0; i < lat.flats.size(); ++i) {
    if (lat.flats[i].rank == 0) {
      mu[i] = 1;
    } else {
      long s = 0;
      for (std::size_t j = 0; j < i; ++j)
        if (lat.flats[j].rank < lat.flats[i].rank && lat.flats[i].span.contains(lat.flats[j].span)) s += mu[j];
      mu[i] = -s;
    }
    chi[a.dimension() - lat.flats[i].rank] += mu[i];
  }
  return chi;
}

std::vector<long> product_of_roots(const Exponents& e) {
  std::vector<long> p{1};
  for (unsigned r : e) {
    std::vector<long> q(p.size() + 1, 0);
    for (std::size_t i = 0; i < p.size(); ++i) {
      q[i + 1] += p[i];
      q[i] -= static_cast<long>(r) * p[i];
    }
    p = q;
  }
  return p;
}

// alpha -> alpha o g for an invertible integer matrix g.
Multiarrangement transform(const Multiarrangement& a, const Matrix& g) {
  std::vector<Hyperplane> hs;
  for (const auto& h : a.hyperplanes()) {
    Vector v(a.dimension(), FieldElement(a.context(), 0));
    for (std::size_t j = 0; j < a.dimension(); ++j)
      for (std::size_t i = 0; i < a.dimension(); ++i) v[j] += h.form[i] * g(i, j);
    hs.push_back({LinearForm::normalized(v), h.multiplicity, h.label});
  }
  return Multiarrangement::from_hyperplanes(a.dimension(), a.context(), hs);
}

}  // namespace

TEST(DerivationSpace, Examples) {
  const auto b = catalog::boolean(2, {2, 2});
  const auto d2 = derivation_space(b, 2);
  ASSERT_EQ(d2.size(), 2u);
  for (const auto& d : d2) EXPECT_TRUE(is_member(d, b));
  EXPECT_TRUE(derivation_space(arr(2, {{{1, 0}, 1}, {{0, 1}, 1}}), 0).empty());
  const auto three = arr(2, {{{1, 0}, 1}, {{0, 1}, 1}, {{1, 1}, 1}});
  const auto d1 = derivation_space(three, 1);
  ASSERT_EQ(d1.size(), 1u);
  // proportional to the Euler derivation
  const auto e = euler_derivation(2, Q());
  const FieldElement c = d1[0][0].leading_coefficient();
  EXPECT_EQ(d1[0], e.times(Polynomial::constant(Q(), 2, c)));
}

TEST(DerivationSpace, AgreesWithDivisionOracle) {
  std::mt19937 rng(31);
  for (int t = 0; t < 12; ++t) {
    const auto a = t % 2 ? random_rank2(rng, 3, 7) : random_rank3(rng, 4, 2);
    for (unsigned p = 0; p <= 4; ++p) {
      EXPECT_EQ(derivation_space(a, p).size(), division_dimension(a, p)) << a.to_string() << " p=" << p;
    }
  }
  const auto g = catalog::monomial_rrl(3, 3);
  for (unsigned p = 0; p <= 4; ++p) EXPECT_EQ(derivation_space(g, p).size(), division_dimension(g, p));
}

TEST(ExponentsOracle, Examples) {
  const auto b = exponents_oracle(catalog::boolean(3, {2, 2, 2}));
  ASSERT_TRUE(b.is_free());
  EXPECT_EQ(b.exponents, (Exponents{2, 2, 2}));
  const auto x = var(3, 0), y = var(3, 1), z = var(3, 2);
  EXPECT_EQ(coefficient_determinant(b.basis) * b.saito_scalar->inverse(), x * x * y * y * z * z);

  const auto r2 = exponents_oracle(arr(2, {{{1, 0}, 2}, {{0, 1}, 2}, {{1, 1}, 2}}));
  ASSERT_TRUE(r2.is_free());
  EXPECT_EQ(r2.exponents, (Exponents{3, 3}));

  const auto g = exponents_oracle(catalog::monomial_rrl(3, 3));
  ASSERT_TRUE(g.is_free());
  EXPECT_EQ(g.exponents, (Exponents{1, 4, 4}));

  const auto empty = exponents_oracle(catalog::empty(2));
  ASSERT_TRUE(empty.is_free());
  EXPECT_EQ(empty.exponents, (Exponents{0, 0}));
}

TEST(ExponentsOracle, BraidArrangements) {
  for (std::size_t l = 2; l <= 4; ++l) {
    const auto e = free_exponents(catalog::braid(l));
    ASSERT_TRUE(e.has_value());
    Exponents expect(l);
    std::iota(expect.begin(), expect.end(), 0u);
    EXPECT_EQ(*e, expect);
  }
}

TEST(ExponentsOracle, NonFreeWitness) {
  const auto a = arr(3, {{{1, 0, 0}, 1}, {{0, 1, 0}, 1}, {{1, 1, 0}, 1}, {{1, 0, 1}, 1}, {{0, 1, 1}, 1}});
  const auto c = exponents_oracle(a);
  EXPECT_EQ(c.verdict, Verdict::not_free);
  EXPECT_FALSE(c.witness.empty());
  EXPECT_EQ(exponents_oracle(a, 1).verdict, Verdict::undetermined);
}

TEST(ExponentsOracle, FreeSimpleArrangementsFactorCharacteristicPolynomial) {
  // a free simple arrangement has chi(t) = prod (t - d_i); a non-factoring chi forces not_free
  std::mt19937 rng(37);
  std::size_t free_count = 0, non_free = 0;
  auto pool = rank3_pool();
  for (unsigned mask = 0; mask < (1u << pool.size()); mask += 7) {
    std::vector<std::pair<std::vector<long>, unsigned>> hs;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask & (1u << i)) hs.push_back({pool[i], 1});
    const auto a = arr(3, hs);
    if (a.rank() != 3) continue;
    const auto chi = characteristic_polynomial(a);
    const auto cert = exponents_oracle(a);
    ASSERT_NE(cert.verdict, Verdict::undetermined);
    if (cert.is_free()) {
      ++free_count;
      EXPECT_EQ(product_of_roots(cert.exponents), chi) << a.to_string();
    } else {
      ++non_free;
    }
  }
  EXPECT_GT(free_count, 5u);
  EXPECT_GT(non_free, 5u);
}

TEST(ExponentsOracle, RankTwoAlwaysFree) {
  std::mt19937 rng(41);
  for (int t = 0; t < 40; ++t) {
    const auto a = random_rank2(rng, 2 + t % 4, 12);
    const auto c = exponents_oracle(a);
    ASSERT_TRUE(c.is_free()) << a.to_string();
    EXPECT_EQ(c.exponents[0] + c.exponents[1], a.order());
    ASSERT_TRUE(c.saito_scalar.has_value());
    EXPECT_FALSE(c.saito_scalar->is_zero());
    for (const auto& d : c.basis) EXPECT_TRUE(is_member(d, a));
  }
}

TEST(ExponentsOracle, InvariantUnderLinearCoordinateChange) {
  std::mt19937 rng(43);
  std::uniform_int_distribution<long> d(-2, 2);
  const std::vector<Multiarrangement> samples = {catalog::braid(3), catalog::boolean(3, {2, 1, 3}),
                                                 arr(3, {{{1, 0, 0}, 2}, {{0, 1, 0}, 1}, {{1, 1, 0}, 2}, {{0, 0, 1}, 1}})};
  for (const auto& a : samples) {
    const auto base = free_exponents(a);
    for (int t = 0; t < 3; ++t) {
      Matrix g(Q(), 3, 3);
      do {
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j) g(i, j) = FieldElement(Q(), d(rng));
      } while (determinant(g).is_zero());
      EXPECT_EQ(free_exponents(transform(a, g)), base);
    }
  }
}

TEST(Annihilator, Examples) {
  const auto bool2 = catalog::boolean(2);
  const auto b2 = annihilator_basis(bool2, catalog::index_of(bool2, catalog::coordinate_label(0)));
  ASSERT_EQ(b2.size(), 1u);
  EXPECT_TRUE(b2[0][0].is_zero());
  EXPECT_EQ(b2[0].pdeg(), 1);

  const auto g = catalog::monomial_rrl(3, 3);
  const std::size_t h0 = catalog::index_of(g, catalog::reflecting_label(0, 1, 0));
  const auto ann = annihilator_basis(g, h0);
  ASSERT_EQ(ann.size(), 2u);
  for (const auto& t : ann) {
    EXPECT_EQ(t.pdeg(), 4);
    EXPECT_TRUE(t.apply(g[h0].form).is_zero());
    EXPECT_TRUE(is_member(t, g));
  }
  EXPECT_THROW(annihilator_basis(catalog::boolean(2, {2, 1}), 0), AlgebraError);
}

TEST(ConcentratedBasis, Examples) {
  const auto b = concentrated_basis(catalog::boolean(2), 0, 3);
  EXPECT_EQ(b.exponents, (Exponents{1, 3}));
  const auto g = catalog::monomial_rrl(3, 3);
  const std::size_t h0 = catalog::index_of(g, catalog::reflecting_label(0, 1, 0));
  for (unsigned m0 : {2u, 3u, 4u}) {
    const auto c = concentrated_basis(g, h0, m0);
    EXPECT_EQ(c.exponents, (Exponents{m0, 4, 4}));
    EXPECT_EQ(free_exponents(catalog::with_concentrated(g, h0, m0)), c.exponents);
  }
  EXPECT_THROW(concentrated_basis(g, h0, 1), AlgebraError);
}

TEST(Dominance, Examples) {
  EXPECT_TRUE(exponent_dominance_check({0, 0}, {1, 2}));
  EXPECT_TRUE(exponent_dominance_check({2, 4, 4}, {3, 4, 4}));
  EXPECT_FALSE(exponent_dominance_check({1, 5}, {2, 4}));
  EXPECT_FALSE(exponent_dominance_check({1}, {1, 1}));
}

TEST(Dominance, NestedFreePairs) {
  std::mt19937 rng(47);
  std::size_t pairs = 0;
  for (int t = 0; t < 30; ++t) {
    const auto a2 = random_rank2(rng, 4, 10);
    Multiarrangement a1 = a2;
    std::uniform_int_distribution<unsigned> drop(0, 2);
    const auto act = a2.active();
    for (auto it = act.rbegin(); it != act.rend(); ++it)
      a1 = a1.with_multiplicity(*it, a2[*it].multiplicity - std::min(a2[*it].multiplicity, drop(rng)));
    const auto e1 = free_exponents(a1), e2 = free_exponents(a2);
    ASSERT_TRUE(e1 && e2);
    EXPECT_TRUE(exponent_dominance_check(*e1, *e2));
    ++pairs;
  }
  EXPECT_EQ(pairs, 30u);
}

TEST(EulerDerivation, Basics) {
  const auto e = euler_derivation(1, Q());
  EXPECT_EQ(e[0], var(1, 0));
  const auto e3 = euler_derivation(3, Q());
  const LinearForm f = LinearForm::normalized(vec({1, 2, -1}));
  EXPECT_EQ(e3.apply(f), f.polynomial());
  EXPECT_TRUE(is_member(e3, catalog::braid(3)));
  EXPECT_FALSE(is_member(e3, catalog::boolean(3, {2, 1, 1})));
}
