#include <gtest/gtest.h>

#include <random>

#include "fglaw/specialise.hpp"
#include "test_util.hpp"

using namespace fglaw;
using namespace fglaw::test;

namespace {

StandardGroup additive(const SpecPtr& s, int D = 4) { return StandardGroup(builtin_fgl("additive", s, D), 1); }

std::vector<std::vector<BigInt>> square_grid(std::size_t m, std::initializer_list<int> vs) {
  std::vector<BigInt> axis(vs.begin(), vs.end());
  return std::vector<std::vector<BigInt>>(m, axis);
}

}  // namespace

TEST(Specialise, GridExamples) {
  const auto g = grid(padic(2, 4), 1, 2);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[0][0], C(padic(2, 4), 0));
  EXPECT_EQ(g[1][0], C(padic(2, 4), 2));

  const auto single = grid(padic(3, 3), 2, 1);
  ASSERT_EQ(single.size(), 1u);
  EXPECT_TRUE(single[0][0].is_zero() && single[0][1].is_zero());

  const auto e = grid(eqchar(2, 3), 1, 2);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_TRUE(e[0][0].is_zero());
  EXPECT_EQ(e[1][0].to_string(), "t");

  const auto two = grid(padic(3, 4), 2, 2);
  ASSERT_EQ(two.size(), 9u);
  EXPECT_EQ(two[1][1], C(padic(3, 4), 3));  // second coordinate varies fastest
  EXPECT_THROW(grid(padic(3, 4), 1, 0), PreconditionError);
  EXPECT_THROW(grid(padic(3, 30), 3, 20), BoundError);
}

TEST(Specialise, KernelGridExamples) {
  ExactPolynomial zero{2, {}};
  EXPECT_TRUE(kernel_grid_test(zero, square_grid(2, {0, 1})).zero);

  ExactPolynomial t1t2{2, {}};
  t1t2.add_term({1, 1}, 1);
  const auto r = kernel_grid_test(t1t2, square_grid(2, {0, 1}));
  EXPECT_FALSE(r.zero);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(*r.witness, (std::vector<BigInt>{1, 1}));

  ExactPolynomial guard{1, {}};  // (t1 - 1) * t1
  guard.add_term({2}, 1);
  guard.add_term({1}, -1);
  EXPECT_THROW(kernel_grid_test(guard, square_grid(1, {0, 1})), PreconditionError);
  EXPECT_FALSE(kernel_grid_test(guard, square_grid(1, {0, 1, 2})).zero);
  EXPECT_THROW(kernel_grid_test(t1t2, square_grid(2, {1, 1})), PreconditionError);

  try {
    kernel_grid_test(P(nested_padic(2, 2, 1, 2), "2*t1"), square_grid(1, {0, 2}));
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("exact representation required"), std::string::npos);
  }
}

// Random exact polynomials, half of them built to cancel, classified on a
// 4x4 grid against the coefficient-wise zero test.
TEST(Specialise, KernelGridMatchesCoefficientTest) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> deg(0, 3), coef(-5, 5), nterms(1, 5);
  const auto g = square_grid(2, {0, 1, 2, 3});
  int zeros = 0;
  for (int trial = 0; trial < 100; ++trial) {
    ExactPolynomial c{2, {}};
    std::vector<std::pair<std::vector<int>, BigInt>> added;
    for (int i = nterms(rng); i > 0; --i) {
      std::vector<int> e{deg(rng), deg(rng)};
      BigInt v = BigInt(coef(rng)) * BigInt("1000000000000000000000");
      c.add_term(e, v);
      added.emplace_back(e, v);
    }
    if (trial % 2 == 0)
      for (const auto& [e, v] : added) c.add_term(e, -v);
    zeros += c.is_zero();
    ASSERT_EQ(kernel_grid_test(c, g).zero, c.is_zero());
  }
  EXPECT_GE(zeros, 50);
}

TEST(Specialise, ProbeConstantExamples) {
  auto n = nested_padic(2, 4, 1, 4);
  auto base = n->base_ptr();
  const std::vector<CoeffTuple> pts{{C(base, 0)}, {C(base, 2)}};
  const auto z = specialise_probe_constants({Coefficient::zero(n)}, pts);
  EXPECT_TRUE(z.symbolic_zero);
  EXPECT_EQ(z.zero_at, (std::vector<bool>{true, true}));
  EXPECT_FALSE(z.grid_vanishing_only);

  const auto t = specialise_probe_constants({P(n, "t1")}, pts);
  EXPECT_EQ(t.values[0][0], C(base, 0));
  EXPECT_EQ(t.values[1][0], C(base, 2));
  EXPECT_FALSE(t.grid_vanishing_only);

  auto k2 = nested_padic(2, 2, 1, 2);
  auto b2 = k2->base_ptr();
  const auto deg = specialise_probe_constants({P(k2, "2*t1")}, {{C(b2, 0)}, {C(b2, 2)}});
  EXPECT_FALSE(deg.symbolic_zero);
  EXPECT_EQ(deg.zero_at, (std::vector<bool>{true, true}));
  EXPECT_TRUE(deg.grid_vanishing_only);
}

TEST(Specialise, ProbeExamples) {
  const auto comm = parse_word("[x1,x2]");
  const auto sq = parse_word("x1^2");

  auto n2 = nested_padic(2, 4, 1, 4);
  const auto dp = direct_product(additive(n2), CosetTable::cyclic(2));
  const auto pts2 = grid(n2->base_ptr(), 1, 3);
  const auto r1 = concision_probe(comm, dp, 2, pts2);
  ASSERT_TRUE(r1.min_l);
  EXPECT_EQ(*r1.min_l, 1);
  EXPECT_EQ(r1.levels[0].entries.size(), 4u);
  for (bool b : r1.levels[0].in_m_l) EXPECT_TRUE(b);

  auto e2 = nested_eqchar(2, 3, 1, 3);
  const auto inv2 = inversion_extension(additive(e2));
  const auto r2 = concision_probe(sq, inv2, 3, grid(e2->base_ptr(), 1, 3));
  ASSERT_TRUE(r2.min_l);
  EXPECT_EQ(*r2.min_l, 1);
  EXPECT_EQ(r2.levels[0].entries.size(), 2u);

  auto n3 = nested_padic(3, 3, 1, 3);
  const auto inv3 = inversion_extension(additive(n3));
  const auto r3 = concision_probe(sq, inv3, 4, grid(n3->base_ptr(), 1, 2));
  EXPECT_FALSE(r3.min_l);
  for (const auto& lv : r3.levels) {
    ASSERT_FALSE(lv.constant);
    ASSERT_TRUE(lv.witness);
    EXPECT_EQ(lv.witness->cosets, std::vector<std::size_t>{0});
    EXPECT_EQ(lv.witness->witness.coefficient, C(n3, 2 * lv.l));
    for (bool b : lv.in_m_l) EXPECT_FALSE(b);
  }
  EXPECT_TRUE(r3.grid_vanishing_only.empty());
  EXPECT_THROW(concision_probe(sq, inv3, 0, {}), PreconditionError);
  EXPECT_THROW(concision_probe(sq, inversion_extension(additive(padic(3, 3))), 1, {}), PreconditionError);
}

TEST(Specialise, ProbeIsMonotone) {
  auto e2 = nested_eqchar(2, 3, 1, 3);
  const auto inv = inversion_extension(additive(e2));
  const auto r = concision_probe(parse_word("x1"), inv, 6, grid(e2->base_ptr(), 1, 2));
  ASSERT_TRUE(r.min_l);
  EXPECT_EQ(*r.min_l, 2);
  EXPECT_TRUE(r.monotone_consistent);
  for (const auto& lv : r.levels) EXPECT_EQ(lv.symbolic_zero, lv.l % 2 == 0) << lv.l;
}

TEST(Specialise, TransportCoherence) {
  auto n = nested_padic(3, 3, 1, 3);
  auto base = n->base_ptr();
  const auto x = Series::variable(n, 2, 4, 0), y = Series::variable(n, 2, 4, 1);
  const StandardGroup L(FormalGroupLaw({x + y + P(n, "3+t1") * (x * y)}), 1);
  const auto data = inversion_extension(L);
  const auto pts = grid(base, 1, 3);
  ASSERT_EQ(pts.size(), 9u);
  for (long l : {1L, 2L}) EXPECT_TRUE(transport_coherence(parse_word("x1^2"), data, l, pts).agree());

  auto e2 = nested_eqchar(2, 3, 1, 3);
  const auto inv = inversion_extension(additive(e2));
  const auto rep = transport_coherence(parse_word("x1^2"), inv, 1, grid(e2->base_ptr(), 1, 3));
  EXPECT_EQ(rep.points.size(), 4u);
  EXPECT_TRUE(rep.agree());
}

// w^l trivial forces the verbal subgroup of w to have exponent dividing l.
TEST(Specialise, VerbalExponentDividesL) {
  const auto data = inversion_extension(additive(eqchar(2, 3)));
  const auto w = parse_word("x1");
  ASSERT_TRUE(marginality_check(word_power(w, 2), data).all_zero());
  const auto Q = enumerate_extension_quotient(data, 3);
  for (auto v : verbal_subgroup(w, Q)) EXPECT_EQ(Q.mul(v, v), Q.identity());
}
