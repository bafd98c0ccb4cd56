#include "kk7/solver/groebner.hpp"

#include <gtest/gtest.h>

#include <random>

namespace kk7 {
namespace {

MultiPoly P(const char* s) { return MultiPoly::parse(s); }

// Brute-force Buchberger criterion: every S-polynomial of the basis reduces to zero.
void expect_s_pairs_reduce(const GroebnerBasis& gb) {
  const PolyRing& ring = gb.ring();
  const auto& g = gb.elements();
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      Monomial l = lcm(g[i].front().m, g[j].front().m);
      TermList a = ring.add_scaled(TermList{}, g[i], g[i].front().c.inverse(), quotient(l, g[i].front().m));
      TermList s = ring.add_scaled(a, g[j], -g[j].front().c.inverse(), quotient(l, g[j].front().m));
      EXPECT_TRUE(ring.normal_form(s, g).empty());
    }
}

void expect_reduced(const GroebnerBasis& gb) {
  const auto& g = gb.elements();
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_TRUE(g[i].front().c.is_one());
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      for (const auto& t : g[i]) EXPECT_FALSE(g[j].front().m.divides(t.m));
    }
  }
}

TEST(Groebner, HandElimination) {
  std::vector<MultiPoly> in{P("x^2-1"), P("x*y-1")};
  auto gb = groebner(in, {"y", "x"});
  ASSERT_EQ(gb.size(), 2u);
  EXPECT_EQ(gb[0], P("y-x"));
  EXPECT_EQ(gb[1], P("x^2-1"));
  // With x > y the same ideal is presented as {y^2 - 1, x - y}.
  auto gb2 = groebner(in, {"x", "y"});
  ASSERT_EQ(gb2.size(), 2u);
  EXPECT_EQ(gb2[0], P("x-y"));
  EXPECT_EQ(gb2[1], P("y^2-1"));
}

TEST(Groebner, UnitIdeal) {
  std::vector<MultiPoly> in{MultiPoly(1)};
  auto gb = groebner_basis(in);
  EXPECT_TRUE(gb.is_unit());
  std::vector<MultiPoly> inconsistent{P("x"), P("x-1")};
  EXPECT_TRUE(groebner_basis(inconsistent).is_unit());
}

TEST(Groebner, SingleMonic) {
  std::vector<MultiPoly> in{P("x^3+2*x*y-y^2+5")};
  auto gb = groebner(in);
  ASSERT_EQ(gb.size(), 1u);
  EXPECT_EQ(gb[0], in[0]);
}

TEST(Groebner, GaussianCoefficients) {
  // x^2 + 1 = (x - i)(x + i); with x - i forced the basis is linear.
  std::vector<MultiPoly> in{P("x^2+1"), P("x*y-I*y+x-I")};
  auto gb = groebner_basis(in);
  EXPECT_TRUE(gb.contains(P("(x-I)*(x+I)")));
  expect_s_pairs_reduce(gb);
  expect_reduced(gb);
}

TEST(Groebner, DegreeBound) {
  std::vector<MultiPoly> in{P("x^5*y-z^3"), P("x*y^5-z^2*x"), P("y^4*z^3-x^2")};
  GroebnerOptions opts;
  opts.degree_bound = 6;
  EXPECT_THROW(groebner(in, {}, opts), DegreeBoundExceeded);
}

MultiPoly random_poly(std::mt19937& rng) {
  std::uniform_int_distribution<int> nterms(1, 3), exp(0, 2), coef(-4, 4);
  const char* names[] = {"x", "y", "z"};
  MultiPoly p;
  for (int t = nterms(rng); t > 0; --t) {
    MultiPoly m(GaussianRational(mpq_class(coef(rng)), mpq_class(t == 1 ? coef(rng) : 0)));
    for (const char* n : names) m *= MultiPoly::variable(n).pow(exp(rng));
    p += m;
  }
  return p;
}

TEST(GroebnerProperties, RandomSmallSystems) {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<MultiPoly> in;
    for (int k = 0; k < 3; ++k) {
      MultiPoly p = random_poly(rng);
      if (!p.is_zero()) in.push_back(p);
    }
    for (auto order : {MonomialOrder::grevlex(), MonomialOrder::lex()}) {
      GroebnerOptions opts;
      opts.order = order;
      auto gb = groebner_basis(in, {}, opts);
      for (const auto& p : in) EXPECT_TRUE(gb.contains(p)) << p;
      if (gb.is_unit()) continue;
      expect_s_pairs_reduce(gb);
      expect_reduced(gb);
    }
  }
}

}  // namespace
}  // namespace kk7
