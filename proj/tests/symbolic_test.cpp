#include "kk7/numeric/evaluate.hpp"
#include "kk7/symbolic/normal_form.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace kk7;

namespace {

Expr P(const char* s) { return Expr::parse(s); }

bool is_zero_form(const Expr& e, const std::string& var, const Expr& freq) {
  return exponential_normal_form(e, var, freq).is_zero();
}

}  // namespace

TEST(Differentiate, TanhIdentity) {
  EXPECT_EQ(differentiate(P("tanh(mu*xi)"), "xi"), expand(P("mu*(1 - tanh(mu*xi)^2)")));
}

TEST(Differentiate, ChainRuleOnExponential) {
  EXPECT_EQ(differentiate(P("exp(k*x - omega*t + delta)"), "t"), P("-omega*exp(k*x - omega*t + delta)"));
}

TEST(Differentiate, Constant) {
  EXPECT_TRUE(differentiate(P("mu^3*p + 7/2"), "xi").is_zero());
}

TEST(Differentiate, RepeatedEqualsHigherOrder) {
  Expr e = P("p + a*tanh(mu*xi) + d*coth(mu*xi)^2 + 1/(1 + c*sinh(mu*xi) + d*cosh(mu*xi))");
  Expr step = e;
  for (int k = 0; k < 4; ++k) step = differentiate(step, "xi");
  EXPECT_EQ(step, differentiate(e, "xi", 4));
}

TEST(Differentiate, NonLinearArgumentRejected) {
  EXPECT_THROW(differentiate(P("tanh(x^2)"), "x"), std::invalid_argument);
}

TEST(Differentiate, UnknownFunctionOrders) {
  Expr u = Expr::function("u", {"x", "t"});
  Expr d = differentiate(differentiate(u, "x", 3), "t");
  EXPECT_EQ(d, Expr::function("u", {"x", "t"}, {{"t", 1}, {"x", 3}}));
  EXPECT_TRUE(differentiate(u, "xi").is_zero());
}

TEST(Substitute, TravelingCoordinate) {
  Expr v = P("tanh(mu*xi)");
  Expr s = substitute(v, {{"xi", P("x + lambda*t")}});
  EXPECT_EQ(s, P("tanh(mu*x + mu*lambda*t)"));
}

TEST(Substitute, ImaginaryFrequency) {
  Expr s = substitute(P("tanh(mu*xi)"), {{"mu", P("I*mu")}});
  EXPECT_EQ(s, P("I*tan(mu*xi)"));
  Expr c = substitute(P("coth(mu*xi)^2"), {{"mu", P("I*mu")}});
  EXPECT_EQ(c, P("-cot(mu*xi)^2"));
}

TEST(Substitute, EmptyBindingsIsIdentity) {
  Expr e = P("p + a*tanh(mu*xi)");
  EXPECT_EQ(substitute(e, {}), e);
}

TEST(Canonical, ParitySymmetry) {
  EXPECT_EQ(P("tanh(-x)"), P("-tanh(x)"));
  EXPECT_EQ(P("cosh(-2*x)"), P("cosh(2*x)"));
  EXPECT_EQ(P("cosh(I*x)"), P("cos(x)"));
  EXPECT_EQ(P("(2 + 2*x)^2"), P("4*(1 + x)^2"));
  EXPECT_EQ(P("x*y - y*x"), Expr(0));
}

TEST(Serialization, RoundTrip) {
  Expr e = P("mu^2/3 - mu^2/2*coth(mu*(x + 4*mu^6/3*t))^2 + I*k/(1 + cosh(k*x))");
  EXPECT_EQ(Expr::deserialize(e.serialize()), e);
  EXPECT_EQ(P("x/2 + I").serialize(), "(+ I (* 1/2 x))");
  Expr u = Expr::function("u", {"x", "t"}, {{"x", 2}});
  EXPECT_EQ(Expr::deserialize(u.serialize()), u);
}

TEST(NormalForm, Tanh) {
  RationalForm r = exponential_normal_form(P("tanh(mu*xi)"), "xi", P("mu"));
  ASSERT_EQ(r.factors().size(), 1u);
  EXPECT_EQ(r.factors()[0].first, LaurentPoly::monomial(2) + LaurentPoly(MultiPoly(1)));
  EXPECT_EQ(r.factors()[0].second, 1);
  EXPECT_EQ(r.numerator(), LaurentPoly::monomial(2) - LaurentPoly(MultiPoly(1)));
}

TEST(NormalForm, Cosh) {
  RationalForm r = exponential_normal_form(P("cosh(mu*xi)"), "xi", P("mu"));
  RationalForm expected = RationalForm::fraction(LaurentPoly::monomial(2) + LaurentPoly(MultiPoly(1)),
                                                 LaurentPoly::monomial(1, MultiPoly(2)));
  EXPECT_TRUE((r - expected).is_zero());
}

TEST(NormalForm, ColeHopfOracle) {
  // A * d^2/dx^2 log(1 + e^theta) = A k^2 e^theta / (1 + e^theta)^2, so with zeta = e^theta
  // the ansatz is (B zeta^2 + (A k^2 + 2B) zeta + B) / (zeta + 1)^2.
  Expr theta = P("k*x - omega*t + delta");
  Expr ansatz = P("A") * differentiate(Expr::apply(Fn::Log, Expr(1) + Expr::apply(Fn::Exp, theta)), "x", 2) + P("B");
  RationalForm r = exponential_normal_form(ansatz, theta);
  MultiPoly A = MultiPoly::parse("A"), B = MultiPoly::parse("B"), k = MultiPoly::parse("k");
  LaurentPoly num = LaurentPoly::monomial(2, B) + LaurentPoly::monomial(1, A * k * k + B * 2) + LaurentPoly(B);
  LaurentPoly den = (LaurentPoly::monomial(1) + LaurentPoly(MultiPoly(1))).pow(2);
  EXPECT_TRUE((r - RationalForm::fraction(num, den)).is_zero());
  // The phase constant is absorbed into zeta.
  EXPECT_EQ(r.numerator().coefficient(1), A * k * k + B * 2);
}

TEST(NormalForm, PhaseOffsetAbsorbed) {
  RationalForm r = exponential_normal_form(P("tanh(mu*xi + delta)^2 + tanh(2*mu*xi + 2*delta)"), "xi", P("mu"));
  RationalForm s = exponential_normal_form(P("tanh(mu*xi)^2 + tanh(2*mu*xi)"), "xi", P("mu"));
  EXPECT_TRUE((r - s).is_zero());
}

TEST(NormalForm, IncommensurateRejected) {
  EXPECT_THROW(exponential_normal_form(P("tanh(mu*xi) + tanh(3*mu*xi/2)"), "xi", P("mu")), NormalFormError);
  EXPECT_THROW(exponential_normal_form(P("tanh(mu*xi) + tanh(k*xi)"), "xi", P("mu")), NormalFormError);
  EXPECT_THROW(exponential_normal_form(P("xi*tanh(mu*xi)"), "xi", P("mu")), NormalFormError);
}

TEST(NormalForm, ZeroDenominatorDetected) {
  EXPECT_THROW(RationalForm(LaurentPoly()).inverse(), NormalFormError);
}

TEST(NormalForm, IdentitiesAreZero) {
  EXPECT_TRUE(is_zero_form(P("tanh(mu*xi)^2 + 1/cosh(mu*xi)^2 - 1"), "xi", P("mu")));
  EXPECT_TRUE(is_zero_form(P("sinh(2*mu*xi) - 2*sinh(mu*xi)*cosh(mu*xi)"), "xi", P("mu")));
  EXPECT_TRUE(is_zero_form(P("tan(mu*xi)*cot(mu*xi) - 1"), "xi", P("I*mu")));
  EXPECT_TRUE(is_zero_form(P("sin(mu*xi)^2 + cos(mu*xi)^2 - 1"), "xi", P("I*mu")));
  EXPECT_FALSE(is_zero_form(P("tanh(mu*xi)^2 - 1"), "xi", P("mu")));
}

TEST(LaurentCollect, SingleEquation) {
  RationalForm r(LaurentPoly::monomial(1, MultiPoly::parse("k + 1")));
  PolySystem sys = laurent_collect(r);
  ASSERT_EQ(sys.size(), 1u);
  // Representative is the lexicographically least of +-(k + 1).
  EXPECT_EQ(sys.equations[0], MultiPoly::parse("-k - 1"));
  EXPECT_EQ(sys.zeta_powers[0], 1);
}

TEST(LaurentCollect, ZeroNumeratorGivesEmptySystem) {
  EXPECT_TRUE(laurent_collect(RationalForm()).empty());
  RationalForm r = exponential_normal_form(P("tanh(mu*xi)^2 + 1/cosh(mu*xi)^2 - 1"), "xi", P("mu"));
  EXPECT_TRUE(laurent_collect(r).empty());
}

TEST(LaurentCollect, OppositeSignsCollapse) {
  MultiPoly q = MultiPoly::parse("A*k^2 - 2*B");
  RationalForm r(LaurentPoly::monomial(3, q) + LaurentPoly::monomial(1, -q) + LaurentPoly::monomial(0, q.scaled(3)));
  PolySystem sys = laurent_collect(r);
  ASSERT_EQ(sys.size(), 1u);
  EXPECT_EQ(sys.equations[0], MultiPoly::parse("-A*k^2 + 2*B"));
}

// ---------------------------------------------------------------------------------------------
// Properties on random trees

namespace {

struct TreeGen {
  std::mt19937 rng;
  bool allow_bare_var;

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Expr atom() {
    static const Fn fns[] = {Fn::Tanh, Fn::Coth, Fn::Sinh, Fn::Cosh, Fn::Exp};
    switch (pick(allow_bare_var ? 5 : 4)) {
      case 0: return Expr(GaussianRational(pick(7) - 3, pick(3) + 1));
      case 1: return Expr::symbol(pick(2) ? "a" : "b");
      case 2:
      case 3: {
        Expr arg = Expr(pick(2) + 1) * Expr::symbol("mu") * Expr::symbol("xi");
        return Expr::apply(fns[pick(5)], arg);
      }
      default: return Expr::symbol("xi");
    }
  }

  Expr tree(int depth) {
    if (depth == 0) return atom();
    switch (pick(4)) {
      case 0: return tree(depth - 1) + tree(depth - 1);
      case 1: return tree(depth - 1) * tree(depth - 1);
      case 2: return tree(depth - 1).pow(pick(2) + 2);
      default: return Expr(1) / (Expr(2) + Expr::apply(Fn::Cosh, Expr(pick(2) + 1) * P("mu*xi")) * tree(depth - 1).pow(2));
    }
  }
};

}  // namespace

TEST(Property, ProductRuleAndLinearity) {
  TreeGen gen{std::mt19937(11), true};
  for (int n = 0; n < 40; ++n) {
    Expr f = gen.tree(2), g = gen.tree(2);
    Expr lhs = differentiate(f * g, "xi");
    Expr rhs = expand(differentiate(f, "xi") * g + f * differentiate(g, "xi"));
    EXPECT_EQ(lhs, rhs) << f << " | " << g;
    EXPECT_EQ(differentiate(f + Expr(3) * g, "xi"), expand(differentiate(f, "xi") + Expr(3) * differentiate(g, "xi")));
  }
}

TEST(Property, NormalFormMatchesDirectEvaluation) {
  set_precision(60);
  TreeGen gen{std::mt19937(5), false};
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  int compared = 0;
  for (int n = 0; n < 40; ++n) {
    Expr f = gen.tree(3);
    RationalForm r = exponential_normal_form(f, "xi", P("mu"));
    for (int s = 0; s < 3; ++s) {
      Env<HpFloat> env;
      HpFloat mu = HpFloat(1) + HpFloat(unit(rng)) / 2;
      HpFloat xi = HpFloat(2 * unit(rng));
      env["mu"] = HpComplex(mu);
      env["xi"] = HpComplex(xi);
      env["a"] = HpComplex(HpFloat(unit(rng)), HpFloat(unit(rng)));
      env["b"] = HpComplex(HpFloat(unit(rng)));
      EvalGuard<HpFloat> guard;
      HpComplex direct = evaluate<HpFloat>(f, env, &guard);
      if (guard.min_denominator < 1e-3) continue;
      HpComplex zeta = exp(HpComplex(mu * xi));
      HpComplex viaform = evaluate<HpFloat>(r, env, zeta);
      HpFloat scale = std::max(HpFloat(1), abs(direct));
      EXPECT_LT(abs(direct - viaform) / scale, HpFloat("1e-40")) << f;
      ++compared;
    }
  }
  EXPECT_GT(compared, 60);
}
