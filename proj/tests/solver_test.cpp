#include "kk7/solver/pipeline.hpp"
#include "planted_systems.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace kk7;

namespace {

MultiPoly Q(const char* s) { return MultiPoly::parse(s); }

PolySystem system_of(std::vector<const char*> eqs, std::vector<std::string> unknowns) {
  PolySystem s;
  for (const char* e : eqs) s.add_equation(Q(e));
  s.unknowns = std::move(unknowns);
  return s;
}

using oracle::any_contains;
using oracle::contains;

}  // namespace

TEST(GaussianRoots, MixedRootsAndIrrationalRest) {
  UPoly p = UPoly::from_multipoly(Q("(x+3)*(x+I)*(3*x-2*I)*(x-I)*(2*x-1)*(x^2-2)*(x+3)"), "x");
  UPoly rest;
  auto roots = gaussian_rational_roots(p, &rest);
  std::vector<GaussianRational> expected{GaussianRational(-3), -GaussianRational::i(),
                                         GaussianRational(mpq_class(0), mpq_class(2, 3)),
                                         GaussianRational::i(), GaussianRational(1, 2)};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(roots, expected);
  EXPECT_EQ(rest.to_multipoly("x"), Q("x^2-2"));
}

TEST(GaussianRoots, LargeCoefficients) {
  UPoly p = UPoly::from_multipoly(Q("(1234567*x - 7654321)*(x^2 + 1)*(x - 99991/3)"), "x");
  auto roots = gaussian_rational_roots(p);
  EXPECT_EQ(roots.size(), 4u);
  for (const auto& r : roots) EXPECT_TRUE(p(r).is_zero());
}

TEST(Saturate, NoConstraintsUnchanged) {
  auto s = system_of({"x^2-1", "x*y-1"}, {"x", "y"});
  auto t = saturate(s);
  EXPECT_EQ(t.equations, s.equations);
}

TEST(Saturate, ForcedContradiction) {
  auto s = system_of({"A*x", "A*(x-1)"}, {"x"});
  s.nonzero = {Q("A")};
  auto t = saturate(s);
  EXPECT_TRUE(t.contains_up_to_unit(Q("x")));
  EXPECT_TRUE(t.contains_up_to_unit(Q("x-1")));
  EXPECT_TRUE(groebner_basis(t.equations).is_unit());
  EXPECT_TRUE(solve_variety(t).empty());
}

TEST(Saturate, ColeHopfCommonFactorRemoved) {
  auto sys = derive_family_system(preset("kk7"), AnsatzSpec{Family::ColeHopf, std::nullopt});
  std::vector<MultiPoly> divided;
  const std::vector<MultiPoly> factor{Q("A*k^2")};
  for (const auto& e : sys.equations) {
    auto d = poly_divide(e, factor);
    ASSERT_TRUE(d.remainder.is_zero());
    divided.push_back(d.quotients[0]);
  }
  auto sat = saturate(sys);
  const std::vector<std::string> order{"A", "B", "omega", "k"};
  // Each quotient lies in the saturated ideal (which may be larger: k = 0 components go too).
  auto gb = groebner_basis(sat.equations, order);
  for (const auto& d : divided) EXPECT_TRUE(gb.contains(d)) << d.to_string();
  // No A = 0 component survives at k = 1.
  std::vector<MultiPoly> with_a = sat.equations;
  with_a.push_back(Q("A"));
  with_a.push_back(Q("k-1"));
  EXPECT_TRUE(groebner_basis(with_a, order).is_unit());
}

TEST(SolveVariety, TwoPoints) {
  auto vs = solve_variety(system_of({"x^2-1", "y-x"}, {"x", "y"}));
  // Brute force over small rational candidates.
  std::vector<std::map<std::string, MultiPoly>> expected;
  for (int x = -3; x <= 3; ++x)
    for (int y = -3; y <= 3; ++y)
      if (x * x - 1 == 0 && y - x == 0) expected.push_back({{"x", MultiPoly(x)}, {"y", MultiPoly(y)}});
  ASSERT_EQ(vs.size(), expected.size());
  for (const auto& p : expected) EXPECT_TRUE(any_contains(vs, p));
  for (const auto& v : vs) EXPECT_TRUE(v.is_point());
}

TEST(SolveVariety, Inconsistent) {
  EXPECT_TRUE(solve_variety(system_of({"x-1", "x-2"}, {"x"})).empty());
}

TEST(SolveVariety, IrrationalBranchKept) {
  auto vs = solve_variety(system_of({"(x^2-2)*(x-1)", "y-x^2"}, {"x", "y"}));
  ASSERT_EQ(vs.size(), 2u);
  EXPECT_TRUE(any_contains(vs, {{"x", Q("1")}, {"y", Q("1")}}));
  bool relation = std::any_of(vs.begin(), vs.end(), [](const SolutionVariety& v) { return !v.relations.empty(); });
  EXPECT_TRUE(relation);
}

TEST(SolveVariety, CircleFamilyFreeParameter) {
  auto vs = solve_variety(system_of({"c^2-d^2+1"}, {"c", "d"}));
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].free_parameters, std::vector<std::string>{"d"});
  ASSERT_EQ(vs[0].relations.size(), 1u);
  EXPECT_EQ(content_normalize(vs[0].relations[0]), Q("c^2-d^2+1"));
}

TEST(SolveVariety, ColeHopfPaperPoint) {
  auto sys = derive_family_system(preset("kk7"), AnsatzSpec{Family::ColeHopf, std::nullopt});
  auto fixed = fix_scale(sys, AnsatzSpec{Family::ColeHopf, std::nullopt}.weights(), "k");
  auto sat = saturate(fixed);
  sat.nonzero = fixed.nonzero;
  auto vs = solve_variety(sat);
  EXPECT_TRUE(any_contains(vs, {{"A", Q("1/2")}, {"B", Q("-1/24")}, {"omega", Q("-1/48")}}));
}

TEST(WeightRescale, ColeHopf) {
  SolutionVariety v;
  v.values = {{"A", Q("1/2")}, {"B", Q("-1/24")}, {"omega", Q("-1/48")}};
  auto r = weight_rescale(v, {{"k", 1}, {"A", 0}, {"B", 2}, {"omega", 7}}, "k");
  EXPECT_EQ(r.values.at("A"), Q("1/2"));
  EXPECT_EQ(r.values.at("B"), Q("-k^2/24"));
  EXPECT_EQ(r.values.at("omega"), Q("-k^7/48"));
}

TEST(WeightRescale, TanhCoth) {
  SolutionVariety v;
  v.values = {{"d", Q("-1/2")}, {"p", Q("1/3")}, {"lambda", Q("4/3")}};
  auto r = weight_rescale(v, AnsatzSpec{Family::TanhCoth, std::nullopt}.weights(), "mu");
  EXPECT_EQ(r.values.at("d"), Q("-mu^2/2"));
  EXPECT_EQ(r.values.at("p"), Q("mu^2/3"));
  EXPECT_EQ(r.values.at("lambda"), Q("4*mu^6/3"));
}

TEST(WeightRescale, IdentityAtUnitScale) {
  SolutionVariety v;
  v.values = {{"B", Q("-1/24")}};
  auto r = weight_rescale(v, {{"B", 2}}, "k");
  for (auto& [name, val] : r.values) val = val.substitute("k", MultiPoly(1));
  EXPECT_EQ(r.values, v.values);
}

TEST(FixScale, HomogeneityChecked) {
  PolySystem s = system_of({"B + k"}, {"B"});
  EXPECT_THROW(fix_scale(s, {{"k", 1}, {"B", 2}}, "k"), HomogeneityError);
}

TEST(Pipeline, TanhCothPaperSets) {
  auto fs = solve_family(preset("kk7"), AnsatzSpec{Family::TanhCoth, std::nullopt});
  auto pt = [](const char* c, const char* d, const char* lambda) {
    return std::map<std::string, MultiPoly>{{"a", Q("0")}, {"b", Q("0")}, {"c", Q(c)}, {"d", Q(d)},
                                            {"p", Q("mu^2/3")}, {"lambda", Q(lambda)}};
  };
  EXPECT_TRUE(any_contains(fs.varieties, pt("-mu^2/2", "0", "4*mu^6/3")));
  EXPECT_TRUE(any_contains(fs.varieties, pt("-mu^2/2", "-mu^2/2", "256*mu^6/3")));
  EXPECT_TRUE(any_contains(fs.varieties, pt("0", "-mu^2/2", "4*mu^6/3")));
  for (const auto& v : fs.varieties) EXPECT_TRUE(satisfies(v, fs.system.equations, {}, "mu")) << v.to_string();
}

TEST(Pipeline, SinhCoshFamily) {
  auto fs = solve_family(preset("kk7"), AnsatzSpec{Family::SinhCosh, std::nullopt});
  bool found = false;
  for (const auto& v : fs.varieties) {
    EXPECT_TRUE(satisfies(v, fs.system.equations, {}, "mu")) << v.to_string();
    if (v.free_parameters == std::vector<std::string>{"d"} && v.values.count("kappa") &&
        v.values.at("kappa") == Q("mu^2/4") && v.values.at("p") == Q("-mu^2/24") &&
        v.values.at("lambda") == Q("mu^6/48") && v.relations.size() == 1 &&
        content_normalize(v.relations[0]) == Q("c^2-d^2+1"))
      found = true;
  }
  EXPECT_TRUE(found);
  // The isolated sets lie on the family.
  for (auto [c, d] : std::vector<std::pair<const char*, const char*>>{{"0", "-1"}, {"0", "1"}, {"-I", "0"}, {"I", "0"}})
    EXPECT_TRUE(any_contains(fs.varieties, {{"c", Q(c)}, {"d", Q(d)}, {"kappa", Q("mu^2/4")}, {"p", Q("-mu^2/24")},
                                            {"lambda", Q("mu^6/48")}}));
}

TEST(Pipeline, EveryPresetSatisfies) {
  for (const char* name : {"lax7", "ski7"})
    for (Family f : {Family::ColeHopf, Family::TanhCoth, Family::SinhCosh}) {
      AnsatzSpec spec{f, std::nullopt};
      auto fs = solve_family(preset(name), spec);
      EXPECT_FALSE(fs.varieties.empty()) << name << " " << family_name(f);
      for (const auto& v : fs.varieties)
        EXPECT_TRUE(satisfies(v, fs.system.equations, {}, spec.scale_symbol())) << name << ": " << v.to_string();
    }
}

TEST(SolverProperties, PlantedRoots) {
  int trial = 0;
  for (const auto& p : oracle::planted_systems(20, 20261018)) {
    for (const auto& e : p.system.equations) ASSERT_TRUE(e.substitute(p.root).is_zero());
    auto vs = solve_variety(p.system);
    EXPECT_TRUE(any_contains(vs, p.root)) << "trial " << trial;
    for (const auto& v : vs) EXPECT_TRUE(satisfies(v, p.system.equations)) << "trial " << trial << ": " << v.to_string();
    ++trial;
  }
}
