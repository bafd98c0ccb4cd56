#pragma once

// derive -> fix scale -> split nondegeneracy cases -> saturate -> solve -> rescale.

#include "kk7/ansatz/ansatz.hpp"
#include "kk7/solver/solve.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kk7 {

class HomogeneityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FamilySolution {
  AnsatzSpec spec;
  PolySystem system;  // as derived, scale symbol kept
  std::vector<SolutionVariety> varieties;
};

/// The derived system with the scale symbol set to 1 (weighted homogeneity is checked first).
inline PolySystem fix_scale(const PolySystem& sys, const std::map<std::string, int>& weights, const std::string& scale) {
  for (const auto& e : sys.equations)
    if (!homogeneous_weight(e, weights))
      throw HomogeneityError("system is not weighted-homogeneous: " + e.to_string());
  PolySystem out;
  out.unknowns = sys.unknowns;
  out.nonzero_any = sys.nonzero_any;
  for (const auto& f : sys.nonzero)
    if (!(f == MultiPoly::variable(scale))) out.nonzero.push_back(f.substitute(scale, MultiPoly(1)));
  for (std::size_t k = 0; k < sys.equations.size(); ++k)
    out.add_equation(sys.equations[k].substitute(scale, MultiPoly(1)), sys.zeta_powers[k]);
  return out;
}

/// Splits "at least one of g_1..g_m nonzero" into the disjoint cases
/// g_1 = .. = g_{j-1} = 0, g_j != 0 (amplitudes are single unknowns).
inline std::vector<std::pair<PolySystem, std::map<std::string, MultiPoly>>> nondegenerate_cases(const PolySystem& sys) {
  std::vector<std::pair<PolySystem, std::map<std::string, MultiPoly>>> cases{{sys, {}}};
  cases[0].first.nonzero_any.clear();
  for (const auto& group : sys.nonzero_any) {
    std::vector<std::pair<PolySystem, std::map<std::string, MultiPoly>>> next;
    for (const auto& [base, fixed] : cases) {
      std::map<std::string, MultiPoly> zeros;
      for (const auto& g : group) {
        auto name = detail::as_single_variable(g);
        if (!name) throw std::invalid_argument("nondegenerate_cases: constraint is not an unknown");
        PolySystem c;
        c.unknowns = base.unknowns;
        for (const auto& [z, _] : zeros) c.unknowns.erase(std::remove(c.unknowns.begin(), c.unknowns.end(), z), c.unknowns.end());
        c.nonzero = base.nonzero;
        c.nonzero.push_back(g);
        for (std::size_t k = 0; k < base.equations.size(); ++k)
          c.add_equation(zeros.empty() ? base.equations[k] : base.equations[k].substitute(zeros), base.zeta_powers[k]);
        auto f = fixed;
        f.insert(zeros.begin(), zeros.end());
        next.emplace_back(std::move(c), std::move(f));
        zeros[*name] = MultiPoly(0);
      }
    }
    cases = std::move(next);
  }
  return cases;
}

/// Linear change of unknowns used while solving; results are mapped back and re-solved in
/// the original unknowns.
struct CoordinateChange {
  std::vector<std::string> unknowns;               // replacing the original unknowns
  std::map<std::string, MultiPoly> forward;        // original unknown -> polynomial in new ones
  std::map<std::string, MultiPoly> backward;       // new unknown -> polynomial in original ones
  std::vector<std::vector<MultiPoly>> nonzero_any; // in the new unknowns
};

/// sinh-cosh with both amplitudes: 2 zeta (1 + c sinh + d cosh) = s zeta^2 + 2 zeta + r with
/// s = d + c, r = d - c. The derived equations carry high powers of s and r as factors, which
/// become variable factors in these coordinates.
inline std::optional<CoordinateChange> solve_coordinates(const AnsatzSpec& spec) {
  if (spec.family != Family::SinhCosh || spec.active_amplitudes().size() != 2) return std::nullopt;
  auto var = [](const char* n) { return MultiPoly::variable(n); };
  const GaussianRational half(mpq_class(1, 2));
  CoordinateChange ch;
  ch.unknowns = {"s", "r", "kappa", "p", "lambda"};
  ch.forward = {{"c", (var("s") - var("r")).scaled(half)}, {"d", (var("s") + var("r")).scaled(half)}};
  ch.backward = {{"s", var("d") + var("c")}, {"r", var("d") - var("c")}};
  ch.nonzero_any = {{var("s"), var("r")}};
  return ch;
}

inline std::vector<SolutionVariety> solve_fixed(const PolySystem& fixed, const SolveOptions& opts) {
  std::vector<SolutionVariety> out;
  for (auto& [c, zeros] : nondegenerate_cases(fixed)) {
    PolySystem sat = saturate(c, opts);
    sat.nonzero = c.nonzero;
    for (auto v : solve_variety(sat, opts)) {
      for (const auto& [z, val] : zeros) v.values[z] = val;
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    }
  }
  return out;
}

inline std::vector<SolutionVariety> solve_system(const PolySystem& derived, const std::map<std::string, int>& weights,
                                                 const std::string& scale, const SolveOptions& opts = {},
                                                 const std::optional<CoordinateChange>& change = std::nullopt) {
  PolySystem fixed = fix_scale(derived, weights, scale);
  std::vector<SolutionVariety> found;
  if (!change) {
    found = solve_fixed(fixed, opts);
  } else {
    PolySystem moved;
    moved.unknowns = change->unknowns;
    moved.nonzero = fixed.nonzero;
    moved.nonzero_any = change->nonzero_any;
    for (std::size_t k = 0; k < fixed.equations.size(); ++k)
      moved.add_equation(fixed.equations[k].substitute(change->forward), fixed.zeta_powers[k]);
    for (const auto& v : solve_fixed(moved, opts)) {
      PolySystem back;
      back.unknowns = fixed.unknowns;
      back.nonzero = fixed.nonzero;
      back.nonzero_any = fixed.nonzero_any;
      for (const auto& [name, val] : v.values) back.add_equation((MultiPoly::variable(name) - val).substitute(change->backward), 0);
      for (const auto& rel : v.relations) back.add_equation(rel.substitute(change->backward), 0);
      for (auto w : solve_variety(back, opts))
        if (std::find(found.begin(), found.end(), w) == found.end()) found.push_back(std::move(w));
    }
  }
  std::vector<SolutionVariety> out;
  for (const auto& v : found) {
    SolutionVariety r = weight_rescale(v, weights, scale);
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(std::move(r));
  }
  return out;
}

inline FamilySolution solve_family(const PdeCoefficients& k, const AnsatzSpec& spec, const SolveOptions& opts = {}) {
  FamilySolution fs;
  fs.spec = spec;
  fs.system = derive_family_system(k, spec);
  fs.varieties = solve_system(fs.system, spec.weights(), spec.scale_symbol(), opts, solve_coordinates(spec));
  return fs;
}

}  // namespace kk7
