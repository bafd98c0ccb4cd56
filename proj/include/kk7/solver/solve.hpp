#pragma once

// Exact solution of the derived polynomial systems: saturation against degenerate components,
// recursive splitting into explicit Q(i) points, unresolved algebraic branches and
// positive-dimensional families, and restoration of the scale symbol by weighted homogeneity.

#include "kk7/algebra/poly_system.hpp"
#include "kk7/solver/groebner.hpp"
#include "kk7/solver/univariate.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace kk7 {

struct SolutionVariety {
  /// Unknowns left free (at most one is chosen per family; see solve_variety).
  std::vector<std::string> free_parameters;
  /// Bound unknowns: value as a polynomial in the free parameters (and the scale symbol).
  std::map<std::string, MultiPoly> values;
  /// Remaining relations among unbound unknowns and parameters (elimination basis, each
  /// introducing one new variable when read from the last element backwards).
  std::vector<MultiPoly> relations;

  bool is_point() const { return free_parameters.empty() && relations.empty(); }

  friend bool operator==(const SolutionVariety& a, const SolutionVariety& b) {
    return a.free_parameters == b.free_parameters && a.values == b.values && a.relations == b.relations;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& [k, v] : values) out += (out.empty() ? "" : ", ") + k + " = " + v.to_string();
    for (const auto& r : relations) out += (out.empty() ? "" : ", ") + r.to_string() + " = 0";
    if (!free_parameters.empty()) {
      out += " (free:";
      for (const auto& f : free_parameters) out += " " + f;
      out += ")";
    }
    return out;
  }
};

struct SolveOptions {
  std::uint32_t degree_bound = 40;
};

namespace detail {

inline std::vector<MultiPoly> nonzero_only(std::vector<MultiPoly> ps) {
  ps.erase(std::remove_if(ps.begin(), ps.end(), [](const MultiPoly& p) { return p.is_zero(); }), ps.end());
  return ps;
}

inline std::string fresh_aux_name(const std::vector<MultiPoly>& polys) {
  std::set<std::string> used;
  for (const auto& p : polys) used.insert(p.vars().begin(), p.vars().end());
  std::string name = "aux_y";
  while (used.count(name)) name += "_";
  return name;
}

/// Divides out the largest power of the monomial-free constraint `f` when f is a single variable.
inline MultiPoly strip_variable_power(const MultiPoly& p, const std::string& v) {
  auto idx = p.index_of(v);
  if (!idx || p.is_zero()) return p;
  std::uint16_t lo = std::numeric_limits<std::uint16_t>::max();
  for (const auto& t : p.terms()) lo = std::min(lo, t.m.e[*idx]);
  if (lo == 0) return p;
  std::vector<Term> ts = p.terms();
  for (auto& t : ts) {
    t.m.e[*idx] -= lo;
    t.m.deg -= lo;
  }
  return MultiPoly(p.vars(), std::move(ts));
}

inline std::optional<std::string> as_single_variable(const MultiPoly& f) {
  if (f.size() == 1 && f.total_degree() == 1 && f.terms()[0].c.is_one()) return f.vars()[0];
  return std::nullopt;
}

}  // namespace detail

/// Ideal saturation I : f^infinity (Rabinowitsch: adjoin 1 - y f, eliminate y). Variable
/// factors are divided out first, which is exact for saturation by a variable.
inline std::vector<MultiPoly> saturate_ideal(std::vector<MultiPoly> eqs, const MultiPoly& f,
                                             const std::vector<std::string>& var_order = {},
                                             const SolveOptions& opts = {}) {
  eqs = detail::nonzero_only(std::move(eqs));
  if (eqs.empty()) return eqs;
  if (f.is_constant()) {
    if (f.is_zero()) return {MultiPoly(1)};
    return eqs;
  }
  if (auto v = detail::as_single_variable(f))
    for (auto& e : eqs) e = detail::strip_variable_power(e, *v);
  std::vector<MultiPoly> all = eqs;
  all.push_back(f);
  const std::string y = detail::fresh_aux_name(all);
  std::vector<MultiPoly> input = eqs;
  input.push_back(MultiPoly(1) - MultiPoly::variable(y) * f);
  std::vector<std::string> order{y};
  order.insert(order.end(), var_order.begin(), var_order.end());
  GroebnerOptions go{MonomialOrder::eliminate_first(1), opts.degree_bound};
  std::vector<MultiPoly> out;
  for (auto& g : groebner(input, order, go))
    if (!g.has_var(y)) out.push_back(std::move(g));
  return out;
}

/// Removes the components of the system on which a nondegeneracy polynomial vanishes.
inline PolySystem saturate(const PolySystem& sys, const SolveOptions& opts = {}) {
  PolySystem out = sys;
  if (sys.nonzero.empty()) return out;
  std::vector<MultiPoly> eqs = sys.equations;
  for (const auto& f : sys.nonzero) {
    if (auto v = detail::as_single_variable(f)) {
      for (auto& e : eqs) e = detail::strip_variable_power(e, *v);
    }
  }
  bool only_variables = std::all_of(sys.nonzero.begin(), sys.nonzero.end(),
                                    [](const MultiPoly& f) { return detail::as_single_variable(f).has_value(); });
  // Dividing out variable factors is not a full saturation in general; finish with
  // Rabinowitsch steps for constraints whose variables survive in the system.
  for (const auto& f : sys.nonzero) {
    bool mentioned = false;
    for (const auto& e : eqs)
      for (const auto& v : f.vars()) mentioned = mentioned || e.has_var(v);
    if (!mentioned && only_variables) continue;
    eqs = saturate_ideal(eqs, f, sys.unknowns, opts);
  }
  out.equations.clear();
  out.zeta_powers.clear();
  for (const auto& e : eqs) out.add_equation(e, 0);
  return out;
}

namespace detail {

class VarietySolver {
 public:
  VarietySolver(std::vector<std::string> unknowns, std::vector<MultiPoly> nonzero,
                std::vector<std::vector<MultiPoly>> nonzero_any, SolveOptions opts)
      : unknowns_(std::move(unknowns)), nonzero_(std::move(nonzero)), nonzero_any_(std::move(nonzero_any)),
        opts_(opts) {}

  std::vector<SolutionVariety> run(const std::vector<MultiPoly>& eqs) {
    solve(eqs, unknowns_, {}, 0);
    return std::move(out_);
  }

 private:
  using Values = std::map<std::string, MultiPoly>;

  static MultiPoly apply(const MultiPoly& p, const std::string& v, const MultiPoly& val) {
    return p.has_var(v) ? p.substitute(v, val) : p;
  }

  // A point or family violating a nondegeneracy condition identically is dropped.
  bool admissible(const Values& values, const std::vector<MultiPoly>& relations) const {
    auto reduce = [&](MultiPoly p) {
      if (!values.empty()) p = p.substitute(values);
      if (!relations.empty()) p = poly_reduce(p, relations, MonomialOrder::lex(), relation_order_);
      return p;
    };
    for (const auto& f : nonzero_)
      if (reduce(f).is_zero()) return false;
    for (const auto& group : nonzero_any_) {
      bool any = false;
      for (const auto& f : group) any = any || !reduce(f).is_zero();
      if (!any) return false;
    }
    return true;
  }

  void emit(SolutionVariety v) {
    if (!admissible(v.values, v.relations)) return;
    if (std::find(out_.begin(), out_.end(), v) == out_.end()) out_.push_back(std::move(v));
  }

  Values bind(Values values, const std::string& v, const MultiPoly& val) {
    for (auto& [k, p] : values) p = apply(p, v, val);
    values[v] = val;
    return values;
  }

  static std::vector<std::string> without(std::vector<std::string> vars, const std::string& v) {
    vars.erase(std::remove(vars.begin(), vars.end(), v), vars.end());
    return vars;
  }

  static bool zero_dimensional(const GroebnerBasis& gb, const std::vector<std::string>& vars) {
    const auto& ring = gb.ring();
    for (const auto& v : vars) {
      auto it = std::find(ring.vars().begin(), ring.vars().end(), v);
      if (it == ring.vars().end()) return false;
      std::size_t idx = static_cast<std::size_t>(it - ring.vars().begin());
      bool pure = false;
      for (const auto& e : gb.elements()) {
        const Monomial& m = e.front().m;
        if (m.e[idx] > 0 && m.deg == m.e[idx]) pure = true;
      }
      if (!pure) return false;
    }
    return true;
  }

  void solve(std::vector<MultiPoly> eqs, std::vector<std::string> vars, Values values, int depth) {
    if (depth > 64) throw std::runtime_error("solve_variety: recursion limit");
    eqs = nonzero_only(std::move(eqs));
    for (const auto& e : eqs)
      if (e.is_constant()) return;  // nonzero constant: inconsistent
    if (eqs.empty()) {
      emit({vars, values, {}});
      return;
    }
    // Variable factors of the input split the variety before any basis is computed.
    for (const auto& e : eqs)
      for (const auto& v : vars) {
        MultiPoly stripped = strip_variable_power(e, v);
        if (stripped == e || stripped.is_constant()) continue;
        std::vector<MultiPoly> zero_branch;
        for (const auto& h : eqs) zero_branch.push_back(apply(h, v, MultiPoly(0)));
        solve(zero_branch, without(vars, v), bind(values, v, MultiPoly(0)), depth + 1);
        solve(saturate_ideal(eqs, MultiPoly::variable(v), vars, opts_), vars, values, depth + 1);
        return;
      }
    GroebnerOptions go{MonomialOrder::grevlex(), opts_.degree_bound};
    GroebnerBasis gb = groebner_basis(eqs, vars, go);
    if (gb.is_unit()) return;
    std::vector<MultiPoly> basis = gb.polys();

    // 1. An unknown occurring linearly with a constant coefficient is eliminated directly.
    std::optional<std::pair<std::string, MultiPoly>> best;
    std::size_t best_size = 0;
    for (const auto& g : basis)
      for (const auto& v : vars) {
        if (g.degree_in(v) != 1) continue;
        auto cs = g.coefficients_in(v);
        if (!cs[1].is_constant()) continue;
        MultiPoly val = (-cs[0]).scaled(cs[1].constant_value().inverse());
        if (!best || g.size() < best_size) {
          best = {v, val};
          best_size = g.size();
        }
      }
    if (best) {
      const auto& [v, val] = *best;
      std::vector<MultiPoly> next;
      for (const auto& g : basis) next.push_back(apply(g, v, val));
      solve(std::move(next), without(vars, v), bind(values, v, val), depth + 1);
      return;
    }

    // 2. A basis element divisible by an unknown splits the variety.
    for (const auto& g : basis)
      for (const auto& v : vars) {
        MultiPoly stripped = strip_variable_power(g, v);
        if (stripped == g || stripped.is_constant()) continue;
        std::vector<MultiPoly> zero_branch;
        for (const auto& h : basis) zero_branch.push_back(apply(h, v, MultiPoly(0)));
        solve(zero_branch, without(vars, v), bind(values, v, MultiPoly(0)), depth + 1);
        solve(saturate_ideal(basis, MultiPoly::variable(v), vars, opts_), vars, values, depth + 1);
        return;
      }

    // 3. A univariate basis element with Q(i) roots branches on them; the remaining factor
    //    (if any) is kept as an extra equation.
    for (const auto& g : basis) {
      if (g.vars().size() != 1 || g.total_degree() < 2) continue;
      const std::string v = g.vars()[0];
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) continue;
      UPoly rest;
      auto roots = gaussian_rational_roots(UPoly::from_multipoly(g, v), &rest);
      if (roots.empty()) continue;
      for (const auto& r : roots) {
        std::vector<MultiPoly> next;
        for (const auto& h : basis) next.push_back(apply(h, v, MultiPoly(r)));
        solve(std::move(next), without(vars, v), bind(values, v, MultiPoly(r)), depth + 1);
      }
      if (rest.degree() >= 1) {
        std::vector<MultiPoly> next = basis;
        next.push_back(rest.to_multipoly(v));
        solve(std::move(next), vars, values, depth + 1);
      }
      return;
    }

    // 4. Zero-dimensional: univariate elimination polynomial, branch on its Q(i) roots.
    if (zero_dimensional(gb, vars)) {
      const std::string v = vars.back();
      std::vector<std::string> order = without(vars, v);
      order.push_back(v);
      GroebnerOptions eo{MonomialOrder::eliminate_first(order.size() - 1), opts_.degree_bound};
      std::vector<MultiPoly> elim = groebner(basis, order, eo);
      std::optional<MultiPoly> uni;
      for (const auto& g : elim)
        if (g.vars().size() == 1 && g.vars()[0] == v) uni = g;
      if (!uni) throw std::logic_error("solve_variety: missing elimination polynomial");
      UPoly rest;
      auto roots = gaussian_rational_roots(UPoly::from_multipoly(*uni, v), &rest);
      for (const auto& r : roots) {
        std::vector<MultiPoly> next;
        for (const auto& g : basis) next.push_back(apply(g, v, MultiPoly(r)));
        solve(std::move(next), without(vars, v), bind(values, v, MultiPoly(r)), depth + 1);
      }
      if (rest.degree() >= 1) {
        std::vector<MultiPoly> with_rest = basis;
        with_rest.push_back(rest.to_multipoly(v));
        GroebnerOptions lo{MonomialOrder::lex(), opts_.degree_bound};
        auto rel = groebner(with_rest, order, lo);
        if (!(rel.size() == 1 && rel[0].is_constant())) {
          relation_order_ = order;
          emit({{}, values, rel});
        }
      }
      return;
    }

    // 5. Positive-dimensional: pick a free parameter that is algebraically independent modulo
    //    the ideal. Candidates are ranked by their degree in the leading monomials, then by
    //    their degree across the basis, then alphabetically.
    std::vector<std::tuple<std::uint32_t, std::uint32_t, std::string>> ranked;
    for (const auto& v : vars) {
      std::uint32_t lead = 0, deg = 0;
      auto it = std::find(gb.ring().vars().begin(), gb.ring().vars().end(), v);
      if (it != gb.ring().vars().end()) {
        std::size_t idx = static_cast<std::size_t>(it - gb.ring().vars().begin());
        for (const auto& e : gb.elements()) lead = std::max<std::uint32_t>(lead, e.front().m.e[idx]);
      }
      for (const auto& g : basis) deg = std::max(deg, g.degree_in(v));
      ranked.emplace_back(lead, deg, v);
    }
    std::sort(ranked.begin(), ranked.end());
    for (const auto& [lead, deg, param] : ranked) {
      std::vector<std::string> order = without(vars, param);
      order.push_back(param);
      GroebnerOptions eo{MonomialOrder::lex(), opts_.degree_bound};
      std::vector<MultiPoly> elim = groebner(basis, order, eo);
      bool independent = true;
      for (const auto& g : elim)
        if (g.vars().size() == 1 && g.vars()[0] == param) independent = false;
      if (!independent) continue;
      // Unknowns that became constants or polynomials in the parameter are bound explicitly.
      Values vals = values;
      std::vector<MultiPoly> rel;
      for (const auto& g : elim) {
        bool bound = false;
        for (const auto& v : order) {
          if (v == param || g.degree_in(v) != 1) continue;
          auto cs = g.coefficients_in(v);
          if (!cs[1].is_constant()) continue;
          bool only_param = std::all_of(cs[0].vars().begin(), cs[0].vars().end(),
                                        [&](const std::string& w) { return w == param; });
          if (!only_param) continue;
          vals = bind(vals, v, (-cs[0]).scaled(cs[1].constant_value().inverse()));
          bound = true;
          break;
        }
        if (!bound) rel.push_back(g);
      }
      relation_order_ = order;
      emit({{param}, vals, rel});
      return;
    }
    throw std::logic_error("solve_variety: no independent parameter in a positive-dimensional ideal");
  }

  std::vector<std::string> unknowns_;
  std::vector<MultiPoly> nonzero_;
  std::vector<std::vector<MultiPoly>> nonzero_any_;
  SolveOptions opts_;
  std::vector<std::string> relation_order_;
  std::vector<SolutionVariety> out_;
};

}  // namespace detail

/// Solves a (saturated) system for its unknowns. Zero-dimensional parts yield every Q(i)
/// point explicitly and irrational branches as lex relations; positive-dimensional parts
/// yield a family with one named free parameter. Inconsistent systems give an empty list.
inline std::vector<SolutionVariety> solve_variety(const PolySystem& sys, const SolveOptions& opts = {}) {
  std::vector<std::string> vars = sys.unknowns;
  if (vars.empty()) {
    std::set<std::string> all;
    for (const auto& e : sys.equations) all.insert(e.vars().begin(), e.vars().end());
    vars.assign(all.begin(), all.end());
  }
  detail::VarietySolver solver(vars, sys.nonzero, sys.nonzero_any, opts);
  return solver.run(sys.equations);
}

/// Total weight of every term of p (nullopt when p is not weighted-homogeneous).
inline std::optional<long> homogeneous_weight(const MultiPoly& p, const std::map<std::string, int>& weights) {
  std::optional<long> w0;
  for (const auto& t : p.terms()) {
    long w = 0;
    for (std::size_t k = 0; k < p.vars().size(); ++k) {
      auto it = weights.find(p.vars()[k]);
      if (it != weights.end()) w += static_cast<long>(it->second) * t.m.e[k];
    }
    if (w0 && *w0 != w) return std::nullopt;
    w0 = w;
  }
  return w0.value_or(0);
}

/// Reintroduces the scale symbol into a solution found with scale = 1: a bound value of
/// weight w becomes homogeneous of weight w, relations are re-homogenized.
inline SolutionVariety weight_rescale(const SolutionVariety& v, const std::map<std::string, int>& weights,
                                      const std::string& scale) {
  auto weight_of = [&](const std::string& name) {
    auto it = weights.find(name);
    return it == weights.end() ? 0 : it->second;
  };
  const MultiPoly s = MultiPoly::variable(scale);
  auto homogenize = [&](const MultiPoly& p, std::optional<long> target) {
    long top = target.value_or(std::numeric_limits<long>::min());
    std::vector<long> ws;
    for (const auto& t : p.terms()) {
      long w = 0;
      for (std::size_t k = 0; k < p.vars().size(); ++k) w += static_cast<long>(weight_of(p.vars()[k])) * t.m.e[k];
      ws.push_back(w);
      if (!target) top = std::max(top, w);
    }
    MultiPoly out;
    for (std::size_t j = 0; j < p.terms().size(); ++j) {
      long gap = top - ws[j];
      if (gap < 0) throw std::invalid_argument("weight_rescale: value heavier than its unknown");
      const Term& t = p.terms()[j];
      out += MultiPoly(p.vars(), {t}) * s.pow(gap);
    }
    return out;
  };
  SolutionVariety r;
  r.free_parameters = v.free_parameters;
  for (const auto& [name, val] : v.values) {
    // A value heavier than its unknown (possible when the free parameter outweighs it) is
    // kept as a homogeneous relation instead.
    bool fits = true;
    for (const auto& t : val.terms()) {
      long w = 0;
      for (std::size_t k = 0; k < val.vars().size(); ++k) w += static_cast<long>(weight_of(val.vars()[k])) * t.m.e[k];
      fits = fits && w <= weight_of(name);
    }
    if (fits) {
      r.values[name] = homogenize(val, weight_of(name));
      continue;
    }
    r.relations.push_back(homogenize(MultiPoly::variable(name) - val, std::nullopt));
  }
  for (const auto& rel : v.relations) r.relations.push_back(homogenize(rel, std::nullopt));
  return r;
}

/// True when the explicit values (with relations, if any, as side conditions) make every
/// equation vanish identically. For a weighted-homogeneous system pass its scale symbol: the
/// check then runs at scale 1, where the relations generate the right ideal (with the scale
/// kept symbolic they would need saturating by it).
inline bool satisfies(const SolutionVariety& v, const std::vector<MultiPoly>& equations,
                      const std::vector<std::string>& relation_order = {},
                      const std::optional<std::string>& scale = std::nullopt) {
  auto at_scale = [&](const MultiPoly& p) { return scale && p.has_var(*scale) ? p.substitute(*scale, MultiPoly(1)) : p; };
  std::map<std::string, MultiPoly> values;
  for (const auto& [k, val] : v.values) values[k] = at_scale(val);
  std::vector<MultiPoly> rels;
  for (const auto& r : v.relations) rels.push_back(at_scale(r));
  std::optional<GroebnerBasis> gb;
  if (!rels.empty()) gb = groebner_basis(rels, relation_order, GroebnerOptions{MonomialOrder::grevlex(), 200});
  for (const auto& e : equations) {
    MultiPoly r = at_scale(e).substitute(values);
    if (gb) r = gb->reduce(r);
    if (!r.is_zero()) return false;
  }
  return true;
}

}  // namespace kk7
