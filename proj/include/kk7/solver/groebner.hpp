#pragma once

// Buchberger's algorithm over Q(i) with the Gebauer-Moeller pair update (product and chain
// criteria) and the normal selection strategy. Produces reduced, monic bases.

#include "kk7/algebra/poly_ring.hpp"

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kk7 {

class DegreeBoundExceeded : public std::runtime_error {
 public:
  explicit DegreeBoundExceeded(std::uint32_t bound)
      : std::runtime_error("Groebner basis computation exceeded total degree bound " + std::to_string(bound)) {}
};

struct GroebnerOptions {
  MonomialOrder order = MonomialOrder::grevlex();
  std::uint32_t degree_bound = 40;
};

/// A reduced Groebner basis together with the ring it lives in.
class GroebnerBasis {
 public:
  GroebnerBasis() = default;
  GroebnerBasis(PolyRing ring, std::vector<TermList> elems) : ring_(std::move(ring)), elems_(std::move(elems)) {}

  const PolyRing& ring() const { return ring_; }
  const std::vector<TermList>& elements() const { return elems_; }
  bool is_unit() const { return elems_.size() == 1 && elems_[0].size() == 1 && elems_[0][0].m.is_one(); }
  bool is_zero_ideal() const { return elems_.empty(); }

  std::vector<MultiPoly> polys() const {
    std::vector<MultiPoly> out;
    out.reserve(elems_.size());
    for (const auto& e : elems_) out.push_back(ring_.extract(e));
    return out;
  }

  MultiPoly reduce(const MultiPoly& p) const {
    if (elems_.empty()) return p;
    for (const auto& v : p.vars())
      if (std::find(ring_.vars().begin(), ring_.vars().end(), v) == ring_.vars().end()) {
        // Indeterminates outside the ring act as coefficients only if no element mentions
        // them; extend the ring transparently.
        std::vector<std::string> vars = ring_.vars();
        for (const auto& w : p.vars())
          if (std::find(vars.begin(), vars.end(), w) == vars.end()) vars.push_back(w);
        PolyRing wider(vars, ring_.order());
        std::vector<TermList> es;
        for (const auto& e : elems_) es.push_back(wider.embed(ring_.extract(e)));
        return wider.extract(wider.normal_form(wider.embed(p), es));
      }
    return ring_.extract(ring_.normal_form(ring_.embed(p), elems_));
  }

  bool contains(const MultiPoly& p) const { return reduce(p).is_zero(); }

 private:
  PolyRing ring_;
  std::vector<TermList> elems_;
};

namespace detail {

struct CriticalPair {
  std::size_t i, j;
  Monomial lcm;
};

class Buchberger {
 public:
  Buchberger(const PolyRing& ring, std::uint32_t bound) : ring_(ring), bound_(bound) {}

  std::vector<TermList> run(std::vector<TermList> input) {
    // Start from monic inputs sorted by leading monomial (small first).
    for (auto& p : input) PolyRing::make_primitive(p);
    input.erase(std::remove_if(input.begin(), input.end(), [](const TermList& t) { return t.empty(); }),
                input.end());
    std::sort(input.begin(), input.end(),
              [&](const TermList& a, const TermList& b) { return ring_.compare(a.front().m, b.front().m) < 0; });
    for (auto& p : input) {
      TermList h = ring_.reduce_ff(std::move(p), active_polys(), true);
      if (h.empty()) continue;
      if (h.front().m.is_one()) return {TermList{{Monomial::one(), GaussianRational(1)}}};
      add(std::move(h));
    }
    while (!pairs_.empty()) {
      auto best = std::min_element(pairs_.begin(), pairs_.end(), [&](const CriticalPair& a, const CriticalPair& b) {
        if (a.lcm.deg != b.lcm.deg) return a.lcm.deg < b.lcm.deg;
        return ring_.compare(a.lcm, b.lcm) < 0;
      });
      CriticalPair pr = *best;
      pairs_.erase(best);
      if (pr.lcm.deg > bound_) throw DegreeBoundExceeded(bound_);
      TermList s = spoly(polys_[pr.i], polys_[pr.j], pr.lcm);
      TermList h = ring_.reduce_ff(std::move(s), active_polys(), true);
      if (h.empty()) continue;
      if (h.front().m.is_one()) return {TermList{{Monomial::one(), GaussianRational(1)}}};
      add(std::move(h));
    }
    return interreduce();
  }

 private:
  const std::vector<TermList>& active_polys() const { return cache_; }

  void rebuild_cache() {
    cache_.clear();
    for (std::size_t k = 0; k < polys_.size(); ++k)
      if (active_[k]) cache_.push_back(polys_[k]);
  }

  TermList spoly(const TermList& f, const TermList& g, const Monomial& l) const {
    TermList a = ring_.add_scaled(TermList{}, f, g.front().c, quotient(l, f.front().m));
    return ring_.add_scaled(a, g, -f.front().c, quotient(l, g.front().m));
  }

  // Gebauer-Moeller update.
  void add(TermList h) {
    const std::size_t hi = polys_.size();
    const Monomial lh = h.front().m;
    polys_.push_back(std::move(h));
    active_.push_back(true);

    std::vector<CriticalPair> fresh;
    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g]) fresh.push_back({g, hi, lcm(polys_[g].front().m, lh)});

    // Chain criterion among the new pairs; keep coprime ones until the product criterion.
    std::vector<CriticalPair> kept;
    for (std::size_t a = 0; a < fresh.size(); ++a) {
      const auto& p = fresh[a];
      bool coprime_p = coprime(polys_[p.i].front().m, lh);
      bool dominated = false;
      if (!coprime_p) {
        for (std::size_t b = 0; b < fresh.size() && !dominated; ++b) {
          if (b == a) continue;
          const auto& q = fresh[b];
          if (q.lcm.divides(p.lcm) && !(q.lcm == p.lcm && b > a)) dominated = true;
        }
      }
      if (!dominated) kept.push_back(p);
    }
    std::vector<CriticalPair> next;
    for (const auto& p : pairs_) {
      const Monomial& li = polys_[p.i].front().m;
      const Monomial& lj = polys_[p.j].front().m;
      bool drop = lh.divides(p.lcm) && !(lcm(li, lh) == p.lcm) && !(lcm(lj, lh) == p.lcm);
      if (!drop) next.push_back(p);
    }
    for (const auto& p : kept)
      if (!coprime(polys_[p.i].front().m, lh)) next.push_back(p);
    pairs_ = std::move(next);

    for (std::size_t g = 0; g < hi; ++g)
      if (active_[g] && lh.divides(polys_[g].front().m)) active_[g] = false;
    rebuild_cache();
  }

  std::vector<TermList> interreduce() const {
    std::vector<TermList> g = active_polys();
    std::sort(g.begin(), g.end(),
              [&](const TermList& a, const TermList& b) { return ring_.compare(a.front().m, b.front().m) < 0; });
    // Minimal basis: drop elements whose leading monomial is divisible by another's.
    std::vector<TermList> minimal;
    for (std::size_t k = 0; k < g.size(); ++k) {
      bool redundant = false;
      for (std::size_t j = 0; j < g.size() && !redundant; ++j)
        if (j != k && g[j].front().m.divides(g[k].front().m) && (!(g[j].front().m == g[k].front().m) || j < k))
          redundant = true;
      if (!redundant) minimal.push_back(g[k]);
    }
    std::vector<TermList> reduced;
    for (std::size_t k = 0; k < minimal.size(); ++k) {
      std::vector<TermList> others;
      for (std::size_t j = 0; j < minimal.size(); ++j)
        if (j != k) others.push_back(minimal[j]);
      TermList full = minimal[k];
      TermList r = ring_.reduce_ff(std::move(full), others, false);
      reduced.push_back(PolyRing::monic(std::move(r)));
    }
    return reduced;
  }

  const PolyRing& ring_;
  std::uint32_t bound_;
  std::vector<TermList> polys_;
  std::vector<bool> active_;
  std::vector<CriticalPair> pairs_;
  std::vector<TermList> cache_;
};

}  // namespace detail

/// Ring whose variables are `var_order` followed by any other occurring names (alphabetical).
inline PolyRing ring_for(std::span<const MultiPoly> polys, const std::vector<std::string>& var_order,
                         MonomialOrder order) {
  std::vector<std::string> vars = var_order;
  std::vector<std::string> rest;
  for (const auto& p : polys) rest = MultiPoly::merge_vars(rest, p.vars());
  for (const auto& v : rest)
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  return PolyRing(std::move(vars), order);
}

inline GroebnerBasis groebner_basis(std::span<const MultiPoly> polys, const std::vector<std::string>& var_order = {},
                                    const GroebnerOptions& opts = {}) {
  PolyRing ring = ring_for(polys, var_order, opts.order);
  std::vector<TermList> input;
  for (const auto& p : polys)
    if (!p.is_zero()) input.push_back(ring.embed(p));
  detail::Buchberger engine(ring, opts.degree_bound);
  auto elems = engine.run(std::move(input));
  std::sort(elems.begin(), elems.end(),
            [&](const TermList& a, const TermList& b) { return ring.compare(a.front().m, b.front().m) < 0; });
  return GroebnerBasis(std::move(ring), std::move(elems));
}

/// Reduced Groebner basis as plain polynomials, sorted by increasing leading monomial.
inline std::vector<MultiPoly> groebner(std::span<const MultiPoly> polys, const std::vector<std::string>& var_order = {},
                                       const GroebnerOptions& opts = {}) {
  return groebner_basis(polys, var_order, opts).polys();
}

}  // namespace kk7
