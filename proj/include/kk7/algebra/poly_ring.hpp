#pragma once

// A fixed polynomial ring (ordered variables + term order) and multivariate division.

#include "kk7/algebra/multipoly.hpp"

#include <algorithm>
#include <span>
#include <string>
#include <vector>

namespace kk7 {

using TermList = std::vector<Term>;

class PolyRing {
 public:
  PolyRing() = default;
  PolyRing(std::vector<std::string> vars, MonomialOrder order) : vars_(std::move(vars)), order_(order) {
    if (vars_.size() > kMaxVars) throw std::length_error("PolyRing: more than 16 indeterminates");
  }

  /// Ring over the union of the polynomials' variables, in alphabetical order.
  static PolyRing spanning(std::span<const MultiPoly> polys, MonomialOrder order) {
    std::vector<std::string> vars;
    for (const auto& p : polys) vars = MultiPoly::merge_vars(vars, p.vars());
    return PolyRing(std::move(vars), order);
  }

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t nvars() const { return vars_.size(); }
  const MonomialOrder& order() const { return order_; }

  int compare(const Monomial& a, const Monomial& b) const { return order_.compare(a, b, vars_.size()); }

  TermList embed(const MultiPoly& p) const {
    TermList t = p.terms_over(vars_);
    terms::sort_combine(t, order_, vars_.size());
    return t;
  }

  MultiPoly extract(const TermList& t) const { return MultiPoly(vars_, t); }

  TermList add_scaled(std::span<const Term> a, std::span<const Term> b, const GaussianRational& s,
                      const Monomial& m) const {
    return terms::add_scaled(a, b, s, m, order_, vars_.size());
  }

  TermList multiply(const TermList& a, const TermList& b) const { return terms::multiply(a, b, order_, vars_.size()); }

  static TermList monic(TermList t) {
    if (t.empty()) return t;
    GaussianRational inv = t.front().c.inverse();
    if (inv.is_one()) return t;
    for (auto& x : t) x.c *= inv;
    return t;
  }

  /// Scales t to Gaussian-integer coefficients without common rational integer factor.
  static void make_primitive(TermList& t) {
    if (t.empty()) return;
    mpz_class den = 1, g = 0;
    for (const auto& x : t) {
      if (x.c.re().get_den() != 1) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.c.re().get_den_mpz_t());
      if (x.c.im().get_den() != 1) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.c.im().get_den_mpz_t());
    }
    for (const auto& x : t) {
      if (den == 1) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.c.re().get_num_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.c.im().get_num_mpz_t());
      } else {
        mpz_class a = x.c.re().get_num() * (den / x.c.re().get_den());
        mpz_class b = x.c.im().get_num() * (den / x.c.im().get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), b.get_mpz_t());
      }
      if (g == 1 && den == 1) return;
    }
    if (g == 0) return;
    mpq_class f(den, g);
    f.canonicalize();
    if (f == 1) return;
    GaussianRational s(f);
    for (auto& x : t) x.c *= s;
  }

  /// ca * a + cb * m * b
  TermList combine(std::span<const Term> a, const GaussianRational& ca, std::span<const Term> b,
                   const GaussianRational& cb, const Monomial& m) const {
    if (ca.is_one()) return add_scaled(a, b, cb, m);
    TermList scaled(a.begin(), a.end());
    for (auto& x : scaled) x.c *= ca;
    return add_scaled(scaled, b, cb, m);
  }

  /// Fraction-free reduction: the result equals a nonzero constant multiple of the normal
  /// form (or, with top_only, of a polynomial whose leading term is irreducible).
  TermList reduce_ff(TermList p, std::span<const TermList> divisors, bool top_only) const {
    TermList rem;
    std::size_t pos = 0, steps = 0;
    make_primitive(p);
    while (pos < p.size()) {
      const Term& lead = p[pos];
      const TermList* hit = nullptr;
      for (const auto& d : divisors)
        if (!d.empty() && d.front().m.divides(lead.m)) {
          hit = &d;
          break;
        }
      if (!hit) {
        if (top_only) {
          rem.insert(rem.end(), std::make_move_iterator(p.begin() + pos), std::make_move_iterator(p.end()));
          break;
        }
        rem.push_back(std::move(p[pos]));
        ++pos;
        continue;
      }
      const Term& dl = hit->front();
      Monomial q = quotient(lead.m, dl.m);
      GaussianRational a = dl.c, b = lead.c;
      // Cancel common rational integer content of the two multipliers.
      if (a.is_real() && b.is_real() && a.re().get_den() == 1 && b.re().get_den() == 1) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), a.re().get_num_mpz_t(), b.re().get_num_mpz_t());
        if (g != 1) {
          a = GaussianRational(mpq_class(a.re() / g));
          b = GaussianRational(mpq_class(b.re() / g));
        }
        if (sgn(a.re()) < 0) {
          a = -a;
          b = -b;
        }
      }
      if (!a.is_one())
        for (auto& x : rem) x.c *= a;
      p = combine(std::span<const Term>(p).subspan(pos), a, *hit, -b, q);
      pos = 0;
      if (++steps % 8 == 0 && !rem.empty()) {
        // Joint content of rem and p.
        TermList joint = rem;
        joint.insert(joint.end(), p.begin(), p.end());
        TermList probe = joint;
        make_primitive(probe);
        if (!probe.empty() && !(probe.front().c == joint.front().c)) {
          rem.assign(probe.begin(), probe.begin() + static_cast<std::ptrdiff_t>(rem.size()));
          p.assign(probe.begin() + static_cast<std::ptrdiff_t>(rem.size()), probe.end());
        }
      } else if (rem.empty()) {
        make_primitive(p);
      }
    }
    make_primitive(rem);
    return rem;
  }

  /// Full normal form of p modulo `divisors` (leading terms taken under this ring's order).
  /// When `quotients` is non-null it receives q_i with p = sum q_i * divisors_i + r.
  TermList normal_form(TermList p, std::span<const TermList> divisors, std::vector<TermList>* quotients = nullptr) const {
    if (quotients) quotients->assign(divisors.size(), TermList{});
    TermList rem;
    std::size_t pos = 0;
    while (pos < p.size()) {
      const Term& lead = p[pos];
      bool reduced = false;
      for (std::size_t k = 0; k < divisors.size(); ++k) {
        const TermList& d = divisors[k];
        if (d.empty() || !d.front().m.divides(lead.m)) continue;
        Monomial q = quotient(lead.m, d.front().m);
        GaussianRational c = lead.c / d.front().c;
        if (quotients) {
          (*quotients)[k] = add_scaled((*quotients)[k], TermList{{Monomial::one(), GaussianRational(1)}}, c, q);
        }
        p = add_scaled(std::span<const Term>(p).subspan(pos), d, -c, q);
        pos = 0;
        reduced = true;
        break;
      }
      if (!reduced) {
        rem.push_back(std::move(p[pos]));
        ++pos;
      }
    }
    return rem;
  }

 private:
  std::vector<std::string> vars_;
  MonomialOrder order_ = MonomialOrder::grevlex();
};

struct DivisionResult {
  std::vector<MultiPoly> quotients;
  MultiPoly remainder;
};

/// Multivariate division with remainder. Variables listed in `var_order` rank highest, in that
/// order; the rest follow alphabetically (a > b > ...).
inline DivisionResult poly_divide(const MultiPoly& p, std::span<const MultiPoly> divisors,
                                  MonomialOrder order = MonomialOrder::grevlex(),
                                  const std::vector<std::string>& var_order = {}) {
  std::vector<MultiPoly> all(divisors.begin(), divisors.end());
  all.push_back(p);
  std::vector<std::string> vars = var_order;
  const PolyRing spanning = PolyRing::spanning(all, order);
  for (const auto& v : spanning.vars())
    if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
  PolyRing ring(std::move(vars), order);
  std::vector<TermList> ds;
  for (const auto& d : divisors) {
    if (d.is_zero()) throw std::invalid_argument("poly_reduce: zero divisor");
    ds.push_back(ring.embed(d));
  }
  std::vector<TermList> qs;
  TermList r = ring.normal_form(ring.embed(p), ds, &qs);
  DivisionResult out;
  for (auto& q : qs) out.quotients.push_back(ring.extract(q));
  out.remainder = ring.extract(r);
  return out;
}

inline MultiPoly poly_reduce(const MultiPoly& p, std::span<const MultiPoly> divisors,
                             MonomialOrder order = MonomialOrder::grevlex(),
                             const std::vector<std::string>& var_order = {}) {
  if (divisors.empty()) return p;
  return poly_divide(p, divisors, order, var_order).remainder;
}

}  // namespace kk7
