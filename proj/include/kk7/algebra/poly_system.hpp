#pragma once

// Polynomial systems handed from the ansatz engine to the solver.

#include "kk7/algebra/multipoly.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

namespace kk7 {

/// Scales p so that all coefficients are Gaussian integers with no common rational factor.
inline MultiPoly primitive_part(const MultiPoly& p) {
  if (p.is_zero()) return p;
  mpz_class den = 1, g = 0;
  for (const auto& t : p.terms()) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.c.re().get_den_mpz_t());
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), t.c.im().get_den_mpz_t());
  }
  for (const auto& t : p.terms()) {
    mpq_class re = t.c.re() * den, im = t.c.im() * den;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), re.get_num_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), im.get_num_mpz_t());
  }
  mpq_class s(den, g);
  s.canonicalize();
  return p.scaled(GaussianRational(s));
}

/// Representative of p up to a nonzero constant factor: among the primitive multiples (+-1,
/// and +-i when a coefficient is not real) the one whose text is lexicographically least.
inline MultiPoly unit_representative(const MultiPoly& p) {
  MultiPoly q = primitive_part(content_normalize(p));
  MultiPoly best = q;
  std::string best_text = q.to_string();
  bool real = std::all_of(q.terms().begin(), q.terms().end(), [](const Term& t) { return t.c.is_real(); });
  std::vector<GaussianRational> units{GaussianRational(-1)};
  if (!real) {
    units.push_back(GaussianRational::i());
    units.push_back(-GaussianRational::i());
  }
  for (const auto& u : units) {
    MultiPoly cand = q.scaled(u);
    std::string text = cand.to_string();
    if (text < best_text) {
      best = std::move(cand);
      best_text = std::move(text);
    }
  }
  return best;
}

/// Equations (each = 0) in a set of unknowns, with nondegeneracy side conditions.
struct PolySystem {
  std::vector<MultiPoly> equations;
  /// Laurent power of zeta each equation was collected from (same length as equations).
  std::vector<int> zeta_powers;
  /// Unknowns to solve for; every other indeterminate is a free parameter.
  std::vector<std::string> unknowns;
  /// Each must be nonzero.
  std::vector<MultiPoly> nonzero;
  /// In each group at least one polynomial must be nonzero.
  std::vector<std::vector<MultiPoly>> nonzero_any;

  bool empty() const { return equations.empty(); }
  std::size_t size() const { return equations.size(); }

  /// Adds p unless it is zero or a constant multiple of an equation already present.
  bool add_equation(const MultiPoly& p, int power = 0) {
    if (p.is_zero()) return false;
    MultiPoly rep = unit_representative(p);
    MultiPoly key = content_normalize(rep);
    for (const auto& e : equations)
      if (content_normalize(e) == key) return false;
    equations.push_back(std::move(rep));
    zeta_powers.push_back(power);
    return true;
  }

  bool contains_up_to_unit(const MultiPoly& p) const {
    if (p.is_zero()) return false;
    MultiPoly key = content_normalize(p);
    for (const auto& e : equations)
      if (content_normalize(e) == key) return true;
    return false;
  }
};

}  // namespace kk7
