#pragma once

// Dense univariate polynomials over Q(i) and extraction of their Q(i) roots.

#include "kk7/algebra/multipoly.hpp"
#include "kk7/numeric/complex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace kk7 {

/// Coefficients in increasing degree; no trailing zeros (the zero polynomial is empty).
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<GaussianRational> c) : c_(std::move(c)) { trim(); }

  /// p must involve at most the one variable `var`.
  static UPoly from_multipoly(const MultiPoly& p, const std::string& var) {
    for (const auto& v : p.vars())
      if (v != var) throw std::invalid_argument("UPoly: polynomial is not univariate in " + var);
    std::vector<GaussianRational> c(p.is_zero() ? 0 : p.degree_in(var) + 1);
    auto idx = p.index_of(var);
    for (const auto& t : p.terms()) c[idx ? t.m.e[*idx] : 0] += t.c;
    return UPoly(std::move(c));
  }

  MultiPoly to_multipoly(const std::string& var) const {
    MultiPoly out, x = MultiPoly::variable(var), xp(1);
    for (const auto& a : c_) {
      out += xp.scaled(a);
      xp *= x;
    }
    return out;
  }

  const std::vector<GaussianRational>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const GaussianRational& lead() const { return c_.back(); }

  GaussianRational operator()(const GaussianRational& x) const {
    GaussianRational acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  UPoly derivative() const {
    std::vector<GaussianRational> d;
    for (std::size_t k = 1; k < c_.size(); ++k) d.push_back(c_[k] * GaussianRational(static_cast<long>(k)));
    return UPoly(std::move(d));
  }

  UPoly monic() const {
    if (is_zero()) return *this;
    GaussianRational inv = lead().inverse();
    std::vector<GaussianRational> c = c_;
    for (auto& a : c) a *= inv;
    return UPoly(std::move(c));
  }

  /// (quotient, remainder)
  std::pair<UPoly, UPoly> divmod(const UPoly& d) const {
    if (d.is_zero()) throw std::domain_error("UPoly: division by zero");
    std::vector<GaussianRational> r = c_;
    int dq = degree() - d.degree();
    if (dq < 0) return {UPoly(), *this};
    std::vector<GaussianRational> q(dq + 1);
    GaussianRational inv = d.lead().inverse();
    for (int k = dq; k >= 0; --k) {
      GaussianRational f = r[k + d.degree()] * inv;
      q[k] = f;
      if (f.is_zero()) continue;
      for (int j = 0; j <= d.degree(); ++j) r[k + j] -= f * d.c_[j];
    }
    return {UPoly(std::move(q)), UPoly(std::move(r))};
  }

  friend UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
      UPoly r = a.divmod(b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  /// Product of the distinct irreducible factors (monic).
  UPoly squarefree() const {
    if (degree() < 1) return monic();
    return divmod(gcd(*this, derivative())).first.monic();
  }

  /// Scales to Gaussian-integer coefficients.
  UPoly integral() const {
    mpz_class den = 1;
    for (const auto& a : c_) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), a.re().get_den_mpz_t());
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), a.im().get_den_mpz_t());
    }
    std::vector<GaussianRational> c = c_;
    for (auto& a : c) a *= GaussianRational(mpq_class(den));
    return UPoly(std::move(c));
  }

  std::string to_string(const std::string& var = "x") const { return to_multipoly(var).to_string(); }

 private:
  void trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  }
  std::vector<GaussianRational> c_;
};

namespace detail {

inline std::size_t coefficient_bits(const UPoly& p) {
  std::size_t bits = 1;
  for (const auto& a : p.coeffs()) {
    bits = std::max(bits, mpz_sizeinbase(a.re().get_num_mpz_t(), 2) + mpz_sizeinbase(a.re().get_den_mpz_t(), 2));
    bits = std::max(bits, mpz_sizeinbase(a.im().get_num_mpz_t(), 2) + mpz_sizeinbase(a.im().get_den_mpz_t(), 2));
  }
  return bits;
}

inline HpComplex to_hp(const GaussianRational& c) {
  auto conv = [](const mpq_class& q) { return HpFloat(q.get_num().get_str()) / HpFloat(q.get_den().get_str()); };
  return {conv(c.re()), conv(c.im())};
}

/// All complex roots of a square-free polynomial by the Aberth-Ehrlich iteration.
inline std::vector<HpComplex> aberth_roots(const UPoly& p, unsigned digits) {
  const int n = p.degree();
  std::vector<HpComplex> a;
  for (const auto& c : p.coeffs()) a.push_back(to_hp(c));
  // Cauchy radius bound.
  HpFloat lead = abs(a.back()), radius = 0;
  for (int k = 0; k < n; ++k) radius = std::max(radius, HpFloat(abs(a[k]) / lead));
  radius += 1;
  std::vector<HpComplex> z(n);
  for (int k = 0; k < n; ++k) {
    HpFloat ang = HpFloat(2) * boost::math::constants::pi<HpFloat>() * (k + HpFloat("0.25")) / n + HpFloat("0.4");
    z[k] = HpComplex(radius * cos(ang) / 2, radius * sin(ang) / 2);
  }
  HpFloat tol = pow(HpFloat(10), -static_cast<int>(digits) + 8);
  auto eval = [&](const HpComplex& x, HpComplex& val, HpComplex& der) {
    val = a[n];
    der = HpComplex(0);
    for (int k = n - 1; k >= 0; --k) {
      der = der * x + val;
      val = val * x + a[k];
    }
  };
  for (int iter = 0; iter < 2000; ++iter) {
    HpFloat worst = 0;
    for (int k = 0; k < n; ++k) {
      HpComplex val, der;
      eval(z[k], val, der);
      if (abs(val) == 0) continue;
      HpComplex w = val / der;
      HpComplex s(0);
      for (int j = 0; j < n; ++j)
        if (j != k) s += HpComplex(1) / (z[k] - z[j]);
      HpComplex step = w / (HpComplex(1) - w * s);
      z[k] -= step;
      worst = std::max(worst, HpFloat(abs(step) / (1 + abs(z[k]))));
    }
    if (worst < tol) break;
  }
  return z;
}

inline mpz_class round_to_integer(const HpFloat& x) {
  mpz_class out;
  mpfr_get_z(out.get_mpz_t(), x.backend().data(), MPFR_RNDN);
  return out;
}

}  // namespace detail

/// Distinct roots of p lying in Q(i), each verified exactly. Candidates come from a
/// high-precision numeric root finder: with p scaled to Gaussian-integer coefficients and
/// leading coefficient L, every root r in Q(i) has L*r in Z[i], so rounding L*r is exact.
/// `rest` (optional) receives the monic square-free factor carrying the remaining roots.
inline std::vector<GaussianRational> gaussian_rational_roots(const UPoly& p, UPoly* rest = nullptr) {
  if (p.is_zero()) throw std::invalid_argument("gaussian_rational_roots: zero polynomial");
  UPoly q = p.squarefree();
  std::vector<GaussianRational> roots;
  // Zero root first, then deflate trivially.
  if (q.degree() >= 1 && q.coeffs()[0].is_zero()) {
    roots.emplace_back(0);
    q = q.divmod(UPoly({GaussianRational(0), GaussianRational(1)})).first;
  }
  while (q.degree() == 1) {
    roots.push_back(-q.coeffs()[0] / q.coeffs()[1]);
    q = UPoly({GaussianRational(1)});
  }
  if (q.degree() >= 2) {
    UPoly qi = q.integral();
    const GaussianRational L = qi.lead();
    unsigned digits = static_cast<unsigned>(40 + 2 * detail::coefficient_bits(qi) * 0.302 + 4 * qi.degree());
    unsigned saved = HpFloat::default_precision();
    HpFloat::default_precision(digits);
    auto approx = detail::aberth_roots(qi, digits);
    HpComplex Lc = detail::to_hp(L);
    std::vector<GaussianRational> found;
    for (const auto& z : approx) {
      HpComplex w = Lc * z;
      GaussianRational cand(mpq_class(detail::round_to_integer(w.re)), mpq_class(detail::round_to_integer(w.im)));
      cand = cand / L;
      if (std::find(found.begin(), found.end(), cand) != found.end()) continue;
      if (qi(cand).is_zero()) found.push_back(cand);
    }
    HpFloat::default_precision(saved);
    for (const auto& r : found) {
      q = q.divmod(UPoly({-r, GaussianRational(1)})).first;
      roots.push_back(r);
    }
  }
  std::sort(roots.begin(), roots.end());
  if (rest) *rest = q.monic();
  return roots;
}

}  // namespace kk7
