#pragma once

// Sparse multivariate polynomials over Q(i) in named indeterminates.
//
// A MultiPoly carries its own variable list: the sorted names of the indeterminates that
// actually occur. Terms are kept sorted in descending grevlex order with respect to that list,
// so two equal polynomials are structurally identical.

#include "kk7/algebra/gaussian_rational.hpp"
#include "kk7/algebra/monomial.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kk7 {

struct Term {
  Monomial m;
  GaussianRational c;
};

namespace terms {

/// Sorts descending under `order` and merges equal monomials, dropping zeros.
inline void sort_combine(std::vector<Term>& ts, const MonomialOrder& order, std::size_t nvars) {
  std::sort(ts.begin(), ts.end(),
            [&](const Term& a, const Term& b) { return order.compare(a.m, b.m, nvars) > 0; });
  std::vector<Term> out;
  out.reserve(ts.size());
  for (auto& t : ts) {
    if (!out.empty() && out.back().m == t.m) {
      out.back().c += t.c;
    } else {
      if (!out.empty() && out.back().c.is_zero()) out.pop_back();
      out.push_back(std::move(t));
    }
  }
  if (!out.empty() && out.back().c.is_zero()) out.pop_back();
  ts = std::move(out);
}

/// a + scale * m * b, both inputs sorted under `order`.
inline std::vector<Term> add_scaled(std::span<const Term> a, std::span<const Term> b,
                                    const GaussianRational& scale, const Monomial& m,
                                    const MonomialOrder& order, std::size_t nvars) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) {
      out.push_back(a[i++]);
      continue;
    }
    Monomial bm = b[j].m * m;
    if (i == a.size()) {
      out.push_back({bm, b[j++].c * scale});
      continue;
    }
    int c = order.compare(a[i].m, bm, nvars);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back({bm, b[j++].c * scale});
    } else {
      GaussianRational s = a[i].c + b[j].c * scale;
      if (!s.is_zero()) out.push_back({a[i].m, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

inline std::vector<Term> multiply(const std::vector<Term>& a, const std::vector<Term>& b,
                                  const MonomialOrder& order, std::size_t nvars) {
  if (a.empty() || b.empty()) return {};
  std::vector<Term> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back({x.m * y.m, x.c * y.c});
  sort_combine(out, order, nvars);
  return out;
}

}  // namespace terms

class MultiPoly {
 public:
  MultiPoly() = default;
  MultiPoly(GaussianRational c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) terms_.push_back({Monomial::one(), std::move(c)});
  }
  MultiPoly(long c) : MultiPoly(GaussianRational(c)) {}  // NOLINT(google-explicit-constructor)
  MultiPoly(int c) : MultiPoly(GaussianRational(c)) {}   // NOLINT(google-explicit-constructor)

  /// Builds from arbitrary variable list and terms; canonicalizes.
  MultiPoly(std::vector<std::string> vars, std::vector<Term> ts) : vars_(std::move(vars)), terms_(std::move(ts)) {
    canonicalize();
  }

  static MultiPoly variable(const std::string& name) {
    MultiPoly p;
    p.vars_ = {name};
    p.terms_.push_back({Monomial::var(0), GaussianRational(1)});
    return p;
  }

  /// Parses "x^2 + 2*x*y - 1/3*I*y" style text. Division is by constants only.
  static MultiPoly parse(std::string_view text);

  const std::vector<std::string>& vars() const { return vars_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_one()); }
  GaussianRational constant_value() const {
    if (terms_.empty()) return GaussianRational(0);
    if (!is_constant()) throw std::logic_error("MultiPoly: not a constant");
    return terms_[0].c;
  }
  /// Coefficient of the degree-zero monomial.
  GaussianRational constant_term() const {
    if (!terms_.empty() && terms_.back().m.is_one()) return terms_.back().c;
    return GaussianRational(0);
  }

  bool has_var(std::string_view name) const { return index_of(name).has_value(); }
  std::optional<std::size_t> index_of(std::string_view name) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), name);
    if (it == vars_.end() || *it != name) return std::nullopt;
    return static_cast<std::size_t>(it - vars_.begin());
  }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.m.deg);
    return d;
  }
  std::uint32_t degree_in(std::string_view name) const {
    auto k = index_of(name);
    if (!k) return 0;
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max<std::uint32_t>(d, t.m.e[*k]);
    return d;
  }

  const Term& leading_term() const {
    if (terms_.empty()) throw std::logic_error("MultiPoly: leading term of zero");
    return terms_.front();
  }

  /// Same polynomial with exponent vectors laid out over `target` (a superset of vars()).
  std::vector<Term> terms_over(const std::vector<std::string>& target) const {
    std::vector<std::size_t> map(vars_.size());
    for (std::size_t k = 0; k < vars_.size(); ++k) {
      auto it = std::find(target.begin(), target.end(), vars_[k]);
      if (it == target.end()) throw std::invalid_argument("MultiPoly: variable " + vars_[k] + " missing from ring");
      map[k] = static_cast<std::size_t>(it - target.begin());
    }
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      Monomial m;
      for (std::size_t k = 0; k < vars_.size(); ++k) m.e[map[k]] = t.m.e[k];
      m.deg = t.m.deg;
      out.push_back({m, t.c});
    }
    return out;
  }

  MultiPoly operator-() const {
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.c = -t.c;
    return r;
  }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) { return combine(a, b, GaussianRational(1)); }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) { return combine(a, b, GaussianRational(-1)); }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.is_constant()) return b.scaled(a.terms_[0].c);
    if (b.is_constant()) return a.scaled(b.terms_[0].c);
    auto vars = merge_vars(a.vars_, b.vars_);
    auto ta = a.vars_ == vars ? a.terms_ : a.terms_over(vars);
    auto tb = b.vars_ == vars ? b.terms_ : b.terms_over(vars);
    MultiPoly r;
    r.vars_ = std::move(vars);
    r.terms_ = terms::multiply(ta, tb, MonomialOrder::grevlex(), r.vars_.size());
    r.prune();
    return r;
  }
  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }

  MultiPoly scaled(const GaussianRational& s) const {
    if (s.is_zero()) return {};
    MultiPoly r = *this;
    for (auto& t : r.terms_) t.c *= s;
    return r;
  }

  /// Non-negative integer power.
  MultiPoly pow(long n) const {
    if (n < 0) throw std::invalid_argument("MultiPoly::pow: negative exponent");
    MultiPoly result(1), base(*this);
    while (n > 0) {
      if (n & 1) result *= base;
      n >>= 1;
      if (n > 0) base *= base;
    }
    return result;
  }

  MultiPoly derivative(std::string_view name) const {
    auto k = index_of(name);
    if (!k) return {};
    std::vector<Term> out;
    for (const auto& t : terms_) {
      if (t.m.e[*k] == 0) continue;
      Term d = t;
      d.c *= GaussianRational(static_cast<long>(t.m.e[*k]));
      d.m.e[*k] -= 1;
      d.m.deg -= 1;
      out.push_back(std::move(d));
    }
    return MultiPoly(vars_, std::move(out));
  }

  /// Simultaneous substitution of indeterminates by polynomials.
  MultiPoly substitute(const std::map<std::string, MultiPoly>& bindings) const {
    bool touched = false;
    for (const auto& v : vars_)
      if (bindings.count(v)) touched = true;
    if (!touched) return *this;
    std::vector<std::vector<MultiPoly>> powers(vars_.size());
    MultiPoly result;
    for (const auto& t : terms_) {
      MultiPoly term(t.c);
      std::vector<Term> rest_terms{{Monomial::one(), GaussianRational(1)}};
      for (std::size_t k = 0; k < vars_.size(); ++k) {
        std::uint16_t e = t.m.e[k];
        if (e == 0) continue;
        auto it = bindings.find(vars_[k]);
        if (it == bindings.end()) {
          rest_terms[0].m.e[k] = e;
          rest_terms[0].m.deg += e;
          continue;
        }
        auto& cache = powers[k];
        if (cache.empty()) cache.push_back(MultiPoly(1));
        while (cache.size() <= e) cache.push_back(cache.back() * it->second);
        term *= cache[e];
      }
      result += term * MultiPoly(vars_, std::move(rest_terms));
    }
    return result;
  }

  MultiPoly substitute(const std::string& name, const MultiPoly& value) const {
    return substitute(std::map<std::string, MultiPoly>{{name, value}});
  }

  /// View as a univariate polynomial in `name`: coefficient list indexed by power.
  std::vector<MultiPoly> coefficients_in(std::string_view name) const {
    auto k = index_of(name);
    if (!k) return {*this};
    std::vector<std::vector<Term>> buckets(degree_in(name) + 1);
    for (const auto& t : terms_) {
      Term s = t;
      s.m.deg -= s.m.e[*k];
      s.m.e[*k] = 0;
      buckets[t.m.e[*k]].push_back(std::move(s));
    }
    std::vector<MultiPoly> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.emplace_back(vars_, std::move(b));
    return out;
  }

  std::string to_string() const;

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) {
    if (a.vars_ != b.vars_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t k = 0; k < a.terms_.size(); ++k)
      if (!(a.terms_[k].m == b.terms_[k].m) || !(a.terms_[k].c == b.terms_[k].c)) return false;
    return true;
  }

  /// Deterministic total order (by canonical text) for sorting sets of polynomials.
  friend bool operator<(const MultiPoly& a, const MultiPoly& b) {
    if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size();
    return a.to_string() < b.to_string();
  }

  static std::vector<std::string> merge_vars(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    if (out.size() > kMaxVars) throw std::length_error("MultiPoly: more than 16 indeterminates");
    return out;
  }

 private:
  static MultiPoly combine(const MultiPoly& a, const MultiPoly& b, const GaussianRational& sb) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b.scaled(sb);
    MultiPoly r;
    if (a.vars_ == b.vars_) {
      r.vars_ = a.vars_;
      r.terms_ = terms::add_scaled(a.terms_, b.terms_, sb, Monomial::one(), MonomialOrder::grevlex(), r.vars_.size());
    } else {
      r.vars_ = merge_vars(a.vars_, b.vars_);
      r.terms_ = terms::add_scaled(a.terms_over(r.vars_), b.terms_over(r.vars_), sb, Monomial::one(),
                                   MonomialOrder::grevlex(), r.vars_.size());
    }
    r.prune();
    return r;
  }

  void canonicalize() {
    // Sort names, permute exponents accordingly, then merge duplicates.
    std::vector<std::string> sorted = vars_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("MultiPoly: duplicate variable names");
    if (sorted.size() > kMaxVars) throw std::length_error("MultiPoly: more than 16 indeterminates");
    if (sorted != vars_) {
      terms_ = terms_over(sorted);
      vars_ = std::move(sorted);
    }
    for (auto& t : terms_) {
      t.m.deg = 0;
      for (std::size_t k = 0; k < kMaxVars; ++k) t.m.deg += t.m.e[k];
    }
    terms::sort_combine(terms_, MonomialOrder::grevlex(), vars_.size());
    prune();
  }

  // Drop indeterminates that no longer occur.
  void prune() {
    if (vars_.empty()) return;
    std::vector<bool> used(vars_.size(), false);
    for (const auto& t : terms_)
      for (std::size_t k = 0; k < vars_.size(); ++k)
        if (t.m.e[k]) used[k] = true;
    if (std::all_of(used.begin(), used.end(), [](bool u) { return u; })) return;
    std::vector<std::string> kept;
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < vars_.size(); ++k)
      if (used[k]) {
        kept.push_back(vars_[k]);
        idx.push_back(k);
      }
    for (auto& t : terms_) {
      Monomial m;
      for (std::size_t j = 0; j < idx.size(); ++j) m.e[j] = t.m.e[idx[j]];
      m.deg = t.m.deg;
      t.m = m;
    }
    vars_ = std::move(kept);
    // Removing unused slots preserves the relative grevlex order of the remaining ones.
  }

  std::vector<std::string> vars_;
  std::vector<Term> terms_;
};

inline MultiPoly operator*(const GaussianRational& s, const MultiPoly& p) { return p.scaled(s); }

inline std::string monomial_to_string(const Monomial& m, const std::vector<std::string>& vars) {
  std::string out;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (m.e[k] == 0) continue;
    if (!out.empty()) out += '*';
    out += vars[k];
    if (m.e[k] > 1) out += '^' + std::to_string(m.e[k]);
  }
  return out;
}

inline std::string term_to_string(const Term& t, const std::vector<std::string>& vars, bool first) {
  std::string mono = monomial_to_string(t.m, vars);
  std::string coeff;
  bool negative = false;
  const GaussianRational& c = t.c;
  if (c.is_real()) {
    negative = sgn(c.re()) < 0;
    mpq_class a = abs(c.re());
    if (mono.empty() || a != 1) coeff = rational_to_string(a);
  } else if (c.is_imaginary()) {
    negative = sgn(c.im()) < 0;
    mpq_class a = abs(c.im());
    coeff = a == 1 ? "I" : rational_to_string(a) + "*I";
  } else {
    coeff = "(" + c.to_string() + ")";
  }
  std::string body = coeff;
  if (!mono.empty()) body = coeff.empty() ? mono : coeff + "*" + mono;
  if (first) return negative ? "-" + body : body;
  return (negative ? "-" : "+") + body;
}

inline std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (std::size_t k = 0; k < terms_.size(); ++k) out += term_to_string(terms_[k], vars_, k == 0);
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const MultiPoly& p) { return os << p.to_string(); }

namespace detail {

class PolyParser {
 public:
  explicit PolyParser(std::string_view s) : s_(s) {}

  MultiPoly parse_all() {
    MultiPoly p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return p;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char ch) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("polynomial parse error at " + std::to_string(pos_) + ": " + why);
  }

  MultiPoly expr() {
    MultiPoly acc = term();
    for (;;) {
      if (eat('+')) {
        acc += term();
      } else if (eat('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }
  MultiPoly term() {
    MultiPoly acc = unary();
    for (;;) {
      if (eat('*')) {
        acc *= unary();
      } else if (eat('/')) {
        MultiPoly d = unary();
        if (!d.is_constant() || d.is_zero()) fail("division by non-constant");
        acc = acc.scaled(d.constant_value().inverse());
      } else {
        return acc;
      }
    }
  }
  MultiPoly unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    MultiPoly base = primary();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      base = base.pow(std::stol(std::string(s_.substr(start, pos_ - start))));
    }
    return base;
  }
  MultiPoly primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char ch = s_[pos_];
    if (ch == '(') {
      ++pos_;
      MultiPoly p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      mpz_class z(std::string(s_.substr(start, pos_ - start)));
      return MultiPoly(GaussianRational(mpq_class(z)));
    }
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name == "I") return MultiPoly(GaussianRational::i());
      return MultiPoly::variable(name);
    }
    fail("unexpected '" + std::string(1, ch) + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline MultiPoly MultiPoly::parse(std::string_view text) { return detail::PolyParser(text).parse_all(); }

/// Scales p by a unit of Q(i) so that its leading coefficient (grevlex, alphabetical
/// variable order) is 1.
inline MultiPoly content_normalize(const MultiPoly& p) {
  if (p.is_zero()) throw std::invalid_argument("content_normalize: zero polynomial");
  return p.scaled(p.leading_term().c.inverse());
}

}  // namespace kk7
