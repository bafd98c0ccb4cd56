#pragma once

// Immutable expression trees in x, t, xi and parameters, with exponential, hyperbolic and
// trigonometric atoms and derivatives of unknown functions (u(x,t), v(xi)).
//
// Every Expr produced by the builders is canonical:
//  - sums and products are flattened and constant-folded;
//  - like terms (sums) and like bases (products) are merged;
//  - sum factors inside products carry unit content (first term has coefficient 1);
//  - function arguments are expanded, the imaginary unit is pulled out of purely imaginary
//    arguments (tanh(i z) -> i tan z, ...), and odd/even symmetry fixes the argument sign.
// Structural equality of canonical trees is a sound (not complete) equality test.

#include "kk7/algebra/multipoly.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kk7 {

enum class Fn { Exp, Log, Sinh, Cosh, Tanh, Coth, Sin, Cos, Tan, Cot };

inline const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Exp: return "exp";
    case Fn::Log: return "log";
    case Fn::Sinh: return "sinh";
    case Fn::Cosh: return "cosh";
    case Fn::Tanh: return "tanh";
    case Fn::Coth: return "coth";
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Tan: return "tan";
    case Fn::Cot: return "cot";
  }
  return "?";
}

inline std::optional<Fn> fn_from_name(std::string_view s) {
  static const std::pair<const char*, Fn> table[] = {
      {"exp", Fn::Exp},   {"log", Fn::Log}, {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh}, {"tanh", Fn::Tanh},
      {"coth", Fn::Coth}, {"sin", Fn::Sin}, {"cos", Fn::Cos},   {"tan", Fn::Tan},   {"cot", Fn::Cot}};
  for (const auto& [n, f] : table)
    if (s == n) return f;
  return std::nullopt;
}

enum class Kind { Const, Symbol, Func, Apply, Pow, Product, Sum };

class Expr;

/// Derivative orders of an unknown function, sorted by variable name.
using DerivOrders = std::vector<std::pair<std::string, int>>;

struct Node {
  Kind kind = Kind::Const;
  GaussianRational value;          // Const
  std::string name;                // Symbol, Func
  std::vector<std::string> args;   // Func: independent variables
  DerivOrders orders;              // Func
  Fn fn = Fn::Exp;                 // Apply
  int exponent = 0;                // Pow
  std::vector<Expr> children;      // Apply: {arg}; Pow: {base}; Product, Sum
  std::size_t hash = 0;
};

class Expr {
 public:
  Expr();  // zero
  Expr(GaussianRational c);  // NOLINT(google-explicit-constructor)
  Expr(long c) : Expr(GaussianRational(c)) {}  // NOLINT(google-explicit-constructor)
  Expr(int c) : Expr(GaussianRational(c)) {}   // NOLINT(google-explicit-constructor)

  static Expr constant(GaussianRational c) { return Expr(std::move(c)); }
  static Expr rational(long num, long den) { return Expr(GaussianRational(num, den)); }
  static Expr imaginary_unit() { return Expr(GaussianRational::i()); }
  static Expr symbol(const std::string& name);
  /// Unknown function `name` of `args` (e.g. u of {x, t}), optionally differentiated.
  static Expr function(const std::string& name, std::vector<std::string> args, DerivOrders orders = {});
  static Expr apply(Fn f, const Expr& arg);
  static Expr sum(std::vector<Expr> items);
  static Expr product(std::vector<Expr> items);
  static Expr power(const Expr& base, long n);
  static Expr from_poly(const MultiPoly& p);

  /// Infix text: "mu^2/3 - mu^2/2*coth(mu*(x + 4*mu^6/3*t))^2".
  static Expr parse(std::string_view text);
  /// Prefix text as produced by serialize().
  static Expr deserialize(std::string_view text);

  const Node& node() const { return *node_; }
  Kind kind() const { return node_->kind; }
  const std::vector<Expr>& children() const { return node_->children; }
  std::size_t hash() const { return node_->hash; }

  bool is_const() const { return kind() == Kind::Const; }
  bool is_zero() const { return is_const() && node_->value.is_zero(); }
  bool is_one() const { return is_const() && node_->value.is_one(); }
  const GaussianRational& value() const { return node_->value; }
  const std::string& name() const { return node_->name; }

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b) { return sum({a, b}); }
  friend Expr operator-(const Expr& a, const Expr& b) { return sum({a, -b}); }
  friend Expr operator*(const Expr& a, const Expr& b) { return product({a, b}); }
  friend Expr operator/(const Expr& a, const Expr& b) { return product({a, power(b, -1)}); }
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr pow(long n) const { return power(*this, n); }

  /// Canonical prefix serialization: (+ ...), (* ...), (^ b n), (tanh a), (D u (x t) (x 3)),
  /// rationals as p/q and the imaginary unit as I.
  std::string serialize() const;
  /// Human-readable infix form.
  std::string to_infix() const;

  friend int compare(const Expr& a, const Expr& b);
  friend bool operator==(const Expr& a, const Expr& b) {
    return a.node_ == b.node_ || (a.hash() == b.hash() && compare(a, b) == 0);
  }
  friend bool operator<(const Expr& a, const Expr& b) { return compare(a, b) < 0; }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Node n);
  friend struct ExprAccess;

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------------------------
// Construction and canonical ordering

namespace detail {

inline std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

inline std::size_t compute_hash(const Node& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 1315423911u;
  switch (n.kind) {
    case Kind::Const: h = mix(h, n.value.hash()); break;
    case Kind::Symbol: h = mix(h, std::hash<std::string>{}(n.name)); break;
    case Kind::Func:
      h = mix(h, std::hash<std::string>{}(n.name));
      for (const auto& [v, k] : n.orders) h = mix(mix(h, std::hash<std::string>{}(v)), static_cast<std::size_t>(k));
      break;
    case Kind::Apply: h = mix(h, static_cast<std::size_t>(n.fn)); break;
    case Kind::Pow: h = mix(h, static_cast<std::size_t>(n.exponent + 1000)); break;
    default: break;
  }
  for (const auto& c : n.children) h = mix(h, c.hash());
  return h;
}

template <class T>
int three_way(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace detail

struct ExprAccess {
  static Expr make(Node n) { return Expr::make(std::move(n)); }
};

inline Expr Expr::make(Node n) {
  n.hash = detail::compute_hash(n);
  return Expr(std::make_shared<const Node>(std::move(n)));
}

inline Expr::Expr() : Expr(GaussianRational(0)) {}

inline Expr::Expr(GaussianRational c) {
  Node n;
  n.kind = Kind::Const;
  n.value = std::move(c);
  n.hash = detail::compute_hash(n);
  node_ = std::make_shared<const Node>(std::move(n));
}

inline Expr Expr::symbol(const std::string& name) {
  if (name.empty()) throw std::invalid_argument("Expr::symbol: empty name");
  Node n;
  n.kind = Kind::Symbol;
  n.name = name;
  return make(std::move(n));
}

inline Expr Expr::function(const std::string& name, std::vector<std::string> args, DerivOrders orders) {
  Node n;
  n.kind = Kind::Func;
  n.name = name;
  n.args = std::move(args);
  std::map<std::string, int> merged;
  for (const auto& [v, k] : orders) {
    if (k < 0) throw std::invalid_argument("Expr::function: negative derivative order");
    if (k > 0) merged[v] += k;
  }
  n.orders.assign(merged.begin(), merged.end());
  return make(std::move(n));
}

inline int compare(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return 0;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind) ? -1 : 1;
  switch (x.kind) {
    case Kind::Const: return detail::three_way(x.value, y.value);
    case Kind::Symbol: return x.name.compare(y.name) < 0 ? -1 : (x.name == y.name ? 0 : 1);
    case Kind::Func: {
      if (int c = detail::three_way(x.name, y.name)) return c;
      if (int c = detail::three_way(x.args, y.args)) return c;
      return detail::three_way(x.orders, y.orders);
    }
    case Kind::Apply:
      if (x.fn != y.fn) return static_cast<int>(x.fn) < static_cast<int>(y.fn) ? -1 : 1;
      return compare(x.children[0], y.children[0]);
    case Kind::Pow:
      if (int c = compare(x.children[0], y.children[0])) return c;
      return detail::three_way(x.exponent, y.exponent);
    case Kind::Product:
    case Kind::Sum: {
      std::size_t n = std::min(x.children.size(), y.children.size());
      for (std::size_t k = 0; k < n; ++k)
        if (int c = compare(x.children[k], y.children[k])) return c;
      return detail::three_way(x.children.size(), y.children.size());
    }
  }
  return 0;
}

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

namespace detail {

/// Splits a canonical term into numeric coefficient and coefficient-free remainder.
inline std::pair<GaussianRational, Expr> split_coefficient(const Expr& e) {
  if (e.is_const()) return {e.value(), Expr(1)};
  if (e.kind() == Kind::Product && e.children().front().is_const()) {
    const auto& ch = e.children();
    if (ch.size() == 2) return {ch[0].value(), ch[1]};
    Node n;
    n.kind = Kind::Product;
    n.children.assign(ch.begin() + 1, ch.end());
    return {ch[0].value(), ExprAccess::make(std::move(n))};
  }
  return {GaussianRational(1), e};
}

/// Coefficient of the first term of a canonical sum (or of a single term).
inline GaussianRational leading_coefficient(const Expr& e) {
  if (e.kind() == Kind::Sum) return split_coefficient(e.children().front()).first;
  return split_coefficient(e).first;
}

inline Expr scale_terms(const Expr& e, const GaussianRational& s) {
  if (e.kind() != Kind::Sum) return Expr(s) * e;
  std::vector<Expr> terms;
  terms.reserve(e.children().size());
  for (const auto& t : e.children()) terms.push_back(Expr(s) * t);
  return Expr::sum(std::move(terms));
}

/// For a canonical sum s returns (k, s') with s = k * s' and the first term of s' monic.
inline std::pair<GaussianRational, Expr> sum_content(const Expr& s) {
  GaussianRational k = leading_coefficient(s);
  if (k.is_one()) return {k, s};
  return {k, scale_terms(s, k.inverse())};
}

inline Expr raw_pow(const Expr& base, int n) {
  Node node;
  node.kind = Kind::Pow;
  node.exponent = n;
  node.children = {base};
  return ExprAccess::make(std::move(node));
}

}  // namespace detail

inline Expr Expr::sum(std::vector<Expr> items) {
  std::vector<Expr> flat;
  flat.reserve(items.size());
  for (auto& it : items) {
    if (it.kind() == Kind::Sum) {
      for (const auto& c : it.children()) flat.push_back(c);
    } else {
      flat.push_back(std::move(it));
    }
  }
  GaussianRational constant(0);
  std::map<Expr, GaussianRational, ExprLess> acc;
  for (const auto& t : flat) {
    if (t.is_const()) {
      constant += t.value();
      continue;
    }
    auto [c, rest] = detail::split_coefficient(t);
    auto [pos, inserted] = acc.emplace(rest, c);
    if (!inserted) pos->second += c;
  }
  std::vector<Expr> terms;
  if (!constant.is_zero()) terms.emplace_back(constant);
  for (auto& [rest, c] : acc) {
    if (c.is_zero()) continue;
    if (c.is_one()) {
      terms.push_back(rest);
    } else if (rest.kind() == Kind::Product) {
      Node n;
      n.kind = Kind::Product;
      n.children.reserve(rest.children().size() + 1);
      n.children.emplace_back(c);
      for (const auto& f : rest.children()) n.children.push_back(f);
      terms.push_back(make(std::move(n)));
    } else {
      Node n;
      n.kind = Kind::Product;
      n.children = {Expr(c), rest};
      terms.push_back(make(std::move(n)));
    }
  }
  if (terms.empty()) return Expr(0);
  if (terms.size() == 1) return terms[0];
  Node n;
  n.kind = Kind::Sum;
  n.children = std::move(terms);
  return make(std::move(n));
}

inline Expr Expr::product(std::vector<Expr> items) {
  GaussianRational coeff(1);
  std::map<Expr, long, ExprLess> bases;
  std::function<void(const Expr&, long)> absorb = [&](const Expr& f, long mult) {
    switch (f.kind()) {
      case Kind::Const:
        coeff *= f.value().pow(mult);
        break;
      case Kind::Product:
        for (const auto& c : f.children()) absorb(c, mult);
        break;
      case Kind::Pow:
        bases[f.children()[0]] += mult * f.node().exponent;
        break;
      case Kind::Sum: {
        auto [k, s] = detail::sum_content(f);
        coeff *= k.pow(mult);
        bases[s] += mult;
        break;
      }
      default:
        bases[f] += mult;
    }
  };
  for (const auto& it : items) {
    if (it.is_zero()) return Expr(0);
    absorb(it, 1);
  }
  if (coeff.is_zero()) return Expr(0);
  std::vector<Expr> factors;
  for (const auto& [b, n] : bases) {
    if (n == 0) continue;
    factors.push_back(n == 1 ? b : detail::raw_pow(b, static_cast<int>(n)));
  }
  if (factors.empty()) return Expr(coeff);
  if (factors.size() == 1 && coeff.is_one()) return factors[0];
  Node n;
  n.kind = Kind::Product;
  if (!coeff.is_one()) n.children.emplace_back(coeff);
  for (auto& f : factors) n.children.push_back(std::move(f));
  return make(std::move(n));
}

inline Expr Expr::power(const Expr& base, long n) {
  if (n == 0) return Expr(1);
  if (n == 1) return base;
  switch (base.kind()) {
    case Kind::Const:
      if (base.is_zero() && n < 0) throw std::domain_error("Expr: zero raised to a negative power");
      return Expr(base.value().pow(n));
    case Kind::Pow:
      return power(base.children()[0], n * base.node().exponent);
    case Kind::Product: {
      std::vector<Expr> fs;
      for (const auto& f : base.children()) fs.push_back(power(f, n));
      return product(std::move(fs));
    }
    case Kind::Sum: {
      auto [k, s] = detail::sum_content(base);
      return product({Expr(k.pow(n)), detail::raw_pow(s, static_cast<int>(n))});
    }
    default:
      return detail::raw_pow(base, static_cast<int>(n));
  }
}

inline Expr Expr::operator-() const { return product({Expr(-1), *this}); }

// ---------------------------------------------------------------------------------------------
// Expansion

/// Multiplies out products of sums and positive powers of sums. Negative powers of sums stay
/// as opaque factors (with expanded, unit-content bases).
inline Expr expand(const Expr& e);

namespace detail {

inline std::vector<Expr> as_terms(const Expr& e) {
  if (e.kind() == Kind::Sum) return e.children();
  return {e};
}

inline Expr multiply_expanded(const Expr& a, const Expr& b) {
  if (a.kind() != Kind::Sum && b.kind() != Kind::Sum) return a * b;
  std::vector<Expr> out;
  auto ta = as_terms(a), tb = as_terms(b);
  out.reserve(ta.size() * tb.size());
  for (const auto& x : ta)
    for (const auto& y : tb) out.push_back(x * y);
  return Expr::sum(std::move(out));
}

}  // namespace detail

inline Expr expand(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const:
    case Kind::Symbol:
    case Kind::Func:
      return e;
    case Kind::Apply:
      return Expr::apply(e.node().fn, e.children()[0]);
    case Kind::Sum: {
      std::vector<Expr> ts;
      for (const auto& c : e.children()) ts.push_back(expand(c));
      return Expr::sum(std::move(ts));
    }
    case Kind::Pow: {
      Expr b = expand(e.children()[0]);
      int n = e.node().exponent;
      if (n > 0 && b.kind() == Kind::Sum) {
        Expr acc = b;
        for (int k = 1; k < n; ++k) acc = detail::multiply_expanded(acc, b);
        return acc;
      }
      return Expr::power(b, n);
    }
    case Kind::Product: {
      Expr acc(1);
      for (const auto& f : e.children()) acc = detail::multiply_expanded(acc, expand(f));
      return acc;
    }
  }
  return e;
}

// ---------------------------------------------------------------------------------------------
// Function atoms

namespace detail {

inline bool is_odd(Fn f) {
  return f == Fn::Sinh || f == Fn::Tanh || f == Fn::Coth || f == Fn::Sin || f == Fn::Tan || f == Fn::Cot;
}
inline bool is_even(Fn f) { return f == Fn::Cosh || f == Fn::Cos; }

inline bool all_coefficients_imaginary(const Expr& arg) {
  for (const auto& t : as_terms(arg))
    if (!split_coefficient(t).first.is_imaginary()) return false;
  return true;
}

inline Expr make_apply_node(Fn f, const Expr& arg) {
  Node n;
  n.kind = Kind::Apply;
  n.fn = f;
  n.children = {arg};
  return ExprAccess::make(std::move(n));
}

}  // namespace detail

inline Expr Expr::apply(Fn f, const Expr& raw_arg) {
  Expr arg = expand(raw_arg);
  if (arg.is_zero()) {
    switch (f) {
      case Fn::Exp:
      case Fn::Cosh:
      case Fn::Cos: return Expr(1);
      case Fn::Sinh:
      case Fn::Tanh:
      case Fn::Sin:
      case Fn::Tan: return Expr(0);
      case Fn::Coth:
      case Fn::Cot:
      case Fn::Log: throw std::domain_error(std::string("Expr: ") + fn_name(f) + "(0) is singular");
    }
  }
  if (f == Fn::Log) {
    if (arg.is_one()) return Expr(0);
    return detail::make_apply_node(f, arg);
  }
  if (f == Fn::Exp) return detail::make_apply_node(f, arg);

  // Pull out the imaginary unit: arg = i * theta.
  if (detail::all_coefficients_imaginary(arg)) {
    Expr theta = expand(Expr(-GaussianRational::i()) * arg);
    const Expr I = imaginary_unit();
    switch (f) {
      case Fn::Sinh: return I * apply(Fn::Sin, theta);
      case Fn::Cosh: return apply(Fn::Cos, theta);
      case Fn::Tanh: return I * apply(Fn::Tan, theta);
      case Fn::Coth: return -I * apply(Fn::Cot, theta);
      case Fn::Sin: return I * apply(Fn::Sinh, theta);
      case Fn::Cos: return apply(Fn::Cosh, theta);
      case Fn::Tan: return I * apply(Fn::Tanh, theta);
      case Fn::Cot: return -I * apply(Fn::Coth, theta);
      default: break;
    }
  }
  if (!detail::leading_coefficient(arg).is_canonically_positive()) {
    Expr neg = expand(-arg);
    if (detail::is_odd(f)) return -detail::make_apply_node(f, neg);
    if (detail::is_even(f)) return detail::make_apply_node(f, neg);
  }
  return detail::make_apply_node(f, arg);
}

// ---------------------------------------------------------------------------------------------
// Traversal helpers

/// Rebuilds e bottom-up, replacing leaves through `leaf` (returns nullopt to keep the leaf).
inline Expr rebuild(const Expr& e, const std::function<std::optional<Expr>(const Expr&)>& leaf) {
  switch (e.kind()) {
    case Kind::Const:
    case Kind::Symbol:
    case Kind::Func: {
      auto r = leaf(e);
      return r ? *r : e;
    }
    case Kind::Apply: return Expr::apply(e.node().fn, rebuild(e.children()[0], leaf));
    case Kind::Pow: return Expr::power(rebuild(e.children()[0], leaf), e.node().exponent);
    case Kind::Product:
    case Kind::Sum: {
      std::vector<Expr> ch;
      ch.reserve(e.children().size());
      for (const auto& c : e.children()) ch.push_back(rebuild(c, leaf));
      return e.kind() == Kind::Sum ? Expr::sum(std::move(ch)) : Expr::product(std::move(ch));
    }
  }
  return e;
}

/// Simultaneous substitution of symbols, followed by canonicalization.
inline Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
  if (bindings.empty()) return e;
  return rebuild(e, [&](const Expr& leaf) -> std::optional<Expr> {
    if (leaf.kind() != Kind::Symbol) return std::nullopt;
    auto it = bindings.find(leaf.name());
    if (it == bindings.end()) return std::nullopt;
    return it->second;
  });
}

inline void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.kind() == Kind::Symbol) out.insert(e.name());
  for (const auto& c : e.children()) collect_symbols(c, out);
}

inline std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  collect_symbols(e, out);
  return out;
}

inline bool depends_on(const Expr& e, const std::string& var) {
  switch (e.kind()) {
    case Kind::Const: return false;
    case Kind::Symbol: return e.name() == var;
    case Kind::Func:
      return std::find(e.node().args.begin(), e.node().args.end(), var) != e.node().args.end();
    default:
      for (const auto& c : e.children())
        if (depends_on(c, var)) return true;
      return false;
  }
}

inline bool contains_imaginary_unit(const Expr& e) {
  if (e.is_const()) return !e.value().is_real();
  for (const auto& c : e.children())
    if (contains_imaginary_unit(c)) return true;
  return false;
}

inline bool contains_function(const Expr& e, Fn f) {
  if (e.kind() == Kind::Apply && e.node().fn == f) return true;
  for (const auto& c : e.children())
    if (contains_function(c, f)) return true;
  return false;
}

/// Converts a polynomial expression (no atoms, no negative powers of non-constants) to MultiPoly.
inline MultiPoly to_multipoly(const Expr& e) {
  switch (e.kind()) {
    case Kind::Const: return MultiPoly(e.value());
    case Kind::Symbol: return MultiPoly::variable(e.name());
    case Kind::Sum: {
      MultiPoly acc;
      for (const auto& c : e.children()) acc += to_multipoly(c);
      return acc;
    }
    case Kind::Product: {
      MultiPoly acc(1);
      for (const auto& c : e.children()) acc *= to_multipoly(c);
      return acc;
    }
    case Kind::Pow:
      if (e.node().exponent < 0) throw std::invalid_argument("to_multipoly: negative power in " + e.to_infix());
      return to_multipoly(e.children()[0]).pow(e.node().exponent);
    default: throw std::invalid_argument("to_multipoly: not a polynomial: " + e.to_infix());
  }
}

inline Expr Expr::from_poly(const MultiPoly& p) {
  std::vector<Expr> terms;
  for (const auto& t : p.terms()) {
    std::vector<Expr> fs{Expr(t.c)};
    for (std::size_t k = 0; k < p.vars().size(); ++k)
      if (t.m.e[k]) fs.push_back(power(symbol(p.vars()[k]), t.m.e[k]));
    terms.push_back(product(std::move(fs)));
  }
  return sum(std::move(terms));
}

// ---------------------------------------------------------------------------------------------
// Differentiation

namespace detail {

inline Expr differentiate_once(const Expr& e, const std::string& var) {
  switch (e.kind()) {
    case Kind::Const: return Expr(0);
    case Kind::Symbol: return Expr(e.name() == var ? 1 : 0);
    case Kind::Func: {
      const auto& args = e.node().args;
      if (std::find(args.begin(), args.end(), var) == args.end()) return Expr(0);
      DerivOrders o = e.node().orders;
      o.emplace_back(var, 1);
      return Expr::function(e.name(), args, o);
    }
    case Kind::Sum: {
      std::vector<Expr> ts;
      for (const auto& c : e.children()) ts.push_back(differentiate_once(c, var));
      return Expr::sum(std::move(ts));
    }
    case Kind::Product: {
      const auto& ch = e.children();
      std::vector<Expr> ts;
      for (std::size_t k = 0; k < ch.size(); ++k) {
        Expr dk = differentiate_once(ch[k], var);
        if (dk.is_zero()) continue;
        std::vector<Expr> fs;
        for (std::size_t j = 0; j < ch.size(); ++j) fs.push_back(j == k ? dk : ch[j]);
        ts.push_back(Expr::product(std::move(fs)));
      }
      return Expr::sum(std::move(ts));
    }
    case Kind::Pow: {
      const Expr& b = e.children()[0];
      int n = e.node().exponent;
      Expr db = differentiate_once(b, var);
      if (db.is_zero()) return Expr(0);
      return Expr::product({Expr(n), Expr::power(b, n - 1), db});
    }
    case Kind::Apply: {
      const Expr& a = e.children()[0];
      Fn f = e.node().fn;
      Expr da = differentiate_once(a, var);
      if (da.is_zero()) return Expr(0);
      if (f != Fn::Log && depends_on(da, var))
        throw std::invalid_argument(std::string("differentiate: argument of ") + fn_name(f) + " is not linear in " + var);
      switch (f) {
        case Fn::Exp: return e * da;
        case Fn::Log: return da / a;
        case Fn::Sinh: return Expr::apply(Fn::Cosh, a) * da;
        case Fn::Cosh: return Expr::apply(Fn::Sinh, a) * da;
        case Fn::Tanh: return (Expr(1) - e.pow(2)) * da;
        case Fn::Coth: return (Expr(1) - e.pow(2)) * da;
        case Fn::Sin: return Expr::apply(Fn::Cos, a) * da;
        case Fn::Cos: return -Expr::apply(Fn::Sin, a) * da;
        case Fn::Tan: return (Expr(1) + e.pow(2)) * da;
        case Fn::Cot: return -(Expr(1) + e.pow(2)) * da;
      }
    }
  }
  return Expr(0);
}

}  // namespace detail

/// Exact derivative of the given order; each step is expanded and canonicalized.
inline Expr differentiate(const Expr& e, const std::string& var, int order = 1) {
  if (order < 1) throw std::invalid_argument("differentiate: order must be positive");
  Expr r = e;
  for (int k = 0; k < order; ++k) r = expand(detail::differentiate_once(r, var));
  return r;
}

// ---------------------------------------------------------------------------------------------
// Text output

namespace detail {

inline std::string const_prefix(const GaussianRational& c) {
  if (c.is_real()) return rational_to_string(c.re());
  std::string im = c.im() == 1 ? "I" : "(* " + rational_to_string(c.im()) + " I)";
  if (sgn(c.re()) == 0) return im;
  return "(+ " + rational_to_string(c.re()) + " " + im + ")";
}

inline std::string func_prefix(const Node& n) {
  std::string args;
  for (const auto& a : n.args) args += (args.empty() ? "" : " ") + a;
  std::string out = "(D " + n.name + " (" + args + ")";
  for (const auto& [v, k] : n.orders) out += " (" + v + " " + std::to_string(k) + ")";
  return out + ")";
}

inline std::string func_infix(const Node& n) {
  std::string out = n.name;
  if (!n.orders.empty()) {
    out += "_";
    for (const auto& [v, k] : n.orders)
      for (int j = 0; j < k; ++j) out += v;
  }
  return out;
}

}  // namespace detail

inline std::string Expr::serialize() const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Const: return detail::const_prefix(n.value);
    case Kind::Symbol: return n.name;
    case Kind::Func: return detail::func_prefix(n);
    case Kind::Apply: return std::string("(") + fn_name(n.fn) + " " + n.children[0].serialize() + ")";
    case Kind::Pow: return "(^ " + n.children[0].serialize() + " " + std::to_string(n.exponent) + ")";
    case Kind::Product:
    case Kind::Sum: {
      std::string out = n.kind == Kind::Sum ? "(+" : "(*";
      for (const auto& c : n.children) out += " " + c.serialize();
      return out + ")";
    }
  }
  return "";
}

namespace detail {

inline std::string infix(const Expr& e, int parent_prec);

inline std::string const_infix(const GaussianRational& c, int parent_prec) {
  std::string s;
  if (c.is_real()) {
    s = rational_to_string(c.re());
    bool needs = (sgn(c.re()) < 0 && parent_prec > 1) || (c.re().get_den() != 1 && parent_prec > 2);
    return needs ? "(" + s + ")" : s;
  }
  s = c.to_string();
  return parent_prec > 1 || !c.is_imaginary() ? "(" + s + ")" : s;
}

// Precedence: 1 sum, 2 product, 3 power base.
inline std::string infix(const Expr& e, int parent_prec) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Const: return const_infix(n.value, parent_prec);
    case Kind::Symbol: return n.name;
    case Kind::Func: return func_infix(n);
    case Kind::Apply: return std::string(fn_name(n.fn)) + "(" + infix(n.children[0], 0) + ")";
    case Kind::Pow: {
      std::string base = infix(n.children[0], 3);
      std::string s = base + "^" + (n.exponent < 0 ? "(" + std::to_string(n.exponent) + ")" : std::to_string(n.exponent));
      return parent_prec > 2 ? "(" + s + ")" : s;
    }
    case Kind::Product: {
      std::string s;
      std::size_t start = 0;
      if (n.children.front().is_const()) {
        const auto& c = n.children.front().value();
        if (c == GaussianRational(-1)) {
          s = "-";
        } else if (c.is_real() && sgn(c.re()) < 0) {
          s = "-" + const_infix(-c, 2) + "*";
        } else {
          s = const_infix(c, 2) + "*";
        }
        start = 1;
      }
      for (std::size_t k = start; k < n.children.size(); ++k) {
        if (k > start) s += "*";
        s += infix(n.children[k], 2);
      }
      bool neg = s.front() == '-';
      return parent_prec > 1 || (neg && parent_prec > 0) ? "(" + s + ")" : s;
    }
    case Kind::Sum: {
      std::string s;
      for (std::size_t k = 0; k < n.children.size(); ++k) {
        std::string t = infix(n.children[k], 0);
        if (k == 0) {
          s = t;
        } else if (!t.empty() && t.front() == '-') {
          s += " - " + t.substr(1);
        } else {
          s += " + " + t;
        }
      }
      return parent_prec > 0 ? "(" + s + ")" : s;
    }
  }
  return "";
}

}  // namespace detail

inline std::string Expr::to_infix() const { return detail::infix(*this, 0); }

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.to_infix(); }

// ---------------------------------------------------------------------------------------------
// Parsers

namespace detail {

class InfixParser {
 public:
  explicit InfixParser(std::string_view s) : s_(s) {}
  Expr parse_all() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("expression parse error at " + std::to_string(pos_) + ": " + why);
  }
  Expr expr() {
    Expr acc = term();
    for (;;) {
      if (eat('+')) {
        acc = acc + term();
      } else if (eat('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }
  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (eat('*')) {
        acc = acc * unary();
      } else if (eat('/')) {
        acc = acc / unary();
      } else {
        return acc;
      }
    }
  }
  Expr unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Expr power() {
    Expr base = primary();
    if (eat('^')) {
      bool paren = eat('(');
      bool neg = eat('-');
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      long n = std::stol(std::string(s_.substr(start, pos_ - start)));
      if (paren && !eat(')')) fail("expected ')'");
      return Expr::power(base, neg ? -n : n);
    }
    return base;
  }
  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return Expr(GaussianRational(mpq_class(mpz_class(std::string(s_.substr(start, pos_ - start))))));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      if (name == "I") return Expr::imaginary_unit();
      if (auto f = fn_from_name(name)) {
        if (!eat('(')) fail("expected '(' after " + name);
        Expr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return Expr::apply(*f, arg);
      }
      return Expr::symbol(name);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

class PrefixParser {
 public:
  explicit PrefixParser(std::string_view s) : s_(s) {}
  Expr parse_all() {
    Expr e = item();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw std::invalid_argument("prefix parse error at " + std::to_string(pos_) + ": " + why);
  }
  std::string atom() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) && s_[pos_] != '(' && s_[pos_] != ')')
      ++pos_;
    if (start == pos_) fail("expected atom");
    return std::string(s_.substr(start, pos_ - start));
  }
  void expect(char c) {
    skip();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }
  Expr item() {
    if (!peek('(')) {
      std::string a = atom();
      if (a == "I") return Expr::imaginary_unit();
      if (std::isdigit(static_cast<unsigned char>(a[0])) || a[0] == '-')
        return Expr(GaussianRational(detail::parse_rational(a)));
      return Expr::symbol(a);
    }
    expect('(');
    std::string head = atom();
    Expr out;
    if (head == "+" || head == "*") {
      std::vector<Expr> ch;
      while (!peek(')')) ch.push_back(item());
      out = head == "+" ? Expr::sum(std::move(ch)) : Expr::product(std::move(ch));
    } else if (head == "^") {
      Expr b = item();
      out = Expr::power(b, std::stol(atom()));
    } else if (head == "D") {
      std::string name = atom();
      expect('(');
      std::vector<std::string> args;
      while (!peek(')')) args.push_back(atom());
      expect(')');
      DerivOrders orders;
      while (!peek(')')) {
        expect('(');
        std::string v = atom();
        int k = std::stoi(atom());
        expect(')');
        orders.emplace_back(v, k);
      }
      out = Expr::function(name, args, orders);
    } else if (auto f = fn_from_name(head)) {
      out = Expr::apply(*f, item());
    } else {
      fail("unknown head " + head);
    }
    expect(')');
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr Expr::parse(std::string_view text) { return detail::InfixParser(text).parse_all(); }
inline Expr Expr::deserialize(std::string_view text) { return detail::PrefixParser(text).parse_all(); }

}  // namespace kk7
