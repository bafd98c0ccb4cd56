#pragma once

// Dense exponent vectors and monomial orders.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace kk7 {

inline constexpr std::size_t kMaxVars = 16;

/// Exponent vector over at most kMaxVars indeterminates; slots past the ring size stay zero.
struct Monomial {
  std::array<std::uint16_t, kMaxVars> e{};
  std::uint32_t deg = 0;

  static Monomial one() { return {}; }
  static Monomial var(std::size_t index, std::uint16_t power = 1) {
    if (index >= kMaxVars) throw std::out_of_range("Monomial: too many variables");
    Monomial m;
    m.e[index] = power;
    m.deg = power;
    return m;
  }

  bool is_one() const { return deg == 0; }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t k = 0; k < kMaxVars; ++k) {
      std::uint32_t s = std::uint32_t(a.e[k]) + b.e[k];
      if (s > 0xFFFFu) throw std::overflow_error("Monomial: exponent overflow");
      r.e[k] = static_cast<std::uint16_t>(s);
    }
    r.deg = a.deg + b.deg;
    return r;
  }

  bool divides(const Monomial& b) const {
    if (deg > b.deg) return false;
    for (std::size_t k = 0; k < kMaxVars; ++k)
      if (e[k] > b.e[k]) return false;
    return true;
  }

  /// b / a; requires a.divides(b).
  friend Monomial quotient(const Monomial& b, const Monomial& a) {
    Monomial r;
    for (std::size_t k = 0; k < kMaxVars; ++k) r.e[k] = static_cast<std::uint16_t>(b.e[k] - a.e[k]);
    r.deg = b.deg - a.deg;
    return r;
  }

  friend Monomial lcm(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t k = 0; k < kMaxVars; ++k) {
      r.e[k] = std::max(a.e[k], b.e[k]);
      r.deg += r.e[k];
    }
    return r;
  }

  friend Monomial gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    for (std::size_t k = 0; k < kMaxVars; ++k) {
      r.e[k] = std::min(a.e[k], b.e[k]);
      r.deg += r.e[k];
    }
    return r;
  }

  friend bool coprime(const Monomial& a, const Monomial& b) {
    for (std::size_t k = 0; k < kMaxVars; ++k)
      if (a.e[k] != 0 && b.e[k] != 0) return false;
    return true;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) { return a.deg == b.deg && a.e == b.e; }
};

/// Term orders. `Block` compares the first `block` variables by grevlex and breaks ties with
/// grevlex on the rest, which makes it an elimination order for the leading block.
struct MonomialOrder {
  enum class Kind { Lex, GrevLex, Block };
  Kind kind = Kind::GrevLex;
  std::size_t block = 0;

  static MonomialOrder lex() { return {Kind::Lex, 0}; }
  static MonomialOrder grevlex() { return {Kind::GrevLex, 0}; }
  static MonomialOrder eliminate_first(std::size_t count) { return {Kind::Block, count}; }

  /// Negative / zero / positive as a < b, a == b, a > b.
  int compare(const Monomial& a, const Monomial& b, std::size_t nvars) const {
    switch (kind) {
      case Kind::Lex:
        for (std::size_t k = 0; k < nvars; ++k)
          if (a.e[k] != b.e[k]) return a.e[k] > b.e[k] ? 1 : -1;
        return 0;
      case Kind::GrevLex:
        return grevlex_range(a, b, 0, nvars, a.deg, b.deg);
      case Kind::Block: {
        std::uint32_t da = 0, db = 0;
        for (std::size_t k = 0; k < block; ++k) {
          da += a.e[k];
          db += b.e[k];
        }
        int c = grevlex_range(a, b, 0, block, da, db);
        if (c != 0) return c;
        return grevlex_range(a, b, block, nvars, a.deg - da, b.deg - db);
      }
    }
    return 0;
  }

  friend bool operator==(const MonomialOrder&, const MonomialOrder&) = default;

 private:
  static int grevlex_range(const Monomial& a, const Monomial& b, std::size_t lo, std::size_t hi,
                           std::uint32_t da, std::uint32_t db) {
    if (da != db) return da > db ? 1 : -1;
    for (std::size_t k = hi; k-- > lo;)
      if (a.e[k] != b.e[k]) return a.e[k] < b.e[k] ? 1 : -1;
    return 0;
  }
};

}  // namespace kk7
