#pragma once

// Laurent polynomials in one distinguished variable (zeta) with MultiPoly coefficients.

#include "kk7/algebra/multipoly.hpp"

#include <map>
#include <string>

namespace kk7 {

class LaurentPoly {
 public:
  LaurentPoly() = default;
  LaurentPoly(MultiPoly c) {  // NOLINT(google-explicit-constructor)
    if (!c.is_zero()) coeffs_.emplace(0, std::move(c));
  }
  LaurentPoly(std::map<int, MultiPoly> coeffs) : coeffs_(std::move(coeffs)) { drop_zeros(); }  // NOLINT

  /// c * zeta^power
  static LaurentPoly monomial(int power, MultiPoly c = MultiPoly(1)) {
    LaurentPoly p;
    if (!c.is_zero()) p.coeffs_.emplace(power, std::move(c));
    return p;
  }

  const std::map<int, MultiPoly>& coefficients() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int min_power() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
  int max_power() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }
  std::size_t size() const { return coeffs_.size(); }

  MultiPoly coefficient(int power) const {
    auto it = coeffs_.find(power);
    return it == coeffs_.end() ? MultiPoly() : it->second;
  }

  /// Multiplication by zeta^m.
  LaurentPoly shifted(int m) const {
    LaurentPoly r;
    for (const auto& [k, c] : coeffs_) r.coeffs_.emplace(k + m, c);
    return r;
  }

  LaurentPoly scaled(const MultiPoly& s) const {
    if (s.is_zero()) return {};
    LaurentPoly r;
    for (const auto& [k, c] : coeffs_) {
      MultiPoly v = c * s;
      if (!v.is_zero()) r.coeffs_.emplace(k, std::move(v));
    }
    return r;
  }

  /// zeta * d/dzeta
  LaurentPoly euler_derivative() const {
    LaurentPoly r;
    for (const auto& [k, c] : coeffs_)
      if (k != 0) r.coeffs_.emplace(k, c.scaled(GaussianRational(static_cast<long>(k))));
    return r;
  }

  /// Applies f to every coefficient (e.g. reduction modulo an ideal).
  template <class F>
  LaurentPoly map_coefficients(F&& f) const {
    std::map<int, MultiPoly> out;
    for (const auto& [k, c] : coeffs_) out.emplace(k, f(c));
    return LaurentPoly(std::move(out));
  }

  LaurentPoly operator-() const { return scaled(MultiPoly(-1)); }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r = a;
    for (const auto& [k, c] : b.coeffs_) {
      auto [it, inserted] = r.coeffs_.emplace(k, c);
      if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) r.coeffs_.erase(it);
      }
    }
    return r;
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    std::map<int, MultiPoly> out;
    for (const auto& [i, ci] : a.coeffs_)
      for (const auto& [j, cj] : b.coeffs_) {
        MultiPoly prod = ci * cj;
        auto [it, inserted] = out.emplace(i + j, prod);
        if (!inserted) it->second += prod;
      }
    return LaurentPoly(std::move(out));
  }
  LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  LaurentPoly pow(int n) const {
    if (n < 0) throw std::invalid_argument("LaurentPoly::pow: negative exponent");
    LaurentPoly result(MultiPoly(1)), base(*this);
    while (n > 0) {
      if (n & 1) result *= base;
      n >>= 1;
      if (n > 0) base *= base;
    }
    return result;
  }

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string(const std::string& var = "zeta") const {
    if (coeffs_.empty()) return "0";
    std::string out;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      if (!out.empty()) out += " + ";
      out += "(" + it->second.to_string() + ")";
      if (it->first != 0) out += "*" + var + "^" + std::to_string(it->first);
    }
    return out;
  }

 private:
  void drop_zeros() {
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
      if (it->second.is_zero()) {
        it = coeffs_.erase(it);
      } else {
        ++it;
      }
    }
  }

  std::map<int, MultiPoly> coeffs_;
};

}  // namespace kk7
