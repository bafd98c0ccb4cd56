#pragma once

// Exact arithmetic in Q(i): a + b*i with a, b arbitrary-precision rationals.

#include <gmpxx.h>

#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kk7 {

class GaussianRational {
 public:
  GaussianRational() = default;
  GaussianRational(long v) : re_(v) {}  // NOLINT(google-explicit-constructor)
  GaussianRational(int v) : re_(v) {}   // NOLINT(google-explicit-constructor)
  GaussianRational(mpq_class re) : re_(std::move(re)) { re_.canonicalize(); }  // NOLINT
  GaussianRational(mpq_class re, mpq_class im) : re_(std::move(re)), im_(std::move(im)) {
    re_.canonicalize();
    im_.canonicalize();
  }
  GaussianRational(long num, long den) : re_(num, den) { re_.canonicalize(); }

  static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

  /// Parses "p", "p/q", "p/q*I", "I", "-I", "a+b*I" (no spaces).
  static GaussianRational parse(std::string_view text);

  const mpq_class& re() const { return re_; }
  const mpq_class& im() const { return im_; }

  bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
  bool is_one() const { return re_ == 1 && sgn(im_) == 0; }
  bool is_real() const { return sgn(im_) == 0; }
  bool is_imaginary() const { return sgn(re_) == 0 && sgn(im_) != 0; }
  bool is_integer() const { return is_real() && re_.get_den() == 1; }

  GaussianRational conj() const { return {re_, -im_}; }
  mpq_class norm() const { return re_ * re_ + im_ * im_; }

  GaussianRational operator-() const { return {-re_, -im_}; }

  GaussianRational& operator+=(const GaussianRational& o) {
    re_ += o.re_;
    if (sgn(o.im_) != 0) im_ += o.im_;
    return *this;
  }
  GaussianRational& operator-=(const GaussianRational& o) {
    re_ -= o.re_;
    if (sgn(o.im_) != 0) im_ -= o.im_;
    return *this;
  }
  GaussianRational& operator*=(const GaussianRational& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
      re_ *= o.re_;
      return *this;
    }
    mpq_class r = re_ * o.re_ - im_ * o.im_;
    mpq_class m = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }
  GaussianRational& operator/=(const GaussianRational& o) {
    if (o.is_zero()) throw std::domain_error("GaussianRational: division by zero");
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
      re_ /= o.re_;
      return *this;
    }
    mpq_class n = o.norm();
    mpq_class r = (re_ * o.re_ + im_ * o.im_) / n;
    mpq_class m = (im_ * o.re_ - re_ * o.im_) / n;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
  }

  GaussianRational inverse() const {
    GaussianRational one(1);
    one /= *this;
    return one;
  }

  /// Integer power; negative exponents invert.
  GaussianRational pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    GaussianRational result(1), base(*this);
    while (n > 0) {
      if (n & 1) result *= base;
      base *= base;
      n >>= 1;
    }
    return result;
  }

  friend GaussianRational operator+(GaussianRational a, const GaussianRational& b) { return a += b; }
  friend GaussianRational operator-(GaussianRational a, const GaussianRational& b) { return a -= b; }
  friend GaussianRational operator*(GaussianRational a, const GaussianRational& b) { return a *= b; }
  friend GaussianRational operator/(GaussianRational a, const GaussianRational& b) { return a /= b; }

  friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Total order (real part first); used only for canonical sorting.
  friend std::strong_ordering operator<=>(const GaussianRational& a, const GaussianRational& b) {
    int c = cmp(a.re_, b.re_);
    if (c == 0) c = cmp(a.im_, b.im_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  /// "Positive" in the canonical sense: first nonzero of (re, im) is positive.
  bool is_canonically_positive() const {
    int s = sgn(re_);
    if (s != 0) return s > 0;
    return sgn(im_) > 0;
  }

  std::string to_string() const;

  std::size_t hash() const {
    return std::hash<std::string>{}(re_.get_str()) * 31u + std::hash<std::string>{}(im_.get_str());
  }

 private:
  mpq_class re_{0};
  mpq_class im_{0};
};

inline std::string rational_to_string(const mpq_class& q) { return q.get_str(); }

inline std::string GaussianRational::to_string() const {
  if (sgn(im_) == 0) return rational_to_string(re_);
  std::string imag;
  if (im_ == 1) {
    imag = "I";
  } else if (im_ == -1) {
    imag = "-I";
  } else {
    imag = rational_to_string(im_) + "*I";
  }
  if (sgn(re_) == 0) return imag;
  std::string out = rational_to_string(re_);
  if (imag.front() != '-') out += '+';
  return out + imag;
}

namespace detail {
inline mpq_class parse_rational(std::string_view s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  std::string str(s);
  if (str.front() == '+') str.erase(0, 1);
  for (char ch : str) {
    if (!(std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '/'))
      throw std::invalid_argument("malformed rational literal: " + std::string(s));
  }
  mpq_class q;
  if (q.set_str(str, 10) != 0) throw std::invalid_argument("malformed rational literal: " + std::string(s));
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + std::string(s));
  q.canonicalize();
  return q;
}

// Parses an imaginary literal: "I", "-I", "p/q*I".
inline mpq_class parse_imaginary(std::string_view s) {
  if (s == "I" || s == "+I") return 1;
  if (s == "-I") return -1;
  if (s.size() < 3 || s.substr(s.size() - 2) != "*I")
    throw std::invalid_argument("malformed imaginary literal: " + std::string(s));
  return parse_rational(s.substr(0, s.size() - 2));
}
}  // namespace detail

inline GaussianRational GaussianRational::parse(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty number");
  if (text.back() != 'I') return {detail::parse_rational(text), mpq_class(0)};
  // Split at the last sign that is not the leading character.
  std::size_t split = std::string_view::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != '/') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) return {mpq_class(0), detail::parse_imaginary(text)};
  return {detail::parse_rational(text.substr(0, split)), detail::parse_imaginary(text.substr(split))};
}

inline std::ostream& operator<<(std::ostream& os, const GaussianRational& q) { return os << q.to_string(); }

}  // namespace kk7
