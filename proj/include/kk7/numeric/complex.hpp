#pragma once

// Minimal complex arithmetic over an arbitrary real type (double or a multiprecision float);
// std::complex is only specified for the built-in floating types.

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <ostream>

namespace kk7 {

using HpFloat = boost::multiprecision::mpfr_float;

/// Sets the working precision (decimal digits) of newly created HpFloat values.
inline void set_precision(unsigned digits) { HpFloat::default_precision(digits); }

template <class T>
struct Complex {
  T re{0}, im{0};

  Complex() = default;
  Complex(T r) : re(std::move(r)), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}
  Complex(long r) : re(r), im(0) {}  // NOLINT(google-explicit-constructor)
  Complex(int r) : re(r), im(0) {}   // NOLINT(google-explicit-constructor)

  Complex operator-() const { return {-re, -im}; }
  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
  Complex& operator/=(const Complex& o) { return *this = *this / o; }

  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator/(const Complex& a, const Complex& b) {
    T d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
  }
};

template <class T>
T abs(const Complex<T>& z) {
  using std::hypot;
  return hypot(z.re, z.im);
}

template <class T>
Complex<T> exp(const Complex<T>& z) {
  using std::cos;
  using std::exp;
  using std::sin;
  T m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

template <class T>
Complex<T> log(const Complex<T>& z) {
  using std::atan2;
  using std::log;
  return {log(abs(z)), atan2(z.im, z.re)};
}

template <class T>
Complex<T> sinh(const Complex<T>& z) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  return {sinh(z.re) * cos(z.im), cosh(z.re) * sin(z.im)};
}

template <class T>
Complex<T> cosh(const Complex<T>& z) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  return {cosh(z.re) * cos(z.im), sinh(z.re) * sin(z.im)};
}

template <class T>
Complex<T> sin(const Complex<T>& z) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  return {sin(z.re) * cosh(z.im), cos(z.re) * sinh(z.im)};
}

template <class T>
Complex<T> cos(const Complex<T>& z) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  return {cos(z.re) * cosh(z.im), -(sin(z.re) * sinh(z.im))};
}

template <class T>
Complex<T> pow(const Complex<T>& z, long n) {
  if (n < 0) return Complex<T>(1) / pow(z, -n);
  Complex<T> result(1), base(z);
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Complex<T>& z) {
  return os << "(" << z.re << ", " << z.im << ")";
}

using HpComplex = Complex<HpFloat>;

}  // namespace kk7
