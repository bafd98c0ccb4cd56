#pragma once

// The seventh-order KdV family
//   u_t + a u^3 u_x + b u_x^3 + c u u_x u_xx + d u^2 u_xxx + e u_xx u_xxx + f u_x u_4x
//       + g u u_5x + u_7x = 0,
// its named members, the traveling-wave reduction and the conservation form.

#include "kk7/symbolic/expr.hpp"

#include <array>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kk7 {

/// Coefficients (a, ..., g); symbolically they are called a1..a7.
struct PdeCoefficients {
  std::array<GaussianRational, 7> c;

  const GaussianRational& operator[](std::size_t k) const { return c[k]; }
  friend bool operator==(const PdeCoefficients&, const PdeCoefficients&) = default;

  /// "2016,630,2268,504,252,147,42" (exact rationals, "p/q" allowed).
  static PdeCoefficients parse(std::string_view text) {
    PdeCoefficients out;
    std::size_t k = 0, start = 0;
    for (std::size_t pos = 0; pos <= text.size(); ++pos) {
      if (pos != text.size() && text[pos] != ',') continue;
      if (k == 7) throw std::invalid_argument("expected exactly seven coefficients");
      out.c[k++] = GaussianRational::parse(text.substr(start, pos - start));
      start = pos + 1;
    }
    if (k != 7) throw std::invalid_argument("expected exactly seven coefficients");
    return out;
  }

  std::string to_string() const {
    std::string out;
    for (std::size_t k = 0; k < 7; ++k) out += (k ? "," : "") + c[k].to_string();
    return out;
  }
};

inline PdeCoefficients make_coefficients(long a, long b, long c, long d, long e, long f, long g) {
  return {{GaussianRational(a), GaussianRational(b), GaussianRational(c), GaussianRational(d), GaussianRational(e),
           GaussianRational(f), GaussianRational(g)}};
}

/// Named members: ski7 (Sawada-Kotera-Ito), lax7 (Lax), kk7 (Kaup-Kupershmidt).
inline PdeCoefficients preset(std::string_view name) {
  if (name == "kk7") return make_coefficients(2016, 630, 2268, 504, 252, 147, 42);
  if (name == "lax7") return make_coefficients(140, 70, 280, 70, 70, 42, 14);
  if (name == "ski7") return make_coefficients(252, 63, 378, 126, 63, 42, 21);
  throw std::invalid_argument("unknown equation preset '" + std::string(name) + "' (expected ski7, lax7 or kk7)");
}

/// A preset name or seven comma-separated rationals.
inline PdeCoefficients coefficients_from_string(std::string_view s) {
  if (s.find(',') == std::string_view::npos) return preset(s);
  return PdeCoefficients::parse(s);
}

inline Expr u_x(int n) {
  if (n == 0) return Expr::function("u", {"x", "t"});
  return Expr::function("u", {"x", "t"}, {{"x", n}});
}
inline Expr u_t() { return Expr::function("u", {"x", "t"}, {{"t", 1}}); }

inline Expr v_xi(int n) {
  if (n == 0) return Expr::function("v", {"xi"});
  return Expr::function("v", {"xi"}, {{"xi", n}});
}

/// The seven nonlinear terms paired with their coefficients, in the order a..g.
inline std::array<Expr, 7> pde_term_shapes() {
  const Expr u = u_x(0);
  return {u.pow(3) * u_x(1),     u_x(1).pow(3),     u * u_x(1) * u_x(2), u.pow(2) * u_x(3),
          u_x(2) * u_x(3),       u_x(1) * u_x(4),   u * u_x(5)};
}

/// u_t + sum_k coeff_k * shape_k + u_7x
inline Expr build_pde(const PdeCoefficients& k) {
  auto shapes = pde_term_shapes();
  std::vector<Expr> terms{u_t(), u_x(7)};
  for (std::size_t j = 0; j < 7; ++j) terms.push_back(Expr(k[j]) * shapes[j]);
  return Expr::sum(std::move(terms));
}

struct TravelingWaveOde {
  Expr residual;  // in v(xi) and its derivatives
  std::string speed = "lambda";
};

/// u(x,t) = v(xi), xi = x + lambda t: d/dx -> d/dxi, d/dt -> lambda d/dxi.
inline TravelingWaveOde reduce_to_traveling_ode(const Expr& pde, const std::string& speed = "lambda") {
  const Expr lambda = Expr::symbol(speed);
  Expr r = rebuild(pde, [&](const Expr& leaf) -> std::optional<Expr> {
    if (leaf.kind() != Kind::Func || leaf.name() != "u") return std::nullopt;
    int nx = 0, nt = 0;
    for (const auto& [v, k] : leaf.node().orders) {
      if (v == "x") {
        nx = k;
      } else if (v == "t") {
        nt = k;
      } else {
        throw std::invalid_argument("reduce_to_traveling_ode: unexpected derivative in " + v);
      }
    }
    return lambda.pow(nt) * v_xi(nx + nt);
  });
  return {expand(r), speed};
}

/// Flux F with u_t + dF/dx = 0 along solutions, i.e. dF/dx equals every term but u_t.
/// Each term shape is integrated by parts; all shapes are exact derivatives except for
/// multiples of u_x^3, which cancel exactly when b - c/2 + d = 0.
inline std::optional<Expr> flux_decompose(const PdeCoefficients& k) {
  GaussianRational obstruction = k[1] - k[2] / GaussianRational(2) + k[3];
  if (!obstruction.is_zero()) return std::nullopt;
  const Expr u = u_x(0), ux = u_x(1), uxx = u_x(2), u3 = u_x(3), u4 = u_x(4);
  const Expr half = Expr::rational(1, 2);
  std::array<Expr, 7> antiderivative = {
      Expr::rational(1, 4) * u.pow(4),                  // u^3 u_x
      Expr(0),                                          // u_x^3 (remainder only)
      half * u * ux.pow(2),                             // u u_x u_xx = (u u_x^2/2)' - u_x^3/2
      u.pow(2) * uxx - u * ux.pow(2),                   // u^2 u_xxx = (u^2 u_xx - u u_x^2)' + u_x^3
      half * uxx.pow(2),                                // u_xx u_xxx
      ux * u3 - half * uxx.pow(2),                      // u_x u_4x
      u * u4 - ux * u3 + half * uxx.pow(2),             // u u_5x
  };
  std::vector<Expr> terms{u_x(6)};
  for (std::size_t j = 0; j < 7; ++j) terms.push_back(Expr(k[j]) * antiderivative[j]);
  return expand(Expr::sum(std::move(terms)));
}

}  // namespace kk7
