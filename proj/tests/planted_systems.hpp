#pragma once

// Random zero-dimensional systems with a planted Q(i) root, and variety membership by
// substitution (shared by the solver tests and the acceptance run).

#include "kk7/solver/solve.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace kk7::oracle {

using Point = std::map<std::string, MultiPoly>;

struct PlantedSystem {
  PolySystem system;
  Point root;
};

// A variety contains a point when the bound values agree and the relations vanish there.
inline bool contains(const SolutionVariety& v, const Point& point) {
  Point free;
  for (const auto& f : v.free_parameters) {
    auto it = point.find(f);
    if (it == point.end()) return false;
    free[f] = it->second;
  }
  for (const auto& [name, val] : v.values) {
    auto it = point.find(name);
    if (it == point.end() || !(val.substitute(free) == it->second)) return false;
  }
  for (const auto& rel : v.relations)
    if (!rel.substitute(point).is_zero()) return false;
  return true;
}

inline bool any_contains(const std::vector<SolutionVariety>& vs, const Point& point) {
  return std::any_of(vs.begin(), vs.end(), [&](const SolutionVariety& v) { return contains(v, point); });
}

// Triangular quadratics T_k = (x_k - p_k)(x_k - q_k) + sum_{j<k} r_kj (x_j - p_j) in 1..3
// variables, mixed by an invertible integer matrix so the solver sees no triangular structure.
inline std::vector<PlantedSystem> planted_systems(int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> small(-3, 3), nvars(1, 3), den(1, 3);
  const std::vector<std::string> names{"x", "y", "z"};
  std::vector<PlantedSystem> out;
  for (int trial = 0; trial < count; ++trial) {
    int n = nvars(rng);
    std::vector<std::string> vars(names.begin(), names.begin() + n);
    Point point;
    for (const auto& v : vars)
      point[v] = MultiPoly(GaussianRational(mpq_class(small(rng), den(rng)), mpq_class(small(rng) % 2)));
    std::vector<MultiPoly> tri;
    for (int k = 0; k < n; ++k) {
      MultiPoly xk = MultiPoly::variable(vars[k]);
      MultiPoly t = (xk - point[vars[k]]) * (xk - MultiPoly(GaussianRational(mpq_class(small(rng), den(rng)))));
      for (int j = 0; j < k; ++j) t += (MultiPoly::variable(vars[j]) - point[vars[j]]).scaled(GaussianRational(small(rng)));
      tri.push_back(t);
    }
    std::vector<std::vector<long>> m(n, std::vector<long>(n));
    auto det = [&]() {
      if (n == 1) return m[0][0];
      if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    do {
      for (auto& row : m)
        for (auto& x : row) x = small(rng);
    } while (det() == 0);
    PlantedSystem p;
    p.system.unknowns = vars;
    p.root = point;
    for (int e = 0; e < n; ++e) {
      MultiPoly eq;
      for (int k = 0; k < n; ++k) eq += tri[k].scaled(GaussianRational(m[e][k]));
      p.system.add_equation(eq);
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace kk7::oracle
