#pragma once

// Independent brute-force oracles shared by the unit and acceptance suites.

#include <algorithm>
#include <array>
#include <set>
#include <vector>

#include "epoly/exact.hpp"

namespace oracle {

using epoly::Rational;

using Vec3 = std::array<Rational, 3>;

inline Rational dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 sub3(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 lerp3(const Vec3& a, const Vec3& b, const Rational& t) {
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}

// Closest point of a triangle to the origin by checking every face.
inline Vec3 naive_closest(const std::array<Vec3, 3>& p) {
  std::vector<Vec3> candidates(p.begin(), p.end());
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const Vec3 d = sub3(p[j], p[i]);
      const Rational dd = dot3(d, d);
      const Rational t = -dot3(p[i], d) / dd;
      if (t > 0 && t < 1) candidates.push_back(lerp3(p[i], p[j], t));
    }
  // Interior: x = p0 + s e1 + t e2 with x . e1 = x . e2 = 0.
  const Vec3 e1 = sub3(p[1], p[0]), e2 = sub3(p[2], p[0]);
  const Rational a = dot3(e1, e1), b = dot3(e1, e2), c = dot3(e2, e2);
  const Rational r1 = -dot3(p[0], e1), r2 = -dot3(p[0], e2);
  const Rational det = a * c - b * b;
  if (det != 0) {
    const Rational s = (r1 * c - b * r2) / det, t = (a * r2 - b * r1) / det;
    if (s > 0 && t > 0 && s + t < 1)
      candidates.push_back({p[0][0] + s * e1[0] + t * e2[0], p[0][1] + s * e1[1] + t * e2[1],
                            p[0][2] + s * e1[2] + t * e2[2]});
  }
  return *std::min_element(candidates.begin(), candidates.end(),
                           [](const Vec3& x, const Vec3& y) { return dot3(x, x) < dot3(y, y); });
}

// Critical spectra of the 3-cube from all 56 vertex triples, plus the
// origin and the separable point.
inline std::set<std::vector<Rational>> naive_l3_spectra() {
  std::set<std::vector<Rational>> out;
  out.insert({0, 0, 0});
  out.insert({Rational(1, 2), Rational(1, 2), Rational(1, 2)});
  for (int a = 0; a < 8; ++a)
    for (int b = a + 1; b < 8; ++b)
      for (int c = b + 1; c < 8; ++c) {
        std::array<Vec3, 3> p;
        const int codes[3] = {a, b, c};
        for (int k = 0; k < 3; ++k)
          for (int i = 0; i < 3; ++i)
            p[k][i] = ((codes[k] >> i) & 1) ? Rational(-1, 2) : Rational(1, 2);
        const Rational det = p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1]) -
                             p[0][1] * (p[1][0] * p[2][2] - p[1][2] * p[2][0]) +
                             p[0][2] * (p[1][0] * p[2][1] - p[1][1] * p[2][0]);
        if (det == 0) continue;
        const Vec3 x = naive_closest(p);
        if (x[0] < 0 || x[1] < 0 || x[2] < 0) continue;
        const int pinned = (x[0] == Rational(1, 2)) + (x[1] == Rational(1, 2)) + (x[2] == Rational(1, 2));
        if (pinned >= 2) continue;
        out.insert({x[0], x[1], x[2]});
      }
  return out;
}

}  // namespace oracle
