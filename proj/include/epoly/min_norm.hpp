#pragma once

// Closest point to the origin of the convex hull of a finite point set,
// by Wolfe's active-set method. The active set ("corral") is always an
// affinely independent face; each minor cycle moves to the affine minimizer
// of the corral or, when that leaves the face, to the boundary and drops the
// vertices whose weight vanishes.
//
// Instantiated with Rational the iteration is exact and terminates with the
// true minimizer. With double it uses relative tolerances.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "epoly/error.hpp"
#include "epoly/exact.hpp"
#include "epoly/matrix.hpp"

namespace epoly {

template <class Scalar>
using Point = std::vector<Scalar>;

template <class Scalar>
Scalar dot(const Point<Scalar>& a, const Point<Scalar>& b) {
  Scalar s(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <class Scalar>
struct MinNormResult {
  Point<Scalar> point;
  /// Convex weights over the input points; zero outside `face`.
  std::vector<Scalar> coefficients;
  /// Indices of the input points spanning the face whose relative interior
  /// holds the minimizer.
  std::vector<std::size_t> face;
};

template <class Scalar>
Point<Scalar> combine(const std::vector<Point<Scalar>>& points,
                      const std::vector<std::size_t>& idx, const std::vector<Scalar>& w) {
  Point<Scalar> x(points[idx[0]].size(), Scalar(0));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (w[k] == Scalar(0)) continue;
    const auto& p = points[idx[k]];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += w[k] * p[i];
  }
  return x;
}

/// Weights alpha (summing to 1) of the point of least norm on the affine hull
/// of points[idx]. nullopt when those points are affinely dependent.
template <class Scalar>
std::optional<std::vector<Scalar>> affine_minimizer(const std::vector<Point<Scalar>>& points,
                                                    const std::vector<std::size_t>& idx) {
  const std::size_t m = idx.size();
  Matrix<Scalar> kkt(m + 1, m + 1, Scalar(0));
  std::vector<Scalar> rhs(m + 1, Scalar(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j)
      kkt(i, j) = kkt(j, i) = dot(points[idx[i]], points[idx[j]]);
    kkt(i, m) = kkt(m, i) = Scalar(1);
  }
  rhs[m] = Scalar(1);
  auto sol = solve_linear(std::move(kkt), std::move(rhs));
  if (!sol) return std::nullopt;
  sol->pop_back();
  return sol;
}

template <class Scalar>
MinNormResult<Scalar> min_norm_point(const std::vector<Point<Scalar>>& points) {
  require(!points.empty(), "min_norm_point of an empty point set");
  const std::size_t n = points.size();
  std::vector<Scalar> norms(n);
  Scalar max_norm(0);
  for (std::size_t j = 0; j < n; ++j) {
    norms[j] = dot(points[j], points[j]);
    if (norms[j] > max_norm) max_norm = norms[j];
  }
  // Tolerances vanish for exact scalars.
  Scalar tol_opt(0), tol_weight(0);
  if constexpr (!is_exact_v<Scalar>) {
    tol_opt = Scalar(1e-12) * max_norm;
    tol_weight = Scalar(1e-12);
  }

  std::size_t start = 0;
  for (std::size_t j = 1; j < n; ++j)
    if (norms[j] < norms[start]) start = j;
  std::vector<std::size_t> corral{start};
  std::vector<Scalar> weights{Scalar(1)};
  Point<Scalar> x = points[start];

  const std::size_t max_iterations = 64 * n + 64;
  std::size_t iterations = 0;
  for (;;) {
    // Major cycle: most violated first-order condition.
    const Scalar xx = dot(x, x);
    std::size_t best = n;
    Scalar best_val(0);
    for (std::size_t j = 0; j < n; ++j) {
      Scalar v = dot(x, points[j]);
      if (best == n || v < best_val) {
        best = j;
        best_val = v;
      }
    }
    if (best_val >= xx - tol_opt) break;
    if (std::find(corral.begin(), corral.end(), best) != corral.end()) break;
    corral.push_back(best);
    weights.push_back(Scalar(0));

    // Minor cycles.
    bool stalled = false;
    for (;;) {
      if (++iterations > max_iterations)
        throw std::runtime_error("min_norm_point failed to converge");
      auto alpha = affine_minimizer(points, corral);
      if (!alpha) {
        // Only reachable in floating point: the new vertex is numerically
        // in the affine hull of the corral. Drop it and stop.
        corral.pop_back();
        weights.pop_back();
        stalled = true;
        break;
      }
      bool interior = true;
      for (const auto& a : *alpha)
        if (a <= tol_weight) interior = false;
      if (interior) {
        weights = std::move(*alpha);
        x = combine(points, corral, weights);
        break;
      }
      Scalar theta(1);
      for (std::size_t k = 0; k < corral.size(); ++k) {
        const Scalar& a = (*alpha)[k];
        if (a > tol_weight) continue;
        const Scalar gap = weights[k] - a;
        const Scalar t = gap > Scalar(0) ? Scalar(weights[k] / gap) : Scalar(0);
        if (t < theta) theta = t;
      }
      std::vector<std::size_t> kept;
      std::vector<Scalar> kept_w;
      for (std::size_t k = 0; k < corral.size(); ++k) {
        Scalar w = theta * (*alpha)[k] + (Scalar(1) - theta) * weights[k];
        if (w > tol_weight) {
          kept.push_back(corral[k]);
          kept_w.push_back(w);
        }
      }
      if (kept.empty()) throw std::runtime_error("min_norm_point emptied its corral");
      if constexpr (!is_exact_v<Scalar>) {
        Scalar sum(0);
        for (auto w : kept_w) sum += w;
        for (auto& w : kept_w) w /= sum;
      }
      corral = std::move(kept);
      weights = std::move(kept_w);
      x = combine(points, corral, weights);
    }
    if (stalled) break;
  }
  MinNormResult<Scalar> result;
  result.point = std::move(x);
  result.coefficients.assign(n, Scalar(0));
  std::vector<std::size_t> order(corral.size());
  for (std::size_t k = 0; k < corral.size(); ++k) {
    result.coefficients[corral[k]] = weights[k];
    order[k] = corral[k];
  }
  std::sort(order.begin(), order.end());
  result.face = std::move(order);
  return result;
}

/// Optimality certificate for the closest point of conv(points): convex
/// weights reproducing the point, and point . p_j >= |point|^2 for every j.
/// Exact for rational input; `tol` is a relative slack for floating point.
template <class Scalar>
bool certify_min_norm(const std::vector<Point<Scalar>>& points, const MinNormResult<Scalar>& r,
                      double tol = 0.0) {
  const std::size_t n = points.size();
  if (r.coefficients.size() != n) return false;
  Scalar sum(0);
  Point<Scalar> x(r.point.size(), Scalar(0));
  Scalar scale(0);
  for (std::size_t j = 0; j < n; ++j) {
    if (r.coefficients[j] < Scalar(0)) return false;
    sum += r.coefficients[j];
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += r.coefficients[j] * points[j][i];
    Scalar nj = dot(points[j], points[j]);
    if (nj > scale) scale = nj;
  }
  const Scalar slack = Scalar(tol) * (scale > Scalar(0) ? scale : Scalar(1));
  auto close = [&](const Scalar& a, const Scalar& b) {
    return abs_value(Scalar(a - b)) <= slack;
  };
  if (!close(sum, Scalar(1))) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!close(x[i], r.point[i])) return false;
  const Scalar xx = dot(r.point, r.point);
  for (std::size_t j = 0; j < n; ++j)
    if (dot(r.point, points[j]) < xx - slack) return false;
  return true;
}

}  // namespace epoly
