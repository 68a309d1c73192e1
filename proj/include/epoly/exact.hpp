#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "epoly/error.hpp"
#include "epoly/matrix.hpp"

namespace epoly {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

template <class T>
inline constexpr bool is_exact_v = !std::is_floating_point_v<T>;

inline BigInt numerator(const Rational& r) {
  return boost::multiprecision::numerator(r);
}
inline BigInt denominator(const Rational& r) {
  return boost::multiprecision::denominator(r);
}

/// "n/d" in lowest terms, or "n" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Parses "n/d" or a bare integer "n".
inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(BigInt(std::string(text)));
    BigInt num(std::string(text.substr(0, slash)));
    BigInt den(std::string(text.substr(slash + 1)));
    require(den != 0, "zero denominator in rational \"" + std::string(text) + "\"");
    return Rational(num, den);
  } catch (const std::runtime_error&) {
    throw PreconditionError("malformed rational \"" + std::string(text) + "\"");
  }
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

template <class T>
T abs_value(const T& x) {
  return x < T(0) ? T(-x) : x;
}

/// Exact determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination. Every intermediate is a minor of the input, so each division
/// is exact. The empty matrix has determinant 1.
template <class Int>
BigInt det_exact(const Matrix<Int>& input) {
  require(input.square(), "determinant of a non-square matrix");
  const std::size_t n = input.rows();
  if (n == 0) return BigInt(1);
  Matrix<BigInt> m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = BigInt(input(i, j));

  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && m(r, k) == 0) ++r;
      if (r == n) return BigInt(0);
      m.swap_rows(k, r);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  BigInt det = m(n - 1, n - 1);
  return sign < 0 ? BigInt(-det) : det;
}

/// Solves A x = b by Gaussian elimination. Exact scalars pivot on the first
/// nonzero entry; floating point uses partial pivoting with a relative
/// singularity threshold. Returns nullopt for a singular system.
template <class Scalar>
std::optional<std::vector<Scalar>> solve_linear(Matrix<Scalar> a, std::vector<Scalar> b) {
  require(a.square() && a.rows() == b.size(), "solve_linear shape mismatch");
  const std::size_t n = a.rows();
  Scalar scale(0);
  if constexpr (!is_exact_v<Scalar>) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  }
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    if constexpr (is_exact_v<Scalar>) {
      while (piv < n && a(piv, k) == Scalar(0)) ++piv;
      if (piv == n) return std::nullopt;
    } else {
      for (std::size_t r = k + 1; r < n; ++r)
        if (std::abs(a(r, k)) > std::abs(a(piv, k))) piv = r;
      if (std::abs(a(piv, k)) <= 1e-13 * scale) return std::nullopt;
    }
    a.swap_rows(k, piv);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == Scalar(0)) continue;
      Scalar f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      b[i] -= f * b[k];
      a(i, k) = Scalar(0);
    }
  }
  std::vector<Scalar> x(n);
  for (std::size_t i = n; i-- > 0;) {
    Scalar s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace epoly
