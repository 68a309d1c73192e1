#pragma once

// Gaussian random-matrix counterparts of the hypercube distance problem.
//
// With v_1..v_L i.i.d. N(0, I_L) vectors, G = G(v_1..v_L) is Wishart W(L, I)
// and its Cholesky factor T has T_ii^2 ~ Gamma((L - i + 1)/2, 1/2) (Bartlett),
// so |G| / |G^[L,L]| = T_LL^2 ~ Gamma(1/2, 1/2). Replacing the vectors by
// edge vectors amounts to G' = A^t G A with A the identity whose last row is
// all -1; G' is W(L, Sigma), Sigma = A^t A, whose Cholesky factor R has
// R_LL^2 = 1/L. The simplex height from Gaussian vertices is therefore
// Gamma(1/2, L/2), and a quarter of it is Gamma(1/2, 2L).
//
// All gamma laws are in RATE form (see GammaLaw).

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "epoly/error.hpp"
#include "epoly/exact.hpp"
#include "epoly/matrix.hpp"
#include "epoly/parallel.hpp"
#include "epoly/rng.hpp"
#include "epoly/statistics.hpp"

namespace epoly {

inline constexpr std::size_t kEnsembleChunk = 1024;

/// log |det M| from an LU factorization with partial pivoting, accumulated in
/// log space so that determinants far outside double range (|G| grows like
/// L^L) still give finite ratios. -inf for an exactly singular matrix.
inline double log_abs_det(const Eigen::MatrixXd& m) {
  require(m.rows() == m.cols(), "log_abs_det of a non-square matrix");
  if (m.rows() == 0) return 0.0;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  double s = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += std::log(std::abs(lu.matrixLU()(i, i)));
  return s;
}

/// |G| / |G^[L,L]| with G^[L,L] the leading (L-1) x (L-1) block.
inline double corner_ratio(const Eigen::MatrixXd& g) {
  const Eigen::Index n = g.rows();
  return std::exp(log_abs_det(g) - log_abs_det(g.topLeftCorner(n - 1, n - 1)));
}

/// L x L matrix of i.i.d. standard normals; column k is the vector v_k.
inline Eigen::MatrixXd gaussian_matrix(int L, rng::Engine& engine, rng::NormalSampler& normal) {
  Eigen::MatrixXd v(L, L);
  for (int j = 0; j < L; ++j)
    for (int i = 0; i < L; ++i) v(i, j) = normal(engine);
  return v;
}

class LowerTriangular {
 public:
  explicit LowerTriangular(Eigen::MatrixXd m) : m_(std::move(m)) {
    require(m_.rows() == m_.cols(), "lower-triangular matrix must be square");
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
      for (Eigen::Index j = i + 1; j < m_.cols(); ++j)
        require(m_(i, j) == 0.0, "matrix has entries above the diagonal");
  }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  Eigen::Index size() const { return m_.rows(); }
  /// T T^t.
  Eigen::MatrixXd gram() const { return m_ * m_.transpose(); }

 private:
  Eigen::MatrixXd m_;
};

/// Bartlett factor of a W(L, I) matrix: T_ii^2 ~ Gamma((L - i + 1)/2, 1/2)
/// (i 1-based), entries below the diagonal N(0, 1), all independent.
inline LowerTriangular bartlett_sample(int L, rng::Engine& engine, rng::NormalSampler& normal) {
  require(L >= 1, "L must be positive");
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(L, L);
  for (int i = 0; i < L; ++i) {
    t(i, i) = std::sqrt(rng::sample_gamma(engine, normal, 0.5 * (L - i), 0.5));
    for (int j = 0; j < i; ++j) t(i, j) = normal(engine);
  }
  return LowerTriangular(std::move(t));
}

inline LowerTriangular bartlett_sample(int L, std::uint64_t seed) {
  rng::Engine engine = rng::make_engine(seed, rng::stream_tag("ensembles/bartlett"), 0);
  rng::NormalSampler normal;
  return bartlett_sample(L, engine, normal);
}

/// Identity with its last row replaced by -1's; det(A) = -1.
inline Matrix<long long> transform_matrix_A(int L) {
  require(L >= 1, "L must be positive");
  auto a = Matrix<long long>::identity(static_cast<std::size_t>(L));
  for (int j = 0; j < L; ++j) a(static_cast<std::size_t>(L - 1), static_cast<std::size_t>(j)) = -1;
  return a;
}

inline Eigen::MatrixXd to_eigen(const Matrix<long long>& m) {
  Eigen::MatrixXd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(m(i, j));
  return e;
}

/// Sigma = A^t A.
inline Eigen::MatrixXd transform_sigma(int L) {
  const Eigen::MatrixXd a = to_eigen(transform_matrix_A(L));
  return a.transpose() * a;
}

/// R_LL^2 for the Cholesky factor R of Sigma = A^t A; equals 1/L.
inline double sigma_cholesky_check(int L) {
  Eigen::LLT<Eigen::MatrixXd> llt(transform_sigma(L));
  if (llt.info() != Eigen::Success) throw std::runtime_error("Cholesky of Sigma failed");
  const double r = llt.matrixL()(L - 1, L - 1);
  return r * r;
}

namespace detail {

/// Fills n draws of `draw` (which returns NaN for a rejected draw) across
/// fixed chunks; rejected draws are redrawn and counted.
template <class Draw>
DistanceSampleSet chunked_samples(int L, std::size_t n, std::uint64_t seed, std::uint64_t tag,
                                  int threads, const char* source, Draw&& draw) {
  require(n >= 1, "sample count must be at least 1");
  struct Part {
    std::vector<double> values;
    std::uint64_t skipped = 0;
  };
  const std::size_t chunks = (n + kEnsembleChunk - 1) / kEnsembleChunk;
  auto parts = parallel_chunks<Part>(chunks, threads, [&](std::size_t c) {
    Part p;
    rng::Engine engine = rng::make_engine(seed, tag, c);
    rng::NormalSampler normal;
    const std::size_t count = std::min(kEnsembleChunk, n - c * kEnsembleChunk);
    p.values.reserve(count);
    while (p.values.size() < count) {
      const double v = draw(engine, normal);
      if (std::isfinite(v))
        p.values.push_back(v);
      else
        ++p.skipped;
    }
    return p;
  });
  DistanceSampleSet out;
  out.meta = {L, static_cast<std::uint64_t>(n), seed, source, 0, 0};
  out.values.reserve(n);
  for (auto& p : parts) {
    out.values.insert(out.values.end(), p.values.begin(), p.values.end());
    out.meta.skipped += p.skipped;
  }
  return out;
}

inline double finite_or_nan(double x) {
  return std::isfinite(x) && x > 0 ? x : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

/// n draws of |G| / |G^[L,L]| for Gram matrices of L i.i.d. N(0, I_L)
/// vectors; distributed as Gamma(1/2, 1/2).
inline DistanceSampleSet gram_ratio_gaussian(int L, std::size_t n, std::uint64_t seed,
                                             int threads = 1) {
  require(L >= 1, "L must be positive");
  return detail::chunked_samples(
      L, n, seed, rng::stream_tag("ensembles/gram_ratio"), threads, "gram-ratio",
      [L](rng::Engine& e, rng::NormalSampler& normal) {
        const Eigen::MatrixXd v = gaussian_matrix(L, e, normal);
        return detail::finite_or_nan(corner_ratio(v.transpose() * v));
      });
}

/// n draws of the Bartlett corner T_LL^2.
inline DistanceSampleSet bartlett_corner_samples(int L, std::size_t n, std::uint64_t seed,
                                                 int threads = 1) {
  return detail::chunked_samples(L, n, seed, rng::stream_tag("ensembles/bartlett_corner"),
                                 threads, "bartlett-corner",
                                 [L](rng::Engine& e, rng::NormalSampler& normal) {
                                   const double t = bartlett_sample(L, e, normal)(L - 1, L - 1);
                                   return t * t;
                                 });
}

/// n draws of tr(T T^t) for Bartlett factors; mean L^2.
inline DistanceSampleSet bartlett_trace_samples(int L, std::size_t n, std::uint64_t seed,
                                                int threads = 1) {
  return detail::chunked_samples(L, n, seed, rng::stream_tag("ensembles/bartlett_trace"),
                                 threads, "bartlett-trace",
                                 [L](rng::Engine& e, rng::NormalSampler& normal) {
                                   return bartlett_sample(L, e, normal).matrix().squaredNorm();
                                 });
}

/// n draws of |v|^2 for v ~ N(0, I_L); chi-squared with L degrees of freedom.
inline DistanceSampleSet column_norm_samples(int L, std::size_t n, std::uint64_t seed,
                                             int threads = 1) {
  return detail::chunked_samples(L, n, seed, rng::stream_tag("ensembles/column_norm"), threads,
                                 "column-norm", [L](rng::Engine& e, rng::NormalSampler& normal) {
                                   double s = 0;
                                   for (int i = 0; i < L; ++i) {
                                     const double x = normal(e);
                                     s += x * x;
                                   }
                                   return s;
                                 });
}

enum class TransformPath {
  /// Wishart W(L, Sigma) Gram matrix, corner ratio |G| / |G^[L,L]|.
  kDirect,
  /// Gaussian vertices, |G(v)| / |G(v_1 - v_L, .., v_{L-1} - v_L)|.
  kDifference,
};

inline const char* to_string(TransformPath p) {
  return p == TransformPath::kDirect ? "direct" : "difference";
}

/// Both paths are distributed as Gamma(1/2, L/2) = chi^2_1 / L.
///
/// In the direct path the Gram matrix is W^t W where the ROWS of W are
/// i.i.d. N(0, Sigma), i.e. W = Z R^t with Z standard normal and R R^t =
/// Sigma. Equivalently the L vectors w_j (columns of W) are jointly Gaussian
/// with Cov(w_i, w_j) = Sigma_ij I, which makes W^t W ~ W(L, Sigma).
inline DistanceSampleSet transformed_gram_ratio(int L, std::size_t n, std::uint64_t seed,
                                                TransformPath path, int threads = 1) {
  require(L >= 1, "L must be positive");
  if (path == TransformPath::kDirect) {
    Eigen::LLT<Eigen::MatrixXd> llt(transform_sigma(L));
    const Eigen::MatrixXd r = llt.matrixL();
    return detail::chunked_samples(
        L, n, seed, rng::stream_tag("ensembles/transformed_direct"), threads, "direct",
        [L, r](rng::Engine& e, rng::NormalSampler& normal) {
          const Eigen::MatrixXd w = gaussian_matrix(L, e, normal) * r.transpose();
          return detail::finite_or_nan(corner_ratio(w.transpose() * w));
        });
  }
  return detail::chunked_samples(
      L, n, seed, rng::stream_tag("ensembles/transformed_difference"), threads, "difference",
      [L](rng::Engine& e, rng::NormalSampler& normal) {
        const Eigen::MatrixXd v = gaussian_matrix(L, e, normal);
        const Eigen::MatrixXd diff =
            v.leftCols(L - 1).colwise() - v.col(L - 1);
        return detail::finite_or_nan(
            std::exp(log_abs_det(v.transpose() * v) - log_abs_det(diff.transpose() * diff)));
      });
}

/// i.i.d. Gamma(alpha, beta) draws, beta a RATE.
inline DistanceSampleSet gamma_sampler(const GammaLaw& law, std::size_t n, std::uint64_t seed,
                                       int threads = 1) {
  return detail::chunked_samples(0, n, seed, rng::stream_tag("ensembles/gamma"), threads,
                                 "gamma", [law](rng::Engine& e, rng::NormalSampler& normal) {
                                   return rng::sample_gamma(e, normal, law.alpha, law.beta);
                                 });
}

}  // namespace epoly
