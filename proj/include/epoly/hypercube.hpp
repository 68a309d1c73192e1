#pragma once

// Exact combinatorics over L-subsets of hypercube vertices: Gram matrices,
// determinants, the simplex-height formula, exhaustive enumeration (with
// optional hyperoctahedral reduction) and reproducible uniform sampling.

#include <cstdint>
#include <vector>

#include "epoly/error.hpp"
#include "epoly/exact.hpp"
#include "epoly/matrix.hpp"
#include "epoly/rng.hpp"
#include "epoly/sign_vector.hpp"
#include "epoly/symmetry.hpp"

namespace epoly {

/// G_ij = v_i . v_j for +-1 vertices. Diagonal L, entries congruent to L mod 2.
using GramMatrixInt = Matrix<std::int64_t>;

inline GramMatrixInt gram(const VertexSubset& s) {
  const std::size_t n = s.size();
  GramMatrixInt g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) g(i, j) = g(j, i) = dot(s[i], s[j]);
  return g;
}

/// Gram matrix of the edge vectors v_i - v_L, i < L.
inline GramMatrixInt difference_gram(const VertexSubset& s) {
  const std::size_t n = s.size() - 1;
  const SignVector& last = s[n];
  const std::int64_t L = s.length();
  GramMatrixInt g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      // (a - c).(b - c) = a.b - a.c - b.c + L
      g(i, j) = g(j, i) = dot(s[i], s[j]) - dot(s[i], last) - dot(s[j], last) + L;
    }
  return g;
}

inline bool is_independent(const VertexSubset& s) {
  return det_exact(s.vertex_matrix()) != 0;
}

/// Squared height d_C^2 of the simplex spanned by the origin and the +-1
/// vertices, measured from the origin:
///   |G(v_1..v_L)| / |G(v_1 - v_L, .., v_{L-1} - v_L)|.
/// The squared norm of the corresponding +-1/2 spectrum is a quarter of this.
inline Rational squared_distance(const VertexSubset& s) {
  const BigInt num = det_exact(gram(s));
  if (num == 0) throw DependentSubsetError();
  const BigInt den = det_exact(difference_gram(s));
  // Linear independence of the vertices implies affine independence.
  if (den == 0) throw DependentSubsetError();
  return Rational(num, den);
}

enum class SymmetryReduction { kNone, kHyperoctahedral };

struct EnumerationSummary {
  std::uint64_t visited = 0;
  /// Sum of multiplicities; equals C(2^L, L) when every subset is covered.
  BigInt total_multiplicity = 0;
};

/// Visits every L-subset of the 2^L vertices once, in lexicographic order of
/// the ascending code lists, as visitor(subset, multiplicity). With
/// hyperoctahedral reduction only orbit representatives are visited and the
/// multiplicity is the orbit size.
template <class Visitor>
EnumerationSummary enumerate_subsets(int L, Visitor&& visitor,
                                     SymmetryReduction reduction = SymmetryReduction::kNone,
                                     int threads = 1) {
  if (L < 1 || L > kExhaustiveCap)
    throw CapExceededError("exhaustive enumeration supports 1 <= L <= " +
                           std::to_string(kExhaustiveCap));
  EnumerationSummary summary;
  std::vector<std::uint64_t> codes(static_cast<std::size_t>(L));
  if (reduction == SymmetryReduction::kHyperoctahedral) {
    for (const auto& rep : orbit_representatives(L, threads)) {
      for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = rep.codes[i];
      visitor(VertexSubset::from_codes(L, codes), rep.orbit_size);
      ++summary.visited;
      summary.total_multiplicity += rep.orbit_size;
    }
    return summary;
  }
  const std::uint64_t n = std::uint64_t{1} << L;
  for (std::size_t i = 0; i < codes.size(); ++i) codes[i] = i;
  for (;;) {
    visitor(VertexSubset::from_codes(L, codes), std::uint64_t{1});
    ++summary.visited;
    summary.total_multiplicity += 1;
    // Advance to the next combination in lexicographic order.
    std::size_t i = codes.size();
    while (i > 0 && codes[i - 1] == n - codes.size() + (i - 1)) --i;
    if (i == 0) break;
    ++codes[i - 1];
    for (std::size_t j = i; j < codes.size(); ++j) codes[j] = codes[j - 1] + 1;
  }
  return summary;
}

/// Subsets per RNG chunk in sample streams.
inline constexpr std::size_t kSampleChunk = 1024;
inline constexpr std::uint64_t kSubsetStream = rng::stream_tag("hypercube/sample_subsets");

inline SignVector random_vertex(int L, rng::Engine& engine) {
  SignVector v(L);
  std::array<std::uint64_t, SignVector::kWords> words{};
  for (int b = 0; b < L; b += 64) {
    std::uint64_t w = engine();
    const int width = std::min(64, L - b);
    if (width < 64) w &= (std::uint64_t{1} << width) - 1;
    words[static_cast<std::size_t>(b / 64)] = w;
  }
  for (int i = 0; i < L; ++i) v.set_negative(i, (words[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1u);
  return v;
}

/// L distinct vertices, each drawn uniformly; a repeat is redrawn, which
/// makes the unordered set uniform over all L-subsets.
inline VertexSubset random_subset(int L, rng::Engine& engine) {
  std::vector<SignVector> vs;
  vs.reserve(static_cast<std::size_t>(L));
  while (static_cast<int>(vs.size()) < L) {
    SignVector v = random_vertex(L, engine);
    if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
  }
  return VertexSubset(std::move(vs));
}

/// Subsets [chunk * kSampleChunk, chunk * kSampleChunk + count) of the
/// stream defined by (L, seed).
inline std::vector<VertexSubset> sample_chunk(int L, std::uint64_t seed, std::size_t chunk,
                                              std::size_t count) {
  require(L >= 1 && L <= SignVector::kMaxLength, "L out of range for sampling");
  rng::Engine engine = rng::make_engine(seed, kSubsetStream, chunk);
  std::vector<VertexSubset> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_subset(L, engine));
  return out;
}

inline std::size_t chunk_count(std::size_t n, std::size_t chunk = kSampleChunk) {
  return (n + chunk - 1) / chunk;
}
inline std::size_t chunk_length(std::size_t n, std::size_t c, std::size_t chunk = kSampleChunk) {
  return std::min(chunk, n - c * chunk);
}

/// The first n subsets of the stream defined by (L, seed).
inline std::vector<VertexSubset> sample_subsets(int L, std::size_t n, std::uint64_t seed) {
  require(n >= 1, "sample count must be at least 1");
  std::vector<VertexSubset> out;
  out.reserve(n);
  for (std::size_t c = 0; c < chunk_count(n); ++c)
    for (auto& s : sample_chunk(L, seed, c, chunk_length(n, c))) out.push_back(std::move(s));
  return out;
}

}  // namespace epoly
