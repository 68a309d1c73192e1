#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "epoly/error.hpp"
#include "epoly/exact.hpp"

namespace epoly {

/// A vertex of the hypercube as an L-bit sign pattern. Bit i set means
/// entry i is -1. Entries are stored in the +-1 scaling; `half_entry` gives
/// the +-1/2 view used for local spectra.
class SignVector {
 public:
  static constexpr int kMaxLength = 256;
  static constexpr int kWords = kMaxLength / 64;

  SignVector() = default;

  explicit SignVector(int length) : length_(length) {
    require(length >= 1 && length <= kMaxLength,
            "sign vector length must lie in [1, " + std::to_string(kMaxLength) + "]");
  }

  /// `code` packs entry i into bit i (1 = negative). Requires length <= 64.
  static SignVector from_code(std::uint64_t code, int length) {
    SignVector v(length);
    require(length <= 64, "from_code supports lengths up to 64");
    if (length < 64) require((code >> length) == 0, "code has bits beyond the vector length");
    v.words_[0] = code;
    return v;
  }

  static SignVector from_signs(std::span<const int> signs) {
    SignVector v(static_cast<int>(signs.size()));
    for (std::size_t i = 0; i < signs.size(); ++i) {
      require(signs[i] == 1 || signs[i] == -1, "sign entries must be +1 or -1");
      if (signs[i] < 0) v.set_negative(static_cast<int>(i), true);
    }
    return v;
  }
  static SignVector from_signs(std::initializer_list<int> signs) {
    return from_signs(std::span<const int>(signs.begin(), signs.size()));
  }

  /// Parses a string of '+' and '-' characters.
  static SignVector parse(std::string_view text) {
    SignVector v(static_cast<int>(text.size()));
    for (std::size_t i = 0; i < text.size(); ++i) {
      require(text[i] == '+' || text[i] == '-', "sign string may only contain '+' and '-'");
      if (text[i] == '-') v.set_negative(static_cast<int>(i), true);
    }
    return v;
  }

  int length() const { return length_; }

  bool negative(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set_negative(int i, bool neg) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (neg)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  int entry(int i) const { return negative(i) ? -1 : 1; }
  double half_entry(int i) const { return negative(i) ? -0.5 : 0.5; }
  Rational scaled_entry(int i) const { return Rational(entry(i), 2); }

  std::uint64_t code() const {
    require(length_ <= 64, "code() supports lengths up to 64");
    return words_[0];
  }
  const std::array<std::uint64_t, kWords>& words() const { return words_; }

  /// Squared Euclidean norm in the +-1 scaling; always L.
  int norm_sq() const { return length_; }

  std::string to_string() const {
    std::string s(static_cast<std::size_t>(length_), '+');
    for (int i = 0; i < length_; ++i)
      if (negative(i)) s[static_cast<std::size_t>(i)] = '-';
    return s;
  }

  friend bool operator==(const SignVector&, const SignVector&) = default;
  friend auto operator<=>(const SignVector& a, const SignVector& b) {
    if (auto c = a.length_ <=> b.length_; c != 0) return c;
    for (int w = kWords - 1; w >= 0; --w)
      if (auto c = a.words_[w] <=> b.words_[w]; c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  int length_ = 0;
  std::array<std::uint64_t, kWords> words_{};
};

/// u . v = L - 2 * (number of positions where the signs differ).
inline int dot(const SignVector& u, const SignVector& v) {
  require(u.length() == v.length(), "dot: sign vectors have different lengths");
  int differ = 0;
  for (int w = 0; w < SignVector::kWords; ++w)
    differ += std::popcount(u.words()[w] ^ v.words()[w]);
  return u.length() - 2 * differ;
}

/// An ordered list of exactly L distinct vertices of the L-cube.
class VertexSubset {
 public:
  explicit VertexSubset(std::vector<SignVector> vertices) : vertices_(std::move(vertices)) {
    require(!vertices_.empty(), "vertex subset is empty");
    const int L = vertices_.front().length();
    require(static_cast<int>(vertices_.size()) == L,
            "vertex subset must contain exactly L vertices");
    for (const auto& v : vertices_) require(v.length() == L, "vertex lengths differ");
    std::vector<SignVector> sorted = vertices_;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            "vertex subset contains a duplicate vertex");
  }

  static VertexSubset from_codes(int length, std::span<const std::uint64_t> codes) {
    std::vector<SignVector> vs;
    vs.reserve(codes.size());
    for (auto c : codes) vs.push_back(SignVector::from_code(c, length));
    return VertexSubset(std::move(vs));
  }
  static VertexSubset from_codes(int length, std::initializer_list<std::uint64_t> codes) {
    return from_codes(length, std::span<const std::uint64_t>(codes.begin(), codes.size()));
  }
  static VertexSubset parse(std::initializer_list<std::string_view> rows) {
    std::vector<SignVector> vs;
    for (auto r : rows) vs.push_back(SignVector::parse(r));
    return VertexSubset(std::move(vs));
  }

  int length() const { return vertices_.front().length(); }
  std::size_t size() const { return vertices_.size(); }
  const SignVector& operator[](std::size_t i) const { return vertices_[i]; }
  std::span<const SignVector> vertices() const { return vertices_; }

  /// The vertices as rows of an L x L +-1 integer matrix.
  Matrix<int> vertex_matrix() const {
    const int L = length();
    Matrix<int> m(size(), static_cast<std::size_t>(L));
    for (std::size_t i = 0; i < size(); ++i)
      for (int j = 0; j < L; ++j) m(i, static_cast<std::size_t>(j)) = vertices_[i].entry(j);
    return m;
  }

  /// Same subset, vertices sorted; the canonical unordered representative.
  VertexSubset sorted() const {
    auto vs = vertices_;
    std::sort(vs.begin(), vs.end());
    return VertexSubset(std::move(vs));
  }

  friend bool operator==(const VertexSubset&, const VertexSubset&) = default;

 private:
  std::vector<SignVector> vertices_;
};

}  // namespace epoly
