#pragma once

// Orbit representatives of L-subsets of cube vertices under the
// hyperoctahedral group (coordinate permutations and per-coordinate sign
// flips, order 2^L * L!).
//
// A subset is encoded as the ascending list of its vertex codes (bit i set
// <=> entry i is -1). The representative of an orbit is its lexicographically
// smallest encoding. That choice is hereditary: dropping the largest code of
// a representative leaves a representative. Representatives are therefore
// generated orderly, level by level, extending each canonical k-set only by
// codes above its maximum and keeping the extensions that test canonical.
// No hash table of visited orbits is needed.

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "epoly/error.hpp"
#include "epoly/parallel.hpp"

namespace epoly {

/// Largest L accepted by exhaustive enumeration.
inline constexpr int kExhaustiveCap = 7;

class HyperoctahedralAction {
 public:
  using Code = std::uint8_t;

  explicit HyperoctahedralAction(int length) : length_(length) {
    if (length < 1 || length > kExhaustiveCap)
      throw CapExceededError("hyperoctahedral reduction supports 1 <= L <= " +
                             std::to_string(kExhaustiveCap));
    const std::size_t n_codes = std::size_t{1} << length;
    std::vector<int> perm(static_cast<std::size_t>(length));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (std::size_t code = 0; code < n_codes; ++code) {
        unsigned image = 0;
        for (int bit = 0; bit < length; ++bit)
          if ((code >> bit) & 1u) image |= 1u << perm[static_cast<std::size_t>(bit)];
        table_.push_back(static_cast<Code>(image));
      }
      ++n_perms_;
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  int length() const { return length_; }
  std::size_t n_codes() const { return std::size_t{1} << length_; }
  std::size_t permutation_count() const { return n_perms_; }
  std::uint64_t order() const { return static_cast<std::uint64_t>(n_perms_) << length_; }

  /// Group element (flip mask, permutation index) applied to one code.
  Code apply(Code flip, std::size_t perm, Code code) const {
    return table_[perm * n_codes() + (code ^ flip)];
  }

  /// True when `sorted` (strictly ascending codes) is the lexicographically
  /// least member of its orbit. When `stabilizer` is non-null and the set is
  /// canonical, stores the order of its stabilizer subgroup.
  bool is_canonical(std::span<const Code> sorted, std::uint64_t* stabilizer = nullptr) const {
    const std::size_t k = sorted.size();
    if (k == 0) {
      if (stabilizer) *stabilizer = order();
      return true;
    }
    // Any element can be flipped onto 0, the least code, so a
    // representative contains 0 and every competing image is produced by a
    // flip mask drawn from the set itself.
    if (sorted[0] != 0) return false;
    std::array<Code, 64> img{};
    std::uint64_t stab = 0;
    const std::size_t nc = n_codes();
    // The second-least image code is at least 2^w - 1, where w is the
    // smallest Hamming distance from the flip element to the rest of the set,
    // and some permutation attains it. Flips that cannot tie sorted[1] are
    // skipped; a flip that beats it refutes canonicity at once.
    for (std::size_t s = 0; s < k; ++s) {
      const Code flip = sorted[s];
      if (k > 1) {
        int w = 64;
        for (std::size_t j = 0; j < k; ++j)
          if (j != s) w = std::min(w, std::popcount(static_cast<unsigned>(sorted[j] ^ flip)));
        const unsigned least = (1u << w) - 1u;
        if (least < sorted[1]) return false;
        if (least > sorted[1]) continue;
      }
      for (std::size_t p = 0; p < n_perms_; ++p) {
        const Code* row = &table_[p * nc];
        for (std::size_t j = 0; j < k; ++j) {
          const Code v = row[sorted[j] ^ flip];
          std::size_t i = j;
          while (i > 0 && img[i - 1] > v) {
            img[i] = img[i - 1];
            --i;
          }
          img[i] = v;
        }
        int cmp = 0;
        for (std::size_t j = 1; j < k; ++j) {
          if (img[j] != sorted[j]) {
            cmp = img[j] < sorted[j] ? -1 : 1;
            break;
          }
        }
        if (cmp < 0) return false;
        if (cmp == 0) ++stab;
      }
    }
    if (stabilizer) *stabilizer = stab;
    return true;
  }

  /// Lexicographically least image of an arbitrary code set, by brute force
  /// over every group element.
  std::vector<Code> canonical_form(std::span<const Code> codes) const {
    std::vector<Code> best(codes.begin(), codes.end());
    std::sort(best.begin(), best.end());
    std::vector<Code> img(codes.size());
    for (std::size_t flip = 0; flip < n_codes(); ++flip) {
      for (std::size_t p = 0; p < n_perms_; ++p) {
        for (std::size_t j = 0; j < codes.size(); ++j)
          img[j] = apply(static_cast<Code>(flip), p, codes[j]);
        std::sort(img.begin(), img.end());
        if (img < best) best = img;
      }
    }
    return best;
  }

 private:
  int length_;
  std::size_t n_perms_ = 0;
  std::vector<Code> table_;
};

struct OrbitRepresentative {
  std::vector<HyperoctahedralAction::Code> codes;
  /// Number of L-subsets in the orbit: group order / stabilizer order.
  std::uint64_t orbit_size = 0;
};

/// All orbit representatives of `size`-subsets (default: L-subsets) of the
/// 2^L vertices, in ascending lexicographic order. The final level is split
/// across workers; the result does not depend on the thread count.
inline std::vector<OrbitRepresentative> orbit_representatives(int L, int threads = 1,
                                                              int size = -1) {
  using Code = HyperoctahedralAction::Code;
  const HyperoctahedralAction group(L);
  const int k_final = size < 0 ? L : size;
  require(k_final >= 1 && static_cast<std::size_t>(k_final) <= group.n_codes(),
          "subset size out of range");
  const unsigned n_codes = static_cast<unsigned>(group.n_codes());

  std::vector<std::vector<Code>> level{{}};
  for (int k = 1; k < k_final; ++k) {
    std::vector<std::vector<Code>> next;
    for (const auto& base : level) {
      const unsigned start = base.empty() ? 0u : base.back() + 1u;
      for (unsigned x = start; x < n_codes; ++x) {
        auto cand = base;
        cand.push_back(static_cast<Code>(x));
        if (group.is_canonical(cand)) next.push_back(std::move(cand));
      }
    }
    level = std::move(next);
  }

  auto chunks = parallel_chunks<std::vector<OrbitRepresentative>>(
      level.size(), threads, [&](std::size_t c) {
        std::vector<OrbitRepresentative> out;
        const auto& base = level[c];
        const unsigned start = base.empty() ? 0u : base.back() + 1u;
        for (unsigned x = start; x < n_codes; ++x) {
          auto cand = base;
          cand.push_back(static_cast<Code>(x));
          std::uint64_t stab = 0;
          if (group.is_canonical(cand, &stab))
            out.push_back({std::move(cand), group.order() / stab});
        }
        return out;
      });

  std::vector<OrbitRepresentative> reps;
  for (auto& c : chunks)
    for (auto& r : c) reps.push_back(std::move(r));
  return reps;
}

}  // namespace epoly
