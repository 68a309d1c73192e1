#pragma once

// Reproducible random streams.
//
// Every sampler in the library is a pure function of (parameters, seed).
// Work is cut into fixed-size chunks; chunk c of a stream tagged `tag` uses
// an mt19937_64 engine seeded with derive_seed(seed, tag, c). The chunk
// layout never depends on the worker count, so results are identical for
// any number of threads.
//
// Normal variates use the Marsaglia polar method; gamma variates use
// Marsaglia-Tsang squeeze rejection (with the U^(1/a) boost for a < 1).
// Both are implemented here rather than taken from <random>, whose
// distribution algorithms are implementation-defined.

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "epoly/error.hpp"

namespace epoly::rng {

using Engine = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a; names a stream so that different samplers fed the same user seed
/// draw from unrelated sequences.
constexpr std::uint64_t stream_tag(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag, std::uint64_t chunk) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= tag;
  std::uint64_t b = splitmix64(s);
  s ^= chunk * 0xd1342543de82ef95ULL + 1;
  std::uint64_t c = splitmix64(s);
  return a ^ (b << 1) ^ (c << 2) ^ c;
}

inline Engine make_engine(std::uint64_t seed, std::uint64_t tag, std::uint64_t chunk) {
  return Engine(derive_seed(seed, tag, chunk));
}

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& e) { return static_cast<double>(e() >> 11) * 0x1p-53; }

/// Uniform on (0, 1).
inline double uniform_open(Engine& e) {
  return (static_cast<double>(e() >> 11) + 0.5) * 0x1p-53;
}

/// Standard normal variates by the Marsaglia polar method.
class NormalSampler {
 public:
  double operator()(Engine& e) {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01(e) - 1.0;
      v = 2.0 * uniform01(e) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

 private:
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Gamma(shape, RATE) variate: density rate^shape / Gamma(shape) x^(shape-1) e^(-rate x).
inline double sample_gamma(Engine& e, NormalSampler& normal, double shape, double rate) {
  require(shape > 0 && rate > 0, "gamma parameters must be positive");
  if (shape < 1.0) {
    const double g = sample_gamma(e, normal, shape + 1.0, 1.0);
    return g * std::pow(uniform_open(e), 1.0 / shape) / rate;
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal(e);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open(e);
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

}  // namespace epoly::rng
