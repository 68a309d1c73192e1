#pragma once

// Critical local spectra: for every linearly independent L-subset of cube
// vertices (in the +-1/2 scaling), the closest point of their convex hull to
// the origin is a critical spectrum when it is coordinatewise nonnegative and
// does not lie on an edge of the cube. The origin and the separable point
// (1/2, ..., 1/2) complete the set.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "epoly/error.hpp"
#include "epoly/exact.hpp"
#include "epoly/hypercube.hpp"
#include "epoly/min_norm.hpp"
#include "epoly/parallel.hpp"
#include "epoly/sign_vector.hpp"
#include "epoly/statistics.hpp"
#include "epoly/symmetry.hpp"

namespace epoly {

inline std::vector<Point<Rational>> half_points(const VertexSubset& s) {
  std::vector<Point<Rational>> pts(s.size(), Point<Rational>(static_cast<std::size_t>(s.length())));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (int j = 0; j < s.length(); ++j) pts[i][static_cast<std::size_t>(j)] = s[i].scaled_entry(j);
  return pts;
}

inline std::vector<Point<double>> half_points_double(const VertexSubset& s) {
  std::vector<Point<double>> pts(s.size(), Point<double>(static_cast<std::size_t>(s.length())));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (int j = 0; j < s.length(); ++j) pts[i][static_cast<std::size_t>(j)] = s[i].half_entry(j);
  return pts;
}

template <class Scalar>
Scalar norm_sq(const Point<Scalar>& p) {
  return dot(p, p);
}

struct AffineFoot {
  Point<Rational> point;
  /// Affine weights (sum 1, possibly negative) over the subset's vertices.
  std::vector<Rational> coefficients;
};

/// Foot of the perpendicular from the origin onto the affine hull of the
/// +-1/2 vertices. Its squared norm is squared_distance(s) / 4.
inline AffineFoot affine_foot(const VertexSubset& s) {
  if (!is_independent(s)) throw DependentSubsetError();
  auto pts = half_points(s);
  std::vector<std::size_t> all(pts.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto alpha = affine_minimizer(pts, all);
  if (!alpha) throw DependentSubsetError();
  AffineFoot foot;
  foot.point = combine(pts, all, *alpha);
  foot.coefficients = std::move(*alpha);
  return foot;
}

/// Exact closest point of conv(+-1/2 vertices) to the origin. Dependent
/// subsets are allowed.
inline MinNormResult<Rational> min_norm_point(const VertexSubset& s) {
  return min_norm_point(half_points(s));
}

/// An edge of the cube [-1/2, 1/2]^L pins all but one coordinate at +-1/2,
/// so a point lies on an edge iff at least L - 1 coordinates have absolute
/// value 1/2. `tol` applies to floating-point input only.
template <class Scalar>
bool is_on_edge_of_cube(std::span<const Scalar> point, double tol = 0.0) {
  const Scalar half = Scalar(1) / Scalar(2);
  std::size_t pinned = 0;
  for (const auto& x : point) {
    if constexpr (is_exact_v<Scalar>) {
      if (abs_value(x) == half) ++pinned;
    } else {
      if (std::abs(std::abs(x) - half) <= tol) ++pinned;
    }
  }
  return pinned + 1 >= point.size();
}

inline bool is_on_edge_of_cube(const Point<Rational>& p) {
  return is_on_edge_of_cube<Rational>(std::span<const Rational>(p));
}

struct CriticalSpectrum {
  std::vector<Rational> lambda;
  /// Generating subset; absent for the origin and the separable point.
  std::optional<VertexSubset> source;
  Rational norm_sq;
};

/// The critical spectrum generated by `s`, or nothing when `s` is dependent,
/// its closest hull point has a negative coordinate, or that point lies on
/// an edge of the cube.
inline std::optional<CriticalSpectrum> accept(const VertexSubset& s) {
  if (!is_independent(s)) return std::nullopt;
  auto r = min_norm_point(s);
  for (const auto& x : r.point)
    if (x < 0) return std::nullopt;
  if (is_on_edge_of_cube(r.point)) return std::nullopt;
  CriticalSpectrum c;
  c.norm_sq = norm_sq(r.point);
  c.lambda = std::move(r.point);
  c.source = s;
  return c;
}

/// E_C = 1/2 - (2/L) |lambda|^2.
inline Rational linear_entropy_of(const Rational& norm_sq, int L) {
  return Rational(1, 2) - Rational(2, L) * norm_sq;
}

struct SpectrumRecord {
  std::vector<Rational> lambda;
  Rational norm_sq;
  /// Number of distinct coordinate permutations of lambda.
  std::uint64_t orbit_size = 1;
  /// Number of unordered L-subsets that the algorithm maps to lambda.
  BigInt subset_count = 0;
  /// True for the origin and the separable point, which are added by hand.
  bool added = false;

  Rational entropy() const { return linear_entropy_of(norm_sq, static_cast<int>(lambda.size())); }
};

struct SpectraDatabase {
  int L = 0;
  bool symmetry_reduced = false;
  /// Ordered lexicographically by lambda.
  std::vector<SpectrumRecord> spectra;
  BigInt subsets_covered = 0;
  BigInt independent_subsets = 0;
  std::uint64_t orbits_visited = 0;

  /// Distinct spectra up to coordinate permutation. The set is closed under
  /// permutations, so each class has exactly one ascending member.
  std::size_t permutation_orbits() const {
    return static_cast<std::size_t>(std::count_if(spectra.begin(), spectra.end(), [](const auto& s) {
      return std::is_sorted(s.lambda.begin(), s.lambda.end());
    }));
  }

  /// Smallest |lambda_C| over algorithm-accepted spectra (the two added
  /// points excluded).
  std::optional<Rational> min_accepted_norm_sq() const {
    std::optional<Rational> best;
    for (const auto& s : spectra)
      if (!s.added && (!best || s.norm_sq < *best)) best = s.norm_sq;
    return best;
  }
};

inline std::uint64_t permutation_count(std::vector<Rational> v) {
  std::sort(v.begin(), v.end());
  std::uint64_t total = 1;
  std::uint64_t seen = 0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i;
    while (j < v.size() && v[j] == v[i]) ++j;
    for (std::size_t k = 0; k < j - i; ++k) {
      ++seen;
      total = total * seen / (k + 1);
    }
    i = j;
  }
  return total;
}

struct EnumerateOptions {
  SymmetryReduction symmetry = SymmetryReduction::kHyperoctahedral;
  int threads = 1;
};

namespace detail {

/// Outcome of the acceptance algorithm for one orbit (or one subset).
struct OrbitOutcome {
  bool independent = false;
  std::uint64_t multiplicity = 0;
  Rational height_sq;  // |affine foot|^2 in the +-1/2 scaling
  std::optional<Point<Rational>> closest;  // hull minimizer when not on an edge
};

inline OrbitOutcome evaluate_subset(const VertexSubset& s, std::uint64_t multiplicity) {
  OrbitOutcome out;
  out.multiplicity = multiplicity;
  if (!is_independent(s)) return out;
  out.independent = true;
  out.height_sq = squared_distance(s) / 4;
  auto pts = half_points(s);
  auto r = min_norm_point(pts);
  if (!certify_min_norm(pts, r))
    throw std::logic_error("min-norm certificate failed for " + s[0].to_string());
  if (!is_on_edge_of_cube(r.point)) out.closest = std::move(r.point);
  return out;
}

template <class Fn>
std::vector<OrbitOutcome> evaluate_all(int L, const EnumerateOptions& opt, Fn&& on_progress) {
  std::vector<OrbitOutcome> out;
  if (opt.symmetry == SymmetryReduction::kHyperoctahedral) {
    auto reps = orbit_representatives(L, opt.threads);
    const std::size_t per_chunk = 256;
    auto chunks = parallel_chunks<std::vector<OrbitOutcome>>(
        chunk_count(reps.size(), per_chunk), opt.threads, [&](std::size_t c) {
          std::vector<OrbitOutcome> part;
          std::vector<std::uint64_t> codes(static_cast<std::size_t>(L));
          const std::size_t begin = c * per_chunk;
          const std::size_t end = std::min(reps.size(), begin + per_chunk);
          for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t k = 0; k < codes.size(); ++k) codes[k] = reps[i].codes[k];
            part.push_back(
                evaluate_subset(VertexSubset::from_codes(L, codes), reps[i].orbit_size));
          }
          on_progress(end - begin);
          return part;
        });
    for (auto& c : chunks)
      for (auto& o : c) out.push_back(std::move(o));
  } else {
    enumerate_subsets(L, [&](const VertexSubset& s, std::uint64_t m) {
      out.push_back(evaluate_subset(s, m));
    });
  }
  return out;
}

}  // namespace detail

/// All critical spectra of the L-qubit cube, deduplicated by exact equality.
/// Under hyperoctahedral reduction each orbit contributes every coordinate
/// permutation of |x|, where x is its representative's hull minimizer: a
/// subset g.S of the orbit has minimizer g.x, which is nonnegative exactly
/// for the sign flips matching the signs of x. Such subsets number
/// orbit_size * 2^(z - L), z the count of zero coordinates of x.
template <class Progress>
SpectraDatabase critical_spectra_enumerate(int L, const EnumerateOptions& opt,
                                           Progress&& on_progress) {
  if (L < 1 || L > kExhaustiveCap)
    throw CapExceededError("exhaustive enumeration supports 1 <= L <= " +
                           std::to_string(kExhaustiveCap));
  auto outcomes = detail::evaluate_all(L, opt, on_progress);
  const bool reduced = opt.symmetry == SymmetryReduction::kHyperoctahedral;

  SpectraDatabase db;
  db.L = L;
  db.symmetry_reduced = reduced;
  std::map<std::vector<Rational>, SpectrumRecord> found;
  std::map<std::vector<Rational>, BigInt> by_multiset;
  const BigInt full_sign_group = BigInt(1) << L;
  for (auto& o : outcomes) {
    db.subsets_covered += o.multiplicity;
    ++db.orbits_visited;
    if (!o.independent) continue;
    db.independent_subsets += o.multiplicity;
    if (!o.closest) continue;
    const auto& x = *o.closest;
    if (!reduced) {
      bool nonneg = std::all_of(x.begin(), x.end(), [](const Rational& v) { return v >= 0; });
      if (!nonneg) continue;
      auto& rec = found[x];
      rec.lambda = x;
      rec.subset_count += 1;
      continue;
    }
    std::vector<Rational> abs_x(x.size());
    int zeros = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      abs_x[i] = abs_value(x[i]);
      if (x[i] == 0) ++zeros;
    }
    std::sort(abs_x.begin(), abs_x.end());
    const std::uint64_t perms = permutation_count(abs_x);
    const BigInt accepted = BigInt(o.multiplicity) * (BigInt(1) << zeros);
    if (accepted % (full_sign_group * perms) != 0)
      throw std::logic_error("orbit weight is not divisible among its spectra");
    by_multiset[std::move(abs_x)] += accepted / (full_sign_group * perms);
  }
  // Permutations are expanded once per multiset, not once per orbit.
  for (auto& [sorted, each] : by_multiset) {
    auto x = sorted;
    do {
      auto& rec = found[x];
      rec.lambda = x;
      rec.subset_count += each;
    } while (std::next_permutation(x.begin(), x.end()));
  }
  for (bool separable : {false, true}) {
    std::vector<Rational> p(static_cast<std::size_t>(L), separable ? Rational(1, 2) : Rational(0));
    auto& rec = found[p];
    if (rec.lambda.empty()) {
      rec.lambda = p;
      rec.added = true;
    }
  }
  for (auto& [lambda, rec] : found) {
    rec.norm_sq = norm_sq(rec.lambda);
    rec.orbit_size = permutation_count(rec.lambda);
    db.spectra.push_back(std::move(rec));
  }
  return db;
}

inline SpectraDatabase critical_spectra_enumerate(int L, const EnumerateOptions& opt = {}) {
  return critical_spectra_enumerate(L, opt, [](std::size_t) {});
}

// Sampling path -------------------------------------------------------------

struct HeightResult {
  bool independent = false;
  /// |affine foot|^2 in the +-1/2 scaling, i.e. |lambda|^2 = d_C^2 / 4.
  double height_sq = 0;
  /// Foot of the perpendicular (+-1/2 scaling).
  Eigen::VectorXd foot;
};

/// Floating-point simplex height. With V the +-1 vertex matrix, the affine
/// hull of the vertices is the hyperplane a.x = 1 with V a = 1, so
/// d_C^2 = 1 / |a|^2. One LU solve replaces the two Gram determinants.
/// Near-singular pivots are settled by the exact rank test.
inline HeightResult height_sq_float(const VertexSubset& s) {
  const int L = s.length();
  Eigen::MatrixXd v(L, L);
  for (int i = 0; i < L; ++i)
    for (int j = 0; j < L; ++j) v(i, j) = s[static_cast<std::size_t>(i)].entry(j);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(v);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  HeightResult r;
  if (pivots.minCoeff() <= 1e-9 * pivots.maxCoeff() && !is_independent(s)) return r;
  const Eigen::VectorXd a = lu.solve(Eigen::VectorXd::Ones(L));
  const double a2 = a.squaredNorm();
  r.independent = true;
  r.height_sq = 0.25 / a2;
  r.foot = a * (0.5 / a2);
  return r;
}

enum class DistanceMode { kExhaustive, kSampled };
enum class DistanceFilter { kAllIndependent, kAcceptedOnly };
/// Exhaustive accepted-only histograms weight each generating subset once or
/// each distinct spectrum once.
enum class SpectrumWeighting { kPerSubset, kPerSpectrum };

struct DistanceOptions {
  DistanceMode mode = DistanceMode::kSampled;
  std::size_t n = 1000000;
  std::uint64_t seed = 1;
  DistanceFilter filter = DistanceFilter::kAllIndependent;
  SpectrumWeighting weighting = SpectrumWeighting::kPerSubset;
  int threads = 1;
  SymmetryReduction symmetry = SymmetryReduction::kHyperoctahedral;
};

inline const char* to_string(DistanceFilter f) {
  return f == DistanceFilter::kAllIndependent ? "all-independent" : "accepted-only";
}

struct SampledDistance {
  std::optional<double> value;
  /// 2^z for accepted-only draws, z the number of zero coordinates of the
  /// minimizer: the number of sign flips of the subset that land in the
  /// nonnegative orthant. Matches the per-subset exhaustive weighting.
  std::uint64_t weight = 1;
  bool dependent = false;
};

/// One draw of the sampled pipeline. For accepted-only, the subset stands for
/// its sign-flip class: uniform sampling is invariant under coordinate sign
/// flips, and exactly the flips matching the signs of the hull minimizer x
/// make it nonnegative, so the class is accepted iff x is off the cube's
/// edges, with |lambda|^2 = |x|^2.
inline SampledDistance sampled_distance(const VertexSubset& s, DistanceFilter filter) {
  SampledDistance out;
  HeightResult h = height_sq_float(s);
  if (!h.independent) {
    out.dependent = true;
    return out;
  }
  if (filter == DistanceFilter::kAllIndependent) {
    out.value = h.height_sq;
    return out;
  }
  auto pts = half_points_double(s);
  auto r = min_norm_point(pts);
  if (is_on_edge_of_cube<double>(std::span<const double>(r.point), 1e-9)) return out;
  int zeros = 0;
  for (double x : r.point)
    if (std::abs(x) <= 1e-9) ++zeros;
  if (zeros >= 63) throw std::overflow_error("sign-flip weight 2^z exceeds 64 bits");
  out.value = norm_sq(r.point);
  out.weight = std::uint64_t{1} << zeros;
  return out;
}

/// Multiset of |lambda|^2 values, either from every L-subset (exhaustive,
/// L <= kExhaustiveCap) or from n uniformly sampled subsets.
inline DistanceSampleSet distance_histogram(int L, const DistanceOptions& opt) {
  DistanceSampleSet out;
  out.meta.L = L;
  out.meta.seed = opt.seed;
  if (opt.mode == DistanceMode::kExhaustive) {
    if (L < 1 || L > kExhaustiveCap)
      throw CapExceededError("exhaustive mode supports 1 <= L <= " +
                             std::to_string(kExhaustiveCap));
    out.meta.source = std::string("exhaustive/") + to_string(opt.filter);
    EnumerateOptions eo{opt.symmetry, opt.threads};
    if (opt.filter == DistanceFilter::kAllIndependent) {
      auto outcomes = detail::evaluate_all(L, eo, [](std::size_t) {});
      for (const auto& o : outcomes) {
        out.meta.n += o.multiplicity;
        if (!o.independent) {
          out.meta.skipped += o.multiplicity;
          out.meta.dependent += o.multiplicity;
          continue;
        }
        out.values.push_back(to_double(o.height_sq));
        out.weights.push_back(o.multiplicity);
      }
    } else {
      auto db = critical_spectra_enumerate(L, eo);
      out.meta.source += opt.weighting == SpectrumWeighting::kPerSubset ? "/per-subset"
                                                                        : "/per-spectrum";
      for (const auto& s : db.spectra) {
        if (s.added) continue;
        out.values.push_back(to_double(s.norm_sq));
        out.weights.push_back(opt.weighting == SpectrumWeighting::kPerSubset
                                  ? s.subset_count.convert_to<std::uint64_t>()
                                  : 1);
      }
      if (opt.weighting == SpectrumWeighting::kPerSubset) {
        out.meta.n = db.subsets_covered.convert_to<std::uint64_t>();
        out.meta.skipped = out.meta.n - static_cast<std::uint64_t>(out.total_weight());
        out.meta.dependent = (db.subsets_covered - db.independent_subsets).convert_to<std::uint64_t>();
      } else {
        out.meta.n = out.values.size();
      }
    }
    return out;
  }

  require(opt.n >= 1, "sample count must be at least 1");
  require(L >= 1 && L <= SignVector::kMaxLength, "L out of range for sampling");
  out.meta.n = opt.n;
  out.meta.source = std::string("sampled/") + to_string(opt.filter);
  struct Part {
    std::vector<double> values;
    std::vector<std::uint64_t> weights;
    std::uint64_t skipped = 0;
    std::uint64_t dependent = 0;
  };
  auto parts = parallel_chunks<Part>(chunk_count(opt.n), opt.threads, [&](std::size_t c) {
    Part p;
    for (const auto& s : sample_chunk(L, opt.seed, c, chunk_length(opt.n, c))) {
      auto d = sampled_distance(s, opt.filter);
      if (d.value) {
        p.values.push_back(*d.value);
        p.weights.push_back(d.weight);
      } else
        ++p.skipped;
      if (d.dependent) ++p.dependent;
    }
    return p;
  });
  for (auto& p : parts) {
    out.values.insert(out.values.end(), p.values.begin(), p.values.end());
    if (opt.filter == DistanceFilter::kAcceptedOnly)
      out.weights.insert(out.weights.end(), p.weights.begin(), p.weights.end());
    out.meta.skipped += p.skipped;
    out.meta.dependent += p.dependent;
  }
  return out;
}

}  // namespace epoly
