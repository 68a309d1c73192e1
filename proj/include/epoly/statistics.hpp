#pragma once

// Goodness-of-fit machinery for distance samples: the gamma law in RATE
// parametrization, its CDF, Kolmogorov-Smirnov distances, histograms (plain
// or log-transformed) and streaming moments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "epoly/error.hpp"

namespace epoly {

/// Gamma(alpha, beta) with beta a RATE, not a scale:
///   f(x) = beta^alpha / Gamma(alpha) * x^(alpha-1) * exp(-beta x),
/// mean alpha/beta, variance alpha/beta^2. The limiting distance law for
/// L qubits is GammaLaw{0.5, 2.0 * L}; passing a scale here silently
/// produces a law 16 L^2 times too wide or narrow.
struct GammaLaw {
  double alpha;
  double beta;

  GammaLaw(double shape, double rate) : alpha(shape), beta(rate) {
    require(shape > 0 && rate > 0 && std::isfinite(shape) && std::isfinite(rate),
            "gamma shape and rate must be positive and finite");
  }

  double mean() const { return alpha / beta; }
  double variance() const { return alpha / (beta * beta); }

  double log_pdf(double x) const {
    return alpha * std::log(beta) - std::lgamma(alpha) + (alpha - 1) * std::log(x) - beta * x;
  }
  double pdf(double x) const { return x <= 0 ? 0.0 : std::exp(log_pdf(x)); }

  /// Density of ln X at y: e^y f(e^y).
  double log_transformed_pdf(double y) const {
    return std::exp(alpha * std::log(beta) - std::lgamma(alpha) + alpha * y - beta * std::exp(y));
  }

  /// The rescaling property: c X ~ Gamma(alpha, beta / c).
  GammaLaw scaled(double c) const { return GammaLaw(alpha, beta / c); }
};

/// Regularized lower incomplete gamma P(a, x): power series below x = a + 1,
/// Lentz continued fraction for the complement above.
inline double regularized_gamma_p(double a, double x) {
  require(a > 0, "regularized_gamma_p: a must be positive");
  require(!(x < 0), "regularized_gamma_p: x must be nonnegative");
  if (x == 0) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double log_prefactor = -x + a * std::log(x) - std::lgamma(a);
  if (x < a + 1) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 100000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return std::min(1.0, sum * std::exp(log_prefactor));
  }
  constexpr double tiny = 1e-300;
  double b = x + 1 - a;
  double c = 1 / tiny;
  double d = 1 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1) < 1e-16) break;
  }
  return std::max(0.0, 1.0 - std::exp(log_prefactor) * h);
}

inline double gamma_cdf(const GammaLaw& law, double x) {
  require(!(x < 0), "gamma_cdf: x must be nonnegative");
  return regularized_gamma_p(law.alpha, law.beta * x);
}

/// Inverse CDF by bisection on a bracket grown from the mean.
inline double gamma_quantile(const GammaLaw& law, double p) {
  require(p > 0 && p < 1, "gamma_quantile: p must lie in (0, 1)");
  double lo = 0, hi = std::max(law.mean(), 1e-300);
  while (gamma_cdf(law, hi) < p) hi *= 2;
  for (int i = 0; i < 2000 && hi - lo > 1e-300; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (gamma_cdf(law, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct SampleMeta {
  int L = 0;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::string source;
  /// Draws discarded for any reason (dependent subsets, singular minors,
  /// rejection by a filter); values.size() == n - skipped when unweighted.
  std::uint64_t skipped = 0;
  /// The subset of `skipped` that were linearly dependent.
  std::uint64_t dependent = 0;
};

/// Multiset of nonnegative reals. `weights` is either empty (every value
/// counts once) or parallel to `values`.
struct DistanceSampleSet {
  std::vector<double> values;
  std::vector<std::uint64_t> weights;
  SampleMeta meta;

  bool weighted() const { return !weights.empty(); }
  std::uint64_t weight(std::size_t i) const { return weights.empty() ? 1 : weights[i]; }
  double total_weight() const {
    if (weights.empty()) return static_cast<double>(values.size());
    double t = 0;
    for (auto w : weights) t += static_cast<double>(w);
    return t;
  }

  /// Applies f to every value (e.g. rescaling); weights are kept.
  DistanceSampleSet transformed(const std::function<double(double)>& f) const {
    DistanceSampleSet out = *this;
    for (auto& v : out.values) v = f(v);
    return out;
  }
};

struct KSResult {
  double statistic = 0;
  double n = 0;
  /// Two-sided 95% critical value 1.36 / sqrt(n_eff).
  double noise_floor() const { return n > 0 ? 1.36 / std::sqrt(n) : 1.0; }
};

namespace detail {

struct WeightedValue {
  double value;
  double weight;
};

inline std::vector<WeightedValue> sorted_weighted(std::span<const double> values,
                                                  std::span<const std::uint64_t> weights) {
  require(weights.empty() || weights.size() == values.size(), "weights/values size mismatch");
  std::vector<WeightedValue> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = {values[i], weights.empty() ? 1.0 : static_cast<double>(weights[i])};
  std::sort(out.begin(), out.end(),
            [](const WeightedValue& a, const WeightedValue& b) { return a.value < b.value; });
  return out;
}

}  // namespace detail

/// sup |ECDF - F| over the samples, taking both one-sided limits of the
/// ECDF at each jump (ties form a single jump).
inline KSResult ks_distance(std::span<const double> values, std::span<const std::uint64_t> weights,
                            const std::function<double(double)>& cdf) {
  require(!values.empty(), "ks_distance of an empty sample");
  const auto sorted = detail::sorted_weighted(values, weights);
  double total = 0;
  for (const auto& s : sorted) total += s.weight;
  double below = 0;
  double d = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    double group = 0;
    while (j < sorted.size() && sorted[j].value == sorted[i].value) group += sorted[j++].weight;
    const double f = cdf(sorted[i].value);
    d = std::max({d, std::abs(f - below / total), std::abs((below + group) / total - f)});
    below += group;
    i = j;
  }
  return {d, total};
}

inline KSResult ks_distance(const DistanceSampleSet& samples, const GammaLaw& law) {
  return ks_distance(samples.values, samples.weights,
                     [&](double x) { return gamma_cdf(law, std::max(0.0, x)); });
}

inline KSResult ks_distance(std::span<const double> values, const GammaLaw& law) {
  return ks_distance(values, {}, [&](double x) { return gamma_cdf(law, std::max(0.0, x)); });
}

/// Two-sample statistic sup |F_a - F_b|; n is the effective size n_a n_b / (n_a + n_b).
inline KSResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), "ks_two_sample of an empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j]))
      v = x[i];
    else
      v = y[j];
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, na * nb / (na + nb)};
}

enum class BinTransform { kIdentity, kLog };

struct Histogram {
  /// bins + 1 edges, in the transformed coordinate.
  std::vector<double> edges;
  std::vector<double> counts;
  /// Bin-averaged model density in the transformed coordinate (Jacobian
  /// e^y f(e^y) under the log transform); empty without a model.
  std::vector<double> model_density;
  BinTransform transform = BinTransform::kIdentity;

  std::size_t bins() const { return counts.size(); }
  double total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }
  /// Empirical density of bin i (count / (total * width)).
  double density(std::size_t i) const {
    return counts[i] / (total() * (edges[i + 1] - edges[i]));
  }
};

struct HistogramRange {
  double lo;
  double hi;
};

/// Equal-width histogram of the (optionally log-transformed) samples over
/// `range`, or over [min, max] of the transformed data when no range is
/// given. Values outside an explicit range are dropped; the last bin is
/// closed on the right.
inline Histogram histogram(const DistanceSampleSet& samples, std::size_t bins,
                           BinTransform transform = BinTransform::kIdentity,
                           std::optional<GammaLaw> model = std::nullopt,
                           std::optional<HistogramRange> range = std::nullopt) {
  require(bins >= 1, "histogram needs at least one bin");
  require(!samples.values.empty(), "histogram of an empty sample");
  std::vector<double> t(samples.values.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double v = samples.values[i];
    if (transform == BinTransform::kLog) {
      require(v > 0, "log-transformed histogram requires positive values");
      t[i] = std::log(v);
    } else {
      t[i] = v;
    }
  }
  double lo, hi;
  if (range) {
    lo = range->lo;
    hi = range->hi;
  } else {
    auto [mn, mx] = std::minmax_element(t.begin(), t.end());
    lo = *mn;
    hi = *mx;
  }
  require(hi >= lo, "histogram range is inverted");
  if (hi == lo) hi = lo + 1.0;

  Histogram h;
  h.transform = transform;
  h.edges.resize(bins + 1);
  const double width = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges[bins] = hi;
  h.counts.assign(bins, 0.0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < lo || t[i] > hi) continue;
    auto b = static_cast<std::size_t>((t[i] - lo) / width);
    if (b >= bins) b = bins - 1;
    h.counts[b] += static_cast<double>(samples.weight(i));
  }
  if (model) {
    auto cdf = [&](double edge) {
      const double x = transform == BinTransform::kLog ? std::exp(edge) : edge;
      return x <= 0 ? 0.0 : gamma_cdf(*model, x);
    };
    h.model_density.resize(bins);
    for (std::size_t i = 0; i < bins; ++i)
      h.model_density[i] = (cdf(h.edges[i + 1]) - cdf(h.edges[i])) / (h.edges[i + 1] - h.edges[i]);
  }
  return h;
}

/// Streaming weighted mean/variance (West's update of Welford's recurrence).
/// Accumulators merge pairwise (Chan et al.), so partitioned runs combine
/// without depending on the order of partitions. The variance is the
/// unbiased (n - 1) form; a single observation has variance 0.
class MomentAccumulator {
 public:
  void add(double x, double w = 1.0) {
    if (w <= 0) return;
    const double total = weight_ + w;
    const double delta = x - mean_;
    mean_ += delta * w / total;
    m2_ += w * delta * (x - mean_);
    weight_ = total;
  }

  void merge(const MomentAccumulator& o) {
    if (o.weight_ == 0) return;
    if (weight_ == 0) {
      *this = o;
      return;
    }
    const double total = weight_ + o.weight_;
    const double delta = o.mean_ - mean_;
    mean_ += delta * o.weight_ / total;
    m2_ += o.m2_ + delta * delta * weight_ * o.weight_ / total;
    weight_ = total;
  }

  double count() const { return weight_; }
  double mean() const { return mean_; }
  double variance() const { return weight_ > 1 ? m2_ / (weight_ - 1) : 0.0; }

 private:
  double weight_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

struct Moments {
  double count = 0;
  double mean = 0;
  double variance = 0;
  double stddev() const { return std::sqrt(variance); }
};

inline Moments moment_report(std::span<const double> values,
                             std::span<const std::uint64_t> weights = {}) {
  require(weights.empty() || weights.size() == values.size(), "weights/values size mismatch");
  MomentAccumulator acc;
  for (std::size_t i = 0; i < values.size(); ++i)
    acc.add(values[i], weights.empty() ? 1.0 : static_cast<double>(weights[i]));
  return {acc.count(), acc.mean(), acc.variance()};
}

inline Moments moment_report(const DistanceSampleSet& s) {
  return moment_report(s.values, s.weights);
}

/// Key/value pairs written as leading "# key=value" lines of every CSV.
using Metadata = std::vector<std::pair<std::string, std::string>>;

inline void write_metadata(std::ostream& os, const Metadata& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
}

/// Round-trip formatting for doubles.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Plot data: bin_left,bin_right,count,model_density.
inline void write_histogram_csv(std::ostream& os, const Histogram& h, const Metadata& meta) {
  write_metadata(os, meta);
  os << "bin_left,bin_right,count,model_density\n";
  for (std::size_t i = 0; i < h.bins(); ++i) {
    os << format_double(h.edges[i]) << "," << format_double(h.edges[i + 1]) << ","
       << format_double(h.counts[i]) << ","
       << (h.model_density.empty() ? std::string() : format_double(h.model_density[i])) << "\n";
  }
}

/// Single-column sample export; the header names L, n, seed and the path.
inline void write_samples_csv(std::ostream& os, const DistanceSampleSet& s, const Metadata& meta) {
  write_metadata(os, meta);
  os << "value(L=" << s.meta.L << ";n=" << s.meta.n << ";seed=" << s.meta.seed
     << ";path=" << s.meta.source << ")";
  if (s.weighted()) os << ",weight";
  os << "\n";
  for (std::size_t i = 0; i < s.values.size(); ++i) {
    os << format_double(s.values[i]);
    if (s.weighted()) os << "," << s.weights[i];
    os << "\n";
  }
}

}  // namespace epoly
