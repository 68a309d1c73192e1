#pragma once

// Purity requirements for witnessing with local spectra. A mixed state of
// purity p = tr(rho^2) > 1/2 has a pure state within delta_L(p) =
// (L/2)(1 - sqrt(2p - 1)) of its local spectra, so distinguishing polytopes
// whose critical spectra lie at distance epsilon from the origin needs
// delta_L(p) <= epsilon.

#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <vector>

#include "epoly/critical_spectra.hpp"
#include "epoly/error.hpp"
#include "epoly/exact.hpp"
#include "epoly/statistics.hpp"

namespace epoly {

inline double delta_precision(int L, double purity) {
  require(L >= 1, "L must be positive");
  require(purity > 0.5 && purity <= 1.0, "purity must lie in (1/2, 1]");
  return 0.5 * L * (1.0 - std::sqrt(2.0 * purity - 1.0));
}

/// The unique p with delta_L(p) = epsilon: ((1 - 2 epsilon / L)^2 + 1) / 2.
inline double required_purity(int L, double epsilon) {
  require(L >= 1, "L must be positive");
  require(epsilon >= 0 && epsilon < 0.5 * L, "precision must lie in [0, L/2)");
  const double s = 1.0 - 2.0 * epsilon / L;
  return 0.5 * (s * s + 1.0);
}

/// 1/(2 sqrt L): the square root of the Gamma(1/2, 2L) mean 1/(4L).
inline double generic_threshold(int L) {
  require(L >= 1, "L must be positive");
  return 0.5 / std::sqrt(static_cast<double>(L));
}

struct PurityPoint {
  int L = 0;
  double p_generic = 0;
  double delta_generic = 0;
  /// min |lambda_C| over accepted spectra and the purity it requires, when a
  /// spectra database for L is available.
  std::optional<double> min_norm_lambda;
  std::optional<double> p_all;
};

/// One row per L in [l_min, l_max]; `min_norms` maps L to min |lambda_C|.
inline std::vector<PurityPoint> purity_table(int l_min, int l_max,
                                             const std::map<int, double>& min_norms = {}) {
  require(l_min >= 1 && l_max >= l_min, "invalid L range");
  std::vector<PurityPoint> rows;
  for (int L = l_min; L <= l_max; ++L) {
    PurityPoint pt;
    pt.L = L;
    pt.delta_generic = generic_threshold(L);
    pt.p_generic = required_purity(L, pt.delta_generic);
    if (auto it = min_norms.find(L); it != min_norms.end()) {
      pt.min_norm_lambda = it->second;
      pt.p_all = required_purity(L, it->second);
    }
    rows.push_back(pt);
  }
  return rows;
}

/// min |lambda_C| from a database, the two added points excluded.
inline std::optional<double> min_norm_lambda(const SpectraDatabase& db) {
  auto m = db.min_accepted_norm_sq();
  if (!m) return std::nullopt;
  return std::sqrt(to_double(*m));
}

/// Columns L,p_generic,p_all,delta_generic,min_norm_lambda; missing values empty.
inline void write_purity_csv(std::ostream& os, const std::vector<PurityPoint>& rows,
                             const Metadata& meta) {
  write_metadata(os, meta);
  os << "L,p_generic,p_all,delta_generic,min_norm_lambda\n";
  for (const auto& r : rows) {
    os << r.L << "," << format_double(r.p_generic) << ","
       << (r.p_all ? format_double(*r.p_all) : "") << "," << format_double(r.delta_generic) << ","
       << (r.min_norm_lambda ? format_double(*r.min_norm_lambda) : "") << "\n";
  }
}

}  // namespace epoly
