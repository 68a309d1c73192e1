#pragma once

// JSON spectra database:
//   { "L": 3,
//     "spectra": [ { "lambda": ["1/6", "1/6", "1/6"], "norm_sq": "1/12",
//                    "orbit_size": 1, "subset_count": 1, "entropy": "4/9",
//                    "added": false }, ... ],
//     "summary": { ... }, "meta": { ... } }
// Rationals are exact "numerator/denominator" strings.

#include <istream>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "epoly/critical_spectra.hpp"
#include "epoly/exact.hpp"
#include "epoly/statistics.hpp"

namespace epoly {

inline nlohmann::ordered_json to_json(const SpectraDatabase& db, const Metadata& meta = {}) {
  nlohmann::ordered_json j;
  j["L"] = db.L;
  auto& arr = j["spectra"] = nlohmann::ordered_json::array();
  for (const auto& s : db.spectra) {
    nlohmann::ordered_json e;
    auto& lam = e["lambda"] = nlohmann::ordered_json::array();
    for (const auto& x : s.lambda) lam.push_back(to_string(x));
    e["norm_sq"] = to_string(s.norm_sq);
    e["orbit_size"] = s.orbit_size;
    e["subset_count"] = s.subset_count.convert_to<std::uint64_t>();
    e["entropy"] = to_string(s.entropy());
    e["added"] = s.added;
    arr.push_back(std::move(e));
  }
  nlohmann::ordered_json summary;
  summary["count"] = db.spectra.size();
  summary["permutation_orbits"] = db.permutation_orbits();
  summary["symmetry_reduced"] = db.symmetry_reduced;
  summary["orbits_visited"] = db.orbits_visited;
  summary["subsets_covered"] = db.subsets_covered.str();
  summary["independent_subsets"] = db.independent_subsets.str();
  if (auto m = db.min_accepted_norm_sq()) {
    summary["min_norm_sq"] = to_string(*m);
    summary["min_norm"] = std::sqrt(to_double(*m));
  }
  summary["degenerate_regime"] = db.L <= 2;
  j["summary"] = std::move(summary);
  if (!meta.empty()) {
    nlohmann::ordered_json m;
    for (const auto& [k, v] : meta) m[k] = v;
    j["meta"] = std::move(m);
  }
  return j;
}

inline void write_spectra_db(std::ostream& os, const SpectraDatabase& db, const Metadata& meta) {
  os << to_json(db, meta).dump(2) << "\n";
}

inline SpectraDatabase read_spectra_db(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed spectra database: ") + e.what());
  }
  require(j.contains("L") && j.contains("spectra"), "spectra database needs \"L\" and \"spectra\"");
  SpectraDatabase db;
  db.L = j.at("L").get<int>();
  for (const auto& e : j.at("spectra")) {
    SpectrumRecord r;
    for (const auto& x : e.at("lambda")) r.lambda.push_back(parse_rational(x.get<std::string>()));
    require(static_cast<int>(r.lambda.size()) == db.L, "spectrum length differs from L");
    r.norm_sq = parse_rational(e.at("norm_sq").get<std::string>());
    r.orbit_size = e.value("orbit_size", std::uint64_t{1});
    r.subset_count = e.value("subset_count", std::uint64_t{0});
    r.added = e.value("added", false);
    db.spectra.push_back(std::move(r));
  }
  if (j.contains("summary")) {
    const auto& s = j.at("summary");
    db.symmetry_reduced = s.value("symmetry_reduced", false);
    db.orbits_visited = s.value("orbits_visited", std::uint64_t{0});
    if (s.contains("subsets_covered")) db.subsets_covered = BigInt(s.at("subsets_covered").get<std::string>());
    if (s.contains("independent_subsets"))
      db.independent_subsets = BigInt(s.at("independent_subsets").get<std::string>());
  }
  return db;
}

}  // namespace epoly
