// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every run uses seed 1 and all available threads
// (EPOLY_THREADS overrides). Expect roughly half an hour on one core; the
// L=7 enumeration and the L=200 sample dominate.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "epoly/epoly.hpp"
#include "oracles.hpp"

using namespace epoly;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

int threads() { return resolve_threads(0); }

Outcome criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  auto db = critical_spectra_enumerate(3, {SymmetryReduction::kHyperoctahedral, 1});
  const double elapsed = seconds_since(t0);
  std::set<std::vector<Rational>> got;
  for (const auto& r : db.spectra) got.insert(r.lambda);
  const Rational h(1, 2), s(1, 6);
  const std::set<std::vector<Rational>> listed{{0, 0, 0}, {s, s, s}, {h, 0, 0},
                                               {0, h, 0}, {0, 0, h}, {h, h, h}};
  const bool oracle_match = got == oracle::naive_l3_spectra();
  const bool listed_match = got == listed;
  return {oracle_match && listed_match && elapsed < 1.0,
          "spectra=" + std::to_string(got.size()) + " oracle_match=" + (oracle_match ? "yes" : "no") +
              " listed_match=" + (listed_match ? "yes" : "no") + " runtime=" + fmt("%.3fs", elapsed)};
}

Outcome criterion_2() {
  auto db = critical_spectra_enumerate(3);
  const auto w = local_spectra(PureState::w(3));
  double best = 1;
  for (const auto& r : db.spectra) {
    if (r.added) continue;
    double d = 0;
    for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(to_double(r.lambda[i]) - w.lambda[i]));
    best = std::min(best, d);
  }
  const double ew = linear_entropy(PureState::w(3));
  bool ghz_exact = true;
  for (int L = 3; L <= 10; ++L) ghz_exact = ghz_exact && linear_entropy(PureState::ghz(L)) == 0.5;
  const bool pass = best <= 1e-12 && std::abs(ew - 4.0 / 9) <= 1e-10 && ghz_exact;
  return {pass, "W3_vs_spectrum=" + fmt("%.2e", best) + " E(W3)-4/9=" + fmt("%.2e", ew - 4.0 / 9) +
                    " E(GHZ_3..10)=1/2_exact=" + (ghz_exact ? "yes" : "no")};
}

Outcome criterion_3() {
  auto run = [](int L) {
    DistanceOptions opt;
    opt.n = 1000000;
    opt.seed = kSeed;
    opt.filter = DistanceFilter::kAllIndependent;
    opt.threads = threads();
    auto s = distance_histogram(L, opt);
    const GammaLaw law(0.5, 2.0 * L);
    const double ks = ks_distance(s, law).statistic;
    const double rel = std::abs(moment_report(s).mean - law.mean()) / law.mean();
    return std::pair{ks, rel};
  };
  const auto t0 = std::chrono::steady_clock::now();
  const auto [ks13, rel13] = run(13);
  const auto [ks20, rel20] = run(20);
  const auto [ks200, rel200] = run(200);
  const bool pass = ks20 <= 0.02 && ks200 <= 0.01 && rel20 <= 0.02 && rel200 <= 0.02;
  return {pass, "KS(L=20)=" + fmt("%.4f", ks20) + "<=0.02 KS(L=200)=" + fmt("%.4f", ks200) +
                    "<=0.01 mean_rel_err(L=20)=" + fmt("%.4f", rel20) +
                    " mean_rel_err(L=200)=" + fmt("%.4f", rel200) + " <=0.02 [info KS(L=13)=" +
                    fmt("%.4f", ks13) + " mean_rel_err(L=13)=" + fmt("%.4f", rel13) + "] runtime=" +
                    fmt("%.0fs", seconds_since(t0))};
}

Outcome criterion_4() {
  const std::size_t n = 100000;
  auto ratio = gram_ratio_gaussian(10, n, kSeed, threads());
  auto corner = bartlett_corner_samples(10, n, kSeed, threads());
  const double ks = ks_distance(ratio, GammaLaw(0.5, 0.5)).statistic;
  const double ks2 = ks_two_sample(ratio.values, corner.values).statistic;
  return {ks <= 0.01 && ks2 <= 0.015,
          "KS(gram_ratio,Gamma(1/2,1/2))=" + fmt("%.4f", ks) + "<=0.01 KS2(vs_Bartlett_T_LL^2)=" +
              fmt("%.4f", ks2) + "<=0.015"};
}

Outcome criterion_5() {
  const int L = 5;
  const std::size_t n = 100000;
  auto direct = transformed_gram_ratio(L, n, kSeed, TransformPath::kDirect, threads());
  auto diff = transformed_gram_ratio(L, n, kSeed, TransformPath::kDifference, threads());
  const double ks2 = ks_two_sample(direct.values, diff.values).statistic;
  auto scale = [](double x) { return 5.0 * x; };
  const double ks_d = ks_distance(direct.transformed(scale), GammaLaw(0.5, 0.5)).statistic;
  const double ks_f = ks_distance(diff.transformed(scale), GammaLaw(0.5, 0.5)).statistic;

  std::mt19937_64 g(kSeed);
  std::uniform_int_distribution<int> entry(-9, 9);
  int identity_holds = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = 2 + trial % 7;
    Matrix<BigInt> v(m, m), d(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) v(i, j) = entry(g);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) d(i, j) = j + 1 < m ? v(i, j) - v(i, m - 1) : v(i, m - 1);
    if (det_exact(v.transpose() * v) == det_exact(d.transpose() * d)) ++identity_holds;
  }
  const bool pass = ks2 <= 0.01 && ks_d <= 0.01 && ks_f <= 0.01 && identity_holds == 100;
  return {pass, "KS2(direct,difference)=" + fmt("%.4f", ks2) + "<=0.01 KS(L*direct)=" +
                    fmt("%.4f", ks_d) + " KS(L*difference)=" + fmt("%.4f", ks_f) +
                    "<=0.01 antisymmetry_exact=" + std::to_string(identity_holds) + "/100"};
}

Outcome criterion_6() {
  double worst = 0;
  for (int L = 1; L <= 200; ++L) worst = std::max(worst, std::abs(sigma_cholesky_check(L) - 1.0 / L));
  return {worst <= 1e-12, "max|R_LL^2-1/L| over L=1..200 = " + fmt("%.2e", worst)};
}

Outcome criterion_7() {
  auto x = gamma_sampler(GammaLaw(0.5, 0.5), 100000, kSeed, threads());
  double worst = 0;
  std::string detail;
  for (int L : {7, 20, 200}) {
    const double c = 1.0 / (4 * L);
    const double ks =
        ks_distance(x.transformed([c](double v) { return c * v; }), GammaLaw(0.5, 2.0 * L)).statistic;
    worst = std::max(worst, ks);
    detail += "KS(L=" + std::to_string(L) + ")=" + fmt("%.4f", ks) + " ";
  }
  return {worst <= 0.01, detail + "<=0.01"};
}

Outcome criterion_8() {
  const double p_generic = required_purity(7, 1 / (2 * std::sqrt(7.0)));
  const auto t0 = std::chrono::steady_clock::now();
  auto db = critical_spectra_enumerate(7, {SymmetryReduction::kHyperoctahedral, threads()});
  const double elapsed = seconds_since(t0);
  const auto m = db.min_accepted_norm_sq();
  const double eps = m ? std::sqrt(to_double(*m)) : 0.0;
  const double p_all = required_purity(7, eps);
  const bool pass = m && p_generic >= 0.94 && p_generic <= 0.955 && p_all >= 0.985 && p_all <= 0.995;
  return {pass, "p_generic=" + fmt("%.4f", p_generic) + " in [0.94,0.955] min|lambda_C|^2=" +
                    (m ? to_string(*m) : std::string("none")) + " p_all=" + fmt("%.4f", p_all) +
                    " in [0.985,0.995] spectra=" + std::to_string(db.spectra.size()) +
                    " group_orbits=" + std::to_string(db.orbits_visited) +
                    " enumeration=" + fmt("%.0fs", elapsed)};
}

std::string csv_payload(const DistanceSampleSet& s) {
  std::ostringstream os;
  write_samples_csv(os, s, {});
  return os.str();
}

Outcome criterion_9() {
  // Delta_H membership for Haar-random states, L = 1..10.
  rng::Engine e = rng::make_engine(kSeed, rng::stream_tag("acceptance/haar"), 0);
  int inside = 0;
  for (int i = 0; i < 10000; ++i)
    if (in_delta_H(local_spectra(PureState::haar_random(1 + i % 10, e)))) ++inside;

  // Min-norm certificates: exhaustive L=5 (every call certified internally)
  // plus exact and floating-point runs on random subsets up to L=12.
  bool certs = true;
  try {
    critical_spectra_enumerate(5, {SymmetryReduction::kNone, threads()});
  } catch (const std::logic_error&) {
    certs = false;
  }
  rng::Engine ce = rng::make_engine(kSeed, rng::stream_tag("acceptance/certificates"), 0);
  int cert_calls = 0;
  for (int i = 0; i < 1000; ++i) {
    auto s = random_subset(3 + i % 10, ce);
    auto pts = half_points(s);
    certs = certs && certify_min_norm(pts, min_norm_point(pts));
    auto fpts = half_points_double(s);
    certs = certs && certify_min_norm(fpts, min_norm_point(fpts), 1e-9);
    cert_calls += 2;
  }

  // Invariance of squared_distance under coordinate permutations, sign
  // flips and vertex reordering.
  std::mt19937_64 g(kSeed);
  rng::Engine se = rng::make_engine(kSeed, rng::stream_tag("acceptance/invariance"), 0);
  int invariant = 0, tried = 0;
  for (int i = 0; i < 1000; ++i) {
    const int L = 3 + i % 8;
    auto s = random_subset(L, se);
    std::vector<int> perm(static_cast<std::size_t>(L));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), g);
    const std::uint64_t flip = g();
    std::vector<SignVector> moved;
    for (const auto& v : s.vertices()) {
      SignVector w(L);
      for (int k = 0; k < L; ++k)
        w.set_negative(perm[static_cast<std::size_t>(k)], v.negative(k) != ((flip >> k) & 1));
      moved.push_back(w);
    }
    std::shuffle(moved.begin(), moved.end(), g);
    VertexSubset t(moved);
    ++tried;
    const bool ind = is_independent(s);
    if (ind != is_independent(t)) continue;
    if (!ind || squared_distance(s) == squared_distance(t)) ++invariant;
  }

  // Byte-identical outputs under 1 and 4 threads.
  DistanceOptions opt;
  opt.n = 20000;
  opt.seed = kSeed;
  opt.threads = 1;
  const auto a = csv_payload(distance_histogram(20, opt));
  opt.threads = 4;
  const auto b = csv_payload(distance_histogram(20, opt));
  const auto c = csv_payload(gram_ratio_gaussian(8, 20000, kSeed, 1));
  const auto d = csv_payload(gram_ratio_gaussian(8, 20000, kSeed, 4));
  std::ostringstream e1, e4;
  write_spectra_db(e1, critical_spectra_enumerate(5, {SymmetryReduction::kHyperoctahedral, 1}), {});
  write_spectra_db(e4, critical_spectra_enumerate(5, {SymmetryReduction::kHyperoctahedral, 4}), {});
  const bool deterministic = a == b && c == d && e1.str() == e4.str();

  const bool pass = inside == 10000 && certs && invariant == tried && deterministic;
  return {pass, "delta_H=" + std::to_string(inside) + "/10000 certificates=" +
                    (certs ? "ok" : "FAILED") + "(" + std::to_string(cert_calls) +
                    " calls + exhaustive L=5) invariance=" + std::to_string(invariant) + "/" +
                    std::to_string(tried) + " thread_determinism=" + (deterministic ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 L=3 enumeration vs brute-force oracle", criterion_1},
      {"2 W/GHZ cross-module ground truth", criterion_2},
      {"3 sampled distances vs Gamma(1/2,2L), n=1e6", criterion_3},
      {"4 Gram ratio and Bartlett corner vs Gamma(1/2,1/2)", criterion_4},
      {"5 transform paths and determinant antisymmetry", criterion_5},
      {"6 Cholesky corner 1/L", criterion_6},
      {"7 gamma scaling property", criterion_7},
      {"8 purity reproduction at L=7", criterion_8},
      {"9 property suites", criterion_9},
  };
  std::cout << "threads=" << threads() << " seed=" << kSeed << "\n" << std::flush;
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << " | " << o.detail << "\n"
              << std::flush;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
