#pragma once

// Pure L-qubit states and their one-qubit marginals.
//
// Qubit convention: qubit 1 is the most significant bit of the amplitude
// index, so |q1 q2 ... qL> has index q1 * 2^(L-1) + ... + qL.

#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "epoly/error.hpp"
#include "epoly/exact.hpp"
#include "epoly/rng.hpp"

namespace epoly {

using Complex = std::complex<double>;

/// Largest qubit count held as a state vector (2^20 amplitudes).
inline constexpr int kStateQubitCap = 20;

class PureState {
 public:
  /// Takes the amplitudes as given and renormalizes them; rejects the zero
  /// vector and sizes that are not 2^L.
  PureState(int qubits, std::vector<Complex> amplitudes)
      : qubits_(qubits), amps_(std::move(amplitudes)) {
    if (qubits < 1 || qubits > kStateQubitCap)
      throw CapExceededError("state qubit count must lie in [1, " +
                             std::to_string(kStateQubitCap) + "]");
    require(amps_.size() == (std::size_t{1} << qubits), "amplitude count must be 2^L");
    const double n2 = raw_norm_sq();
    require(n2 > 0 && std::isfinite(n2), "state vector has zero or non-finite norm");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps_) a *= inv;
  }

  static PureState basis(int qubits, std::uint64_t index) {
    std::vector<Complex> a(std::size_t{1} << qubits);
    require(index < a.size(), "basis index out of range");
    a[index] = 1.0;
    return PureState(qubits, std::move(a));
  }

  static PureState ghz(int qubits) {
    std::vector<Complex> a(std::size_t{1} << qubits);
    a.front() = 1.0;
    a.back() = 1.0;
    return PureState(qubits, std::move(a));
  }

  /// Equal superposition of the L single-excitation basis states.
  static PureState w(int qubits) {
    std::vector<Complex> a(std::size_t{1} << qubits);
    for (int q = 0; q < qubits; ++q) a[std::size_t{1} << q] = 1.0;
    return PureState(qubits, std::move(a));
  }

  /// Unitarily invariant (Haar) random state: normalized complex Gaussian vector.
  static PureState haar_random(int qubits, rng::Engine& engine) {
    rng::NormalSampler normal;
    std::vector<Complex> a(std::size_t{1} << qubits);
    for (auto& z : a) {
      const double re = normal(engine);
      z = Complex(re, normal(engine));
    }
    return PureState(qubits, std::move(a));
  }

  int qubits() const { return qubits_; }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  double norm_sq() const { return raw_norm_sq(); }

  /// Applies a 2x2 unitary to qubit i (1-based).
  void apply_local(int qubit, const Eigen::Matrix2cd& u) {
    require(qubit >= 1 && qubit <= qubits_, "qubit index out of range");
    const std::size_t bit = std::size_t{1} << (qubits_ - qubit);
    for (std::size_t idx = 0; idx < amps_.size(); ++idx) {
      if (idx & bit) continue;
      const Complex a0 = amps_[idx], a1 = amps_[idx | bit];
      amps_[idx] = u(0, 0) * a0 + u(0, 1) * a1;
      amps_[idx | bit] = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }

 private:
  double raw_norm_sq() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  int qubits_;
  std::vector<Complex> amps_;
};

/// Haar-random 2x2 unitary from the QR factorization of a complex Ginibre
/// matrix, with the phases of R's diagonal absorbed into Q.
inline Eigen::Matrix2cd random_unitary_2(rng::Engine& engine) {
  rng::NormalSampler normal;
  Eigen::Matrix2cd g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double re = normal(engine);
      g(i, j) = Complex(re, normal(engine));
    }
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  Eigen::Matrix2cd q = qr.householderQ();
  Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < 2; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= std::abs(d) > 0 ? d / std::abs(d) : Complex(1.0);
  }
  return q;
}

/// Reduced density matrix of qubit i (1-based): partial trace over the rest.
inline Eigen::Matrix2cd one_qubit_rdm(const PureState& state, int qubit) {
  const int L = state.qubits();
  require(qubit >= 1 && qubit <= L, "qubit index out of range");
  const std::size_t bit = std::size_t{1} << (L - qubit);
  const auto& a = state.amplitudes();
  double p0 = 0, p1 = 0;
  Complex c01 = 0;
  for (std::size_t idx = 0; idx < a.size(); ++idx) {
    if (idx & bit) continue;
    const Complex a0 = a[idx], a1 = a[idx | bit];
    p0 += std::norm(a0);
    p1 += std::norm(a1);
    c01 += a0 * std::conj(a1);
  }
  Eigen::Matrix2cd rho;
  rho << p0, c01, std::conj(c01), p1;
  return rho;
}

/// Shifted local spectra lambda_i = 1/2 - p_i, p_i the smaller eigenvalue of
/// the i-th one-qubit RDM.
struct LocalSpectra {
  std::vector<double> lambda;

  double norm_sq() const {
    double s = 0;
    for (double x : lambda) s += x * x;
    return s;
  }
};

/// For a unit-trace Hermitian 2x2 matrix [[a, b], [b*, d]] the eigenvalues
/// are 1/2 +- sqrt((a - d)^2 + 4|b|^2) / 2, so lambda is the square-root term.
inline double shifted_spectrum(const Eigen::Matrix2cd& rho) {
  const double diff = rho(0, 0).real() - rho(1, 1).real();
  return 0.5 * std::sqrt(diff * diff + 4.0 * std::norm(rho(0, 1)));
}

inline LocalSpectra local_spectra(const PureState& state) {
  LocalSpectra s;
  s.lambda.resize(static_cast<std::size_t>(state.qubits()));
  for (int q = 1; q <= state.qubits(); ++q)
    s.lambda[static_cast<std::size_t>(q - 1)] = std::min(0.5, shifted_spectrum(one_qubit_rdm(state, q)));
  return s;
}

/// Mean linear entropy from the marginals: 1 - (1/L) sum_i tr(rho_i^2).
/// Each term is evaluated as 2 det(rho) / tr(rho)^2, which equals
/// 1 - tr(rho^2) at unit trace and absorbs the rounding of the amplitude
/// normalization (GHZ marginals give exactly 1/2).
inline double linear_entropy(const PureState& state) {
  double deficit = 0;
  for (int q = 1; q <= state.qubits(); ++q) {
    const Eigen::Matrix2cd rho = one_qubit_rdm(state, q);
    const double a = rho(0, 0).real(), d = rho(1, 1).real();
    deficit += 2.0 * (a * d - std::norm(rho(0, 1))) / ((a + d) * (a + d));
  }
  return deficit / state.qubits();
}

/// Same quantity from the spectra: 1/2 - (2/L) |lambda|^2.
inline double linear_entropy(const LocalSpectra& spectra) {
  return 0.5 - 2.0 * spectra.norm_sq() / static_cast<double>(spectra.lambda.size());
}

/// Membership in the polytope of admissible local spectra: every lambda_i in
/// [0, 1/2] and, for each i, 1/2 - lambda_i <= sum_{j != i} (1/2 - lambda_j).
/// `tol` loosens each inequality for floating-point input.
template <class Scalar>
bool in_delta_H(std::span<const Scalar> lambda, double tol = 0.0) {
  const Scalar half = Scalar(1) / Scalar(2);
  const Scalar slack(tol);
  Scalar total(0);
  for (const auto& x : lambda) {
    if (x < Scalar(0) - slack || x > half + slack) return false;
    total += half - x;
  }
  for (const auto& x : lambda) {
    const Scalar mine = half - x;
    if (mine > total - mine + slack) return false;
  }
  return true;
}

template <class Scalar>
bool in_delta_H(const std::vector<Scalar>& lambda, double tol = 0.0) {
  return in_delta_H<Scalar>(std::span<const Scalar>(lambda), tol);
}

inline bool in_delta_H(const LocalSpectra& s, double tol = 1e-12) {
  return in_delta_H<double>(std::span<const double>(s.lambda), tol);
}

// State files ---------------------------------------------------------------

namespace detail {

inline PureState state_from_triples(int qubits,
                                    const std::vector<std::pair<std::uint64_t, Complex>>& entries,
                                    double* norm_sq_out) {
  if (qubits < 1 || qubits > kStateQubitCap)
    throw CapExceededError("state qubit count must lie in [1, " +
                           std::to_string(kStateQubitCap) + "]");
  std::vector<Complex> amps(std::size_t{1} << qubits);
  for (const auto& [idx, z] : entries) {
    require(idx < amps.size(), "amplitude index " + std::to_string(idx) + " out of range");
    amps[idx] += z;
  }
  if (norm_sq_out) {
    double s = 0;
    for (const auto& a : amps) s += std::norm(a);
    *norm_sq_out = s;
  }
  return PureState(qubits, std::move(amps));
}

}  // namespace detail

/// Parses a state file of (index, re, im) triples. Accepted forms:
///   JSON  {"L": 3, "amplitudes": [[1, 0.577, 0], ...]}  or a bare array of
///         triples (L then comes from `qubits`);
///   CSV   lines "index,re,im", an optional header, optional "# L=3".
/// `norm_sq_out` receives the squared norm before renormalization.
inline PureState parse_state(std::istream& in, std::optional<int> qubits = std::nullopt,
                             double* norm_sq_out = nullptr) {
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  require(first != std::string::npos, "state file is empty");
  std::vector<std::pair<std::uint64_t, Complex>> entries;
  std::optional<int> L = qubits;

  if (text[first] == '{' || text[first] == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw PreconditionError(std::string("malformed state JSON: ") + e.what());
    }
    const nlohmann::json* arr = &j;
    if (j.is_object()) {
      if (j.contains("L")) L = j.at("L").get<int>();
      require(j.contains("amplitudes"), "state JSON needs an \"amplitudes\" array");
      arr = &j.at("amplitudes");
    }
    require(arr->is_array(), "state amplitudes must be an array");
    for (const auto& t : *arr) {
      require(t.is_array() && t.size() == 3, "each amplitude must be [index, re, im]");
      entries.emplace_back(t[0].get<std::uint64_t>(),
                           Complex(t[1].get<double>(), t[2].get<double>()));
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      const auto p = line.find_first_not_of(" \t\r");
      if (p == std::string::npos) continue;
      if (line[p] == '#') {
        const auto eq = line.find("L=");
        if (eq != std::string::npos && !L) L = std::stoi(line.substr(eq + 2));
        continue;
      }
      std::istringstream row(line);
      std::string f0, f1, f2;
      if (!std::getline(row, f0, ',') || !std::getline(row, f1, ',') || !std::getline(row, f2))
        throw PreconditionError("state CSV rows need three fields: " + line);
      try {
        entries.emplace_back(std::stoull(f0), Complex(std::stod(f1), std::stod(f2)));
      } catch (const std::exception&) {
        if (entries.empty()) continue;  // header
        throw PreconditionError("malformed state CSV row: " + line);
      }
    }
  }
  require(L.has_value(), "qubit count unknown: give \"L\" in the file or pass it explicitly");
  return detail::state_from_triples(*L, entries, norm_sq_out);
}

}  // namespace epoly
