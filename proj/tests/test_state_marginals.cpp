#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "epoly/critical_spectra.hpp"
#include "epoly/state_marginals.hpp"

using namespace epoly;

TEST(Rdm, ProductStateIsPure) {
  auto s = PureState::basis(4, 0);
  for (int q = 1; q <= 4; ++q) {
    auto rho = one_qubit_rdm(s, q);
    EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(rho(1, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(rho(0, 1)), 0.0, 1e-15);
  }
}

TEST(Rdm, GhzMarginalsAreMaximallyMixed) {
  for (int L = 2; L <= 8; ++L) {
    auto s = PureState::ghz(L);
    for (int q = 1; q <= L; ++q) {
      auto rho = one_qubit_rdm(s, q);
      EXPECT_NEAR(rho(0, 0).real(), 0.5, 1e-15);
      EXPECT_NEAR(rho(1, 1).real(), 0.5, 1e-15);
      EXPECT_NEAR(std::abs(rho(0, 1)), 0.0, 1e-15);
    }
  }
}

TEST(Rdm, WStateFirstQubit) {
  auto rho = one_qubit_rdm(PureState::w(3), 1);
  EXPECT_NEAR(rho(0, 0).real(), 2.0 / 3, 1e-15);
  EXPECT_NEAR(rho(1, 1).real(), 1.0 / 3, 1e-15);
  EXPECT_NEAR(std::abs(rho(0, 1)), 0.0, 1e-15);
}

TEST(Rdm, QubitOneIsMostSignificantBit) {
  // |100> has qubit 1 in state |1>.
  auto s = PureState::basis(3, 4);
  EXPECT_NEAR(one_qubit_rdm(s, 1)(1, 1).real(), 1.0, 1e-15);
  EXPECT_NEAR(one_qubit_rdm(s, 3)(0, 0).real(), 1.0, 1e-15);
  EXPECT_THROW(one_qubit_rdm(s, 4), PreconditionError);
}

TEST(Rdm, HermitianUnitTrace) {
  rng::Engine e = rng::make_engine(1, 2, 3);
  for (int trial = 0; trial < 50; ++trial) {
    auto s = PureState::haar_random(1 + trial % 6, e);
    for (int q = 1; q <= s.qubits(); ++q) {
      auto rho = one_qubit_rdm(s, q);
      EXPECT_NEAR(std::abs(rho.trace() - Complex(1, 0)), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(rho(0, 1) - std::conj(rho(1, 0))), 0.0, 1e-14);
    }
  }
}

TEST(LocalSpectra, Examples) {
  for (double x : local_spectra(PureState::basis(5, 0)).lambda) EXPECT_NEAR(x, 0.5, 1e-15);
  for (double x : local_spectra(PureState::ghz(6)).lambda) EXPECT_NEAR(x, 0.0, 1e-15);
  for (double x : local_spectra(PureState::w(3)).lambda) EXPECT_NEAR(x, 1.0 / 6, 1e-12);
}

TEST(LocalSpectra, InvariantUnderLocalUnitaries) {
  rng::Engine e = rng::make_engine(4, 4, 4);
  for (int trial = 0; trial < 30; ++trial) {
    const int L = 2 + trial % 5;
    auto s = PureState::haar_random(L, e);
    const auto before = local_spectra(s).lambda;
    for (int q = 1; q <= L; ++q) s.apply_local(q, random_unitary_2(e));
    const auto after = local_spectra(s).lambda;
    for (int i = 0; i < L; ++i) EXPECT_NEAR(before[i], after[i], 1e-12);
  }
}

TEST(LocalSpectra, WStateMatchesAcceptedCriticalSpectrum) {
  auto db = critical_spectra_enumerate(3);
  auto w = local_spectra(PureState::w(3));
  bool found = false;
  for (const auto& r : db.spectra) {
    if (r.added) continue;
    bool close = true;
    for (int i = 0; i < 3; ++i) close = close && std::abs(to_double(r.lambda[i]) - w.lambda[i]) <= 1e-12;
    found = found || close;
  }
  EXPECT_TRUE(found);
}

TEST(LinearEntropy, Examples) {
  EXPECT_NEAR(linear_entropy(PureState::basis(4, 3)), 0.0, 1e-15);
  for (int L = 3; L <= 10; ++L) EXPECT_EQ(linear_entropy(PureState::ghz(L)), 0.5) << "L=" << L;
  EXPECT_NEAR(linear_entropy(PureState::w(3)), 4.0 / 9, 1e-10);
}

TEST(LinearEntropy, TraceAndSpectraFormsAgree) {
  rng::Engine e = rng::make_engine(6, 6, 6);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = PureState::haar_random(1 + trial % 7, e);
    EXPECT_NEAR(linear_entropy(s), linear_entropy(local_spectra(s)), 1e-12);
  }
}

TEST(DeltaH, Examples) {
  EXPECT_TRUE(in_delta_H(std::vector<double>{0, 0, 0}));
  EXPECT_FALSE(in_delta_H(std::vector<double>{0.5, 0.5, 0}));
  EXPECT_TRUE(in_delta_H(std::vector<double>{0.5, 0.5, 0.5}));
  EXPECT_FALSE(in_delta_H(std::vector<double>{0.6, 0.5, 0.5}));
  EXPECT_TRUE(in_delta_H(std::vector<Rational>{Rational(1, 6), Rational(1, 6), Rational(1, 6)}));
}

TEST(DeltaH, HaarRandomFourQubitStatesAreInside) {
  rng::Engine e = rng::make_engine(10, 4, 0);
  for (int i = 0; i < 10000; ++i) ASSERT_TRUE(in_delta_H(local_spectra(PureState::haar_random(4, e))));
}

TEST(DeltaH, CriticalSpectraAreInside) {
  for (const auto& r : critical_spectra_enumerate(5).spectra) EXPECT_TRUE(in_delta_H(r.lambda));
}

TEST(PureState, RejectsBadInput) {
  EXPECT_THROW(PureState(2, std::vector<Complex>(3)), PreconditionError);
  EXPECT_THROW(PureState(2, std::vector<Complex>(4)), PreconditionError);
  EXPECT_THROW(PureState::ghz(kStateQubitCap + 1), PreconditionError);
}

TEST(ParseState, JsonObject) {
  std::istringstream in(R"({"L": 3, "amplitudes": [[4, 1, 0], [2, 1, 0], [1, 1, 0]]})");
  double n2 = 0;
  auto s = parse_state(in, std::nullopt, &n2);
  EXPECT_EQ(s.qubits(), 3);
  EXPECT_NEAR(n2, 3.0, 1e-15);
  EXPECT_NEAR(linear_entropy(s), 4.0 / 9, 1e-12);
}

TEST(ParseState, CsvWithHeaderAndQubitLine) {
  std::istringstream in("# L=2\nindex,re,im\n0,0.7071067811865476,0\n3,0,0.7071067811865476\n");
  double n2 = 0;
  auto s = parse_state(in, std::nullopt, &n2);
  EXPECT_EQ(s.qubits(), 2);
  EXPECT_NEAR(n2, 1.0, 1e-15);
  EXPECT_NEAR(linear_entropy(s), 0.5, 1e-12);
}

TEST(ParseState, Errors) {
  std::istringstream no_l("[[0, 1, 0]]");
  EXPECT_THROW(parse_state(no_l), PreconditionError);
  std::istringstream bad_index(R"({"L": 1, "amplitudes": [[2, 1, 0]]})");
  EXPECT_THROW(parse_state(bad_index), PreconditionError);
  std::istringstream zero(R"({"L": 1, "amplitudes": [[0, 0, 0]]})");
  EXPECT_THROW(parse_state(zero), PreconditionError);
  std::istringstream junk("0,1\n");
  EXPECT_THROW(parse_state(junk, 1), PreconditionError);
}
