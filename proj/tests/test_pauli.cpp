#include <catch2/catch_amalgamated.hpp>
#include <complex>
#include <string>

#include "shiftrule/pauli.hpp"
#include "shiftrule/rng.hpp"
#include "support/oracles.hpp"

using namespace shiftrule;
using testsupport::pauli_sum_matrix;
using testsupport::pauli_word_matrix;
using testsupport::random_state;

namespace {

PauliString random_word(std::size_t qubits, PhiloxStream& rng) {
  static constexpr char kAxes[4] = {'I', 'X', 'Y', 'Z'};
  std::string text;
  for (std::size_t q = 0; q < qubits; ++q)
    text.push_back(kAxes[rng.next_u32() % 4]);
  return PauliString::parse(text);
}

}  // namespace

TEST_CASE("PauliString parse/str round trip and accessors") {
  const PauliString w = PauliString::parse("XZIY");
  CHECK(w.str() == "XZIY");
  CHECK(w.qubit_count() == 4);
  CHECK(w.axis(0) == 'X');
  CHECK(w.axis(1) == 'Z');
  CHECK(w.axis(2) == 'I');
  CHECK(w.axis(3) == 'Y');
  CHECK(w.weight() == 3);
  CHECK_FALSE(w.is_identity());
  CHECK(PauliString::identity(3).is_identity());
  CHECK(PauliString::single(3, 1, 'Y').str() == "IYI");
  CHECK(PauliString::parse("XZIY") == w);
  CHECK(PauliString::parse("XZIZ") != w);
}

TEST_CASE("PauliString parse rejects bad input") {
  CHECK_THROWS_AS(PauliString::parse("XQ"), std::invalid_argument);
  CHECK_THROWS_AS(PauliString::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(PauliString::parse("xz"), std::invalid_argument);
  CHECK_THROWS_WITH(PauliString::parse("XQ"),
                    Catch::Matchers::ContainsSubstring("XQ"));
}

TEST_CASE("bitmask convention: qubit 0 is the most significant bit") {
  // "XZ".to_matrix() must equal kron(X, Z): check via PauliSum.
  PauliSum s(2);
  s.add("XZ", 1.0);
  CHECK(s.to_matrix().isApprox(pauli_word_matrix("XZ"), 1e-14));
  const PauliString w = PauliString::parse("XI");
  CHECK(w.x_mask() == 0b10);
  CHECK(PauliString::parse("IZ").z_mask() == 0b01);
}

TEST_CASE("commutation matches the dense commutator") {
  PhiloxStream rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    const PauliString a = random_word(3, rng);
    const PauliString b = random_word(3, rng);
    const Eigen::MatrixXcd ma = pauli_word_matrix(a.str());
    const Eigen::MatrixXcd mb = pauli_word_matrix(b.str());
    const bool commute = (ma * mb - mb * ma).cwiseAbs().maxCoeff() < 1e-12;
    CHECK(a.commutes_with(b) == commute);
  }
}

TEST_CASE("multiply reproduces the dense product with phase") {
  CHECK(multiply(PauliString::parse("X"), PauliString::parse("Y")).word ==
        PauliString::parse("Z"));
  CHECK(multiply(PauliString::parse("X"), PauliString::parse("Y")).phase ==
        std::complex<double>(0, 1));
  CHECK(multiply(PauliString::parse("Y"), PauliString::parse("X")).phase ==
        std::complex<double>(0, -1));

  PhiloxStream rng(6);
  for (int rep = 0; rep < 40; ++rep) {
    const PauliString a = random_word(3, rng);
    const PauliString b = random_word(3, rng);
    const PauliProduct p = multiply(a, b);
    const Eigen::MatrixXcd expect =
        pauli_word_matrix(a.str()) * pauli_word_matrix(b.str());
    const Eigen::MatrixXcd got = p.phase * pauli_word_matrix(p.word.str());
    CHECK((expect - got).cwiseAbs().maxCoeff() < 1e-13);
  }
  CHECK_THROWS_AS(
      multiply(PauliString::parse("X"), PauliString::parse("XX")),
      std::invalid_argument);
}

TEST_CASE("apply matches the dense matrix-vector product") {
  PhiloxStream rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const PauliString w = random_word(3, rng);
    const Eigen::VectorXcd psi = random_state(8, 100 + rep);
    const Eigen::VectorXcd got = apply(w, psi);
    const Eigen::VectorXcd expect = pauli_word_matrix(w.str()) * psi;
    CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("PauliSum arithmetic, pruning, and norms") {
  PauliSum s(2);
  s.add("XZ", 0.5);
  s.add("XZ", -0.5);
  CHECK(s.is_zero());

  s.add("XI", 1.0);
  s.add("IZ", -2.0);
  CHECK(s.size() == 2);
  CHECK(s.coefficient(PauliString::parse("XI")) == 1.0);
  CHECK(s.coefficient(PauliString::parse("XX")) == 0.0);
  CHECK(s.coefficient_norm2() == Catch::Approx(5.0));

  PauliSum t = PauliSum::from_terms(2, {{"XI", 1.0}, {"YY", 0.25}});
  const PauliSum sum = s + t;
  CHECK(sum.coefficient(PauliString::parse("XI")) == 2.0);
  const PauliSum diff = s - t;
  CHECK(diff.coefficient(PauliString::parse("XI")) == 0.0);
  PauliSum scaled = 2.0 * t;
  CHECK(scaled.coefficient(PauliString::parse("YY")) == 0.5);
}

TEST_CASE("PauliSum dense conversion and application") {
  const PauliSum s =
      PauliSum::from_terms(2, {{"XI", 0.7}, {"ZX", -0.3}, {"YY", 0.1}});
  CHECK(s.to_matrix().isApprox(pauli_sum_matrix(s), 1e-14));

  const Eigen::VectorXcd psi = random_state(4, 9);
  CHECK((s.apply(psi) - pauli_sum_matrix(s) * psi).cwiseAbs().maxCoeff() <
        1e-13);

  CHECK_THROWS_AS(PauliSum(kDenseQubitCap + 1).to_matrix(),
                  std::invalid_argument);
}

TEST_CASE("embedded shifts a sum onto a wider register") {
  const PauliSum s = PauliSum::from_terms(2, {{"XZ", 0.5}});
  const PauliSum wide = s.embedded(4, 1);
  CHECK(wide.qubit_count() == 4);
  CHECK(wide.coefficient(PauliString::parse("IXZI")) == 0.5);
}

TEST_CASE("decompose inverts to_matrix") {
  PhiloxStream rng(8);
  PauliSum s(3);
  for (int k = 0; k < 4; ++k)
    s.add(random_word(3, rng), rng.uniform(-1.0, 1.0));
  const PauliSum back = PauliSum::decompose(s.to_matrix());
  REQUIRE(back.size() == s.size());
  for (const auto& [word, c] : s.terms())
    CHECK(back.coefficient(word) == Catch::Approx(c).margin(1e-12));

  Eigen::MatrixXcd not_hermitian = Eigen::MatrixXcd::Zero(2, 2);
  not_hermitian(0, 1) = 1.0;
  CHECK_THROWS_AS(PauliSum::decompose(not_hermitian), std::invalid_argument);

  Eigen::MatrixXcd odd(3, 3);
  odd.setIdentity();
  CHECK_THROWS_AS(PauliSum::decompose(odd), std::invalid_argument);
}
