// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#pragma once

#include <Eigen/Dense>
#include <compare>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <utility>

namespace shiftrule {

/// Qubit count above which dense-matrix conversions are refused.
inline constexpr std::size_t kDenseQubitCap = 12;

class PauliString;
struct PauliProduct;
PauliProduct multiply(const PauliString& a, const PauliString& b);

/// A tensor product of single-qubit Pauli operators on a fixed register.
///
/// The word is stored as an (x, z) bitmask pair: qubit q carries X iff bit
/// x(q) is set, Z iff z(q) is set, and Y iff both are set.  Qubit 0 is the
/// leftmost character of the text form and the most significant bit of a
/// computational-basis index, so "XZ".to_matrix() == kron(X, Z).
class PauliString {
 public:
  /// Zero-qubit word; useful only as a placeholder.
  PauliString() = default;

  /// Identity word on `qubits` qubits.
  static PauliString identity(std::size_t qubits);

  /// Parse a text word such as "XZIY".  Throws std::invalid_argument on
  /// characters outside {I,X,Y,Z}, empty input, or more than 64 qubits.
  static PauliString parse(std::string_view text);

  /// Word with the given axis ('I','X','Y','Z') on one qubit, identity
  /// elsewhere.
  static PauliString single(std::size_t qubits, std::size_t qubit, char axis);

  std::size_t qubit_count() const { return n_; }

  /// Axis letter of qubit q.
  char axis(std::size_t qubit) const;

  /// Number of non-identity qubits.
  std::size_t weight() const;

  bool is_identity() const { return x_ == 0 && z_ == 0; }

  /// True iff the two words commute (they either commute or anticommute).
  bool commutes_with(const PauliString& other) const;

  std::string str() const;

  /// X/Z bitmasks; qubit q maps to bit (qubit_count()-1-q), matching the
  /// significance of that qubit in a basis-state index.
  std::uint64_t x_mask() const { return x_; }
  std::uint64_t z_mask() const { return z_; }

  friend bool operator==(const PauliString&, const PauliString&) = default;
  friend std::strong_ordering operator<=>(const PauliString&,
                                          const PauliString&) = default;

 private:
  PauliString(std::uint32_t n, std::uint64_t x, std::uint64_t z)
      : n_(n), x_(x), z_(z) {}

  std::uint32_t n_ = 0;
  std::uint64_t x_ = 0;
  std::uint64_t z_ = 0;

  friend class PauliSum;
  friend struct PauliProduct;
  friend PauliProduct multiply(const PauliString&, const PauliString&);
};

/// Result of multiplying two Pauli words: phase * word, phase in {1,-1,i,-i}.
struct PauliProduct {
  std::complex<double> phase;
  PauliString word;
};

/// Product a*b of two Pauli words on the same register.
/// Throws std::invalid_argument if the registers differ.
PauliProduct multiply(const PauliString& a, const PauliString& b);

/// Apply a Pauli word to a state vector (signed permutation, O(2^N)).
Eigen::VectorXcd apply(const PauliString& word, const Eigen::VectorXcd& psi);

/// A real-weighted sum of Pauli words: a Hermitian operator given as
/// sum_v c_v * sigma_v.  Terms are kept in a deterministic order and
/// zero-coefficient terms are pruned, so iteration order is reproducible.
class PauliSum {
 public:
  /// Zero operator on `qubits` qubits (1 <= qubits <= 64).
  explicit PauliSum(std::size_t qubits);

  /// Convenience builder from text terms, e.g. {{"XI", 1.0}, {"ZX", -0.5}}.
  static PauliSum from_terms(
      std::size_t qubits,
      std::initializer_list<std::pair<std::string_view, double>> terms);

  std::size_t qubit_count() const { return n_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  /// Accumulate coeff * word; erases the term if the total cancels to zero.
  void add(const PauliString& word, double coeff);
  void add(std::string_view word, double coeff);

  /// Coefficient of a word (0 if absent).
  double coefficient(const PauliString& word) const;

  const std::map<PauliString, double>& terms() const { return terms_; }

  /// sum_v c_v^2, the quantity entering the paired-sample variance bound.
  double coefficient_norm2() const;

  PauliSum& operator+=(const PauliSum& rhs);
  PauliSum& operator-=(const PauliSum& rhs);
  PauliSum& operator*=(double scale);
  friend PauliSum operator+(PauliSum lhs, const PauliSum& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend PauliSum operator-(PauliSum lhs, const PauliSum& rhs) {
    lhs -= rhs;
    return lhs;
  }
  friend PauliSum operator*(double scale, PauliSum rhs) {
    rhs *= scale;
    return rhs;
  }

  /// Embed this operator on a wider register, occupying qubits
  /// [offset, offset + qubit_count()) of the new register.
  PauliSum embedded(std::size_t total_qubits, std::size_t offset) const;

  /// Dense matrix form.  Throws std::invalid_argument above the dense cap.
  Eigen::MatrixXcd to_matrix() const;

  /// Apply to a state vector term by term (no dense matrix formed).
  Eigen::VectorXcd apply(const Eigen::VectorXcd& psi) const;

  /// Expand a Hermitian matrix in the Pauli basis: c_v = Tr[m sigma_v]/2^N.
  /// Coefficients with |c| <= prune are dropped.  Throws if the matrix is not
  /// square with power-of-two size within the dense cap, or if it deviates
  /// from Hermiticity by more than `hermiticity_tol` in any entry.
  static PauliSum decompose(const Eigen::MatrixXcd& m,
                            double hermiticity_tol = 1e-10,
                            double prune = 1e-14);

 private:
  std::size_t n_;
  std::map<PauliString, double> terms_;
};

}  // namespace shiftrule
