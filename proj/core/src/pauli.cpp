// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#include "shiftrule/pauli.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace shiftrule {

namespace {

constexpr std::complex<double> kPhases[4] = {
    {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};

// i^popcount(x & z): phase relating X^x Z^z to the Pauli word itself.
int xz_phase_exponent(std::uint64_t x, std::uint64_t z) {
  return std::popcount(x & z) & 3;
}

void check_same_register(std::size_t a, std::size_t b, const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) +
                                ": operands act on different registers (" +
                                std::to_string(a) + " vs " + std::to_string(b) +
                                " qubits)");
}

void check_dense_cap(std::size_t qubits) {
  if (qubits > kDenseQubitCap)
    throw std::invalid_argument(
        "dense conversion refused: " + std::to_string(qubits) +
        " qubits exceeds the cap of " + std::to_string(kDenseQubitCap));
}

}  // namespace

PauliString PauliString::identity(std::size_t qubits) {
  if (qubits == 0 || qubits > 64)
    throw std::invalid_argument("PauliString: qubit count must be in [1, 64]");
  return PauliString(static_cast<std::uint32_t>(qubits), 0, 0);
}

PauliString PauliString::parse(std::string_view text) {
  if (text.empty())
    throw std::invalid_argument("PauliString: empty word");
  if (text.size() > 64)
    throw std::invalid_argument("PauliString: more than 64 qubits");
  std::uint64_t x = 0, z = 0;
  const std::size_t n = text.size();
  for (std::size_t q = 0; q < n; ++q) {
    const std::uint64_t bit = 1ull << (n - 1 - q);
    switch (text[q]) {
      case 'I':
        break;
      case 'X':
        x |= bit;
        break;
      case 'Y':
        x |= bit;
        z |= bit;
        break;
      case 'Z':
        z |= bit;
        break;
      default:
        throw std::invalid_argument(
            std::string("PauliString: invalid axis '") + text[q] +
            "' at position " + std::to_string(q) + " in \"" +
            std::string(text) + "\"");
    }
  }
  return PauliString(static_cast<std::uint32_t>(n), x, z);
}

PauliString PauliString::single(std::size_t qubits, std::size_t qubit,
                                char axis) {
  PauliString p = identity(qubits);
  if (qubit >= qubits)
    throw std::invalid_argument("PauliString: qubit index out of range");
  const std::uint64_t bit = 1ull << (qubits - 1 - qubit);
  switch (axis) {
    case 'I':
      break;
    case 'X':
      p.x_ |= bit;
      break;
    case 'Y':
      p.x_ |= bit;
      p.z_ |= bit;
      break;
    case 'Z':
      p.z_ |= bit;
      break;
    default:
      throw std::invalid_argument(std::string("PauliString: invalid axis '") +
                                  axis + "'");
  }
  return p;
}

char PauliString::axis(std::size_t qubit) const {
  if (qubit >= n_)
    throw std::invalid_argument("PauliString: qubit index out of range");
  const std::uint64_t bit = 1ull << (n_ - 1 - qubit);
  const bool x = x_ & bit, z = z_ & bit;
  return x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
}

std::size_t PauliString::weight() const {
  return static_cast<std::size_t>(std::popcount(x_ | z_));
}

bool PauliString::commutes_with(const PauliString& other) const {
  check_same_register(n_, other.n_, "commutes_with");
  const int anti = (std::popcount(x_ & other.z_) +
                    std::popcount(z_ & other.x_)) & 1;
  return anti == 0;
}

std::string PauliString::str() const {
  std::string s(n_, 'I');
  for (std::size_t q = 0; q < n_; ++q) s[q] = axis(q);
  return s;
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  check_same_register(a.n_, b.n_, "multiply");
  const std::uint64_t x = a.x_ ^ b.x_;
  const std::uint64_t z = a.z_ ^ b.z_;
  // Phase from X^x Z^z normal ordering: i^(ya+yb-yc) * (-1)^{z_a . x_b}.
  int k = xz_phase_exponent(a.x_, a.z_) + xz_phase_exponent(b.x_, b.z_) -
          xz_phase_exponent(x, z) + 2 * (std::popcount(a.z_ & b.x_) & 1);
  k = ((k % 4) + 4) % 4;
  return PauliProduct{kPhases[k], PauliString(a.n_, x, z)};
}

Eigen::VectorXcd apply(const PauliString& word, const Eigen::VectorXcd& psi) {
  const std::size_t n = word.qubit_count();
  const Eigen::Index dim = Eigen::Index(1) << n;
  if (psi.size() != dim)
    throw std::invalid_argument("apply: state dimension mismatch");
  const std::uint64_t x = word.x_mask(), z = word.z_mask();
  const std::complex<double> lead = kPhases[xz_phase_exponent(x, z)];
  Eigen::VectorXcd out(dim);
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(dim); ++j) {
    const double sign = (std::popcount(z & j) & 1) ? -1.0 : 1.0;
    out[static_cast<Eigen::Index>(j ^ x)] = lead * sign * psi[j];
  }
  return out;
}

PauliSum::PauliSum(std::size_t qubits) : n_(qubits) {
  if (qubits == 0 || qubits > 64)
    throw std::invalid_argument("PauliSum: qubit count must be in [1, 64]");
}

PauliSum PauliSum::from_terms(
    std::size_t qubits,
    std::initializer_list<std::pair<std::string_view, double>> terms) {
  PauliSum sum(qubits);
  for (const auto& [word, coeff] : terms) sum.add(word, coeff);
  return sum;
}

void PauliSum::add(const PauliString& word, double coeff) {
  check_same_register(n_, word.qubit_count(), "PauliSum::add");
  auto [it, inserted] = terms_.try_emplace(word, coeff);
  if (!inserted) it->second += coeff;
  if (it->second == 0.0) terms_.erase(it);
}

void PauliSum::add(std::string_view word, double coeff) {
  add(PauliString::parse(word), coeff);
}

double PauliSum::coefficient(const PauliString& word) const {
  const auto it = terms_.find(word);
  return it == terms_.end() ? 0.0 : it->second;
}

double PauliSum::coefficient_norm2() const {
  double total = 0.0;
  for (const auto& [word, c] : terms_) total += c * c;
  return total;
}

PauliSum& PauliSum::operator+=(const PauliSum& rhs) {
  check_same_register(n_, rhs.n_, "PauliSum::operator+=");
  for (const auto& [word, c] : rhs.terms_) add(word, c);
  return *this;
}

PauliSum& PauliSum::operator-=(const PauliSum& rhs) {
  check_same_register(n_, rhs.n_, "PauliSum::operator-=");
  for (const auto& [word, c] : rhs.terms_) add(word, -c);
  return *this;
}

PauliSum& PauliSum::operator*=(double scale) {
  if (scale == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [word, c] : terms_) c *= scale;
  return *this;
}

PauliSum PauliSum::embedded(std::size_t total_qubits,
                            std::size_t offset) const {
  if (offset + n_ > total_qubits)
    throw std::invalid_argument("PauliSum::embedded: window out of range");
  PauliSum out(total_qubits);
  const std::size_t shift = total_qubits - offset - n_;
  for (const auto& [word, c] : terms_) {
    PauliString wide = PauliString::identity(total_qubits);
    wide.x_ = word.x_ << shift;
    wide.z_ = word.z_ << shift;
    out.add(wide, c);
  }
  return out;
}

Eigen::MatrixXcd PauliSum::to_matrix() const {
  check_dense_cap(n_);
  const Eigen::Index dim = Eigen::Index(1) << n_;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [word, c] : terms_) {
    const std::uint64_t x = word.x_mask(), z = word.z_mask();
    const std::complex<double> lead =
        c * kPhases[xz_phase_exponent(x, z)];
    for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(dim); ++j) {
      const double sign = (std::popcount(z & j) & 1) ? -1.0 : 1.0;
      m(static_cast<Eigen::Index>(j ^ x), static_cast<Eigen::Index>(j)) +=
          lead * sign;
    }
  }
  return m;
}

Eigen::VectorXcd PauliSum::apply(const Eigen::VectorXcd& psi) const {
  const Eigen::Index dim = Eigen::Index(1) << n_;
  if (psi.size() != dim)
    throw std::invalid_argument("PauliSum::apply: state dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  for (const auto& [word, c] : terms_) {
    const std::uint64_t x = word.x_mask(), z = word.z_mask();
    const std::complex<double> lead = c * kPhases[xz_phase_exponent(x, z)];
    for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(dim); ++j) {
      const double sign = (std::popcount(z & j) & 1) ? -1.0 : 1.0;
      out[static_cast<Eigen::Index>(j ^ x)] += lead * sign * psi[j];
    }
  }
  return out;
}

PauliSum PauliSum::decompose(const Eigen::MatrixXcd& m, double hermiticity_tol,
                             double prune) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("decompose: matrix is not square");
  const Eigen::Index dim = m.rows();
  if (dim < 2 || (dim & (dim - 1)) != 0)
    throw std::invalid_argument(
        "decompose: dimension is not a power of two >= 2");
  std::size_t n = 0;
  while ((Eigen::Index(1) << n) < dim) ++n;
  check_dense_cap(n);
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > hermiticity_tol)
    throw std::invalid_argument(
        "decompose: matrix deviates from Hermitian by " + std::to_string(herm));

  PauliSum sum(n);
  // Enumerate words via (x, z) masks; Tr[m sigma] touches one diagonal of m.
  for (std::uint64_t x = 0; x < static_cast<std::uint64_t>(dim); ++x) {
    for (std::uint64_t z = 0; z < static_cast<std::uint64_t>(dim); ++z) {
      const std::complex<double> lead = kPhases[xz_phase_exponent(x, z)];
      std::complex<double> tr = 0.0;
      for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(dim); ++j) {
        const double sign = (std::popcount(z & j) & 1) ? -1.0 : 1.0;
        tr += m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ x)) *
              (lead * sign);
      }
      const double coeff = tr.real() / static_cast<double>(dim);
      if (std::abs(coeff) > prune) {
        PauliString word = PauliString::identity(n);
        word.x_ = x;
        word.z_ = z;
        sum.add(word, coeff);
      }
    }
  }
  return sum;
}

}  // namespace shiftrule
