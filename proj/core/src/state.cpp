// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#include "shiftrule/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace shiftrule {

namespace {

Eigen::Index dim_of(std::size_t qubits) {
  if (qubits == 0 || qubits > kDenseQubitCap + 2)
    throw std::invalid_argument("register size out of range");
  return Eigen::Index(1) << qubits;
}

}  // namespace

StateVector::StateVector(std::size_t qubits, Eigen::VectorXcd amplitudes)
    : n_(qubits), amp_(std::move(amplitudes)) {
  if (amp_.size() != (Eigen::Index(1) << qubits))
    throw std::invalid_argument("StateVector: amplitude size != 2^qubits");
}

StateVector StateVector::zero_state(std::size_t qubits) {
  return basis_state(qubits, 0);
}

StateVector StateVector::basis_state(std::size_t qubits, std::size_t index) {
  const Eigen::Index d = dim_of(qubits);
  if (index >= static_cast<std::size_t>(d))
    throw std::invalid_argument("StateVector: basis index out of range");
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(d);
  amp[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(qubits, std::move(amp));
}

DensityMatrix StateVector::to_density_matrix() const {
  return DensityMatrix(n_, amp_ * amp_.adjoint());
}

DensityMatrix::DensityMatrix(std::size_t qubits, Eigen::MatrixXcd matrix)
    : n_(qubits), m_(std::move(matrix)) {
  const Eigen::Index d = Eigen::Index(1) << qubits;
  if (m_.rows() != d || m_.cols() != d)
    throw std::invalid_argument("DensityMatrix: shape != 2^qubits square");
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  return psi.to_density_matrix();
}

DensityMatrix DensityMatrix::zero_state(std::size_t qubits) {
  return pure(StateVector::zero_state(qubits));
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

void DensityMatrix::validate_state(double tol) const {
  const double herm = (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol)
    throw std::runtime_error("DensityMatrix: not Hermitian (deviation " +
                             std::to_string(herm) + ")");
  const double tr = std::abs(m_.trace() - std::complex<double>(1.0));
  if (tr > tol)
    throw std::runtime_error("DensityMatrix: trace differs from 1 by " +
                             std::to_string(tr));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m_,
                                                     Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  if (lo < -tol)
    throw std::runtime_error("DensityMatrix: negative eigenvalue " +
                             std::to_string(lo));
}

HermitianExp::HermitianExp(const PauliSum& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.to_matrix());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("HermitianExp: eigendecomposition failed");
  vals_ = es.eigenvalues();
  vecs_ = es.eigenvectors();
}

HermitianExp::HermitianExp(const Eigen::MatrixXcd& h, double hermiticity_tol) {
  if (h.rows() != h.cols())
    throw std::invalid_argument("HermitianExp: matrix is not square");
  const double herm = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (herm > hermiticity_tol)
    throw std::invalid_argument("HermitianExp: input deviates from Hermitian by " +
                                std::to_string(herm));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("HermitianExp: eigendecomposition failed");
  vals_ = es.eigenvalues();
  vecs_ = es.eigenvectors();
}

Eigen::VectorXcd HermitianExp::apply(double scale,
                                     const Eigen::VectorXcd& v) const {
  if (v.size() != vals_.size())
    throw std::invalid_argument("HermitianExp::apply: dimension mismatch");
  Eigen::VectorXcd coords = vecs_.adjoint() * v;
  for (Eigen::Index k = 0; k < coords.size(); ++k)
    coords[k] *= std::polar(1.0, scale * vals_[k]);
  return vecs_ * coords;
}

StateVector HermitianExp::apply(double scale, const StateVector& psi) const {
  return StateVector(psi.qubit_count(), apply(scale, psi.amplitudes()));
}

DensityMatrix HermitianExp::conjugate(double scale,
                                      const DensityMatrix& rho) const {
  if (rho.dim() != vals_.size())
    throw std::invalid_argument("HermitianExp::conjugate: dimension mismatch");
  const Eigen::MatrixXcd u = unitary(scale);
  return DensityMatrix(rho.qubit_count(), u * rho.matrix() * u.adjoint());
}

Eigen::MatrixXcd HermitianExp::unitary(double scale) const {
  Eigen::VectorXcd phases(vals_.size());
  for (Eigen::Index k = 0; k < vals_.size(); ++k)
    phases[k] = std::polar(1.0, scale * vals_[k]);
  return vecs_ * phases.asDiagonal() * vecs_.adjoint();
}

StateVector expm_apply(const PauliSum& generator, double scale,
                       const StateVector& psi) {
  return HermitianExp(generator).apply(scale, psi);
}

double expectation(const PauliSum& observable, const StateVector& psi) {
  const std::complex<double> val =
      psi.amplitudes().dot(observable.apply(psi.amplitudes()));
  return val.real();
}

double dm_expectation(const PauliSum& observable, const DensityMatrix& rho) {
  if (observable.qubit_count() != rho.qubit_count())
    throw std::invalid_argument("dm_expectation: register mismatch");
  const Eigen::MatrixXcd& m = rho.matrix();
  const std::uint64_t dim = static_cast<std::uint64_t>(m.rows());
  std::complex<double> total = 0.0;
  constexpr std::complex<double> phases[4] = {
      {1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}};
  for (const auto& [word, c] : observable.terms()) {
    const std::uint64_t x = word.x_mask(), z = word.z_mask();
    const std::complex<double> lead =
        c * phases[std::popcount(x & z) & 3];
    std::complex<double> tr = 0.0;
    for (std::uint64_t j = 0; j < dim; ++j) {
      const double sign = (std::popcount(z & j) & 1) ? -1.0 : 1.0;
      tr += m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j ^ x)) *
            (lead * sign);
    }
    total += tr;
  }
  return total.real();
}

DensityMatrix dm_evolve(const PauliSum& generator, double scale,
                        const DensityMatrix& rho) {
  return HermitianExp(generator).conjugate(scale, rho);
}

DensityMatrix partial_trace(const DensityMatrix& joint,
                            std::span<const std::size_t> keep) {
  const std::size_t n = joint.qubit_count();
  if (keep.empty())
    throw std::invalid_argument("partial_trace: keep set is empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= n)
      throw std::invalid_argument("partial_trace: qubit index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument(
          "partial_trace: keep set must be strictly increasing");
  }
  const std::size_t k = keep.size();
  const std::size_t e = n - k;

  // Bit position (significance) of each kept / traced qubit.
  std::vector<int> keep_pos, env_pos;
  std::vector<bool> kept(n, false);
  for (std::size_t q : keep) kept[q] = true;
  for (std::size_t q = 0; q < n; ++q) {
    const int pos = static_cast<int>(n - 1 - q);
    (kept[q] ? keep_pos : env_pos).push_back(pos);
  }

  const auto scatter = [](std::uint64_t bits, const std::vector<int>& pos) {
    std::uint64_t out = 0;
    // bits bit i corresponds to pos[i] counted from the most significant
    // listed position, preserving qubit order.
    const std::size_t m = pos.size();
    for (std::size_t i = 0; i < m; ++i)
      if (bits & (1ull << (m - 1 - i))) out |= 1ull << pos[i];
    return out;
  };

  const Eigen::Index kd = Eigen::Index(1) << k;
  const std::uint64_t ed = 1ull << e;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kd, kd);
  for (Eigen::Index r = 0; r < kd; ++r) {
    const std::uint64_t rbase = scatter(static_cast<std::uint64_t>(r), keep_pos);
    for (Eigen::Index c = 0; c < kd; ++c) {
      const std::uint64_t cbase =
          scatter(static_cast<std::uint64_t>(c), keep_pos);
      std::complex<double> sum = 0.0;
      for (std::uint64_t env = 0; env < ed; ++env) {
        const std::uint64_t ebits = scatter(env, env_pos);
        sum += joint.matrix()(static_cast<Eigen::Index>(rbase | ebits),
                              static_cast<Eigen::Index>(cbase | ebits));
      }
      out(r, c) = sum;
    }
  }
  return DensityMatrix(k, std::move(out));
}

DensityMatrix kron(const DensityMatrix& left, const DensityMatrix& right) {
  const Eigen::Index ld = left.dim(), rd = right.dim();
  Eigen::MatrixXcd out(ld * rd, ld * rd);
  for (Eigen::Index i = 0; i < ld; ++i)
    for (Eigen::Index j = 0; j < ld; ++j)
      out.block(i * rd, j * rd, rd, rd) = left.matrix()(i, j) * right.matrix();
  return DensityMatrix(left.qubit_count() + right.qubit_count(),
                       std::move(out));
}

ObservableSpec::ObservableSpec(PauliSum op) : op_(std::move(op)) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(op_.to_matrix());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("ObservableSpec: eigendecomposition failed");
  vals_ = es.eigenvalues();
  vecs_ = es.eigenvectors();
}

double ObservableSpec::infinity_norm() const {
  return std::max(std::abs(vals_.minCoeff()), std::abs(vals_.maxCoeff()));
}

double ObservableSpec::expectation(const StateVector& psi) const {
  return shiftrule::expectation(op_, psi);
}

double ObservableSpec::dm_expectation(const DensityMatrix& rho) const {
  return shiftrule::dm_expectation(op_, rho);
}

Eigen::VectorXd ObservableSpec::born_probabilities(
    const StateVector& psi) const {
  if (psi.dim() != vals_.size())
    throw std::invalid_argument("born_probabilities: dimension mismatch");
  return (vecs_.adjoint() * psi.amplitudes()).cwiseAbs2();
}

Eigen::VectorXd ObservableSpec::born_probabilities(
    const DensityMatrix& rho) const {
  if (rho.dim() != vals_.size())
    throw std::invalid_argument("born_probabilities: dimension mismatch");
  Eigen::VectorXd probs(vals_.size());
  for (Eigen::Index k = 0; k < vals_.size(); ++k) {
    const auto v = vecs_.col(k);
    probs[k] = std::max(0.0, (v.adjoint() * rho.matrix() * v)(0, 0).real());
  }
  return probs;
}

double ObservableSpec::sample_from(const Eigen::VectorXd& probs,
                                   PhiloxStream& rng) const {
  const double u = rng.uniform() * probs.sum();
  double acc = 0.0;
  for (Eigen::Index k = 0; k + 1 < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return vals_[k];
  }
  return vals_[probs.size() - 1];
}

double ObservableSpec::sample_eigenvalue(const StateVector& psi,
                                         PhiloxStream& rng) const {
  return sample_from(born_probabilities(psi), rng);
}

double ObservableSpec::sample_eigenvalue(const DensityMatrix& rho,
                                         PhiloxStream& rng) const {
  return sample_from(born_probabilities(rho), rng);
}

namespace {

/// +/-coeff with P(+) = (1 + expect)/2, clamped against float drift.
double termwise_draw(double expect, double coeff, PhiloxStream& rng) {
  const double p_plus = std::clamp(0.5 * (1.0 + expect), 0.0, 1.0);
  return rng.uniform() < p_plus ? coeff : -coeff;
}

}  // namespace

double ObservableSpec::sample_termwise(const StateVector& psi,
                                       PhiloxStream& rng) const {
  if (psi.qubit_count() != op_.qubit_count())
    throw std::invalid_argument("sample_termwise: register mismatch");
  double total = 0.0;
  for (const auto& [word, c] : op_.terms()) {
    const double expect =
        psi.amplitudes().dot(shiftrule::apply(word, psi.amplitudes())).real();
    total += termwise_draw(expect, c, rng);
  }
  return total;
}

double ObservableSpec::sample_term(std::size_t index, const StateVector& psi,
                                   PhiloxStream& rng) const {
  if (psi.qubit_count() != op_.qubit_count())
    throw std::invalid_argument("sample_term: register mismatch");
  if (index >= op_.terms().size())
    throw std::invalid_argument("sample_term: term index out of range");
  const auto& [word, c] = *std::next(op_.terms().begin(),
                                     static_cast<std::ptrdiff_t>(index));
  const double expect =
      psi.amplitudes().dot(shiftrule::apply(word, psi.amplitudes())).real();
  return termwise_draw(expect, c, rng);
}

double ObservableSpec::sample_termwise(const DensityMatrix& rho,
                                       PhiloxStream& rng) const {
  if (rho.qubit_count() != op_.qubit_count())
    throw std::invalid_argument("sample_termwise: register mismatch");
  double total = 0.0;
  for (const auto& [word, c] : op_.terms()) {
    PauliSum one(op_.qubit_count());
    one.add(word, 1.0);
    total += termwise_draw(shiftrule::dm_expectation(one, rho), c, rng);
  }
  return total;
}

}  // namespace shiftrule
