// Copyright (c) 2026 The shiftrule developers.
// Licensed under the MIT License; see LICENSE for details.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "shiftrule/pauli.hpp"
#include "shiftrule/rng.hpp"

namespace shiftrule {

class DensityMatrix;

/// Pure state of an N-qubit register.  Basis index bit (N-1-q) is qubit q,
/// matching the PauliString convention (qubit 0 = leftmost = most
/// significant).
class StateVector {
 public:
  StateVector(std::size_t qubits, Eigen::VectorXcd amplitudes);

  /// |0...0>.
  static StateVector zero_state(std::size_t qubits);

  /// Computational basis state |index>.
  static StateVector basis_state(std::size_t qubits, std::size_t index);

  std::size_t qubit_count() const { return n_; }
  Eigen::Index dim() const { return amp_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amp_; }
  Eigen::VectorXcd& amplitudes() { return amp_; }
  double norm() const { return amp_.norm(); }

  DensityMatrix to_density_matrix() const;

 private:
  std::size_t n_;
  Eigen::VectorXcd amp_;
};

/// Mixed state of an N-qubit register.  The constructor checks shape only;
/// validate_state() checks the physical-state invariants (Hermitian,
/// unit trace, positive semidefinite) where a test or caller requires them.
class DensityMatrix {
 public:
  DensityMatrix(std::size_t qubits, Eigen::MatrixXcd matrix);

  static DensityMatrix pure(const StateVector& psi);

  /// |0...0><0...0|.
  static DensityMatrix zero_state(std::size_t qubits);

  std::size_t qubit_count() const { return n_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Eigen::MatrixXcd& matrix() const { return m_; }
  Eigen::MatrixXcd& matrix() { return m_; }

  double trace_real() const { return m_.trace().real(); }
  double purity() const;  // Tr[rho^2]

  /// Throws std::runtime_error if the matrix is not Hermitian/unit-trace
  /// within tol or has an eigenvalue below -tol.
  void validate_state(double tol = 1e-10) const;

 private:
  std::size_t n_;
  Eigen::MatrixXcd m_;
};

/// Cached spectral decomposition of a Hermitian operator H, providing
/// e^{i s H} |psi> and e^{i s H} rho e^{-i s H} for arbitrary real s at the
/// cost of two matrix-vector products per application.
class HermitianExp {
 public:
  explicit HermitianExp(const PauliSum& h);

  /// Dense Hermitian input (checked against `hermiticity_tol`).
  explicit HermitianExp(const Eigen::MatrixXcd& h,
                        double hermiticity_tol = 1e-10);

  Eigen::Index dim() const { return vals_.size(); }
  const Eigen::VectorXd& eigenvalues() const { return vals_; }

  /// e^{i scale H} v.
  Eigen::VectorXcd apply(double scale, const Eigen::VectorXcd& v) const;
  StateVector apply(double scale, const StateVector& psi) const;

  /// e^{i scale H} rho e^{-i scale H}.
  DensityMatrix conjugate(double scale, const DensityMatrix& rho) const;

  /// Dense e^{i scale H}.
  Eigen::MatrixXcd unitary(double scale) const;

 private:
  Eigen::VectorXd vals_;
  Eigen::MatrixXcd vecs_;
};

/// e^{i scale G} |psi> for a Hermitian Pauli-sum generator G.  One-shot
/// convenience wrapper over HermitianExp; hoist a HermitianExp out of loops.
StateVector expm_apply(const PauliSum& generator, double scale,
                       const StateVector& psi);

/// <psi| C |psi>, evaluated term by term (no dense matrix).
double expectation(const PauliSum& observable, const StateVector& psi);

/// Tr[rho C], evaluated term by term.
double dm_expectation(const PauliSum& observable, const DensityMatrix& rho);

/// e^{i scale G} rho e^{-i scale G}.
DensityMatrix dm_evolve(const PauliSum& generator, double scale,
                        const DensityMatrix& rho);

/// Trace out all qubits not listed in `keep` (0-based, strictly increasing).
DensityMatrix partial_trace(const DensityMatrix& joint,
                            std::span<const std::size_t> keep);

/// Kronecker product of two registers: `left` occupies the leading qubits.
DensityMatrix kron(const DensityMatrix& left, const DensityMatrix& right);

/// An observable prepared for projective sampling: the Pauli-sum operator
/// plus its cached spectral decomposition.  Immutable; share via shared_ptr
/// across samplers and threads.
class ObservableSpec {
 public:
  explicit ObservableSpec(PauliSum op);

  const PauliSum& pauli() const { return op_; }
  std::size_t qubit_count() const { return op_.qubit_count(); }

  /// Largest |eigenvalue|.
  double infinity_norm() const;

  /// sum_v c_v^2 of the Pauli coefficients.
  double coefficient_norm2() const { return op_.coefficient_norm2(); }

  const Eigen::VectorXd& eigenvalues() const { return vals_; }

  double expectation(const StateVector& psi) const;
  double dm_expectation(const DensityMatrix& rho) const;

  /// Born-rule outcome probabilities over the eigenbasis.
  Eigen::VectorXd born_probabilities(const StateVector& psi) const;
  Eigen::VectorXd born_probabilities(const DensityMatrix& rho) const;

  /// One projective measurement: an eigenvalue drawn with Born probability.
  double sample_eigenvalue(const StateVector& psi, PhiloxStream& rng) const;
  double sample_eigenvalue(const DensityMatrix& rho, PhiloxStream& rng) const;

  /// One linear measurement sum_v c_v m_v where every Pauli word is measured
  /// independently (one +/-1 Born draw per term, identity terms read +1).
  /// Same expectation as sample_eigenvalue; its variance is at most
  /// coefficient_norm2(), which is what the paired-sample variance bound
  /// assumes.  Consumes one uniform draw per term.
  double sample_termwise(const StateVector& psi, PhiloxStream& rng) const;
  double sample_termwise(const DensityMatrix& rho, PhiloxStream& rng) const;

  /// Number of Pauli words in the expansion.
  std::size_t term_count() const { return op_.terms().size(); }

  /// One Born draw of the index-th Pauli word (expansion order), scaled by
  /// its coefficient: c_v m_v with m_v in {-1, +1}.  Lets a caller measure
  /// each word on its own circuit run so the draws stay independent across
  /// terms.  Consumes one uniform draw.
  double sample_term(std::size_t index, const StateVector& psi,
                     PhiloxStream& rng) const;

 private:
  double sample_from(const Eigen::VectorXd& probs, PhiloxStream& rng) const;

  PauliSum op_;
  Eigen::VectorXd vals_;
  Eigen::MatrixXcd vecs_;
};

using ObservablePtr = std::shared_ptr<const ObservableSpec>;

}  // namespace shiftrule
