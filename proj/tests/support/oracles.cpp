#include "support/oracles.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "shiftrule/rng.hpp"

namespace testsupport {

namespace {

using Complex = std::complex<double>;

Eigen::Matrix2cd single_pauli(char axis) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  switch (axis) {
    case 'I':
      m << 1, 0, 0, 1;
      break;
    case 'X':
      m << 0, 1, 1, 0;
      break;
    case 'Y':
      m << 0, Complex(0, -1), Complex(0, 1), 0;
      break;
    case 'Z':
      m << 1, 0, 0, -1;
      break;
    default:
      throw std::invalid_argument("single_pauli: bad axis");
  }
  return m;
}

Eigen::MatrixXcd kron2(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Eigen::MatrixXcd pauli_word_matrix(const std::string& word) {
  if (word.empty()) throw std::invalid_argument("empty Pauli word");
  Eigen::MatrixXcd m = single_pauli(word[0]);
  for (std::size_t q = 1; q < word.size(); ++q)
    m = kron2(m, single_pauli(word[q]));
  return m;
}

Eigen::MatrixXcd pauli_sum_matrix(const shiftrule::PauliSum& sum) {
  const Eigen::Index dim = Eigen::Index(1)
                           << static_cast<Eigen::Index>(sum.qubit_count());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [word, c] : sum.terms())
    m += c * pauli_word_matrix(word.str());
  return m;
}

Eigen::MatrixXcd expm_i(const Eigen::MatrixXcd& h, double scale) {
  const Eigen::Index dim = h.rows();
  Eigen::MatrixXcd a = Complex(0, scale) * h;
  // Scale down until the norm is small, Taylor-expand, square back up.
  int squarings = 0;
  double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    a *= 0.5;
    norm *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(dim, dim);
  for (int k = 1; k <= 24; ++k) {
    term = (term * a) / static_cast<double>(k);
    result += term;
  }
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

Eigen::MatrixXcd trace_out_tail(const Eigen::MatrixXcd& joint,
                                std::size_t keep, std::size_t env) {
  const Eigen::Index keep_dim = Eigen::Index(1) << keep;
  const Eigen::Index env_dim = Eigen::Index(1) << env;
  if (joint.rows() != keep_dim * env_dim)
    throw std::invalid_argument("trace_out_tail: dimension mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(keep_dim, keep_dim);
  for (Eigen::Index i = 0; i < keep_dim; ++i)
    for (Eigen::Index j = 0; j < keep_dim; ++j)
      for (Eigen::Index e = 0; e < env_dim; ++e)
        out(i, j) += joint(i * env_dim + e, j * env_dim + e);
  return out;
}

double central_fd(const std::function<double(double)>& f, double x,
                  double eps) {
  return (f(x + eps) - f(x - eps)) / (2.0 * eps);
}

Eigen::VectorXcd random_state(std::size_t dim, std::uint64_t seed) {
  shiftrule::PhiloxStream rng(seed, 0x5eed);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // Box-Muller for rotation-invariant (Haar-direction) components.
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    v[i] = Complex(r * std::cos(2.0 * M_PI * u2),
                   r * std::sin(2.0 * M_PI * u2));
  }
  v.normalize();
  return v;
}

}  // namespace testsupport
