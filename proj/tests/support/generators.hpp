#pragma once

// Hand-rolled random generators and test-only oracles. Nothing here calls
// into the library's algebra, so checks against these stay independent.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

namespace homent::testing {

using Complex = std::complex<double>;

inline Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng), g(rng)};
}

/// Ginibre-distributed density matrix of the given size and rank.
inline Eigen::MatrixXcd random_density(std::mt19937_64& rng, int dim, int rank = -1) {
  if (rank <= 0) rank = dim;
  Eigen::MatrixXcd g(dim, rank);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = random_complex(rng);
  Eigen::MatrixXcd rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline Eigen::Matrix3cd random_density3(std::mt19937_64& rng, int rank = 3) {
  return random_density(rng, 3, rank);
}

/// Random two-qubit state supported on span{|01>, |10>}.
inline Eigen::Matrix4cd random_single_excitation_block(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank_pick(1, 2);
  const Eigen::MatrixXcd b = random_density(rng, 2, rank_pick(rng));
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m.block<2, 2>(1, 1) = b;
  return m;
}

/// Dense truncated two-mode Fock space (0..kMax photons per mode) for
/// operator-level checks of second-order intensities.
class DenseFock {
 public:
  static constexpr int kMax = 3;
  static constexpr int kDim = (kMax + 1) * (kMax + 1);

  DenseFock() {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(kMax + 1, kMax + 1);
    for (int n = 1; n <= kMax; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(kMax + 1, kMax + 1);
    a_h_ = kron(a, id);
    a_v_ = kron(id, a);
  }

  static int index(int n_h, int n_v) { return n_h * (kMax + 1) + n_v; }

  /// Lifts a 3x3 matrix over {|2,0>, |1,1>, |0,2>} into the dense space.
  Eigen::MatrixXcd lift(const Eigen::Matrix3cd& rho) const {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kDim, kDim);
    const int idx[3] = {index(2, 0), index(1, 1), index(0, 2)};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out(idx[i], idx[j]) = rho(i, j);
    return out;
  }

  /// <a_T^dag a_T^dag a_T a_T> with a_T = u a_H + v a_V.
  double g2(const Eigen::Matrix3cd& rho, Complex u, Complex v) const {
    const Eigen::MatrixXcd at = u * a_h_ + v * a_v_;
    const Eigen::MatrixXcd op = at.adjoint() * at.adjoint() * at * at;
    return (lift(rho) * op).trace().real();
  }

  /// <(a_H^dag)^{2-w} (a_V^dag)^w a_H^{2-y} a_V^y>
  Complex coherence(const Eigen::Matrix3cd& rho, int w, int y) const {
    const Eigen::MatrixXcd create = power(a_h_.adjoint(), 2 - w) * power(a_v_.adjoint(), w);
    const Eigen::MatrixXcd destroy = power(a_h_, 2 - y) * power(a_v_, y);
    return (lift(rho) * create * destroy).trace();
  }

 private:
  static Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
  }
  static Eigen::MatrixXcd power(const Eigen::MatrixXcd& m, int k) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i) out = out * m;
    return out;
  }

  Eigen::MatrixXcd a_h_;
  Eigen::MatrixXcd a_v_;
};

/// Concurrence of a state supported on span{|01>, |10>}: 2 |rho_{01,10}|.
inline double block_concurrence_oracle(const Eigen::Matrix4cd& m) { return 2.0 * std::abs(m(1, 2)); }

/// Concurrence straight from the textbook definition: eigenvalues of
/// sqrt(sqrt(rho) rho~ sqrt(rho)). Loses ~half the digits near rank
/// deficiency, so use with a loose tolerance.
inline double wootters_textbook(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho);
  const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::Matrix4cd sq = es.eigenvectors() * ev.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
  const Eigen::Matrix4cd inner = sq * tilde * sq;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es2(0.5 * (inner + inner.adjoint()));
  Eigen::Vector4d lam = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  std::sort(lam.data(), lam.data() + 4, std::greater<double>());
  return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

}  // namespace homent::testing
