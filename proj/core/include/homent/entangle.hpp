#pragma once

// State-quality and entanglement metrics for the two-excitation output.

#include <Eigen/Core>

#include "homent/fock.hpp"

namespace homent::entangle {

using Matrix4c = Eigen::Matrix4cd;

/// Two-qubit state obtained by embedding {|0>, |2>} of each mode as a qubit.
/// Basis order {|00>, |01>, |10>, |11>} with the qubit of mode 2 written
/// first, so |2,0> -> |01> and |0,2> -> |10>.
class QubitDensity {
 public:
  QubitDensity() : m_(Matrix4c::Zero()) {}
  explicit QubitDensity(const Matrix4c& m) : m_(m) {}
  const Matrix4c& matrix() const { return m_; }

 private:
  Matrix4c m_;
};

inline constexpr Eigen::Index kQubit20 = 1;
inline constexpr Eigen::Index kQubit02 = 2;

/// Uhlmann-Jozsa fidelity Tr[sqrt(sqrt(rho) sigma sqrt(rho))]^2 for square
/// matrices of equal dimension. Both inputs must be physical.
double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);
double fidelity(const fock::DensityMatrix& rho, const fock::DensityMatrix& sigma);

struct Filtered {
  QubitDensity rho_t;
  double p = 0.0;  // rho_{20,20} + rho_{02,02}
};

/// Extends the space by |0,0> and |2,2> (both unpopulated), removes every
/// element touching |1,1> and renormalizes by P.
Filtered embed_and_filter(const fock::DensityMatrix& rho);

/// Wootters concurrence. lambda_i are square roots of the eigenvalues of
/// rho rho~ with rho~ = (Y x Y) rho* (Y x Y).
double concurrence(const QubitDensity& rho_t);

struct FilteredConcurrence {
  double c_nf = 0.0;  // P * C
  double p = 0.0;
  double c = 0.0;
};

FilteredConcurrence filtered_concurrence(const fock::DensityMatrix& rho);

struct PhaseEstimate {
  double phase = 0.0;
  double fidelity = 0.0;
};

/// Phase of the ideal interference state (|2,0> + e^{i phase}|0,2>)/sqrt2
/// that maximizes the fidelity with rho, scanned on a 1e-3 rad grid.
PhaseEstimate estimate_noon_phase(const fock::DensityMatrix& rho, double resolution = 1e-3);

}  // namespace homent::entangle
