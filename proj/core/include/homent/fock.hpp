#pragma once

// Two-mode Fock algebra restricted to the two-excitation sector.
//
// Every vector and matrix in this library uses the ordered basis
//   index 0: |2,0>   index 1: |1,1>   index 2: |0,2>
// where the first label is the photon number in mode 1. After the
// path-to-polarization conversion mode 1 is H and mode 2 is V.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace homent {

using Complex = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Vector3c = Eigen::Vector3cd;

namespace fock {

inline constexpr std::size_t kIdx20 = 0;
inline constexpr std::size_t kIdx11 = 1;
inline constexpr std::size_t kIdx02 = 2;
inline constexpr double kDefaultPhysicalTol = 1e-9;

/// Normalized pure state over {|2,0>, |1,1>, |0,2>}. The global phase of the
/// input amplitudes is kept as given.
class TwoModeState {
 public:
  Complex amp20() const { return amps_(0); }
  Complex amp11() const { return amps_(1); }
  Complex amp02() const { return amps_(2); }
  const Vector3c& amplitudes() const { return amps_; }

  friend TwoModeState state_from_amplitudes(Complex, Complex, Complex);

 private:
  explicit TwoModeState(const Vector3c& a) : amps_(a) {}
  Vector3c amps_;
};

/// 3x3 density operator over the two-excitation basis. Construction does not
/// enforce physicality; use is_physical() when the source is untrusted
/// (e.g. linear inversion of noisy data).
class DensityMatrix {
 public:
  DensityMatrix() : m_(Matrix3c::Zero()) {}
  explicit DensityMatrix(const Matrix3c& m) : m_(m) {}

  const Matrix3c& matrix() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  /// Diagonal populations in basis order (p20, p11, p02).
  Eigen::Vector3d populations() const { return m_.diagonal().real(); }

  static DensityMatrix basis_projector(std::size_t index);

 private:
  Matrix3c m_;
};

struct PhysicalityReport {
  bool physical = false;
  double hermiticity_error = 0.0;  // max |rho - rho^dagger|
  double trace_error = 0.0;        // |Tr rho - 1|
  double min_eigenvalue = 0.0;
  bool hermitian_ok = false;
  bool trace_ok = false;
  bool positive_ok = false;

  std::string describe() const;
};

TwoModeState state_from_amplitudes(Complex a20, Complex a11, Complex a02);

DensityMatrix density_from_pure(const TwoModeState& psi);

/// Convex combination. Weights must be nonnegative and sum to one within 1e-9.
DensityMatrix mix(std::span<const DensityMatrix> states, std::span<const double> weights);

/// Scales the |2,0><0,2| coherence (and its conjugate) by d in [0, 1].
/// Throws Error(Physicality) when the result is not a state, which happens
/// for d < 1 if rho has strong coherences between |1,1> and both corners.
DensityMatrix dephase_corner(const DensityMatrix& rho, double d);

PhysicalityReport is_physical(const Matrix3c& rho, double tol = kDefaultPhysicalTol);
inline PhysicalityReport is_physical(const DensityMatrix& rho, double tol = kDefaultPhysicalTol) {
  return is_physical(rho.matrix(), tol);
}

/// Throws Error(Physicality) with the diagnostics when rho fails is_physical.
void require_physical(const DensityMatrix& rho, double tol = kDefaultPhysicalTol);

/// (|2,0> + e^{i phase}|0,2>)/sqrt(2), the ideal interference output.
TwoModeState noon_state(double phase = 0.0);

}  // namespace fock
}  // namespace homent
