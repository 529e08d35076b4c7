#pragma once

// Polarization tomography of a two-photon state sharing one spatial mode.
//
// After the path-to-polarization conversion the state lives in
// span{|2_H 0_V>, |1_H 1_V>, |0_H 2_V>} (same index order as fock::). The
// analyzer is QWP1 -> QWP2 -> HWP1 -> PBS2 (H port), which selects the mode
// a_T = u a_H + v a_V; the recorded second-order intensity is
// <a_T^dag a_T^dag a_T a_T>.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "homent/error.hpp"
#include "homent/fock.hpp"

namespace homent::tomo {

using Matrix2c = Eigen::Matrix2cd;
using Matrix9d = Eigen::Matrix<double, 9, 9>;
using Vector9d = Eigen::Matrix<double, 9, 1>;

/// Waveplate angles in radians, measured between each fast axis and the
/// vertical axis.
struct AngleSet {
  double a_qwp1 = 0.0;
  double a_qwp2 = 0.0;
  double a_hwp1 = 0.0;
};

using AngleSets = std::array<AngleSet, 9>;

/// The nine analyzer settings shipped as the default tomography schedule.
const AngleSets& default_angle_sets();

enum class Waveplate { Quarter, Half };

/// Jones matrix in the (H, V) basis of a retarder whose fast axis sits at
/// `angle` from vertical: U = f f^T + e^{i delta} s s^T with
/// f = (sin a, cos a), s = (cos a, -sin a) and delta = pi/2 or pi.
Matrix2c waveplate_unitary(Waveplate kind, double angle);

struct AnalysisVector {
  Complex u;
  Complex v;
};

/// First row of U_HWP1 U_QWP2 U_QWP1.
AnalysisVector analysis_vector(const AngleSet& s);

/// Second-order coherences g(w, y) = <(a_H^dag)^{2-w} (a_V^dag)^w a_H^{2-y} a_V^y>
/// stored as a 3x3 matrix indexed [w][y]. Hermitian pairing g(w,y) = g(y,w)*
/// leaves nine real degrees of freedom.
class CoherenceVector {
 public:
  CoherenceVector() : g_(Matrix3c::Zero()) {}
  /// Throws Error(Consistency) when the pairing is violated beyond 1e-10.
  explicit CoherenceVector(const Matrix3c& g);

  Complex operator()(int w, int y) const { return g_(w, y); }
  const Matrix3c& matrix() const { return g_; }

  /// (g00, g11, g22, Re g01, Re g02, Re g12, Im g01, Im g02, Im g12).
  Vector9d real_parameters() const;
  static CoherenceVector from_real_parameters(const Vector9d& x);

 private:
  Matrix3c g_;
};

/// Coherences of a (not necessarily physical) density matrix.
CoherenceVector coherences_of(const Matrix3c& rho);

/// rho_{2-y,2-w} = g(w,y) / sqrt((2-y)! y! (2-w)! w!). The result is
/// Hermitian but may be unphysical when g comes from noisy data.
Matrix3c coherences_to_density(const CoherenceVector& g);

/// <a_T^dag a_T^dag a_T a_T> for rho. Linear in rho; no physicality check.
double second_order_intensity(const Matrix3c& rho, const AnalysisVector& a);

/// Same, for a physical state (throws Error(Physicality) otherwise).
double predicted_g2(const fock::DensityMatrix& rho, const AngleSet& s);

struct DesignMatrix {
  Matrix9d m;  // intensities = m * coherences.real_parameters()
  double condition_number = 0.0;
};

/// Throws Error(DependentAngleSets) when the smallest singular value is below
/// 1e-10 relative to the largest.
DesignMatrix design_matrix(std::span<const AngleSet, 9> sets);

CoherenceVector linear_invert(std::span<const double, 9> intensities,
                              std::span<const AngleSet, 9> sets);

struct CountsRecord {
  int angle_set_id = 1;  // 1..9
  std::int64_t coincidences = 0;
  double integration_time = 1.0;  // s
  double trials_scale = 1.0;      // effective pairs per window
};

struct MleOptions {
  int random_restarts = 8;
  std::uint64_t seed = 0x5eed;
  double stall_tolerance = 1e-10;
  int stall_window = 50;
  int max_iterations = 5000;
};

struct MleReport {
  fock::DensityMatrix rho;
  double objective = 0.0;
  int iterations = 0;
  int restart_index = 0;  // 0 = linear-inversion start, k >= 1 = random start k
  double scale = 0.0;     // fitted detection-efficiency normalization
  int converged_starts = 0;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, MleReport best)
      : Error(ErrorKind::NoConvergence, what), best_(std::move(best)) {}
  const MleReport& best_so_far() const noexcept { return best_; }

 private:
  MleReport best_;
};

/// rho(T) = T^dag T / Tr(T^dag T), T lower-triangular (3 real diagonal,
/// 3 complex sub-diagonal entries), fitted to minimize
///   sum_i (n_pred_i - n_i)^2 / (2 max(n_i, 1)),
///   n_pred_i = A trials_scale_i g2(rho, s_i) / 2.
/// The overall efficiency A is refitted in closed form for every trial rho.
MleReport mle_reconstruct(std::span<const CountsRecord> counts, std::span<const AngleSet, 9> sets,
                          const MleOptions& options = {});

/// Expected coincidences for a record, n = trials_scale g2 / 2 (g2 <= 2 so
/// trials_scale bounds the count).
double expected_counts(const fock::DensityMatrix& rho, const AngleSet& s, double trials_scale);

}  // namespace homent::tomo
