#pragma once

// Lossy beamsplitter physics in the coincidence basis: the two-photon output
// state, coincidence probabilities, the delay-dependent interference dip and
// Mach-Zehnder characterization of the reflection phase.

#include <span>
#include <utility>
#include <vector>

#include "homent/fock.hpp"

namespace homent::splitter {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// Renormalized reflection r = rmag e^{i phi} and transmission t = tmag
/// (t taken real). Loss is removed by renormalizing to the coincidence
/// basis, so rmag^2 + tmag^2 = 1.
class SplitterSpec {
 public:
  /// Validates rmag, tmag in [0, 1] with rmag^2 + tmag^2 = 1 (within 1e-9)
  /// and wraps phi into (-pi, pi].
  static SplitterSpec make(double rmag, double tmag, double phi);
  /// Same, from intensity coefficients |r|^2 and |t|^2.
  static SplitterSpec from_intensities(double r2, double t2, double phi);

  /// r = i/sqrt(2), t = 1/sqrt(2).
  static SplitterSpec symmetric_lossless();
  /// |r|^2 = 0.51, |t|^2 = 0.49, phi = 1.21 rad: the measured plasmonic splitter.
  static SplitterSpec plasmonic_measured();

  double rmag() const { return rmag_; }
  double tmag() const { return tmag_; }
  double phi() const { return phi_; }
  Complex r() const { return std::polar(rmag_, phi_); }
  Complex t() const { return {tmag_, 0.0}; }

 private:
  SplitterSpec(double rmag, double tmag, double phi) : rmag_(rmag), tmag_(tmag), phi_(phi) {}
  double rmag_;
  double tmag_;
  double phi_;
};

double wrap_phase(double phi);

/// Unnormalized coincidence-sector weights (w20, w11, w02) for overlap eta.
/// w11 = |r|^4 + |t|^4 + 2 eta Re[r*^2 t^2]; each corner = |r|^2|t|^2 (1 + eta).
/// At eta = 1 these are the squared moduli of the interfering output
/// amplitudes; at eta = 0 they are the classical (distinguishable) ones.
Eigen::Vector3d sector_weights(const SplitterSpec& spec, double eta);

/// Output state for two photons entering opposite ports.
///
/// The state is the renormalized mixture
///   eta |psi><psi| + (1 - eta) diag(|rt|^2, |r|^4 + |t|^4, |rt|^2)
/// where psi = -sqrt2 r*t* |2,0> + (r*^2 + t*^2)|1,1> - sqrt2 r*t* e^{i phi_d}|0,2>
/// is the unnormalized interfering output. The |2,0><0,2| coherence is then
/// scaled by d (dephase_corner).
fock::DensityMatrix hom_output(const SplitterSpec& spec, double eta, double d, double phi_d);

/// |r|^4 + |t|^4 + 2 eta Re[r*^2 t^2].
double coincidence_probability(const SplitterSpec& spec, double eta);

/// (n_noint - n_int) / n_noint.
double visibility(double n_noint, double n_int);

/// Dip visibility for fully indistinguishable photons.
double max_visibility(const SplitterSpec& spec);

/// Overlap eta that produces the requested dip visibility.
double eta_for_visibility(const SplitterSpec& spec, double target_visibility);

struct HomProfile {
  std::vector<double> delays;                // fs
  std::vector<double> expected_coincidences;  // counts per window
  double tau_c = 0.0;                        // fs
  double baseline = 0.0;                     // counts
};

/// Gaussian-filter coherence time in fs:
///   tau_c = lambda0^2 / (pi c dlambda_g),  dlambda_g = fwhm / sqrt(2 ln 2)
/// where dlambda_g is the 1/e half-width of the filter's power spectrum.
double coherence_time_fs(double lambda0_nm, double fwhm_nm);

/// counts(tau) = baseline (1 - V_max eta_max exp(-(tau/tau_c)^2)).
HomProfile hom_dip_profile(const SplitterSpec& spec, double eta_max, double baseline,
                           double lambda0_nm, double fwhm_nm, std::span<const double> delays_fs);

struct MziSample {
  double phi_p2 = 0.0;
  double i_r = 0.0;
  double i_t = 0.0;
};

/// (|R_MZ|^2, |T_MZ|^2) with a lossless first splitter (r_p = i/sqrt2,
/// t_p = 1/sqrt2), phi_p1 = 0 and the splitter under test second.
std::pair<double, double> mzi_output(const SplitterSpec& spec, double phi_p2);

/// Noiseless fringes at n equally spaced phi_p2 in [0, 2 pi).
std::vector<MziSample> mzi_fringes(const SplitterSpec& spec, std::size_t n);

struct MziFit {
  double phi = 0.0;           // in (-pi, pi]
  double sum_squares = 0.0;   // both ports
  double rms_residual = 0.0;
};

/// Least-squares estimate of the reflection phase from both output ports
/// jointly, with |r| and |t| taken as known. Needs at least 8 samples that
/// cover one full period of phi_p2.
MziFit fit_mzi_phase(std::span<const MziSample> fringes, double rmag, double tmag);

}  // namespace homent::splitter
