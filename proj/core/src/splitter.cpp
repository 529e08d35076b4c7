#include "homent/splitter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "homent/error.hpp"

namespace homent::splitter {

namespace {

void check_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorKind::Range, std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

double wrap_phase(double phi) {
  if (!std::isfinite(phi)) throw Error(ErrorKind::Range, "phase must be finite");
  double w = std::remainder(phi, 2.0 * kPi);  // [-pi, pi]
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

SplitterSpec SplitterSpec::make(double rmag, double tmag, double phi) {
  check_unit(rmag, "rmag");
  check_unit(tmag, "tmag");
  if (std::abs(rmag * rmag + tmag * tmag - 1.0) > 1e-9) {
    throw Error(ErrorKind::Range, "rmag^2 + tmag^2 must equal 1 in the coincidence basis");
  }
  return SplitterSpec(rmag, tmag, wrap_phase(phi));
}

SplitterSpec SplitterSpec::from_intensities(double r2, double t2, double phi) {
  check_unit(r2, "|r|^2");
  check_unit(t2, "|t|^2");
  return make(std::sqrt(r2), std::sqrt(t2), phi);
}

SplitterSpec SplitterSpec::symmetric_lossless() {
  return SplitterSpec(std::sqrt(0.5), std::sqrt(0.5), kPi / 2.0);
}

SplitterSpec SplitterSpec::plasmonic_measured() { return from_intensities(0.51, 0.49, 1.21); }

Eigen::Vector3d sector_weights(const SplitterSpec& spec, double eta) {
  check_unit(eta, "eta");
  const double r2 = spec.rmag() * spec.rmag();
  const double t2 = spec.tmag() * spec.tmag();
  const double corner = r2 * t2 * (1.0 + eta);
  return {corner, coincidence_probability(spec, eta), corner};
}

fock::DensityMatrix hom_output(const SplitterSpec& spec, double eta, double d, double phi_d) {
  check_unit(eta, "eta");
  check_unit(d, "d");
  const Complex rc = std::conj(spec.r());
  const Complex tc = std::conj(spec.t());
  const Complex corner = -std::sqrt(2.0) * rc * tc;
  const Vector3c psi(corner, rc * rc + tc * tc, corner * std::polar(1.0, phi_d));

  const double r2 = spec.rmag() * spec.rmag();
  const double t2 = spec.tmag() * spec.tmag();
  Matrix3c classical = Matrix3c::Zero();
  classical(0, 0) = r2 * t2;
  classical(1, 1) = r2 * r2 + t2 * t2;
  classical(2, 2) = r2 * t2;

  Matrix3c rho = eta * (psi * psi.adjoint()) + (1.0 - eta) * classical;
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw Error(ErrorKind::EmptySubspace, "no weight in the coincidence basis");
  rho /= tr;
  return fock::dephase_corner(fock::DensityMatrix(rho), d);
}

double coincidence_probability(const SplitterSpec& spec, double eta) {
  check_unit(eta, "eta");
  const Complex r = spec.r();
  const Complex t = spec.t();
  const double r4 = std::norm(r) * std::norm(r);
  const double t4 = std::norm(t) * std::norm(t);
  const double cross = (std::conj(r) * std::conj(r) * t * t).real();
  return std::clamp(r4 + t4 + 2.0 * eta * cross, 0.0, 1.0);
}

double visibility(double n_noint, double n_int) {
  if (n_noint == 0.0) throw Error(ErrorKind::Division, "no-interference count is zero");
  if (!(n_noint > 0.0) || !(n_int >= 0.0)) {
    throw Error(ErrorKind::Range, "counts must be nonnegative");
  }
  return (n_noint - n_int) / n_noint;
}

double max_visibility(const SplitterSpec& spec) {
  return visibility(coincidence_probability(spec, 0.0), coincidence_probability(spec, 1.0));
}

double eta_for_visibility(const SplitterSpec& spec, double target_visibility) {
  const double vmax = max_visibility(spec);
  if (vmax <= 0.0) {
    throw Error(ErrorKind::Range, "splitter shows no coincidence dip; visibility cannot be tuned");
  }
  const double eta = target_visibility / vmax;
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw Error(ErrorKind::Range, "requested visibility exceeds the splitter maximum");
  }
  return eta;
}

double coherence_time_fs(double lambda0_nm, double fwhm_nm) {
  if (!(lambda0_nm > 0.0) || !(fwhm_nm > 0.0)) {
    throw Error(ErrorKind::Range, "wavelength and bandwidth must be positive");
  }
  const double lambda0 = lambda0_nm * 1e-9;
  const double dlambda_g = fwhm_nm * 1e-9 / std::sqrt(2.0 * std::log(2.0));
  return lambda0 * lambda0 / (kPi * kSpeedOfLight * dlambda_g) * 1e15;
}

HomProfile hom_dip_profile(const SplitterSpec& spec, double eta_max, double baseline,
                           double lambda0_nm, double fwhm_nm, std::span<const double> delays_fs) {
  check_unit(eta_max, "eta_max");
  if (!(baseline >= 0.0)) throw Error(ErrorKind::Range, "baseline must be nonnegative");
  HomProfile out;
  out.tau_c = coherence_time_fs(lambda0_nm, fwhm_nm);
  out.baseline = baseline;
  const double vmax = max_visibility(spec);
  out.delays.assign(delays_fs.begin(), delays_fs.end());
  out.expected_coincidences.reserve(delays_fs.size());
  for (double tau : delays_fs) {
    const double x = tau / out.tau_c;
    const double eta = eta_max * std::exp(-x * x);
    out.expected_coincidences.push_back(std::max(0.0, baseline * (1.0 - vmax * eta)));
  }
  return out;
}

std::pair<double, double> mzi_output(const SplitterSpec& spec, double phi_p2) {
  const Complex rp(0.0, 1.0 / std::sqrt(2.0));
  const Complex tp(1.0 / std::sqrt(2.0), 0.0);
  const Complex arm2 = std::polar(1.0, phi_p2);
  const Complex r = spec.r();
  const Complex t = spec.t();
  const Complex big_r = rp * r * arm2 + tp * t;
  const Complex big_t = rp * t * arm2 + r * tp;
  return {std::norm(big_r), std::norm(big_t)};
}

std::vector<MziSample> mzi_fringes(const SplitterSpec& spec, std::size_t n) {
  std::vector<MziSample> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double p = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    const auto [ir, it] = mzi_output(spec, p);
    out.push_back({p, ir, it});
  }
  return out;
}

MziFit fit_mzi_phase(std::span<const MziSample> fringes, double rmag, double tmag) {
  if (fringes.size() < 8) throw Error(ErrorKind::Range, "need at least 8 fringe samples");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double rmin = lo, rmax = hi, tmin = lo, tmax = hi;
  for (const auto& s : fringes) {
    lo = std::min(lo, s.phi_p2);
    hi = std::max(hi, s.phi_p2);
    rmin = std::min(rmin, s.i_r);
    rmax = std::max(rmax, s.i_r);
    tmin = std::min(tmin, s.i_t);
    tmax = std::max(tmax, s.i_t);
  }
  const double n = static_cast<double>(fringes.size());
  if (hi - lo < 2.0 * kPi * (1.0 - 1.0 / n) - 1e-9) {
    throw Error(ErrorKind::Range, "fringe samples must span one full period of phi_p2");
  }
  if (rmax - rmin < 1e-12 && tmax - tmin < 1e-12) {
    throw Error(ErrorKind::Unidentifiable, "fringes are constant");
  }
  if (rmag * tmag < 1e-12) {
    throw Error(ErrorKind::Unidentifiable, "model has no phase dependence when r or t vanishes");
  }

  // The splitter spec constructor enforces the unit-sum rule; the fit only
  // needs the magnitudes, so build it directly from the measured values.
  const double norm = std::hypot(rmag, tmag);
  const double rm = rmag / norm;
  const double tm = tmag / norm;
  auto cost = [&](double phi) {
    const SplitterSpec spec = SplitterSpec::make(rm, tm, phi);
    double s = 0.0;
    for (const auto& f : fringes) {
      const auto [ir, it] = mzi_output(spec, f.phi_p2);
      s += (f.i_r - ir) * (f.i_r - ir) + (f.i_t - it) * (f.i_t - it);
    }
    return s;
  };

  constexpr int kGrid = 720;
  const double step = 2.0 * kPi / kGrid;
  double best_phi = -kPi + step;
  double best = cost(best_phi);
  for (int k = 2; k <= kGrid; ++k) {
    const double p = -kPi + k * step;
    const double c = cost(p);
    if (c < best) {
      best = c;
      best_phi = p;
    }
  }

  // Golden-section refinement inside the bracketing grid cells.
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best_phi - step;
  double b = best_phi + step;
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = cost(x1);
  double f2 = cost(x2);
  while (b - a > 1e-12) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = cost(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = cost(x2);
    }
  }
  MziFit fit;
  fit.phi = wrap_phase(0.5 * (a + b));
  fit.sum_squares = cost(fit.phi);
  fit.rms_residual = std::sqrt(fit.sum_squares / (2.0 * n));
  return fit;
}

}  // namespace homent::splitter
