#pragma once

// End-to-end experiment orchestration: presets, synthetic counts with shot
// noise, reconstruction, metrics and bootstrap error bars.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "homent/entangle.hpp"
#include "homent/splitter.hpp"
#include "homent/tomo.hpp"

namespace homent::pipeline {

enum class Mode { Photonic, Plasmonic, Custom };

const char* to_string(Mode mode);
Mode mode_from_string(const std::string& s);

struct ExperimentConfig {
  Mode mode = Mode::Custom;
  splitter::SplitterSpec splitter = splitter::SplitterSpec::symmetric_lossless();
  double eta = 1.0;
  double d = 1.0;
  double phi_d = 0.0;
  double pairs_per_setting = 1e4;
  std::uint64_t seed = 1;
  double integration_time_s = 1.0;
  int bootstrap_resamples = 100;
  tomo::AngleSets angle_sets = tomo::default_angle_sets();
};

/// Cube-beamsplitter reference run: symmetric lossless splitter, eta set for
/// a 0.93 dip visibility, full corner coherence, 1e4 pairs per setting.
ExperimentConfig photonic_preset();

/// Measured plasmonic splitter (0.51 / 0.49 / 1.21 rad) with eta set for a
/// 0.58 dip visibility. d = 0.75 and phi_d = -0.4 are illustrative stand-ins
/// for the unreported delay-line coherence; 500 pairs per setting.
ExperimentConfig plasmonic_preset();

/// Throws Error(Range) when eta, d are outside [0, 1] or pairs_per_setting <= 0.
void validate(const ExperimentConfig& config);

/// Deterministic 64-bit stream derivation (splitmix64 of seed and tag).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

fock::DensityMatrix true_state(const ExperimentConfig& config);

/// Poisson counts with mean pairs_per_setting * g2 / 2 per setting.
std::array<tomo::CountsRecord, 9> synthesize_counts(const ExperimentConfig& config);

/// Expected (noise-free) counts for the same settings.
std::array<double, 9> expected_counts(const ExperimentConfig& config);

/// Fringes with additive Gaussian noise of standard deviation `sigma`.
std::vector<splitter::MziSample> noisy_fringes(const splitter::SplitterSpec& spec, std::size_t n,
                                               double sigma, std::uint64_t seed);

struct TomographyResult {
  tomo::MleReport mle;
  std::array<double, 3> populations{};  // (p02, p11, p20)
  double fidelity_vs_ideal = 0.0;       // against (|2,0> + |0,2>)/sqrt2
  entangle::PhaseEstimate phase;
  entangle::FilteredConcurrence concurrence;
  double implied_visibility = 0.0;  // 1 - p11 / 0.5
};

TomographyResult run_tomography(std::span<const tomo::CountsRecord> counts,
                                std::span<const tomo::AngleSet, 9> sets, std::uint64_t seed);

/// Metrics of an already reconstructed state; run_tomography ends here.
TomographyResult describe_state(tomo::MleReport fit);

struct Spread {
  double mean = 0.0;
  double stddev = 0.0;
};

struct BootstrapStats {
  int resamples = 0;
  int failures = 0;  // resamples whose reconstruction did not converge
  Spread fidelity;
  Spread c_nf;
  Spread c;
  Spread p;
  std::array<Spread, 3> populations{};  // (p02, p11, p20)
};

/// Parametric bootstrap: every resample redraws each count from a Poisson
/// law with the observed count as mean and reruns the reconstruction.
/// Resample k uses derive_seed(seed, k) so results do not depend on order.
BootstrapStats bootstrap_uncertainty(std::span<const tomo::CountsRecord> counts,
                                     std::span<const tomo::AngleSet, 9> sets, int n_resamples,
                                     std::uint64_t seed);

struct RunReport {
  ExperimentConfig config;
  std::string config_hash;
  std::array<tomo::CountsRecord, 9> counts{};
  TomographyResult tomography;
  BootstrapStats bootstrap;
  double hom_visibility = 0.0;      // dip visibility of the configured source
  double max_visibility = 0.0;      // splitter limit at eta = 1
  double fidelity_vs_truth = 0.0;   // reconstruction against the simulated state
};

RunReport end_to_end(const ExperimentConfig& config);

}  // namespace homent::pipeline
