#include "homent/pipeline.hpp"

#include <cmath>
#include <random>

#include "homent/error.hpp"
#include "homent/io.hpp"

namespace homent::pipeline {

namespace {

constexpr std::uint64_t kStreamCounts = 1;
constexpr std::uint64_t kStreamMle = 2;
constexpr std::uint64_t kStreamBootstrap = 3;

Spread spread_of(const std::vector<double>& xs) {
  Spread s;
  if (xs.empty()) return s;
  for (double x : xs) s.mean += x;
  s.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return s;
  double acc = 0.0;
  for (double x : xs) acc += (x - s.mean) * (x - s.mean);
  s.stddev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
  return s;
}

std::int64_t draw_poisson(double mean, std::mt19937_64& rng) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(rng);
}

}  // namespace

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Photonic: return "photonic";
    case Mode::Plasmonic: return "plasmonic";
    case Mode::Custom: return "custom";
  }
  return "custom";
}

Mode mode_from_string(const std::string& s) {
  if (s == "photonic") return Mode::Photonic;
  if (s == "plasmonic") return Mode::Plasmonic;
  if (s == "custom") return Mode::Custom;
  throw Error(ErrorKind::Range, "unknown mode '" + s + "' (expected photonic|plasmonic|custom)");
}

ExperimentConfig photonic_preset() {
  ExperimentConfig c;
  c.mode = Mode::Photonic;
  c.splitter = splitter::SplitterSpec::symmetric_lossless();
  c.eta = splitter::eta_for_visibility(c.splitter, 0.93);
  c.d = 1.0;
  c.phi_d = 0.0;
  c.pairs_per_setting = 1e4;
  return c;
}

ExperimentConfig plasmonic_preset() {
  ExperimentConfig c;
  c.mode = Mode::Plasmonic;
  c.splitter = splitter::SplitterSpec::plasmonic_measured();
  c.eta = splitter::eta_for_visibility(c.splitter, 0.58);
  c.d = 0.75;
  c.phi_d = -0.4;
  c.pairs_per_setting = 500.0;
  return c;
}

void validate(const ExperimentConfig& config) {
  if (!(config.eta >= 0.0 && config.eta <= 1.0)) throw Error(ErrorKind::Range, "eta must lie in [0, 1]");
  if (!(config.d >= 0.0 && config.d <= 1.0)) throw Error(ErrorKind::Range, "d must lie in [0, 1]");
  if (!std::isfinite(config.phi_d)) throw Error(ErrorKind::Range, "phi_d must be finite");
  if (!(config.pairs_per_setting > 0.0) || !std::isfinite(config.pairs_per_setting)) {
    throw Error(ErrorKind::Range, "pairs_per_setting must be positive");
  }
  if (!(config.integration_time_s > 0.0)) {
    throw Error(ErrorKind::Range, "integration_time_s must be positive");
  }
  if (config.bootstrap_resamples < 100) {
    throw Error(ErrorKind::Range, "bootstrap_resamples must be at least 100");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

fock::DensityMatrix true_state(const ExperimentConfig& config) {
  validate(config);
  return splitter::hom_output(config.splitter, config.eta, config.d, config.phi_d);
}

std::array<double, 9> expected_counts(const ExperimentConfig& config) {
  const fock::DensityMatrix rho = true_state(config);
  std::array<double, 9> out{};
  for (std::size_t i = 0; i < 9; ++i) {
    out[i] = tomo::expected_counts(rho, config.angle_sets[i], config.pairs_per_setting);
  }
  return out;
}

std::array<tomo::CountsRecord, 9> synthesize_counts(const ExperimentConfig& config) {
  const std::array<double, 9> means = expected_counts(config);
  std::mt19937_64 rng(derive_seed(config.seed, kStreamCounts));
  std::array<tomo::CountsRecord, 9> out{};
  for (std::size_t i = 0; i < 9; ++i) {
    out[i].angle_set_id = static_cast<int>(i) + 1;
    out[i].coincidences = draw_poisson(means[i], rng);
    out[i].integration_time = config.integration_time_s;
    out[i].trials_scale = config.pairs_per_setting;
  }
  return out;
}

std::vector<splitter::MziSample> noisy_fringes(const splitter::SplitterSpec& spec, std::size_t n,
                                               double sigma, std::uint64_t seed) {
  auto fringes = splitter::mzi_fringes(spec, n);
  if (sigma > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto& f : fringes) {
      f.i_r += noise(rng);
      f.i_t += noise(rng);
    }
  }
  return fringes;
}

TomographyResult run_tomography(std::span<const tomo::CountsRecord> counts,
                                std::span<const tomo::AngleSet, 9> sets, std::uint64_t seed) {
  tomo::MleOptions opts;
  opts.seed = derive_seed(seed, kStreamMle);
  return describe_state(tomo::mle_reconstruct(counts, sets, opts));
}

TomographyResult describe_state(tomo::MleReport fit) {
  TomographyResult r;
  r.mle = std::move(fit);
  const auto pops = r.mle.rho.populations();
  r.populations = {pops(fock::kIdx02), pops(fock::kIdx11), pops(fock::kIdx20)};
  r.fidelity_vs_ideal =
      entangle::fidelity(r.mle.rho, fock::density_from_pure(fock::noon_state(0.0)));
  r.phase = entangle::estimate_noon_phase(r.mle.rho);
  r.concurrence = entangle::filtered_concurrence(r.mle.rho);
  r.implied_visibility = 1.0 - pops(fock::kIdx11) / 0.5;
  return r;
}

BootstrapStats bootstrap_uncertainty(std::span<const tomo::CountsRecord> counts,
                                     std::span<const tomo::AngleSet, 9> sets, int n_resamples,
                                     std::uint64_t seed) {
  if (n_resamples < 100) throw Error(ErrorKind::Range, "bootstrap needs at least 100 resamples");
  std::vector<double> f, cnf, c, p;
  std::array<std::vector<double>, 3> pops;
  BootstrapStats stats;
  stats.resamples = n_resamples;
  for (int k = 0; k < n_resamples; ++k) {
    const std::uint64_t s = derive_seed(derive_seed(seed, kStreamBootstrap), static_cast<std::uint64_t>(k));
    std::mt19937_64 rng(s);
    std::vector<tomo::CountsRecord> resampled(counts.begin(), counts.end());
    bool any = false;
    for (auto& rec : resampled) {
      rec.coincidences = draw_poisson(static_cast<double>(rec.coincidences), rng);
      any = any || rec.coincidences > 0;
    }
    if (!any) {
      ++stats.failures;
      continue;
    }
    try {
      const TomographyResult r = run_tomography(resampled, sets, s);
      f.push_back(r.fidelity_vs_ideal);
      cnf.push_back(r.concurrence.c_nf);
      c.push_back(r.concurrence.c);
      p.push_back(r.concurrence.p);
      for (std::size_t i = 0; i < 3; ++i) pops[i].push_back(r.populations[i]);
    } catch (const tomo::NoConvergenceError&) {
      ++stats.failures;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::EmptySubspace) throw;
      ++stats.failures;
    }
  }
  stats.fidelity = spread_of(f);
  stats.c_nf = spread_of(cnf);
  stats.c = spread_of(c);
  stats.p = spread_of(p);
  for (std::size_t i = 0; i < 3; ++i) stats.populations[i] = spread_of(pops[i]);
  return stats;
}

RunReport end_to_end(const ExperimentConfig& config) {
  validate(config);
  RunReport rep;
  rep.config = config;
  rep.config_hash = io::config_hash(config);
  rep.counts = synthesize_counts(config);
  rep.tomography = run_tomography(rep.counts, config.angle_sets, config.seed);
  rep.bootstrap =
      bootstrap_uncertainty(rep.counts, config.angle_sets, config.bootstrap_resamples, config.seed);
  rep.max_visibility = splitter::max_visibility(config.splitter);
  rep.hom_visibility = splitter::visibility(splitter::coincidence_probability(config.splitter, 0.0),
                                            splitter::coincidence_probability(config.splitter, config.eta));
  rep.fidelity_vs_truth = entangle::fidelity(rep.tomography.mle.rho, true_state(config));
  return rep;
}

}  // namespace homent::pipeline
