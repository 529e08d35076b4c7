// homent: command-line front end for the HOM / tomography pipeline.
//
// Exit codes: 0 success, 1 usage error or malformed input, 2 numerical failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "homent/error.hpp"
#include "homent/io.hpp"
#include "homent/pipeline.hpp"

namespace {

using namespace homent;

struct Common {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
};

void add_common(CLI::App* cmd, Common& c) {
  auto* cfg = cmd->add_option("--config", c.config_path, "Experiment config JSON")->check(CLI::ExistingFile);
  auto* pre = cmd->add_option("--preset", c.preset, "photonic | plasmonic")
                  ->check(CLI::IsMember({"photonic", "plasmonic"}));
  cfg->excludes(pre);
  cmd->add_option("--seed", c.seed, "Override the config seed");
  cmd->add_option("--out", c.out_dir, "Directory for output files (default: stdout)");
}

pipeline::ExperimentConfig load_config(const Common& c) {
  pipeline::ExperimentConfig config;
  if (!c.config_path.empty()) {
    config = io::config_from_json(io::read_file(c.config_path), c.config_path);
  } else if (c.preset == "plasmonic") {
    config = pipeline::plasmonic_preset();
  } else {
    config = pipeline::photonic_preset();
  }
  if (c.seed) config.seed = *c.seed;
  pipeline::validate(config);
  return config;
}

// Writes to <out>/<name> when --out is given, otherwise to stdout.
void emit(const Common& c, const std::string& name, const std::string& contents) {
  if (c.out_dir.empty()) {
    std::cout << contents;
    return;
  }
  std::filesystem::create_directories(c.out_dir);
  const auto path = (std::filesystem::path(c.out_dir) / name).string();
  io::write_file(path, contents);
  std::cerr << "wrote " << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon interference and polarization tomography toolkit"};
  app.name("homent");
  app.require_subcommand(1);

  Common common;

  auto* hom = app.add_subcommand("hom-dip", "Coincidence counts versus delay (CSV)");
  add_common(hom, common);
  double baseline = 1000.0, lambda0 = 808.0, fwhm = 20.0, span = 300.0, step = 2.0;
  hom->add_option("--baseline", baseline, "Counts far from the dip")->check(CLI::PositiveNumber);
  hom->add_option("--lambda0", lambda0, "Centre wavelength in nm")->check(CLI::PositiveNumber);
  hom->add_option("--fwhm", fwhm, "Filter FWHM in nm")->check(CLI::PositiveNumber);
  hom->add_option("--span", span, "Delay half-range in fs")->check(CLI::PositiveNumber);
  hom->add_option("--step", step, "Delay step in fs")->check(CLI::PositiveNumber);

  auto* mzi = app.add_subcommand("mzi-fit", "Synthesize or read MZI fringes and fit the splitter phase");
  add_common(mzi, common);
  std::string fringes_path;
  std::size_t samples = 64;
  double noise = 0.01;
  mzi->add_option("--fringes", fringes_path, "Fringe CSV (phi_p2,i_r,i_t); synthesized when absent")
      ->check(CLI::ExistingFile);
  mzi->add_option("--samples", samples, "Synthesized fringe points")->check(CLI::Range(8, 1000000));
  mzi->add_option("--noise", noise, "Additive Gaussian noise (absolute)")->check(CLI::NonNegativeNumber);

  auto* tomo_cmd = app.add_subcommand("tomo", "Counts CSV -> density matrix JSON and report");
  add_common(tomo_cmd, common);
  std::string counts_path, angles_path;
  tomo_cmd->add_option("--counts", counts_path, "Counts CSV")->required()->check(CLI::ExistingFile);
  tomo_cmd->add_option("--angles", angles_path, "Angle-set CSV (default: shipped table)")
      ->check(CLI::ExistingFile);

  auto* sim = app.add_subcommand("simulate", "Config -> synthetic counts CSV");
  add_common(sim, common);

  auto* e2e = app.add_subcommand("end-to-end", "Config -> full run report JSON");
  add_common(e2e, common);

  auto* met = app.add_subcommand("metrics", "Density matrix JSON -> entanglement metrics JSON");
  add_common(met, common);
  std::string rho_path;
  met->add_option("--rho", rho_path, "Density matrix JSON")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*hom) {
      const auto config = load_config(common);
      std::vector<double> delays;
      for (double t = -span; t <= span + 1e-9; t += step) delays.push_back(t);
      const auto profile = splitter::hom_dip_profile(config.splitter, config.eta, baseline, lambda0, fwhm, delays);
      emit(common, "hom_dip.csv", io::hom_profile_to_csv(profile));
      double lowest = profile.baseline;
      for (double n : profile.expected_coincidences) lowest = std::min(lowest, n);
      std::fprintf(stderr, "visibility %.4f  tau_c %.3f fs\n", 1.0 - lowest / profile.baseline, profile.tau_c);
    } else if (*mzi) {
      const auto config = load_config(common);
      std::vector<splitter::MziSample> fringes;
      if (!fringes_path.empty()) {
        fringes = io::fringes_from_csv(io::read_file(fringes_path), fringes_path);
      } else {
        fringes = pipeline::noisy_fringes(config.splitter, samples, noise,
                                          pipeline::derive_seed(config.seed, 4));
        if (!common.out_dir.empty()) emit(common, "fringes.csv", io::fringes_to_csv(fringes));
      }
      const auto fit = splitter::fit_mzi_phase(fringes, config.splitter.rmag(), config.splitter.tmag());
      emit(common, "mzi_fit.json", io::mzi_fit_to_json(fit, fringes.size()));
    } else if (*tomo_cmd) {
      const auto counts = io::counts_from_csv(io::read_file(counts_path), counts_path);
      const auto sets = angles_path.empty() ? tomo::default_angle_sets()
                                            : io::angle_sets_from_csv(io::read_file(angles_path), angles_path);
      const std::uint64_t seed = common.seed.value_or(1);
      const auto result = pipeline::run_tomography(counts, sets, seed);
      if (common.out_dir.empty()) {
        std::cout << io::tomography_report_to_json(result);
      } else {
        emit(common, "density.json", io::density_to_json(result.mle.rho));
        emit(common, "report.json", io::tomography_report_to_json(result));
      }
    } else if (*sim) {
      const auto config = load_config(common);
      const auto counts = pipeline::synthesize_counts(config);
      emit(common, "counts.csv", io::counts_to_csv(counts));
      if (!common.out_dir.empty()) emit(common, "angles.csv", io::angle_sets_to_csv(config.angle_sets));
    } else if (*e2e) {
      const auto config = load_config(common);
      emit(common, "run_report.json", io::run_report_to_json(pipeline::end_to_end(config)));
    } else if (*met) {
      const auto rho = io::density_from_json(io::read_file(rho_path), rho_path);
      fock::require_physical(rho);
      tomo::MleReport fit;
      fit.rho = rho;
      emit(common, "metrics.json", io::metrics_to_json(pipeline::describe_state(fit)));
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Range ? 1 : 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
