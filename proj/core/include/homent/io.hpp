#pragma once

// File formats. Floats are written with 17 significant digits so every value
// round-trips exactly. Parsers raise ParseError with 1-based line/column.
//
//   density JSON   {"basis": "20,11,02", "rho": [[[re, im], ...], ...]}  (row-major)
//   counts CSV     angle_set_id,coincidences,integration_time_s
//   angles CSV     id,a_qwp1,a_qwp2,a_hwp1        (radians)
//   HOM dip CSV    delay_fs,counts
//   fringes CSV    phi_p2,i_r,i_t

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "homent/fock.hpp"
#include "homent/pipeline.hpp"
#include "homent/splitter.hpp"
#include "homent/tomo.hpp"

namespace homent::io {

std::string format_double(double x);

std::string density_to_json(const fock::DensityMatrix& rho);
fock::DensityMatrix density_from_json(std::string_view text, const std::string& source = "<json>");

std::string counts_to_csv(std::span<const tomo::CountsRecord> counts);
/// Records come back ordered by angle_set_id. trials_scale of each record is
/// set to its integration time: only the
/// relative exposure matters because the overall efficiency is fitted.
std::array<tomo::CountsRecord, 9> counts_from_csv(std::string_view text,
                                                  const std::string& source = "<counts>");

std::string angle_sets_to_csv(std::span<const tomo::AngleSet, 9> sets);
tomo::AngleSets angle_sets_from_csv(std::string_view text, const std::string& source = "<angles>");

std::string hom_profile_to_csv(const splitter::HomProfile& profile);
std::string fringes_to_csv(std::span<const splitter::MziSample> fringes);
std::vector<splitter::MziSample> fringes_from_csv(std::string_view text,
                                                  const std::string& source = "<fringes>");

/// Config JSON. `mode` selects a preset ("photonic", "plasmonic") whose values
/// the remaining keys override; "custom" starts from the library defaults.
/// Keys: mode, splitter {rmag, tmag, phi} or {r2, t2, phi}, eta,
/// visibility (alternative to eta), d, phi_d, pairs_per_setting, seed,
/// integration_time_s, bootstrap_resamples, angle_sets [[q1, q2, h] x 9].
pipeline::ExperimentConfig config_from_json(std::string_view text,
                                            const std::string& source = "<config>");
std::string config_to_json(const pipeline::ExperimentConfig& config);

/// {fidelity_vs_ideal, populations: [p02, p11, p20], P, C, C_nf, phase_estimate}
std::string metrics_to_json(const pipeline::TomographyResult& result);
std::string tomography_report_to_json(const pipeline::TomographyResult& result);
std::string run_report_to_json(const pipeline::RunReport& report);

std::string mzi_fit_to_json(const splitter::MziFit& fit, std::size_t samples);

/// FNV-1a 64 of the canonical config JSON, as 16 hex digits.
std::string config_hash(const pipeline::ExperimentConfig& config);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace homent::io
