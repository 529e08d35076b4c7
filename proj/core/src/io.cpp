#include "homent/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "homent/error.hpp"
#include "json.hpp"

namespace homent::io {

namespace {

using Json = nlohmann::ordered_json;

// nlohmann picks the shortest round-trip form; reports want a fixed 17
// significant digits, so emit the tree ourselves.
void write_json(std::ostringstream& os, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{" << nl;
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << "," << nl;
        first = false;
        os << pad << Json(it.key()).dump() << (indent > 0 ? ": " : ":");
        write_json(os, it.value(), indent, depth + 1);
      }
      os << nl << close_pad << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      // Short numeric arrays stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      if (flat || indent == 0) {
        os << "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) os << ", ";
          write_json(os, j[i], 0, 0);
        }
        os << "]";
        return;
      }
      os << "[" << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << "," << nl;
        os << pad;
        write_json(os, j[i], indent, depth + 1);
      }
      os << nl << close_pad << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_double(j.get<double>());
      return;
    default:
      os << j.dump();
      return;
  }
}

std::string dump(const Json& j) {
  std::ostringstream os;
  write_json(os, j, 2, 0);
  os << "\n";
  return os.str();
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Json parse_json(std::string_view text, const std::string& source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // byte is 1-based and points just past the offending character.
    const std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, col] = line_column(text, byte);
    std::string what = e.what();
    const auto pos = what.find("parse error");
    throw ParseError(source, line, col, pos == std::string::npos ? what : what.substr(pos));
  }
}

// Semantic errors in JSON documents do not carry positions; point at the
// first occurrence of the key in the source text.
[[noreturn]] void json_schema_error(std::string_view text, const std::string& source,
                                    const std::string& key, const std::string& what) {
  const auto at = text.find("\"" + key + "\"");
  const auto [line, col] =
      at == std::string_view::npos ? std::pair<std::size_t, std::size_t>{1, 1} : line_column(text, at);
  throw ParseError(source, line, col, what);
}

struct CsvField {
  std::string_view text;
  std::size_t column;  // 1-based character column
};

std::vector<CsvField> split_csv_line(std::string_view line) {
  std::vector<CsvField> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string_view f = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    std::size_t lead = 0;
    while (lead < f.size() && (f[lead] == ' ' || f[lead] == '\t')) ++lead;
    std::size_t end = f.size();
    while (end > lead && (f[end - 1] == ' ' || f[end - 1] == '\t' || f[end - 1] == '\r')) --end;
    out.push_back({f.substr(lead, end - lead), start + lead + 1});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct CsvRow {
  std::size_t line;
  std::vector<CsvField> fields;
};

// Returns data rows after checking the header matches `expected` exactly.
std::vector<CsvRow> read_csv(std::string_view text, const std::string& source,
                             const std::vector<std::string>& expected) {
  std::vector<CsvRow> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    if (line.front() == '#') continue;
    auto fields = split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (fields.size() != expected.size()) {
        throw ParseError(source, line_no, 1,
                         "expected header with " + std::to_string(expected.size()) + " columns");
      }
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (fields[i].text != expected[i]) {
          throw ParseError(source, line_no, fields[i].column,
                           "expected column '" + expected[i] + "', found '" +
                               std::string(fields[i].text) + "'");
        }
      }
      continue;
    }
    if (fields.size() != expected.size()) {
      throw ParseError(source, line_no, 1,
                       "expected " + std::to_string(expected.size()) + " fields, found " +
                           std::to_string(fields.size()));
    }
    rows.push_back({line_no, std::move(fields)});
  }
  if (!header_seen) throw ParseError(source, 1, 1, "empty file (missing header)");
  return rows;
}

double parse_double(const CsvField& f, std::size_t line, const std::string& source) {
  double v = 0.0;
  const char* first = f.text.data();
  const char* last = first + f.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || f.text.empty() || !std::isfinite(v)) {
    throw ParseError(source, line, f.column, "invalid number '" + std::string(f.text) + "'");
  }
  return v;
}

std::int64_t parse_int(const CsvField& f, std::size_t line, const std::string& source) {
  std::int64_t v = 0;
  const char* first = f.text.data();
  const char* last = first + f.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || f.text.empty()) {
    throw ParseError(source, line, f.column, "invalid integer '" + std::string(f.text) + "'");
  }
  return v;
}

Json complex_matrix_json(const Matrix3c& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 3; ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Json metrics_json(const pipeline::TomographyResult& r) {
  return Json{{"fidelity_vs_ideal", r.fidelity_vs_ideal},
              {"populations", Json::array({r.populations[0], r.populations[1], r.populations[2]})},
              {"P", r.concurrence.p},
              {"C", r.concurrence.c},
              {"C_nf", r.concurrence.c_nf},
              {"phase_estimate", r.phase.phase}};
}

Json mle_json(const tomo::MleReport& m) {
  return Json{{"objective", m.objective},
              {"iterations", m.iterations},
              {"restart_index", m.restart_index},
              {"converged_starts", m.converged_starts},
              {"scale", m.scale}};
}

Json config_json(const pipeline::ExperimentConfig& c) {
  Json sets = Json::array();
  for (const auto& s : c.angle_sets) sets.push_back(Json::array({s.a_qwp1, s.a_qwp2, s.a_hwp1}));
  return Json{{"mode", pipeline::to_string(c.mode)},
              {"splitter", Json{{"rmag", c.splitter.rmag()},
                                {"tmag", c.splitter.tmag()},
                                {"phi", c.splitter.phi()}}},
              {"eta", c.eta},
              {"d", c.d},
              {"phi_d", c.phi_d},
              {"pairs_per_setting", c.pairs_per_setting},
              {"seed", c.seed},
              {"integration_time_s", c.integration_time_s},
              {"bootstrap_resamples", c.bootstrap_resamples},
              {"angle_sets", sets}};
}

double json_number(const Json& j, std::string_view text, const std::string& source,
                   const std::string& key) {
  if (!j.is_number()) json_schema_error(text, source, key, "'" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) json_schema_error(text, source, key, "'" + key + "' must be finite");
  return v;
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string density_to_json(const fock::DensityMatrix& rho) {
  return dump(Json{{"basis", "20,11,02"}, {"rho", complex_matrix_json(rho.matrix())}});
}

fock::DensityMatrix density_from_json(std::string_view text, const std::string& source) {
  const Json j = parse_json(text, source);
  if (!j.is_object()) throw ParseError(source, 1, 1, "expected a JSON object");
  if (!j.contains("basis") || j["basis"] != "20,11,02") {
    json_schema_error(text, source, "basis", "\"basis\" must be \"20,11,02\"");
  }
  if (!j.contains("rho")) throw ParseError(source, 1, 1, "missing \"rho\"");
  const Json& rows = j["rho"];
  auto bad = [&]() {
    json_schema_error(text, source, "rho", "\"rho\" must be a 3x3 array of [re, im] pairs");
  };
  if (!rows.is_array() || rows.size() != 3) bad();
  Matrix3c m;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!rows[i].is_array() || rows[i].size() != 3) bad();
    for (std::size_t k = 0; k < 3; ++k) {
      const Json& e = rows[i][k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) bad();
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = {e[0].get<double>(), e[1].get<double>()};
    }
  }
  return fock::DensityMatrix(m);
}

std::string counts_to_csv(std::span<const tomo::CountsRecord> counts) {
  std::ostringstream os;
  os << "angle_set_id,coincidences,integration_time_s\n";
  for (const auto& c : counts) {
    os << c.angle_set_id << "," << c.coincidences << "," << format_double(c.integration_time) << "\n";
  }
  return os.str();
}

std::array<tomo::CountsRecord, 9> counts_from_csv(std::string_view text, const std::string& source) {
  const auto rows = read_csv(text, source, {"angle_set_id", "coincidences", "integration_time_s"});
  if (rows.size() != 9) {
    throw ParseError(source, rows.empty() ? 1 : rows.back().line, 0,
                     "expected 9 data rows, found " + std::to_string(rows.size()));
  }
  std::array<tomo::CountsRecord, 9> out{};
  std::array<bool, 9> seen{};
  for (std::size_t i = 0; i < 9; ++i) {
    const auto& r = rows[i];
    const std::int64_t id = parse_int(r.fields[0], r.line, source);
    if (id < 1 || id > 9) throw ParseError(source, r.line, r.fields[0].column, "angle_set_id must be 1..9");
    if (seen[static_cast<std::size_t>(id - 1)]) {
      throw ParseError(source, r.line, r.fields[0].column, "duplicate angle_set_id");
    }
    seen[static_cast<std::size_t>(id - 1)] = true;
    const std::int64_t n = parse_int(r.fields[1], r.line, source);
    if (n < 0) throw ParseError(source, r.line, r.fields[1].column, "coincidences must be nonnegative");
    const double t = parse_double(r.fields[2], r.line, source);
    if (!(t > 0.0)) throw ParseError(source, r.line, r.fields[2].column, "integration time must be positive");
    out[static_cast<std::size_t>(id - 1)] = {static_cast<int>(id), n, t, t};
  }
  return out;
}

std::string angle_sets_to_csv(std::span<const tomo::AngleSet, 9> sets) {
  std::ostringstream os;
  os << "id,a_qwp1,a_qwp2,a_hwp1\n";
  for (std::size_t i = 0; i < 9; ++i) {
    os << i + 1 << "," << format_double(sets[i].a_qwp1) << "," << format_double(sets[i].a_qwp2) << ","
       << format_double(sets[i].a_hwp1) << "\n";
  }
  return os.str();
}

tomo::AngleSets angle_sets_from_csv(std::string_view text, const std::string& source) {
  const auto rows = read_csv(text, source, {"id", "a_qwp1", "a_qwp2", "a_hwp1"});
  if (rows.size() != 9) {
    throw ParseError(source, rows.empty() ? 1 : rows.back().line, 0,
                     "expected 9 angle sets, found " + std::to_string(rows.size()));
  }
  tomo::AngleSets out{};
  std::array<bool, 9> seen{};
  for (const auto& r : rows) {
    const std::int64_t id = parse_int(r.fields[0], r.line, source);
    if (id < 1 || id > 9) throw ParseError(source, r.line, r.fields[0].column, "id must be 1..9");
    const auto idx = static_cast<std::size_t>(id - 1);
    if (seen[idx]) throw ParseError(source, r.line, r.fields[0].column, "duplicate id");
    seen[idx] = true;
    out[idx] = {parse_double(r.fields[1], r.line, source), parse_double(r.fields[2], r.line, source),
                parse_double(r.fields[3], r.line, source)};
  }
  return out;
}

std::string hom_profile_to_csv(const splitter::HomProfile& profile) {
  std::ostringstream os;
  os << "delay_fs,counts\n";
  for (std::size_t i = 0; i < profile.delays.size(); ++i) {
    os << format_double(profile.delays[i]) << "," << format_double(profile.expected_coincidences[i]) << "\n";
  }
  return os.str();
}

std::string fringes_to_csv(std::span<const splitter::MziSample> fringes) {
  std::ostringstream os;
  os << "phi_p2,i_r,i_t\n";
  for (const auto& f : fringes) {
    os << format_double(f.phi_p2) << "," << format_double(f.i_r) << "," << format_double(f.i_t) << "\n";
  }
  return os.str();
}

std::vector<splitter::MziSample> fringes_from_csv(std::string_view text, const std::string& source) {
  const auto rows = read_csv(text, source, {"phi_p2", "i_r", "i_t"});
  std::vector<splitter::MziSample> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    out.push_back({parse_double(r.fields[0], r.line, source), parse_double(r.fields[1], r.line, source),
                   parse_double(r.fields[2], r.line, source)});
  }
  return out;
}

pipeline::ExperimentConfig config_from_json(std::string_view text, const std::string& source) {
  const Json j = parse_json(text, source);
  if (!j.is_object()) throw ParseError(source, 1, 1, "config must be a JSON object");
  static const std::vector<std::string> known = {
      "mode", "splitter", "eta", "visibility", "d", "phi_d", "pairs_per_setting", "seed",
      "integration_time_s", "bootstrap_resamples", "angle_sets"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      json_schema_error(text, source, it.key(), "unknown key '" + it.key() + "'");
    }
  }

  pipeline::ExperimentConfig c;
  try {
    if (j.contains("mode")) {
      if (!j["mode"].is_string()) json_schema_error(text, source, "mode", "'mode' must be a string");
      const auto mode = pipeline::mode_from_string(j["mode"].get<std::string>());
      if (mode == pipeline::Mode::Photonic) c = pipeline::photonic_preset();
      if (mode == pipeline::Mode::Plasmonic) c = pipeline::plasmonic_preset();
      c.mode = mode;
    }
    if (j.contains("splitter")) {
      const Json& s = j["splitter"];
      if (!s.is_object()) json_schema_error(text, source, "splitter", "'splitter' must be an object");
      const double phi = s.contains("phi") ? json_number(s["phi"], text, source, "phi") : c.splitter.phi();
      if (s.contains("r2") || s.contains("t2")) {
        if (!s.contains("r2") || !s.contains("t2")) {
          json_schema_error(text, source, "splitter", "'splitter' needs both r2 and t2");
        }
        c.splitter = splitter::SplitterSpec::from_intensities(json_number(s["r2"], text, source, "r2"),
                                                              json_number(s["t2"], text, source, "t2"), phi);
      } else if (s.contains("rmag") || s.contains("tmag")) {
        if (!s.contains("rmag") || !s.contains("tmag")) {
          json_schema_error(text, source, "splitter", "'splitter' needs both rmag and tmag");
        }
        c.splitter = splitter::SplitterSpec::make(json_number(s["rmag"], text, source, "rmag"),
                                                  json_number(s["tmag"], text, source, "tmag"), phi);
      } else {
        c.splitter = splitter::SplitterSpec::make(c.splitter.rmag(), c.splitter.tmag(), phi);
      }
    }
    if (j.contains("eta") && j.contains("visibility")) {
      json_schema_error(text, source, "visibility", "give either 'eta' or 'visibility', not both");
    }
    if (j.contains("eta")) c.eta = json_number(j["eta"], text, source, "eta");
    if (j.contains("visibility")) {
      c.eta = splitter::eta_for_visibility(c.splitter, json_number(j["visibility"], text, source, "visibility"));
    } else if (!j.contains("eta") && j.contains("splitter") && c.mode != pipeline::Mode::Custom) {
      // Preset visibility targets follow a replaced splitter.
      const double v = c.mode == pipeline::Mode::Photonic ? 0.93 : 0.58;
      c.eta = splitter::eta_for_visibility(c.splitter, v);
    }
    if (j.contains("d")) c.d = json_number(j["d"], text, source, "d");
    if (j.contains("phi_d")) c.phi_d = json_number(j["phi_d"], text, source, "phi_d");
    if (j.contains("pairs_per_setting")) {
      c.pairs_per_setting = json_number(j["pairs_per_setting"], text, source, "pairs_per_setting");
    }
    if (j.contains("seed")) {
      if (!j["seed"].is_number_unsigned()) {
        json_schema_error(text, source, "seed", "'seed' must be a nonnegative integer");
      }
      c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("integration_time_s")) {
      c.integration_time_s = json_number(j["integration_time_s"], text, source, "integration_time_s");
    }
    if (j.contains("bootstrap_resamples")) {
      if (!j["bootstrap_resamples"].is_number_integer()) {
        json_schema_error(text, source, "bootstrap_resamples", "'bootstrap_resamples' must be an integer");
      }
      c.bootstrap_resamples = j["bootstrap_resamples"].get<int>();
    }
    if (j.contains("angle_sets")) {
      const Json& a = j["angle_sets"];
      if (!a.is_array() || a.size() != 9) {
        json_schema_error(text, source, "angle_sets", "'angle_sets' must hold 9 [qwp1, qwp2, hwp1] triples");
      }
      for (std::size_t i = 0; i < 9; ++i) {
        if (!a[i].is_array() || a[i].size() != 3) {
          json_schema_error(text, source, "angle_sets", "'angle_sets' must hold 9 [qwp1, qwp2, hwp1] triples");
        }
        c.angle_sets[i] = {json_number(a[i][0], text, source, "angle_sets"),
                           json_number(a[i][1], text, source, "angle_sets"),
                           json_number(a[i][2], text, source, "angle_sets")};
      }
    }
    pipeline::validate(c);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(source, 1, 1, e.what());
  }
  return c;
}

std::string config_to_json(const pipeline::ExperimentConfig& config) { return dump(config_json(config)); }

std::string metrics_to_json(const pipeline::TomographyResult& result) { return dump(metrics_json(result)); }

std::string tomography_report_to_json(const pipeline::TomographyResult& result) {
  Json j = metrics_json(result);
  j["phase_fidelity"] = result.phase.fidelity;
  j["implied_visibility"] = result.implied_visibility;
  j["mle"] = mle_json(result.mle);
  j["density"] = Json{{"basis", "20,11,02"}, {"rho", complex_matrix_json(result.mle.rho.matrix())}};
  return dump(j);
}

std::string run_report_to_json(const pipeline::RunReport& report) {
  const auto& t = report.tomography;
  const auto& b = report.bootstrap;
  Json counts = Json::array();
  for (const auto& c : report.counts) {
    counts.push_back(Json{{"angle_set_id", c.angle_set_id}, {"coincidences", c.coincidences}});
  }
  Json j;
  j["provenance"] = Json{{"config_hash", report.config_hash}, {"seed", report.config.seed}};
  j["config"] = config_json(report.config);
  j["density"] = Json{{"basis", "20,11,02"}, {"rho", complex_matrix_json(t.mle.rho.matrix())}};
  j["populations"] = Json::array({t.populations[0], t.populations[1], t.populations[2]});
  j["fidelity_vs_ideal"] = t.fidelity_vs_ideal;
  j["fidelity_vs_truth"] = report.fidelity_vs_truth;
  j["phase_estimate"] = t.phase.phase;
  j["P"] = t.concurrence.p;
  j["C"] = t.concurrence.c;
  j["C_nf"] = t.concurrence.c_nf;
  j["hom_visibility"] = report.hom_visibility;
  j["max_visibility"] = report.max_visibility;
  j["implied_visibility"] = t.implied_visibility;
  j["uncertainty"] = Json{{"resamples", b.resamples},
                          {"failures", b.failures},
                          {"fidelity_vs_ideal", b.fidelity.stddev},
                          {"P", b.p.stddev},
                          {"C", b.c.stddev},
                          {"C_nf", b.c_nf.stddev},
                          {"populations", Json::array({b.populations[0].stddev, b.populations[1].stddev,
                                                       b.populations[2].stddev})}};
  j["bootstrap_means"] = Json{{"fidelity_vs_ideal", b.fidelity.mean},
                              {"C_nf", b.c_nf.mean},
                              {"populations", Json::array({b.populations[0].mean, b.populations[1].mean,
                                                           b.populations[2].mean})}};
  j["mle"] = mle_json(t.mle);
  j["counts"] = counts;
  return dump(j);
}

std::string mzi_fit_to_json(const splitter::MziFit& fit, std::size_t samples) {
  return dump(Json{{"phi", fit.phi},
                   {"sum_squares", fit.sum_squares},
                   {"rms_residual", fit.rms_residual},
                   {"samples", samples}});
}

std::string config_hash(const pipeline::ExperimentConfig& config) {
  const std::string canonical = config_to_json(config);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, 0, 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Range, "cannot write " + path);
  out << contents;
  if (!out) throw Error(ErrorKind::Range, "write failed for " + path);
}

}  // namespace homent::io
