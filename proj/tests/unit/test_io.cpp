#include "doctest.h"

#include <random>
#include <string>

#include "homent/error.hpp"
#include "homent/io.hpp"
#include "support/generators.hpp"

using namespace homent;

namespace {

template <class F>
ParseError expect_parse_error(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError("", 0, 0, "");
}

std::string sample_counts() {
  return "angle_set_id,coincidences,integration_time_s\n"
         "1,10,1\n2,20,1\n3,30,1\n4,40,1\n5,50,1\n6,60,1\n7,70,1\n8,80,1\n9,90,2\n";
}

}  // namespace

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 1000; ++k) {
    const double x = u(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::stod(io::format_double(x)) == x);
  }
  CHECK(io::format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("density JSON round-trip and physicality") {
  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    const fock::DensityMatrix rho(testing::random_density3(rng, 1 + k % 3));
    const auto back = io::density_from_json(io::density_to_json(rho));
    CHECK(back.matrix() == rho.matrix());
  }
  const auto e = expect_parse_error([] { (void)io::density_from_json("{\"basis\": \"20,11,02\",\n  \"rho\": [1, }"); });
  CHECK(e.line() == 2);
  CHECK(e.column() >= 13);
  CHECK_THROWS_AS(io::density_from_json("[]"), ParseError);
  CHECK_THROWS_AS(io::density_from_json("{\"rho\": [[[1,0],[0,0]],[[0,0],[0,0],[0,0]],[[0,0],[0,0],[0,0]]]}"),
                  ParseError);
}

TEST_CASE("counts CSV") {
  const auto counts = io::counts_from_csv(sample_counts());
  CHECK(counts[8].coincidences == 90);
  CHECK(counts[8].integration_time == 2.0);
  CHECK(counts[8].trials_scale == 2.0);
  CHECK(io::counts_from_csv(io::counts_to_csv(counts))[4].coincidences == 50);

  // Order, comments and blank lines are tolerated.
  const std::string shuffled =
      "# run 3\nangle_set_id,coincidences,integration_time_s\n\n9,1,1\n8,1,1\n7,1,1\n6,1,1\n5,1,1\n4,1,1\n"
      "3,1,1\n2,1,1\n1,5,1\n";
  CHECK(io::counts_from_csv(shuffled)[0].coincidences == 5);

  std::string bad = sample_counts();
  bad.replace(bad.find("4,40,1"), 6, "4,4x,1");
  auto e = expect_parse_error([&] { (void)io::counts_from_csv(bad, "c.csv"); });
  CHECK(e.line() == 5);
  CHECK(e.column() == 3);
  CHECK(std::string(e.what()).find("c.csv:5:3") != std::string::npos);

  e = expect_parse_error([] { (void)io::counts_from_csv("angle_set_id,counts,integration_time_s\n"); });
  CHECK(e.line() == 1);
  CHECK(e.column() == 14);

  std::string neg = sample_counts();
  neg.replace(neg.find("2,20,1"), 6, "2,-2,1");
  e = expect_parse_error([&] { (void)io::counts_from_csv(neg); });
  CHECK(e.line() == 3);

  std::string dup = sample_counts();
  dup.replace(dup.find("9,90,2"), 6, "1,90,2");
  CHECK_THROWS_AS(io::counts_from_csv(dup), ParseError);

  std::string missing = sample_counts();
  missing.erase(missing.find("9,90,2"));
  CHECK_THROWS_AS(io::counts_from_csv(missing), ParseError);
  CHECK_THROWS_AS(io::counts_from_csv(""), ParseError);
}

TEST_CASE("angle sets CSV round-trip") {
  const auto& sets = tomo::default_angle_sets();
  const auto back = io::angle_sets_from_csv(io::angle_sets_to_csv(sets));
  for (int i = 0; i < 9; ++i) {
    CHECK(back[i].a_qwp1 == sets[i].a_qwp1);
    CHECK(back[i].a_qwp2 == sets[i].a_qwp2);
    CHECK(back[i].a_hwp1 == sets[i].a_hwp1);
  }
  CHECK_THROWS_AS(io::angle_sets_from_csv("id,a_qwp1,a_qwp2,a_hwp1\n1,0,0\n"), ParseError);
}

TEST_CASE("fringes CSV round-trip") {
  const auto f = splitter::mzi_fringes(splitter::SplitterSpec::plasmonic_measured(), 16);
  const auto back = io::fringes_from_csv(io::fringes_to_csv(f));
  REQUIRE(back.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(back[i].phi_p2 == f[i].phi_p2);
    CHECK(back[i].i_r == f[i].i_r);
    CHECK(back[i].i_t == f[i].i_t);
  }
}

TEST_CASE("config JSON") {
  const auto p = io::config_from_json("{\"mode\": \"plasmonic\", \"seed\": 7}");
  CHECK(p.mode == pipeline::Mode::Plasmonic);
  CHECK(p.seed == 7);
  CHECK(p.eta == pipeline::plasmonic_preset().eta);

  const auto c = io::config_from_json(
      "{\"splitter\": {\"r2\": 0.5, \"t2\": 0.5, \"phi\": 1.5707963267948966}, \"visibility\": 0.9}");
  CHECK(c.mode == pipeline::Mode::Custom);
  CHECK(splitter::visibility(splitter::coincidence_probability(c.splitter, 0.0),
                             splitter::coincidence_probability(c.splitter, c.eta)) == doctest::Approx(0.9));

  // Canonical JSON round-trips exactly, hash included.
  const auto preset = pipeline::photonic_preset();
  const auto again = io::config_from_json(io::config_to_json(preset));
  CHECK(io::config_to_json(again) == io::config_to_json(preset));
  CHECK(io::config_hash(again) == io::config_hash(preset));
  CHECK(io::config_hash(preset).size() == 16);
  auto other = preset;
  other.seed = 2;
  CHECK(io::config_hash(other) != io::config_hash(preset));

  auto e = expect_parse_error([] { (void)io::config_from_json("{\n  \"mode\": \"plasmonic\",\n  \"etta\": 1\n}"); });
  CHECK(e.line() == 3);
  CHECK(e.column() == 3);

  e = expect_parse_error([] { (void)io::config_from_json("{\n  \"d\": 2.0\n}"); });
  CHECK(std::string(e.what()).find("d must lie") != std::string::npos);

  e = expect_parse_error([] { (void)io::config_from_json("{\n  \"d\": \"x\"\n}"); });
  CHECK(e.line() == 2);

  e = expect_parse_error([] { (void)io::config_from_json("{\"mode\": \"photonic\",,}"); });
  CHECK(e.line() == 1);
  CHECK(e.column() == 21);

  CHECK_THROWS_AS(io::config_from_json("{\"bootstrap_resamples\": 10}"), ParseError);
  CHECK_THROWS_AS(io::config_from_json("{\"mode\": \"lab\"}"), ParseError);
}

TEST_CASE("read_file reports missing files") {
  CHECK_THROWS_AS(io::read_file("/nonexistent/definitely/missing.csv"), ParseError);
}
