#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "syncstab/error.hpp"
#include "syncstab/report.hpp"
#include "syncstab/scan.hpp"

using namespace syncstab;

namespace {

RunConfig small_config() {
  RunConfig cfg;
  cfg.e_min = 0.5;
  cfg.e_max = 10.0;
  cfg.points = 60;
  return cfg;
}

std::string csv_of(const std::vector<TraceSample>& s) {
  std::ostringstream os;
  write_samples_csv(os, s);
  return os.str();
}

}  // namespace

TEST_CASE("config and grid") {
  RunConfig cfg = small_config();
  const auto g = energy_grid(cfg);
  REQUIRE(g.size() == 60);
  CHECK(g.front() == 0.5);
  CHECK(g.back() == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(g[1] / g[0] == doctest::Approx(g[59] / g[58]));
  cfg.grid = GridKind::linear;
  const auto l = energy_grid(cfg);
  CHECK(l[1] - l[0] == doctest::Approx(l[59] - l[58]));

  RunConfig bad = small_config();
  bad.e_min = 0.0;
  CHECK_THROWS_AS(check_config(bad), InputError);
  bad = small_config();
  bad.e_max = 0.1;
  CHECK_THROWS_AS(check_config(bad), InputError);
  bad = small_config();
  bad.points = 1;
  CHECK_THROWS_AS(check_config(bad), InputError);
}

TEST_CASE("scan is deterministic and independent of the worker count") {
  RunConfig cfg = small_config();
  const auto serial = scan_trace(cfg);
  REQUIRE(serial.size() == 60);
  cfg.workers = 4;
  const auto parallel = scan_trace(cfg);
  CHECK(csv_of(serial) == csv_of(parallel));
  CHECK(csv_of(scan_trace(cfg)) == csv_of(parallel));
  for (const auto& s : serial) {
    CHECK(s.det_residual <= 1e-9);
    CHECK(s.ln_E == std::log(s.E));
    CHECK_FALSE(s.failed);
  }
}

TEST_CASE("interval detection for the pendulum") {
  RunConfig cfg = small_config();
  const auto samples = scan_trace(cfg);
  const auto iv = find_intervals(samples, cfg);
  int open = 0;
  for (const auto& i : iv) {
    CHECK(i.E_lo <= i.E_hi);
    if (i.collapsed) continue;
    ++open;
    CHECK(std::abs(i.E_lo - 2.0) <= 1e-4);
    CHECK(std::abs(i.E_hi - 4.0) <= 1e-4);
  }
  CHECK(open == 1);

  cfg.points = 120;
  const auto finer = find_intervals(scan_trace(cfg), cfg);
  for (const auto& i : finer)
    if (!i.collapsed) {
      CHECK(std::abs(i.E_lo - 2.0) <= 1e-4);
      CHECK(std::abs(i.E_hi - 4.0) <= 1e-4);
    }

  auto shuffled = samples;
  std::swap(shuffled[3], shuffled[4]);
  CHECK_THROWS_AS(find_intervals(shuffled, cfg), InputError);
}

TEST_CASE("CSV round trip") {
  RunConfig cfg = small_config();
  cfg.points = 12;
  auto samples = scan_trace(cfg);
  samples[5].failed = true;
  const std::string text = csv_of(samples);
  CHECK(text.rfind("E,ln_E,trace,det_residual,class\n", 0) == 0);
  std::istringstream in(text);
  const auto back = read_samples_csv(in);
  REQUIRE(back.size() == samples.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].E == samples[i].E);
    CHECK(back[i].ln_E == samples[i].ln_E);
    CHECK(back[i].trace == samples[i].trace);
    CHECK(back[i].det_residual == samples[i].det_residual);
    CHECK(back[i].failed == samples[i].failed);
    if (!back[i].failed) CHECK(back[i].kind == samples[i].kind);
  }
  CHECK(csv_of(back) == text);

  std::istringstream junk("E,ln_E,trace,det_residual,class\n1,2,x,4,elliptic\n");
  CHECK_THROWS_AS(read_samples_csv(junk), InputError);
}

TEST_CASE("JSON and SVG documents") {
  RunConfig cfg = small_config();
  const auto samples = scan_trace(cfg);
  const auto iv = find_intervals(samples, cfg);
  const auto doc = intervals_json(iv, cfg);
  REQUIRE(doc.contains("intervals"));
  REQUIRE(doc.contains("meta"));
  CHECK(doc["intervals"].is_array());
  CHECK(doc["meta"].is_object());
  for (const auto& i : doc["intervals"]) {
    CHECK(i.size() == 4);
    CHECK(i["e_lo"].is_number());
    CHECK(i["e_hi"].is_number());
    CHECK(i["sign"].is_number_integer());
    CHECK((i["sign"] == 1 || i["sign"] == -1));
    CHECK(i["collapsed"].is_boolean());
  }
  const auto again = nlohmann::json::parse(doc.dump());
  CHECK(again == doc);

  std::ostringstream svg;
  write_trace_svg(svg, samples);
  const std::string s = svg.str();
  std::size_t guides = 0;
  for (auto pos = s.find("class=\"guide\""); pos != std::string::npos;
       pos = s.find("class=\"guide\"", pos + 1))
    ++guides;
  CHECK(guides == 2);
  CHECK(s.find("<polyline") != std::string::npos);
}

TEST_CASE("emit") {
  RunConfig cfg = small_config();
  cfg.points = 8;
  const auto samples = scan_trace(cfg);
  const auto dir = std::filesystem::temp_directory_path() / "syncstab_emit_test";
  std::filesystem::create_directories(dir);
  const EmitPaths paths{(dir / "s.csv").string(), (dir / "i.json").string(), (dir / "t.svg").string()};
  emit(samples, {}, cfg, paths);
  for (const auto& p : {paths.csv, paths.json, paths.svg}) CHECK(std::filesystem::file_size(p) > 0);
  std::ifstream j(paths.json);
  CHECK(nlohmann::json::parse(j)["intervals"].empty());
  std::filesystem::remove_all(dir);

  EmitPaths unwritable;
  unwritable.csv = "/nonexistent-dir/for/sure/out.csv";
  CHECK_THROWS_AS(emit(samples, {}, cfg, unwritable), InputError);
}
