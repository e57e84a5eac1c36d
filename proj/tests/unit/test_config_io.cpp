#include <doctest.h>

#include "quditsim/config.hpp"
#include "quditsim/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace quditsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string parse_error(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("every preset validates and survives a JSON round trip") {
  const auto presets = list_presets();
  REQUIRE(presets.size() == 5);
  for (const PresetInfo& p : presets) {
    CAPTURE(p.name);
    const ExperimentConfig cfg = preset_config(p.name);
    CHECK_NOTHROW(validate(cfg));
    const json j = to_json(cfg);
    const ExperimentConfig back = parse_config(j);
    CHECK(to_json(back) == j);
  }
  CHECK_THROWS_AS(preset_config("nope"), ConfigError);
}

TEST_CASE("preset contents") {
  const ExperimentConfig ab = preset_config("fig3ab");
  CHECK(ab.kind == ExperimentKind::Dqs);
  CHECK(ab.hardware.S1 == 1.5);
  CHECK(ab.hardware.s2 == 0.5);
  CHECK(ab.hardware.B == doctest::Approx(0.4));
  CHECK(ab.rabi.G == doctest::Approx(0.25));
  CHECK(ab.rabi.d == 4);
  CHECK(make_dqs_config(ab).steps_at(5.0) == 4);
  CHECK(make_dqs_config(ab).steps_at(5.5) == 6);
  CHECK(ab.t2_us == std::vector<double>{50.0, 10.0});

  const ExperimentConfig ef = preset_config("fig3ef");
  CHECK(ef.hardware.S1 == 2.5);
  CHECK(ef.hardware.s2 == 1.0);
  CHECK(ef.rabi.d == 6);
  CHECK(ef.steps == 8);

  const ExperimentConfig v = preset_config("fig2");
  CHECK(v.kind == ExperimentKind::Vqe);
  CHECK(v.g_grid.size() == 11);
  CHECK(v.g_grid.back() == doctest::Approx(1.0));

  const ExperimentConfig gh = preset_config("fig3gh");
  CHECK(gh.kind == ExperimentKind::Truncation);
  CHECK(gh.truncation.d_values == std::vector<int>{4, 6});
  CHECK(gh.truncation.d_ref == 30);
}

TEST_CASE("config errors carry the JSON path") {
  CHECK(parse_error(json{{"kind", "dqs"}, {"hardware", {{"S1", "big"}}}}) == "$.hardware.S1: expected a number");
  CHECK(parse_error(json{{"kind", "dqs"}, {"bogus", 1}}) == "$.bogus: unknown key");
  CHECK(parse_error(json{{"kind", "dqs"}, {"pulse", {{"shape", "square"}}}}).rfind("$.pulse.shape", 0) == 0);
  CHECK(parse_error(json{{"kind", "vqe"}, {"vqe", {{"ansatz", "other"}}}}).rfind("$.vqe.ansatz", 0) == 0);
  CHECK(parse_error(json{{"kind", "dqs"}, {"dqs", {{"steps", 1.5}}}}) == "$.dqs.steps: expected an integer");
  CHECK(parse_error(json{{"hardware", {}}}).find("required") != std::string::npos);
  CHECK(parse_error(json{{"kind", "launch"}}).find("launch") != std::string::npos);
  CHECK(parse_error(json::array()) == "$: expected an object");
}

TEST_CASE("documents override the preset they name") {
  const ExperimentConfig cfg = parse_config(json{{"preset", "fig3ab"}, {"rabi", {{"G", 0.5}}}, {"seed", 9}});
  CHECK(cfg.rabi.G == 0.5);
  CHECK(cfg.seed == 9);
  CHECK(cfg.hardware.B == doctest::Approx(0.4));
  CHECK(cfg.steps == 4);
}

TEST_CASE("semantic validation") {
  ExperimentConfig cfg = preset_config("fig3ab");
  cfg.rabi.d = 5;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = preset_config("fig3ab");
  cfg.t2_us = {};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = preset_config("fig3gh");
  cfg.truncation.d_values = {40};
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("ranges and lists") {
  const auto r = parse_range("0:1:0.1");
  REQUIRE(r.size() == 11);
  CHECK(r[3] == doctest::Approx(0.3));
  CHECK(r.back() == doctest::Approx(1.0));
  CHECK(parse_range("0.5:0.5:1") == std::vector<double>{0.5});
  CHECK_THROWS_AS(parse_range("1:0:0.1"), ConfigError);
  CHECK_THROWS_AS(parse_range("0:1"), ConfigError);
  CHECK_THROWS_AS(parse_range("0:1:-1"), ConfigError);
  const auto l = parse_list("50, 10,inf");
  REQUIRE(l.size() == 3);
  CHECK(l[1] == 10.0);
  CHECK(std::isinf(l[2]));
  CHECK_THROWS_AS(parse_list("1,x"), ConfigError);
  CHECK(parse_kind("gates-check") == ExperimentKind::GatesCheck);
  CHECK(to_string(ExperimentKind::Truncation) == "truncation");
}

TEST_CASE("FNV-1a reference vectors") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("number formatting and CSV") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(std::nan("")) == "nan");
  CsvTable t({"a", "b"});
  t.row(std::vector<double>{1.0, 2.5}).row(std::vector<std::string>{"x", "y"});
  CHECK(t.str() == "a,b\n1,2.5\nx,y\n");
  CHECK_THROWS(t.row(std::vector<double>{1.0}));
}

TEST_CASE("atomic writes create directories and replace content") {
  const fs::path dir = fs::temp_directory_path() / "quditsim_io_test";
  fs::remove_all(dir);
  const fs::path f = dir / "nested" / "out.txt";
  write_file_atomic(f, "first\n");
  CHECK(slurp(f) == "first\n");
  write_file_atomic(f, "second\n");
  CHECK(slurp(f) == "second\n");
  int files = 0;
  for (const auto& e : fs::directory_iterator(f.parent_path())) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);
  fs::remove_all(dir);
}
