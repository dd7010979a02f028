#include <doctest.h>

#include "drivesense/config.hpp"
#include "drivesense/pipeline.hpp"

using namespace drivesense;

TEST_CASE("key-value config: sections, comments, types") {
  const char* text =
      "# top comment\n"
      "name = \"demo run\"\n"
      "[grid]\n"
      "extent_m = 40.0   # trailing comment\n"
      "cells_per_side = 608\n"
      "[stages]\n"
      "ground_removal = true\n";
  const KeyValueConfig cfg = KeyValueConfig::parse(text);
  CHECK(cfg.get_string("name", "") == "demo run");
  CHECK(cfg.get_double("grid.extent_m", 0) == doctest::Approx(40.0));
  CHECK(cfg.get_int("grid.cells_per_side", 0) == 608);
  CHECK(cfg.get_bool("stages.ground_removal", false));
  CHECK(cfg.get_string("missing", "fallback") == "fallback");
  CHECK_THROWS_AS(cfg.require_string("missing"), ConfigError);
  CHECK_THROWS_AS(cfg.get_double("name", 0), ConfigError);

  CHECK_THROWS_AS(KeyValueConfig::parse("just a line\n"), ConfigError);
  CHECK_THROWS_AS(KeyValueConfig::parse("[unclosed\n"), ConfigError);
}

TEST_CASE("pipeline config: defaults and overrides") {
  const KeyValueConfig kv = KeyValueConfig::parse(
      "[tracker]\nconfirm_hits = 4\n[detector]\nkind = oracle\n"
      "[io]\nframes = frames.csv\n");
  const PipelineConfig cfg = pipeline_config_from(kv);
  CHECK(cfg.tracker.confirm_hits == 4);
  CHECK(cfg.tracker.max_misses == 5);  // default preserved
  CHECK(cfg.detector_kind == DetectorKind::oracle);
  CHECK(cfg.frames_manifest == "frames.csv");

  CHECK_THROWS_AS(
      pipeline_config_from(KeyValueConfig::parse("[detector]\nkind = banana\n")),
      ConfigError);
}
