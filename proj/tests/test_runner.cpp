#include "pinncert/runner.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pinncert;

namespace {

RunConfig tiny_config(const std::string& out_dir) {
  RunConfig cfg;
  cfg.hidden = {8, 8};
  cfg.train.max_iterations = 40;
  cfg.collocation_n = 3;
  cfg.metric_factor = 4;
  cfg.seeds = {0, 1};
  cfg.out_dir = out_dir;
  return cfg;
}

}  // namespace

TEST_CASE("run: aggregates, determinism and caching") {
  namespace fs = std::filesystem;
  const std::string dir_a = "runner_test_out/a";
  const std::string dir_b = "runner_test_out/b";
  fs::remove_all("runner_test_out");

  const RunReport a = run(tiny_config(dir_a));
  REQUIRE(a.seeds.size() == 2);
  CHECK(a.seeds[0].seed == 0);
  CHECK(a.seeds[1].seed == 1);
  CHECK_FALSE(a.seeds[0].from_cache);
  CHECK(a.l2_error.mean > 0.0);
  CHECK(a.l2_error.min <= a.l2_error.mean);
  CHECK(a.l2_error.max >= a.l2_error.mean);
  CHECK(a.bound_value.min > 0.0);
  CHECK(fs::exists(dir_a + "/seed_0.json"));
  CHECK(fs::exists(dir_a + "/seed_1.json"));

  // identical config into a fresh directory: identical report minus timing
  const RunReport b = run(tiny_config(dir_b));
  Json ja = to_json(a), jb = to_json(b);
  strip_timing(ja);
  strip_timing(jb);
  CHECK(ja == jb);

  // rerun over the same directory: seeds come from cache with the same values
  const RunReport c = run(tiny_config(dir_a));
  CHECK(c.seeds[0].from_cache);
  CHECK(c.seeds[1].from_cache);
  CHECK(c.seeds[0].l2_error == a.seeds[0].l2_error);
  CHECK(c.seeds[0].bound.bound_value == a.seeds[0].bound.bound_value);
  CHECK(c.seeds[0].record.report.total_sq() == a.seeds[0].record.report.total_sq());

  // a changed config invalidates the cache
  RunConfig changed = tiny_config(dir_a);
  changed.train.max_iterations = 41;
  const RunReport d = run(changed);
  CHECK_FALSE(d.seeds[0].from_cache);
  fs::remove_all("runner_test_out");
}

TEST_CASE("run: bound exceeds the measured h1 quantity on trained nets") {
  const RunReport rep = run(tiny_config(""));
  for (const SeedResult& s : rep.seeds) {
    CHECK(s.bound.bound_value >= s.h1.sum);
    CHECK(s.h1.sum >= s.h1.l2_part);
    CHECK(s.l2_error == std::sqrt(s.h1.l2_part));
  }
}

TEST_CASE("run: lemma mode produces finite or infinite but never NaN bounds") {
  RunConfig cfg = tiny_config("");
  cfg.bound_mode = "lemma";
  const RunReport rep = run(cfg);
  for (const SeedResult& s : rep.seeds) {
    CHECK_FALSE(std::isnan(s.bound.bound_value));
    CHECK(s.bound.bound_value >= s.h1.sum);
    CHECK(s.bound.mode == "lemma-based");
  }
}

TEST_CASE("sweep: csv schema and ladder shape") {
  SweepPreset preset;
  preset.name = "test";
  preset.n_values = {2, 3};
  preset.iteration_caps = {30, 30};
  preset.seeds = {0};

  RunConfig base = tiny_config("");
  std::ostringstream csv;
  const std::vector<RunReport> reports = sweep(base, preset, csv);
  REQUIRE(reports.size() == 2);

  std::istringstream is(csv.str());
  std::string header;
  std::getline(is, header);
  CHECK(header == kSweepCsvHeader);
  std::vector<std::string> rows;
  for (std::string line; std::getline(is, line);) rows.push_back(line);
  REQUIRE(rows.size() == 6);  // 2 settings x mean/min/max
  // first column is the total point count of the setting
  const CollocationSets s2 = build_sets(BoxDomain::unit_square(0.5), CollocationCounts::regular(2, 2));
  const CollocationSets s3 = build_sets(BoxDomain::unit_square(0.5), CollocationCounts::regular(2, 3));
  CHECK(std::to_string(s2.total()) == rows[0].substr(0, rows[0].find(',')));
  CHECK(std::to_string(s3.total()) == rows[3].substr(0, rows[3].find(',')));
}

TEST_CASE("presets are well formed") {
  for (const char* name : {"fig5-small", "fig5-accept", "fig5-full"}) {
    const SweepPreset p = sweep_preset(name);
    CHECK(p.n_values.size() == p.iteration_caps.size());
    CHECK_FALSE(p.seeds.empty());
    for (size_t i = 1; i < p.n_values.size(); ++i) CHECK(p.n_values[i] > p.n_values[i - 1]);
  }
  const SweepPreset small = sweep_preset("fig5-small");
  // smoke preset: every setting at most 2000 points and 2000 iterations
  const BoxDomain box = BoxDomain::unit_square(0.5);
  for (size_t i = 0; i < small.n_values.size(); ++i) {
    CHECK(build_sets(box, CollocationCounts::regular(2, small.n_values[i])).total() <= 2000);
    CHECK(small.iteration_caps[i] <= 2000);
  }
  CHECK(small.seeds.size() == 3);
  const SweepPreset accept = sweep_preset("fig5-accept");
  CHECK(accept.n_values.front() == 4);
  CHECK(accept.n_values.back() == 25);
  CHECK(accept.seeds.size() == 10);
  CHECK_THROWS_AS(sweep_preset("no-such"), ConfigError);
}

TEST_CASE("run report json schema") {
  const RunReport rep = run(tiny_config(""));
  const Json j = to_json(rep);
  CHECK(j.at("schema") == "pinncert-run-v1");
  REQUIRE(j.contains("aggregates"));
  for (const char* key : {"l2_error", "h1_quantity", "h1_l2_part", "bound_value",
                          "train_error_total", "train_seconds", "train_error_parts"})
    CHECK(j.at("aggregates").contains(key));
  CHECK(j.at("seeds").size() == 2);
  CHECK(j.at("config").at("seeds").size() == 2);
}
