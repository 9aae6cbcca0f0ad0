#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "ptkho/commands.hpp"
#include "ptkho/error.hpp"
#include "ptkho/io.hpp"

using namespace ptkho;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ptkho_cmd_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small_run(const fs::path& dir) {
  auto c = find_preset("fig1_lambda3").config;
  c.grid_size = 4096;
  c.total_kicks = 12;
  c.snapshot_times = {10};
  c.physics.substeps = 100;
  c.output_dir = dir.string();
  return c;
}

}  // namespace

TEST_CASE("evolve writes records, config and snapshots") {
  const auto dir = scratch_dir("evolve");
  const auto out = cmd_evolve(small_run(dir));
  CHECK(out.records.size() == 13);
  CHECK(read_time_series(out.time_series) == out.records);
  CHECK(parse_config(read_text(dir / "config.json")) == small_run(dir));
  REQUIRE(out.snapshot_files.size() == 2);
  CHECK(read_density(dir / "snapshot_t10_p.csv").axis == "p");
  CHECK(read_density(dir / "snapshot_t10_theta.csv").axis == "theta");

  SUBCASE("zero kicks give one data row") {
    auto c = small_run(scratch_dir("evolve0"));
    c.total_kicks = 0;
    c.snapshot_times.clear();
    const auto zero = cmd_evolve(c);
    const auto text = read_text(zero.time_series);
    CHECK(text == std::string(kTimeSeriesHeader) + "\n0,0,0,0," + format_double(zero.records[0].e_pot) + "," +
                      format_double(zero.records[0].e_tot) + ",0\n");
  }
  SUBCASE("rerun is byte identical") {
    const auto again_dir = scratch_dir("evolve_again");
    auto c = small_run(again_dir);
    cmd_evolve(c);
    for (const char* name : {"timeseries.csv", "snapshot_t10_p.csv", "snapshot_t10_theta.csv"}) {
      CHECK(read_text(dir / name) == read_text(again_dir / name));
    }
  }
  SUBCASE("physics errors keep the partial output") {
    auto c = small_run(scratch_dir("evolve_edge"));
    c.grid_size = 256;
    c.snapshot_times.clear();
    CHECK_THROWS_AS(cmd_evolve(c), PhysicsError);
    CHECK(read_time_series(fs::path(c.output_dir) / "timeseries.csv").size() >= 1);
  }
}

TEST_CASE("fit spec grammar") {
  const auto f = parse_fit_spec("damped_cosine:p_mean:envelope=exp_power:sign=plus:from=10:to=400:gamma=0.02");
  CHECK(f.kind == "damped_cosine");
  CHECK(f.column == "p_mean");
  CHECK(f.envelope == Envelope::exponential_times_power);
  CHECK(f.sign == CosineSign::plus_cosine);
  CHECK(*f.from == 10.0);
  CHECK(*f.to == 400.0);
  CHECK(f.gamma == 0.02);
  CHECK(parse_fit_spec("gaussian").column.empty());
  CHECK(*parse_fit_spec("quadratic_energy:e_kin:G=6.2").growth_rate == 6.2);
  CHECK_THROWS_AS(parse_fit_spec("spline:p_mean"), ValidationError);
  CHECK_THROWS_AS(parse_fit_spec("linear"), ValidationError);
  CHECK_THROWS_AS(parse_fit_spec("linear:p_mean:window=3"), ValidationError);
  CHECK_THROWS_AS(parse_fit_spec("linear:p_mean:from"), ValidationError);
  CHECK_THROWS_AS(parse_fit_spec("damped_cosine:p_mean:sign=up"), ValidationError);
}

TEST_CASE("analyze reports every fit") {
  const auto dir = scratch_dir("analyze");
  const auto run = cmd_evolve(small_run(dir));
  const auto result = cmd_analyze(run.time_series, {parse_fit_spec("linear:p_mean"),
                                                    parse_fit_spec("quadratic_energy:e_kin"),
                                                    parse_fit_spec("power_law:width"),
                                                    parse_fit_spec("frequency:p_mean"),
                                                    parse_fit_spec("linear:nonsense")});
  const auto report = nlohmann::json::parse(result.report);
  REQUIRE(report["fits"].size() == 5);
  CHECK(report["fits"][0]["status"] == "ok");
  CHECK(report["fits"][0]["parameters"].contains("G"));
  CHECK(report["fits"][0].contains("r_squared"));
  CHECK(report["fits"][0]["window"]["points"] == 7);
  CHECK(report["fits"][1]["status"] == "ok");
  CHECK(report["fits"][3]["status"] == "invalid");  // too short for a periodogram
  CHECK(report["fits"][4]["status"] == "invalid");
  CHECK(result.any_invalid);
  CHECK(result.overlay.rfind(std::string(kTimeSeriesHeader) + ",fit[linear:p_mean]", 0) == 0);

  const auto snap = cmd_analyze(dir / "snapshot_t10_p.csv", {parse_fit_spec("gaussian")});
  const auto snap_report = nlohmann::json::parse(snap.report);
  CHECK(snap_report["fits"][0]["status"] == "ok");
  CHECK(snap_report["fits"][0]["axis"] == "p");

  write_text(dir / "junk.csv", "a,b\n1,2\n");
  CHECK_THROWS_AS(cmd_analyze(dir / "junk.csv", {parse_fit_spec("linear:p_mean")}), ValidationError);
}

TEST_CASE("sweep summarizes each lambda and isolates failures") {
  const auto dir = scratch_dir("sweep");
  auto base = small_run(dir);
  base.snapshot_times.clear();
  base.total_kicks = 10;
  base.grid_size = 8192;
  // lambda = 40 overflows the kick and must not stop the others.
  const auto out = cmd_sweep(base, {0.0, 3.0, 40.0}, 2);
  REQUIRE(out.rows.size() == 3);
  CHECK(out.rows[0].ok);
  CHECK(std::abs(out.rows[0].growth_rate) < 1e-6);
  CHECK(out.rows[1].ok);
  CHECK(out.rows[1].growth_rate > 4.0);
  CHECK_FALSE(out.rows[2].ok);
  CHECK(out.rows[2].error.find("non-finite") != std::string::npos);
  const auto summary = read_text(out.summary);
  CHECK(summary.rfind("lambda,G,alpha,C,status\n", 0) == 0);
  CHECK(fs::exists(dir / "lambda_3" / "timeseries.csv"));

  // The summary is reproducible from the stored member files.
  const auto stored = read_time_series(dir / "lambda_3" / "timeseries.csv");
  const auto again = summarize_run(3.0, stored);
  CHECK(again.growth_rate == out.rows[1].growth_rate);
  CHECK(again.width_exponent == out.rows[1].width_exponent);
  CHECK(again.late_e_pot == out.rows[1].late_e_pot);
  CHECK_THROWS_AS(cmd_sweep(base, {}), ValidationError);
}
