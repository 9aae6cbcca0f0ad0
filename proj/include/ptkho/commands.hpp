#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ptkho/analysis.hpp"
#include "ptkho/config.hpp"
#include "ptkho/observables.hpp"

namespace ptkho {

struct EvolveOutput {
  std::filesystem::path time_series;
  std::vector<std::filesystem::path> snapshot_files;
  std::vector<ObservableRecord> records;
};

// Runs one configuration and writes timeseries.csv, config.json and, when
// requested, snapshot_t<T>_p.csv / snapshot_t<T>_theta.csv into output_dir.
EvolveOutput cmd_evolve(const ExperimentConfig& config);

struct SweepRow {
  double lambda = 0.0;
  bool ok = false;
  double growth_rate = 0.0;     // G: slope of p_mean over the late half
  double width_exponent = 0.0;  // alpha: power law of width over the late half
  double late_e_pot = 0.0;      // C: mean e_pot over the late half
  std::string error;
};

SweepRow summarize_run(double lambda, const std::vector<ObservableRecord>& records);

struct SweepOutput {
  std::filesystem::path summary;
  std::vector<SweepRow> rows;  // in the order of the requested lambdas
};

// One run per lambda under <output_dir>/lambda_<value>/, then summary.csv.
// Member failures are recorded per row and do not stop the others.
SweepOutput cmd_sweep(const ExperimentConfig& base, const std::vector<double>& lambdas,
                      unsigned max_parallel = 0);

/**
 * Requested fit, written as kind[:column][:key=value]...
 *
 *   kind     linear | power_law | quadratic_energy | drift | frequency |
 *            damped_cosine | double_exponential | gaussian
 *   column   time-series column (not used by gaussian)
 *   keys     from=<t>, to=<t>, envelope=exp|exp_power, sign=minus|plus,
 *            gamma=<value>, free_gamma=true|false, G=<value>
 */
struct FitSpec {
  std::string text;
  std::string kind;
  std::string column;
  std::optional<double> from;
  std::optional<double> to;
  Envelope envelope = Envelope::pure_exponential;
  CosineSign sign = CosineSign::minus_cosine;
  double gamma = 0.01;
  bool free_gamma = false;
  std::optional<double> growth_rate;
};

FitSpec parse_fit_spec(std::string_view text);

struct AnalyzeOutput {
  std::string report;     // JSON document
  std::string overlay;    // CSV: t, data columns and fitted curves
  bool any_non_convergence = false;
  bool any_invalid = false;
};

// input is either a time series written by cmd_evolve or a density snapshot.
AnalyzeOutput cmd_analyze(const std::filesystem::path& input, const std::vector<FitSpec>& fits);

}  // namespace ptkho
