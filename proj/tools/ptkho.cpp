// Command-line front end: evolve, sweep, analyze and preset inspection.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ptkho/commands.hpp"
#include "ptkho/config.hpp"
#include "ptkho/error.hpp"
#include "ptkho/io.hpp"

namespace {

using namespace ptkho;

enum ExitCode { kOk = 0, kValidation = 1, kPhysics = 2, kFit = 3 };

struct ConfigFlags {
  std::string config_path;
  std::string preset;
  std::string out;
  std::optional<int> substeps;
  std::optional<std::size_t> grid;
  std::optional<int> kicks;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON configuration file");
  cmd->add_option("--preset", f.preset, "named parameter set (see `preset list`)");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--substeps", f.substeps, "split-step substeps per period");
  cmd->add_option("--grid", f.grid, "grid size D");
  cmd->add_option("--kicks", f.kicks, "number of kicks T");
}

ExperimentConfig resolve(const ConfigFlags& f) {
  ExperimentConfig c;
  if (!f.config_path.empty()) {
    if (!f.preset.empty()) throw ValidationError("give either --config or --preset, not both");
    c = parse_config(read_text(f.config_path));
  } else if (!f.preset.empty()) {
    c = find_preset(f.preset).config;
  } else {
    throw ValidationError("a --config or --preset is required");
  }
  if (f.substeps) c.physics.substeps = *f.substeps;
  if (f.grid) c.grid_size = *f.grid;
  if (f.kicks) c.total_kicks = *f.kicks;
  if (!f.out.empty()) c.output_dir = f.out;
  c.validate();
  return c;
}

std::vector<double> parse_lambda_list(const std::string& text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (item.empty()) throw ValidationError("empty entry in --lambda list '" + text + "'");
    values.push_back(parse_double(item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

int run_evolve(const ConfigFlags& flags) {
  const auto config = resolve(flags);
  const auto out = cmd_evolve(config);
  std::cout << out.time_series.string() << '\n';
  for (const auto& f : out.snapshot_files) std::cout << f.string() << '\n';
  return kOk;
}

int run_sweep(const ConfigFlags& flags, const std::string& lambdas) {
  const auto config = resolve(flags);
  const auto out = cmd_sweep(config, parse_lambda_list(lambdas));
  std::cout << read_text(out.summary);
  bool physics_failure = false;
  for (const auto& row : out.rows) {
    if (!row.ok) {
      std::cerr << "lambda=" << format_double(row.lambda) << ": " << row.error << '\n';
      physics_failure = true;
    }
  }
  return physics_failure ? kPhysics : kOk;
}

int run_analyze(const std::string& input, const std::vector<std::string>& fit_texts, const std::string& out) {
  std::vector<FitSpec> fits;
  for (const auto& t : fit_texts) fits.push_back(parse_fit_spec(t));
  const auto result = cmd_analyze(input, fits);
  if (out.empty()) {
    std::cout << result.report;
    std::cout << result.overlay;
  } else {
    std::filesystem::create_directories(out);
    write_text(std::filesystem::path(out) / "fit_report.json", result.report);
    write_text(std::filesystem::path(out) / "fit_overlay.csv", result.overlay);
    std::cout << result.report;
  }
  if (result.any_invalid) return kValidation;
  if (result.any_non_convergence) return kFit;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kicked harmonic oscillator with a complex kick: simulation and fitting"};
  app.require_subcommand(1);

  ConfigFlags evolve_flags;
  auto* evolve = app.add_subcommand("evolve", "run one configuration");
  add_config_flags(evolve, evolve_flags);

  ConfigFlags sweep_flags;
  std::string lambdas;
  auto* sweep = app.add_subcommand("sweep", "run one configuration per lambda and summarize");
  add_config_flags(sweep, sweep_flags);
  sweep->add_option("--lambda", lambdas, "comma-separated lambda values")->required();

  std::string input;
  std::vector<std::string> fit_texts;
  std::string analyze_out;
  auto* analyze = app.add_subcommand("analyze", "fit a time series or density snapshot");
  analyze->add_option("input", input, "timeseries.csv or snapshot file")->required();
  analyze->add_option("--fit", fit_texts, "kind[:column][:key=value]...")->required();
  analyze->add_option("--out", analyze_out, "write fit_report.json and fit_overlay.csv here");

  auto* preset = app.add_subcommand("preset", "inspect named parameter sets");
  preset->require_subcommand(1);
  auto* preset_list = preset->add_subcommand("list", "list presets");
  std::string preset_name;
  auto* preset_show = preset->add_subcommand("show", "print a preset as a config document");
  preset_show->add_option("name", preset_name)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    if (*evolve) return run_evolve(evolve_flags);
    if (*sweep) return run_sweep(sweep_flags, lambdas);
    if (*analyze) return run_analyze(input, fit_texts, analyze_out);
    if (*preset_list) {
      std::size_t width = 0;
      for (const auto& p : presets()) width = std::max(width, p.name.size());
      for (const auto& p : presets()) {
        std::cout << p.name << std::string(width - p.name.size() + 2, ' ') << p.description << '\n';
      }
      return kOk;
    }
    if (*preset_show) {
      std::cout << render_config(find_preset(preset_name).config);
      return kOk;
    }
  } catch (const PhysicsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kPhysics;
  } catch (const FitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}
