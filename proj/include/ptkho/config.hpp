#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ptkho/params.hpp"

namespace ptkho {

struct ExperimentConfig {
  FloquetParams physics;
  std::size_t grid_size = 0;
  int total_kicks = 0;
  std::vector<int> snapshot_times;
  bool renormalize = true;
  double edge_guard = 1e-8;
  std::string output_dir = ".";
  bool emit_snapshots = false;

  RunConfig run_config() const;
  void validate() const;
  bool operator==(const ExperimentConfig&) const = default;
};

struct Preset {
  std::string name;
  std::string description;
  ExperimentConfig config;
};

// Named parameter sets: K = 5, hbar_eff = 0.1, eta in {2 pi / e^2, 2 pi},
// lambda in {0, 0.01, 0.5, 1, 3}.
const std::vector<Preset>& presets();
const Preset& find_preset(std::string_view name);

/**
 * Parses a JSON configuration document.
 *
 * Keys: preset, K, lambda, eta, hbar_eff, substeps, grid_size, total_kicks,
 * snapshot_times, renormalize, edge_guard, output_dir, emit_snapshots.
 * Without "preset" the physics keys and grid_size/total_kicks are
 * required; with it they override the preset. Unknown keys are rejected.
 */
ExperimentConfig parse_config(std::string_view text);

// Complete JSON document; parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

}  // namespace ptkho
