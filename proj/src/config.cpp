#include "ptkho/config.hpp"

#include <cmath>
#include <numbers>
#include <set>

#include "json.hpp"
#include "ptkho/error.hpp"

namespace ptkho {
namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> keys = {"K", "lambda", "eta", "hbar_eff", "grid_size", "total_kicks"};
  return keys;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {"preset",      "K",           "lambda",         "eta",
                                             "hbar_eff",    "substeps",    "grid_size",      "total_kicks",
                                             "snapshot_times", "renormalize", "edge_guard", "output_dir",
                                             "emit_snapshots"};
  return keys;
}

ExperimentConfig make(double lambda, double eta, std::size_t grid, int kicks, int substeps,
                      double edge_guard = 1e-8, std::vector<int> snaps = {}) {
  ExperimentConfig c;
  c.physics.kick_strength = 5.0;
  c.physics.lambda = lambda;
  c.physics.eta = eta;
  c.physics.hbar_eff = 0.1;
  c.physics.substeps = substeps;
  c.grid_size = grid;
  c.total_kicks = kicks;
  c.snapshot_times = std::move(snaps);
  c.emit_snapshots = !c.snapshot_times.empty();
  c.edge_guard = edge_guard;
  return c;
}

template <typename T>
T get(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

RunConfig ExperimentConfig::run_config() const {
  RunConfig rc;
  rc.params = physics;
  rc.total_kicks = total_kicks;
  rc.renormalize = renormalize;
  rc.snapshot_times = snapshot_times;
  rc.edge_guard = edge_guard;
  return rc;
}

void ExperimentConfig::validate() const {
  if (grid_size < 8 || grid_size % 2 != 0) {
    throw ValidationError("grid_size must be even and at least 8, got " + std::to_string(grid_size));
  }
  if (grid_size > (std::size_t{1} << 26)) throw ValidationError("grid_size too large");
  run_config().validate();
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = [] {
    const double non_resonant = kTwoPi / std::exp(2.0);
    const double resonant = kTwoPi;
    // The wrapped theta^2 cusp leaves algebraic momentum tails at the grid
    // edge, so the long and resonant runs carry a looser guard. Substeps
    // follow the splitting error: non-resonant runs need p * dt below about
    // 1.5 rad at the largest momentum reached, resonant runs need the
    // potential phase eta^2 pi^2 dt / (2 hbar) below about 2 rad. At
    // lambda = 0.5 the packet spreads ballistically and needs four times
    // more. Every grid and substep count was checked against a doubled one.
    return std::vector<Preset>{
        {"fig1_lambda0", "non-resonant, Hermitian: sub-diffusive width",
         make(0.0, non_resonant, 1 << 13, 500, 400, 1e-5)},
        {"fig1_lambda001", "non-resonant, lambda = 0.01", make(0.01, non_resonant, 1 << 15, 200, 400)},
        {"fig1_lambda05", "non-resonant, lambda = 0.5: directed current",
         make(0.5, non_resonant, 1 << 17, 200, 3200, 1e-7)},
        {"fig1_lambda1", "non-resonant, lambda = 1: directed current", make(1.0, non_resonant, 1 << 17, 200, 800)},
        {"fig1_lambda3", "non-resonant, lambda = 3: directed current, Gaussian packet at t = 101",
         make(3.0, non_resonant, 1 << 15, 200, 800, 1e-8, {101})},
        {"fig3_lambda0", "resonant, Hermitian: double-exponential saturation",
         make(0.0, resonant, 1 << 14, 8000, 1000, 1e-4)},
        {"fig3_lambda001", "resonant, lambda = 0.01", make(0.01, resonant, 1 << 12, 500, 1000, 1e-4)},
        {"fig3_lambda05", "resonant, lambda = 0.5: damped cosine, exponential envelope",
         make(0.5, resonant, 1 << 12, 500, 1000, 1e-4)},
        {"fig3_lambda1", "resonant, lambda = 1: damped cosine, exponential times power envelope",
         make(1.0, resonant, 1 << 12, 600, 1000, 1e-4)},
    };
  }();
  return list;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("config must be a JSON object");

  std::string unknown;
  for (const auto& item : doc.items()) {
    if (!known_keys().contains(item.key())) unknown += (unknown.empty() ? "" : ", ") + item.key();
  }
  if (!unknown.empty()) throw ValidationError("unknown config keys: " + unknown);

  ExperimentConfig c;
  if (doc.contains("preset")) {
    c = find_preset(get<std::string>(doc, "preset")).config;
  } else {
    std::string missing;
    for (const auto& key : required_keys()) {
      if (!doc.contains(key)) missing += (missing.empty() ? "" : ", ") + key;
    }
    if (!missing.empty()) throw ValidationError("missing required config keys: " + missing);
    c.physics.substeps = 100;
  }

  if (doc.contains("K")) c.physics.kick_strength = get<double>(doc, "K");
  if (doc.contains("lambda")) c.physics.lambda = get<double>(doc, "lambda");
  if (doc.contains("eta")) c.physics.eta = get<double>(doc, "eta");
  if (doc.contains("hbar_eff")) c.physics.hbar_eff = get<double>(doc, "hbar_eff");
  if (doc.contains("substeps")) c.physics.substeps = get<int>(doc, "substeps");
  if (doc.contains("grid_size")) c.grid_size = get<std::size_t>(doc, "grid_size");
  if (doc.contains("total_kicks")) c.total_kicks = get<int>(doc, "total_kicks");
  if (doc.contains("snapshot_times")) c.snapshot_times = get<std::vector<int>>(doc, "snapshot_times");
  if (doc.contains("renormalize")) c.renormalize = get<bool>(doc, "renormalize");
  if (doc.contains("edge_guard")) c.edge_guard = get<double>(doc, "edge_guard");
  if (doc.contains("output_dir")) c.output_dir = get<std::string>(doc, "output_dir");
  if (doc.contains("emit_snapshots")) c.emit_snapshots = get<bool>(doc, "emit_snapshots");
  c.validate();
  return c;
}

std::string render_config(const ExperimentConfig& c) {
  json doc = {
      {"K", c.physics.kick_strength},
      {"lambda", c.physics.lambda},
      {"eta", c.physics.eta},
      {"hbar_eff", c.physics.hbar_eff},
      {"substeps", c.physics.substeps},
      {"grid_size", c.grid_size},
      {"total_kicks", c.total_kicks},
      {"snapshot_times", c.snapshot_times},
      {"renormalize", c.renormalize},
      {"edge_guard", c.edge_guard},
      {"output_dir", c.output_dir},
      {"emit_snapshots", c.emit_snapshots},
  };
  return doc.dump(2) + "\n";
}

}  // namespace ptkho
