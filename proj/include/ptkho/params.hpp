#pragma once

#include <vector>

namespace ptkho {

// Dimensionless parameters of the kicked oscillator
//   H = p^2/2 + eta^2 theta^2/2 + K (cos theta + i lambda sin theta) sum_n delta(t - n).
struct FloquetParams {
  double kick_strength = 5.0;  // K
  double lambda = 0.0;         // non-Hermitian kick strength
  double eta = 0.0;            // 2 pi * (oscillator / kick frequency)
  double hbar_eff = 0.1;
  int substeps = 100;          // Strang substeps inside one harmonic period

  void validate() const;
  bool operator==(const FloquetParams&) const = default;
};

struct RunConfig {
  FloquetParams params;
  int total_kicks = 0;
  bool renormalize = true;
  std::vector<int> snapshot_times;
  // Maximum probability tolerated in the outer 10% of momentum indices.
  double edge_guard = 1e-8;

  void validate() const;
  bool operator==(const RunConfig&) const = default;
};

}  // namespace ptkho
