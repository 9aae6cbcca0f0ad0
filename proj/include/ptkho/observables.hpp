#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ptkho/grid.hpp"
#include "ptkho/params.hpp"

namespace ptkho {

// One row of the per-kick time series. All expectations use rho = |psi><psi| / N.
struct ObservableRecord {
  int t = 0;
  double log_norm_growth = 0.0;
  double p_mean = 0.0;
  double e_kin = 0.0;
  double e_pot = 0.0;
  double e_tot = 0.0;
  double width = 0.0;  // <p^2> - <p>^2

  bool operator==(const ObservableRecord&) const = default;
};

struct DensitySnapshot {
  int t = 0;
  std::vector<std::pair<double, double>> momentum_density;    // (p_m, |psi_m|^2 / N)
  std::vector<std::pair<double, double>> coordinate_density;  // (theta_j, |psi(theta_j)|^2 / N_theta)
};

ObservableRecord measure(const WaveFunction& state, const FloquetParams& params,
                         const LatticeGrid& grid, int t);

// Same as above with psi(theta_j) already available.
ObservableRecord measure(const WaveFunction& state, std::span<const Complex> coordinate_values,
                         const FloquetParams& params, const LatticeGrid& grid, int t);

DensitySnapshot snapshot(const WaveFunction& state, const LatticeGrid& grid, int t);

}  // namespace ptkho
