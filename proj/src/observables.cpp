#include "ptkho/observables.hpp"

#include <cmath>

#include "ptkho/error.hpp"

namespace ptkho {
namespace {

void require_sizes(const WaveFunction& state, const LatticeGrid& grid) {
  if (state.amplitudes.size() != grid.size()) {
    throw ValidationError("state length does not match grid size");
  }
}

double checked_norm(double norm, const char* space) {
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError(std::string("cannot measure a state with zero or non-finite ") + space +
                          " norm");
  }
  return norm;
}

}  // namespace

ObservableRecord measure(const WaveFunction& state, std::span<const Complex> coordinate_values,
                         const FloquetParams& params, const LatticeGrid& grid, int t) {
  require_sizes(state, grid);
  if (coordinate_values.size() != grid.size()) {
    throw ValidationError("coordinate values length does not match grid size");
  }
  const auto p = grid.momenta();
  const std::size_t n = grid.size();

  // Index 0 (m = -D/2) is the Nyquist mode: on the grid it equals m = +D/2,
  // so its weight is split evenly between +-p and adds nothing to <p>.
  double norm = 0.0;
  double first = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double w = std::norm(state.amplitudes[k]);
    norm += w;
    if (k > 0) first += p[k] * w;
    second += p[k] * p[k] * w;
  }
  checked_norm(norm, "momentum");
  const double p_mean = first / norm;

  // Central moment in a second pass keeps the width accurate when |<p>| >> sqrt(M).
  double central = (p[0] * p[0] + p_mean * p_mean) * std::norm(state.amplitudes[0]);
  for (std::size_t k = 1; k < n; ++k) {
    const double d = p[k] - p_mean;
    central += d * d * std::norm(state.amplitudes[k]);
  }
  const double width = central / norm;

  const auto theta = grid.thetas();
  double norm_theta = 0.0;
  double theta_sq = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double w = std::norm(coordinate_values[j]);
    norm_theta += w;
    theta_sq += theta[j] * theta[j] * w;
  }
  checked_norm(norm_theta, "coordinate");

  ObservableRecord rec;
  rec.t = t;
  rec.log_norm_growth = state.log_norm_growth;
  rec.p_mean = p_mean;
  rec.width = width;
  rec.e_kin = 0.5 * second / norm;
  rec.e_pot = 0.5 * params.eta * params.eta * theta_sq / norm_theta;
  rec.e_tot = rec.e_kin + rec.e_pot;
  return rec;
}

ObservableRecord measure(const WaveFunction& state, const FloquetParams& params,
                         const LatticeGrid& grid, int t) {
  require_sizes(state, grid);
  const auto values = to_coordinate(state, grid);
  return measure(state, values, params, grid, t);
}

DensitySnapshot snapshot(const WaveFunction& state, const LatticeGrid& grid, int t) {
  require_sizes(state, grid);
  const std::size_t n = grid.size();
  const auto p = grid.momenta();
  const auto theta = grid.thetas();

  DensitySnapshot snap;
  snap.t = t;
  const double norm = checked_norm(state.norm_squared(), "momentum");
  snap.momentum_density.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    snap.momentum_density.emplace_back(p[k], std::norm(state.amplitudes[k]) / norm);
  }

  // Density per unit theta: integrates to one with weight d_theta.
  const auto values = to_coordinate(state, grid);
  double norm_theta = 0.0;
  for (const auto& v : values) norm_theta += std::norm(v);
  checked_norm(norm_theta, "coordinate");
  norm_theta *= grid.theta_spacing();
  snap.coordinate_density.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    snap.coordinate_density.emplace_back(theta[j], std::norm(values[j]) / norm_theta);
  }
  return snap;
}

}  // namespace ptkho
