#pragma once

#include <functional>

#include "ptkho/fft.hpp"
#include "ptkho/grid.hpp"
#include "ptkho/observables.hpp"
#include "ptkho/params.hpp"

namespace ptkho {

// |phi_0>: all weight on m = 0, zero accumulated norm growth.
WaveFunction initial_state(const LatticeGrid& grid);

// Probability weight (unnormalized) in the outermost 10% of momentum
// indices, D/20 on each end of the lattice.
double edge_weight(const WaveFunction& state, const LatticeGrid& grid);

/**
 * Precomputed one-period propagator U = U_omega U_K for a fixed grid and
 * parameter set.
 *
 * The state is held in FFT-native order inside an aligned buffer while the
 * operators are applied; every diagonal factor is tabulated once. Not safe
 * for concurrent use; create one propagator per run.
 */
class FloquetPropagator {
 public:
  FloquetPropagator(const LatticeGrid& grid, const FloquetParams& params);

  const LatticeGrid& grid() const noexcept { return grid_; }
  const FloquetParams& params() const noexcept { return params_; }

  // exp[-(i/hbar) K (cos theta + i lambda sin theta)], unnormalized.
  void kick(WaveFunction& state);
  // prod_{j=1..N} exp(-i p^2 dt / 4hbar) exp(-i eta^2 theta^2 dt / 2hbar) exp(-i p^2 dt / 4hbar)
  void harmonic(WaveFunction& state);
  // Kick, then harmonic evolution, then optional renormalization and the
  // momentum edge check.
  void step(WaveFunction& state, bool renormalize, double edge_guard);

 private:
  void load(const WaveFunction& state);
  void store(WaveFunction& state);
  void kick_in_buffer();
  void harmonic_in_buffer();
  double buffer_norm_squared();
  [[noreturn]] void throw_overflow() const;

  LatticeGrid grid_;
  FloquetParams params_;
  SpectralTransform transform_;
  ComplexVector kick_factor_;       // coordinate space, native order, includes 1/D
  ComplexVector potential_factor_;  // coordinate space, native order, includes 1/D
  ComplexVector kinetic_half_;      // momentum space, native order
  ComplexVector kinetic_full_;
};

WaveFunction kick_apply(WaveFunction state, const FloquetParams& params, const LatticeGrid& grid);
WaveFunction harmonic_apply(WaveFunction state, const FloquetParams& params, const LatticeGrid& grid);
WaveFunction floquet_step(WaveFunction state, const RunConfig& config, const LatticeGrid& grid);

// Consumer of a run's output. Unset callbacks are skipped.
struct RunObserver {
  std::function<void(const ObservableRecord&)> on_record;
  std::function<void(const DensitySnapshot&)> on_snapshot;
  std::function<void(int, const WaveFunction&)> on_state;
};

// Evolves initial_state for config.total_kicks periods, reporting after
// every kick (t = 0 included). PhysicsError from a step is rethrown with
// the failing kick index attached.
WaveFunction run(const RunConfig& config, const LatticeGrid& grid, const RunObserver& observer);

}  // namespace ptkho
