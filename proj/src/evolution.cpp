#include "ptkho/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ptkho/error.hpp"

namespace ptkho {
namespace {

void require_sizes(const WaveFunction& state, const LatticeGrid& grid) {
  if (state.amplitudes.size() != grid.size()) {
    throw ValidationError("state length " + std::to_string(state.amplitudes.size()) +
                          " does not match grid size " + std::to_string(grid.size()));
  }
}

Complex phase(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Plain product: std::complex operator*= takes a slow path to recover
// infinities, and overflow is detected separately.
void multiply(std::span<Complex> values, const std::vector<Complex>& factors) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = values[i].real(), b = values[i].imag();
    const double c = factors[i].real(), d = factors[i].imag();
    values[i] = {a * c - b * d, a * d + b * c};
  }
}

}  // namespace

WaveFunction initial_state(const LatticeGrid& grid) {
  WaveFunction state;
  state.amplitudes.assign(grid.size(), Complex{0.0, 0.0});
  state.amplitudes[grid.size() / 2] = 1.0;
  return state;
}

double edge_weight(const WaveFunction& state, const LatticeGrid& grid) {
  require_sizes(state, grid);
  const std::size_t n = grid.size();
  const std::size_t band = std::max<std::size_t>(1, n / 20);
  double sum = 0.0;
  for (std::size_t k = 0; k < band; ++k) {
    sum += std::norm(state.amplitudes[k]) + std::norm(state.amplitudes[n - 1 - k]);
  }
  return sum;
}

FloquetPropagator::FloquetPropagator(const LatticeGrid& grid, const FloquetParams& params)
    : grid_(grid), params_(params), transform_(grid.size()) {
  params_.validate();
  if (params_.hbar_eff != grid_.hbar_eff()) {
    throw ValidationError("hbar_eff of the parameters does not match the grid");
  }
  const std::size_t n = grid_.size();
  const std::size_t half = n / 2;
  const double hbar = params_.hbar_eff;
  const double dt = 1.0 / params_.substeps;
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto theta = grid_.thetas();

  kick_factor_.resize(n);
  potential_factor_.resize(n);
  kinetic_half_.resize(n);
  kinetic_full_.resize(n);
  for (std::size_t l = 0; l < n; ++l) {
    // Native coordinate sample l sits at theta = 2 pi l / D, wrapped to [-pi, pi).
    const double th = theta[(l + half) % n];
    const double growth = std::exp(params_.kick_strength * params_.lambda * std::sin(th) / hbar);
    kick_factor_[l] = phase(-params_.kick_strength * std::cos(th) / hbar) * (growth * inv_n);
    potential_factor_[l] = phase(-0.5 * params_.eta * params_.eta * th * th * dt / hbar) * inv_n;

    const double m = static_cast<double>(l < half ? static_cast<long>(l)
                                                  : static_cast<long>(l) - static_cast<long>(n));
    // p^2 / hbar = m^2 hbar
    kinetic_half_[l] = phase(-0.25 * m * m * hbar * dt);
    kinetic_full_[l] = phase(-0.5 * m * m * hbar * dt);
  }
}

void FloquetPropagator::load(const WaveFunction& state) {
  require_sizes(state, grid_);
  const std::size_t n = grid_.size();
  const std::size_t half = n / 2;
  auto buf = transform_.buffer();
  for (std::size_t k = 0; k < n; ++k) buf[(k + half) % n] = state.amplitudes[k];
}

void FloquetPropagator::store(WaveFunction& state) {
  const std::size_t n = grid_.size();
  const std::size_t half = n / 2;
  auto buf = transform_.buffer();
  for (std::size_t k = 0; k < n; ++k) state.amplitudes[k] = buf[(k + half) % n];
}

double FloquetPropagator::buffer_norm_squared() {
  double sum = 0.0;
  for (const auto& a : transform_.buffer()) sum += std::norm(a);
  return sum;
}

void FloquetPropagator::throw_overflow() const {
  std::ostringstream msg;
  msg << "non-finite amplitudes after the kick: K * lambda / hbar_eff = "
      << params_.kick_strength * params_.lambda / params_.hbar_eff << " (K=" << params_.kick_strength
      << ", lambda=" << params_.lambda << ", hbar_eff=" << params_.hbar_eff
      << ") exceeds double range";
  throw PhysicsError(PhysicsError::Kind::overflow, msg.str());
}

void FloquetPropagator::kick_in_buffer() {
  auto buf = transform_.buffer();
  transform_.to_coordinate();
  multiply(buf, kick_factor_);
  transform_.to_momentum();
}

void FloquetPropagator::harmonic_in_buffer() {
  auto buf = transform_.buffer();
  multiply(buf, kinetic_half_);
  // Adjacent half kinetic steps of consecutive substeps are merged.
  for (int s = 0; s < params_.substeps; ++s) {
    transform_.to_coordinate();
    multiply(buf, potential_factor_);
    transform_.to_momentum();
    const auto& kinetic = (s + 1 < params_.substeps) ? kinetic_full_ : kinetic_half_;
    multiply(buf, kinetic);
  }
}

void FloquetPropagator::kick(WaveFunction& state) {
  load(state);
  kick_in_buffer();
  if (!std::isfinite(buffer_norm_squared())) throw_overflow();
  store(state);
}

void FloquetPropagator::harmonic(WaveFunction& state) {
  load(state);
  harmonic_in_buffer();
  store(state);
}

void FloquetPropagator::step(WaveFunction& state, bool renormalize, double edge_guard) {
  load(state);
  kick_in_buffer();
  if (!std::isfinite(buffer_norm_squared())) throw_overflow();
  harmonic_in_buffer();
  store(state);

  const double norm_sq = state.norm_squared();
  if (!std::isfinite(norm_sq)) throw_overflow();
  if (!(norm_sq > 0.0)) {
    throw PhysicsError(PhysicsError::Kind::overflow, "state norm underflowed to zero");
  }
  if (renormalize) {
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& a : state.amplitudes) a *= inv;
    state.log_norm_growth += 0.5 * std::log(norm_sq);
  }
  const double edge = edge_weight(state, grid_) / (renormalize ? state.norm_squared() : norm_sq);
  if (edge > edge_guard) {
    std::ostringstream msg;
    msg << "momentum grid too small: probability " << edge
        << " in the outer 10% of momentum indices exceeds edge_guard " << edge_guard
        << " (grid size " << grid_.size() << ")";
    throw PhysicsError(PhysicsError::Kind::edge_guard, msg.str());
  }
}

WaveFunction kick_apply(WaveFunction state, const FloquetParams& params, const LatticeGrid& grid) {
  FloquetPropagator(grid, params).kick(state);
  return state;
}

WaveFunction harmonic_apply(WaveFunction state, const FloquetParams& params, const LatticeGrid& grid) {
  FloquetPropagator(grid, params).harmonic(state);
  return state;
}

WaveFunction floquet_step(WaveFunction state, const RunConfig& config, const LatticeGrid& grid) {
  config.validate();
  FloquetPropagator(grid, config.params).step(state, config.renormalize, config.edge_guard);
  return state;
}

WaveFunction run(const RunConfig& config, const LatticeGrid& grid, const RunObserver& observer) {
  config.validate();
  FloquetPropagator propagator(grid, config.params);
  WaveFunction state = initial_state(grid);

  auto is_snapshot = [&](int t) {
    return std::find(config.snapshot_times.begin(), config.snapshot_times.end(), t) !=
           config.snapshot_times.end();
  };
  auto report = [&](int t) {
    if (observer.on_state) observer.on_state(t, state);
    if (observer.on_record) observer.on_record(measure(state, config.params, grid, t));
    if (observer.on_snapshot && is_snapshot(t)) observer.on_snapshot(snapshot(state, grid, t));
  };

  report(0);
  for (int t = 1; t <= config.total_kicks; ++t) {
    try {
      propagator.step(state, config.renormalize, config.edge_guard);
    } catch (const PhysicsError& e) {
      throw e.at_kick(t);
    }
    report(t);
  }
  return state;
}

}  // namespace ptkho
