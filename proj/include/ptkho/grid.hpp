#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace ptkho {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/**
 * Momentum lattice p_m = m * hbar_eff, m in [-D/2, D/2), paired with the
 * coordinate samples theta_j = -pi + 2 pi j / D on the circle.
 *
 * Storage index k maps to m = k - D/2 (ascending momentum) and j maps to
 * ascending theta. Immutable once built.
 */
class LatticeGrid {
 public:
  LatticeGrid(std::size_t size, double hbar_eff);

  std::size_t size() const noexcept { return size_; }
  double hbar_eff() const noexcept { return hbar_eff_; }
  double theta_spacing() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(size_); }

  int m_index(std::size_t k) const noexcept {
    return static_cast<int>(k) - static_cast<int>(size_ / 2);
  }

  std::span<const int> m_indices() const noexcept { return m_indices_; }
  std::span<const double> momenta() const noexcept { return momenta_; }
  std::span<const double> thetas() const noexcept { return thetas_; }

 private:
  std::size_t size_;
  double hbar_eff_;
  std::vector<int> m_indices_;
  std::vector<double> momenta_;
  std::vector<double> thetas_;
};

// Throws ValidationError for an odd size, size < 8, or hbar_eff <= 0.
LatticeGrid make_grid(std::size_t size, double hbar_eff);

// State in the momentum eigenbasis, ascending m. The amplitudes carry the
// full norm; log_norm_growth accumulates ln of every norm factor divided out.
struct WaveFunction {
  ComplexVector amplitudes;
  double log_norm_growth = 0.0;

  double norm_squared() const;
};

// psi(theta_j) = sum_m psi_m exp(i m theta_j) / sqrt(2 pi)
ComplexVector to_coordinate(const WaveFunction& state, const LatticeGrid& grid);
ComplexVector to_coordinate(std::span<const Complex> amplitudes, const LatticeGrid& grid);

// Inverse of to_coordinate: psi_m = sqrt(2 pi) / D * sum_j psi(theta_j) exp(-i m theta_j)
ComplexVector from_coordinate(std::span<const Complex> values, const LatticeGrid& grid);

}  // namespace ptkho
