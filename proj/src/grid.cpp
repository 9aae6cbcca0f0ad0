#include "ptkho/grid.hpp"

#include <cmath>
#include <string>

#include "ptkho/error.hpp"
#include "ptkho/fft.hpp"

namespace ptkho {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_size(std::size_t got, const LatticeGrid& grid, const char* what) {
  if (got != grid.size()) {
    throw ValidationError(std::string(what) + ": length " + std::to_string(got) +
                          " does not match grid size " + std::to_string(grid.size()));
  }
}

}  // namespace

LatticeGrid::LatticeGrid(std::size_t size, double hbar_eff) : size_(size), hbar_eff_(hbar_eff) {
  if (size < 8 || size % 2 != 0) {
    throw ValidationError("grid size must be even and at least 8, got " + std::to_string(size));
  }
  if (!(hbar_eff > 0.0) || !std::isfinite(hbar_eff)) {
    throw ValidationError("hbar_eff must be positive and finite");
  }
  m_indices_.resize(size);
  momenta_.resize(size);
  thetas_.resize(size);
  const double spacing = theta_spacing();
  for (std::size_t k = 0; k < size; ++k) {
    m_indices_[k] = m_index(k);
    momenta_[k] = m_indices_[k] * hbar_eff;
    thetas_[k] = -std::numbers::pi + spacing * static_cast<double>(k);
  }
}

LatticeGrid make_grid(std::size_t size, double hbar_eff) { return LatticeGrid(size, hbar_eff); }

double WaveFunction::norm_squared() const {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return sum;
}

// Ascending storage is the FFT-native layout rotated by D/2 on both sides:
// native momentum index n = m mod D, native coordinate sample l sits at
// theta = 2 pi l / D, which is theta_j for j = (l + D/2) mod D.
ComplexVector to_coordinate(std::span<const Complex> amplitudes, const LatticeGrid& grid) {
  require_size(amplitudes.size(), grid, "to_coordinate");
  const std::size_t n = grid.size();
  const std::size_t half = n / 2;
  auto& transform = SpectralTransform::for_thread(n);
  auto buf = transform.buffer();
  for (std::size_t k = 0; k < n; ++k) buf[(k + half) % n] = amplitudes[k];
  transform.to_coordinate();
  const double scale = 1.0 / std::sqrt(kTwoPi);
  ComplexVector out(n);
  for (std::size_t j = 0; j < n; ++j) out[j] = buf[(j + half) % n] * scale;
  return out;
}

ComplexVector to_coordinate(const WaveFunction& state, const LatticeGrid& grid) {
  return to_coordinate(state.amplitudes, grid);
}

ComplexVector from_coordinate(std::span<const Complex> values, const LatticeGrid& grid) {
  require_size(values.size(), grid, "from_coordinate");
  const std::size_t n = grid.size();
  const std::size_t half = n / 2;
  auto& transform = SpectralTransform::for_thread(n);
  auto buf = transform.buffer();
  for (std::size_t j = 0; j < n; ++j) buf[(j + half) % n] = values[j];
  transform.to_momentum();
  const double scale = std::sqrt(kTwoPi) / static_cast<double>(n);
  ComplexVector out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = buf[(k + half) % n] * scale;
  return out;
}

}  // namespace ptkho
