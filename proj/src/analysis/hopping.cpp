#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ptkho/analysis.hpp"
#include "ptkho/error.hpp"

namespace ptkho {
namespace {

using Complex = std::complex<double>;
constexpr double kPi = std::numbers::pi;

// (1/2pi) int exp(-i m theta) f(theta) exp(i m' theta) d theta by the
// periodic trapezoid rule on `points` nodes, for every m = m' + dm.
std::vector<Complex> trapezoid(const FloquetParams& params, int band, int reference_m, int points,
                               double log_scale) {
  std::vector<Complex> out(static_cast<std::size_t>(2 * band + 1), Complex{0.0, 0.0});
  const double k_over_h = params.kick_strength / params.hbar_eff;
  for (int j = 0; j < points; ++j) {
    const double theta = -kPi + 2.0 * kPi * j / points;
    // exp[-(i/h) K (cos + i lambda sin)] = exp(-i K cos / h) exp(K lambda sin / h)
    const double magnitude = std::exp(k_over_h * params.lambda * std::sin(theta) - log_scale);
    const Complex kick = std::polar(magnitude, -k_over_h * std::cos(theta));
    const Complex ket = std::polar(1.0, static_cast<double>(reference_m) * theta);
    for (int dm = -band; dm <= band; ++dm) {
      const Complex bra = std::polar(1.0, -static_cast<double>(reference_m + dm) * theta);
      out[static_cast<std::size_t>(dm + band)] += bra * kick * ket;
    }
  }
  for (auto& v : out) v /= static_cast<double>(points);
  return out;
}

}  // namespace

Complex KickMatrixTable::scaled_element(int dm) const {
  if (dm < -band || dm > band) throw ValidationError("kick matrix offset outside the computed band");
  return scaled[static_cast<std::size_t>(dm + band)];
}

Complex KickMatrixTable::element(int dm) const { return std::exp(log_scale) * scaled_element(dm); }

KickMatrixTable kick_matrix_elements(const FloquetParams& params, int band, int reference_m) {
  params.validate();
  if (band < 1) throw ValidationError("kick_matrix_elements: band must be >= 1");

  KickMatrixTable table;
  table.band = band;
  table.reference_m = reference_m;
  table.log_scale = params.kick_strength * params.lambda / params.hbar_eff;

  // Doubling until the largest change is below 1e-10 relative to the largest
  // element. The scaled integrand peaks at 1; when the elements are far
  // smaller than that the sum cancels and round-off sets a floor, so the
  // tolerance never drops below 1e-14 absolute.
  constexpr int kMaxPoints = 1 << 22;
  int points = 4096;
  auto previous = trapezoid(params, band, reference_m, points, table.log_scale);
  while (true) {
    const int next_points = points * 2;
    auto next = trapezoid(params, band, reference_m, next_points, table.log_scale);
    double change = 0.0, size = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) {
      change = std::max(change, std::abs(next[i] - previous[i]));
      size = std::max(size, std::abs(next[i]));
    }
    points = next_points;
    previous = std::move(next);
    if (change <= std::max(1e-10 * size, 1e-14)) break;
    if (points >= kMaxPoints) {
      std::ostringstream msg;
      msg << "kick matrix quadrature did not converge with " << points << " nodes (K lambda / hbar_eff = "
          << table.log_scale << ")";
      throw PhysicsError(PhysicsError::Kind::quadrature, msg.str());
    }
  }
  table.quadrature_points = points;
  table.scaled = std::move(previous);
  return table;
}

HoppingAmplitudes potential_hopping(double lambda, int reference_m) {
  // The potential is a trigonometric polynomial of degree one; eight nodes
  // integrate it exactly.
  constexpr int points = 8;
  HoppingAmplitudes out{{0.0, 0.0}, {0.0, 0.0}};
  for (int j = 0; j < points; ++j) {
    const double theta = -kPi + 2.0 * kPi * j / points;
    const Complex v{std::cos(theta), lambda * std::sin(theta)};
    const Complex ket = std::polar(1.0, static_cast<double>(reference_m) * theta);
    out.forward += std::polar(1.0, -static_cast<double>(reference_m + 1) * theta) * v * ket;
    out.backward += std::polar(1.0, -static_cast<double>(reference_m - 1) * theta) * v * ket;
  }
  out.forward /= static_cast<double>(points);
  out.backward /= static_cast<double>(points);
  return out;
}

}  // namespace ptkho
