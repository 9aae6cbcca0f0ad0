#include <algorithm>
#include <cmath>

#include "ptkho/analysis.hpp"
#include "ptkho/error.hpp"
#include "ptkho/least_squares.hpp"

namespace ptkho {
namespace {

double r_squared(std::span<const double> x, std::span<const double> rho, const GaussianFit& g) {
  double mean = 0.0;
  for (double v : rho) mean += v;
  mean /= static_cast<double>(rho.size());
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - g.center;
    const double model = g.amplitude * std::exp(-d * d / g.width);
    ss_res += (rho[i] - model) * (rho[i] - model);
    ss_tot += (rho[i] - mean) * (rho[i] - mean);
  }
  if (!(ss_tot > 0.0)) return 0.0;
  return std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
}

}  // namespace

GaussianFit fit_gaussian(std::span<const double> x, std::span<const double> density) {
  if (x.size() != density.size()) throw ValidationError("fit_gaussian: x and density lengths differ");
  double mass = 0.0, first = 0.0, peak = 0.0;
  std::size_t support = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (density[i] < 0.0) throw ValidationError("fit_gaussian: negative density");
    if (density[i] > 0.0) ++support;
    mass += density[i];
    first += x[i] * density[i];
    peak = std::max(peak, density[i]);
  }
  if (support < 2) throw ValidationError("fit_gaussian: density has zero or single-point support");

  GaussianFit fit;
  fit.center = first / mass;
  double second = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - fit.center;
    second += d * d * density[i];
  }
  fit.width = 2.0 * second / mass;
  fit.amplitude = peak;
  fit.r_squared = r_squared(x, density, fit);

  bool flat = true;
  for (double v : density) flat = flat && v == density[0];
  if (flat) return fit;

  Eigen::VectorXd x0(3);
  x0 << std::log(fit.amplitude), fit.center, std::log(fit.width);
  const auto residuals = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    const double amp = std::exp(p[0]);
    const double width = std::exp(p[2]);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - p[1];
      r[static_cast<Eigen::Index>(i)] = amp * std::exp(-d * d / width) - density[i];
    }
  };
  const auto lm = levenberg_marquardt(residuals, x0, static_cast<Eigen::Index>(x.size()));
  if (!lm.x.allFinite()) return fit;

  GaussianFit refined;
  refined.amplitude = std::exp(lm.x[0]);
  refined.center = lm.x[1];
  refined.width = std::exp(lm.x[2]);
  refined.refined = true;
  refined.r_squared = r_squared(x, density, refined);
  return refined.r_squared >= fit.r_squared ? refined : fit;
}

}  // namespace ptkho
