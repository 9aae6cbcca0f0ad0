#include <algorithm>
#include <cmath>
#include <numbers>

#include "ptkho/analysis.hpp"
#include "ptkho/error.hpp"
#include "ptkho/least_squares.hpp"

namespace ptkho {
namespace {

constexpr double kPi = std::numbers::pi;

// Least squares y ~ a + b * f for a single basis column f.
struct TwoTerm {
  double a = 0.0, b = 0.0, ssr = 0.0;
};

TwoTerm two_term(std::span<const double> y, std::span<const double> f) {
  const double n = static_cast<double>(y.size());
  double sf = 0.0, sff = 0.0, sy = 0.0, sfy = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sf += f[i];
    sff += f[i] * f[i];
    sy += y[i];
    sfy += f[i] * y[i];
  }
  TwoTerm out;
  const double det = n * sff - sf * sf;
  if (std::abs(det) <= 1e-12 * n * std::max(sff, 1e-300)) {
    out.a = sy / n;
  } else {
    out.b = (n * sfy - sf * sy) / det;
    out.a = (sy - out.b * sf) / n;
  }
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double d = y[i] - out.a - out.b * f[i];
    out.ssr += d * d;
  }
  return out;
}

}  // namespace

double evaluate(const AsymptoteFit& a, double t) {
  return a.saturation + a.coeff * std::exp(-t / a.rate);
}

AsymptoteFit fit_asymptote(const Series& s) {
  if (s.t.size() != s.y.size() || s.size() < 3) {
    throw ValidationError("fit_asymptote: need at least 3 consistent points");
  }
  const double t_first = s.t.front();
  const double span = std::max(s.t.back() - t_first, 1e-12);
  double dt = span;
  for (std::size_t i = 1; i < s.size(); ++i) dt = std::min(dt, std::max(s.t[i] - s.t[i - 1], 1e-12));

  // Grid search over the rate with the two linear coefficients solved
  // exactly; the basis is shifted to t_first to stay representable.
  std::vector<double> basis(s.size());
  double best_ssr = std::numeric_limits<double>::infinity();
  AsymptoteFit best;
  const int grid_points = 160;
  const double lo = std::log(0.5 * dt), hi = std::log(100.0 * span);
  for (int g = 0; g < grid_points; ++g) {
    const double rate = std::exp(lo + (hi - lo) * g / (grid_points - 1));
    for (std::size_t i = 0; i < s.size(); ++i) basis[i] = std::exp(-(s.t[i] - t_first) / rate);
    const auto fit = two_term(s.y, basis);
    if (fit.ssr < best_ssr) {
      best_ssr = fit.ssr;
      best = {fit.a, fit.b, rate};
    }
  }

  Eigen::VectorXd x0(3);
  x0 << best.saturation, best.coeff, std::log(best.rate);
  const auto residuals = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    const double rate = std::exp(p[2]);
    for (std::size_t i = 0; i < s.size(); ++i) {
      r[static_cast<Eigen::Index>(i)] = p[0] + p[1] * std::exp(-(s.t[i] - t_first) / rate) - s.y[i];
    }
  };
  const auto lm = levenberg_marquardt(residuals, x0, static_cast<Eigen::Index>(s.size()));
  if (lm.x.allFinite() && 2.0 * lm.cost <= best_ssr) {
    best = {lm.x[0], lm.x[1], std::exp(lm.x[2])};
  }
  // Undo the shift: coeff * exp(-(t - t_first)/rate) = coeff' * exp(-t/rate).
  best.coeff *= std::exp(t_first / best.rate);
  if (!std::isfinite(best.coeff)) best.coeff = 0.0;
  return best;
}

std::vector<double> oscillatory_part(const Series& s) {
  const auto trend = fit_asymptote(s);
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s.y[i] - evaluate(trend, s.t[i]);
  return out;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw ValidationError("pearson_correlation: need two equal-length samples of size >= 2");
  }
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (!(saa > 0.0) || !(sbb > 0.0)) throw ValidationError("pearson_correlation: zero variance");
  return sab / std::sqrt(saa * sbb);
}

FrequencyEstimate estimate_frequency(const Series& s, Detrend detrend) {
  if (s.t.size() != s.y.size()) throw ValidationError("estimate_frequency: t and y lengths differ");
  if (s.size() < 64) {
    throw ValidationError("estimate_frequency: need at least 64 points, got " + std::to_string(s.size()));
  }
  std::vector<double> residual;
  switch (detrend) {
    case Detrend::none:
      residual = s.y;
      break;
    case Detrend::mean: {
      double mean = 0.0;
      for (double v : s.y) mean += v;
      mean /= static_cast<double>(s.size());
      residual.resize(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) residual[i] = s.y[i] - mean;
      break;
    }
    case Detrend::asymptote:
      residual = oscillatory_part(s);
      break;
  }

  double scale = 0.0, rms = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    scale = std::max(scale, std::abs(s.y[i]));
    rms += residual[i] * residual[i];
  }
  rms = std::sqrt(rms / static_cast<double>(s.size()));
  if (rms <= 1e-12 * (1.0 + scale)) {
    throw FitError("estimate_frequency: no spectral peak above the noise floor (flat residual)");
  }

  const double span = s.t.back() - s.t.front();
  const double dt = span / static_cast<double>(s.size() - 1);
  const double base = 2.0 * kPi / (span + dt);
  const int oversample = 8;
  const double step = base / oversample;
  const double omega_max = kPi / dt;
  // Skip the two lowest Fourier bins, where residual trend leaks in.
  const int k_min = 2 * oversample;
  const int k_max = static_cast<int>(omega_max / step);
  if (k_max <= k_min + 2) throw ValidationError("estimate_frequency: series too short to resolve");

  std::vector<double> power(static_cast<std::size_t>(k_max + 1), 0.0);
  for (int k = k_min; k <= k_max; ++k) {
    const double omega = k * step;
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      re += residual[i] * std::cos(omega * s.t[i]);
      im -= residual[i] * std::sin(omega * s.t[i]);
    }
    power[static_cast<std::size_t>(k)] = re * re + im * im;
  }

  int peak = k_min;
  for (int k = k_min; k <= k_max; ++k) {
    if (power[static_cast<std::size_t>(k)] > power[static_cast<std::size_t>(peak)]) peak = k;
  }
  std::vector<double> sorted(power.begin() + k_min, power.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
  const double median = sorted[sorted.size() / 2];
  const double peak_power = power[static_cast<std::size_t>(peak)];
  if (!(peak_power > 10.0 * median)) {
    throw FitError("estimate_frequency: no spectral peak above the noise floor");
  }

  double offset = 0.0;
  if (peak > k_min && peak < k_max) {
    const double left = power[static_cast<std::size_t>(peak - 1)];
    const double right = power[static_cast<std::size_t>(peak + 1)];
    const double curvature = left - 2.0 * peak_power + right;
    if (curvature < 0.0) offset = 0.5 * (left - right) / curvature;
  }
  return {(peak + offset) * step, peak_power, median};
}

}  // namespace ptkho
