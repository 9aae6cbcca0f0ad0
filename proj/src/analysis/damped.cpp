#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ptkho/analysis.hpp"
#include "ptkho/error.hpp"
#include "ptkho/least_squares.hpp"

namespace ptkho {
namespace {

constexpr double kPi = std::numbers::pi;

double power_factor(Envelope kind, double t) {
  return kind == Envelope::exponential_times_power ? std::pow(2.0 / (kPi * t), 0.25) : 1.0;
}

double sign_of(CosineSign s) { return s == CosineSign::minus_cosine ? -1.0 : 1.0; }

double sum_squares_about_mean(std::span<const double> y) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return ss;
}

std::string describe(const Eigen::VectorXd& x) {
  std::ostringstream out;
  out << "[";
  for (Eigen::Index i = 0; i < x.size(); ++i) out << (i ? ", " : "") << x[i];
  out << "]";
  return out.str();
}

std::vector<double> to_vector(const Eigen::VectorXd& x) { return {x.data(), x.data() + x.size()}; }

}  // namespace

double DampedCosineFit::asymptote(double t) const {
  return saturation + asymptote_coeff * std::exp(-t / asymptote_rate);
}

double DampedCosineFit::envelope_at(double t) const {
  return amplitude_scale * std::exp(-t / decay_time) * power_factor(envelope, t);
}

double DampedCosineFit::operator()(double t) const {
  const double t_c = t0 + phase_drift * std::exp(gamma * t);
  return asymptote(t) + sign_of(sign) * envelope_at(t) * std::cos(omega * (t - t_c));
}

DampedCosineFit fit_damped_cosine(const Series& s, Envelope envelope, CosineSign sign,
                                  const DampedCosineOptions& options) {
  if (s.t.size() != s.y.size()) throw ValidationError("fit_damped_cosine: t and y lengths differ");
  if (envelope == Envelope::exponential_times_power) {
    for (double t : s.t) {
      if (!(t > 0.0)) throw ValidationError("fit_damped_cosine: power envelope needs t > 0");
    }
  }

  // Stage 1 and 2: asymptote and frequency.
  const auto trend = fit_asymptote(s);
  const auto freq = estimate_frequency(s, Detrend::asymptote);
  const double omega = freq.omega;
  const std::size_t n = s.size();
  const double t_first = s.t.front();
  const double span = std::max(s.t.back() - t_first, 1.0);

  // Stage 3: envelope decay and phase by linear least squares on a tau grid.
  std::vector<double> residual(n);
  for (std::size_t i = 0; i < n; ++i) residual[i] = s.y[i] - evaluate(trend, s.t[i]);
  double best_ssr = std::numeric_limits<double>::infinity();
  double best_tau = span, best_a = 0.0, best_b = 0.0;
  const int grid_points = 120;
  for (int g = 0; g < grid_points; ++g) {
    const double tau = span / 50.0 * std::pow(2500.0, static_cast<double>(g) / (grid_points - 1));
    double scc = 0.0, sss = 0.0, scs = 0.0, syc = 0.0, sys = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::exp(-(s.t[i] - t_first) / tau) * power_factor(envelope, s.t[i]);
      const double c = e * std::cos(omega * s.t[i]);
      const double sn = e * std::sin(omega * s.t[i]);
      scc += c * c;
      sss += sn * sn;
      scs += c * sn;
      syc += residual[i] * c;
      sys += residual[i] * sn;
    }
    const double det = scc * sss - scs * scs;
    if (!(det > 0.0)) continue;
    const double a = (syc * sss - sys * scs) / det;
    const double b = (sys * scc - syc * scs) / det;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::exp(-(s.t[i] - t_first) / tau) * power_factor(envelope, s.t[i]);
      const double d = residual[i] - e * (a * std::cos(omega * s.t[i]) + b * std::sin(omega * s.t[i]));
      ssr += d * d;
    }
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best_tau = tau;
      best_a = a;
      best_b = b;
    }
  }
  const double amplitude = std::hypot(best_a, best_b);
  if (!(amplitude > 0.0)) throw FitError("fit_damped_cosine: zero oscillation amplitude");
  const double phase = std::atan2(best_b, best_a) + (sign == CosineSign::minus_cosine ? kPi : 0.0);
  const double period = 2.0 * kPi / omega;
  const double t0_seed = std::fmod(std::fmod(phase / omega, period) + period, period);

  // Stage 4: joint refinement. Exponentials are anchored at t_first.
  // x = [S, B, ln mu, ln A, ln tau, t0, D, omega, (gamma)]
  const bool free_gamma = options.free_gamma;
  Eigen::VectorXd x0(free_gamma ? 9 : 8);
  const double coeff_at_first = trend.coeff * std::exp(-t_first / trend.rate);
  x0 << trend.saturation, coeff_at_first, std::log(trend.rate), std::log(amplitude), std::log(best_tau),
      t0_seed, 0.0, omega;
  if (free_gamma) x0[8] = options.gamma;
  const double sgn = sign_of(sign);
  const auto residuals = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    const double mu = std::exp(p[2]), amp = std::exp(p[3]), tau = std::exp(p[4]);
    const double gamma = free_gamma ? p[8] : options.gamma;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = s.t[i];
      const double t_c = p[5] + p[6] * std::exp(gamma * t);
      const double env = amp * std::exp(-(t - t_first) / tau) * power_factor(envelope, t);
      r[static_cast<Eigen::Index>(i)] =
          p[0] + p[1] * std::exp(-(t - t_first) / mu) + sgn * env * std::cos(p[7] * (t - t_c)) - s.y[i];
    }
  };
  LeastSquaresOptions lm_options;
  lm_options.max_iterations = options.max_iterations;
  const auto lm = levenberg_marquardt(residuals, x0, static_cast<Eigen::Index>(n), lm_options);

  DampedCosineFit fit;
  fit.saturation = lm.x[0];
  fit.asymptote_rate = std::exp(lm.x[2]);
  fit.asymptote_coeff = lm.x[1] * std::exp(t_first / fit.asymptote_rate);
  // A rate far below the sample spacing only touches t_first; drop it.
  if (!std::isfinite(fit.asymptote_coeff)) fit.asymptote_coeff = 0.0;
  fit.decay_time = std::exp(lm.x[4]);
  fit.amplitude_scale = std::exp(lm.x[3] + t_first / fit.decay_time);
  fit.envelope = envelope;
  fit.t0 = lm.x[5];
  fit.phase_drift = lm.x[6];
  fit.omega = lm.x[7];
  fit.gamma = free_gamma ? lm.x[8] : options.gamma;
  fit.sign = sign;
  fit.iterations = lm.iterations;
  if (!lm.converged || !lm.x.allFinite()) {
    throw FitError("fit_damped_cosine: no convergence after " + std::to_string(lm.iterations) +
                       " iterations; last iterate " + describe(lm.x),
                   to_vector(lm.x));
  }
  const double ss_tot = sum_squares_about_mean(s.y);
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - 2.0 * lm.cost / ss_tot, 0.0, 1.0) : 0.0;
  return fit;
}

double DoubleExponentialFit::operator()(double t) const {
  return saturation - a1 * std::exp(-t / mu1) - a2 * std::exp(-t / mu2);
}

DoubleExponentialFit fit_double_exponential(const Series& s) {
  if (s.t.size() != s.y.size()) throw ValidationError("fit_double_exponential: t and y lengths differ");
  const std::size_t n = s.size();
  if (n < 8) throw ValidationError("fit_double_exponential: need at least 8 points");
  const double t_first = s.t.front();
  const double span = std::max(s.t.back() - t_first, 1e-12);
  double dt = span;
  for (std::size_t i = 1; i < n; ++i) dt = std::min(dt, std::max(s.t[i] - s.t[i - 1], 1e-12));

  DoubleExponentialFit fit;
  const double ss_tot = sum_squares_about_mean(s.y);
  if (!(ss_tot > 0.0)) {
    fit.saturation = s.y.front();
    fit.mu1 = fit.mu2 = span;
    fit.r_squared = 1.0;
    fit.second_rate_identified = false;
    return fit;
  }

  // Variable projection seed: for each rate pair the three linear
  // coefficients are exact least squares.
  const int grid_points = 40;
  std::vector<double> rates(grid_points);
  const double lo = std::log(0.5 * dt), hi = std::log(10.0 * span);
  for (int g = 0; g < grid_points; ++g) rates[g] = std::exp(lo + (hi - lo) * g / (grid_points - 1));
  std::vector<std::vector<double>> columns(grid_points, std::vector<double>(n));
  for (int g = 0; g < grid_points; ++g) {
    for (std::size_t i = 0; i < n; ++i) columns[g][i] = std::exp(-(s.t[i] - t_first) / rates[g]);
  }
  Eigen::Map<const Eigen::VectorXd> y(s.y.data(), static_cast<Eigen::Index>(n));
  double best_ssr = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best(5);
  best << s.y.back(), 0.0, std::log(rates[0]), 0.0, std::log(rates.back());
  Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
  design.col(0).setOnes();
  for (int g1 = 0; g1 < grid_points; ++g1) {
    for (int g2 = g1 + 1; g2 < grid_points; ++g2) {
      for (std::size_t i = 0; i < n; ++i) {
        design(static_cast<Eigen::Index>(i), 1) = -columns[g1][i];
        design(static_cast<Eigen::Index>(i), 2) = -columns[g2][i];
      }
      const Eigen::Matrix3d normal = design.transpose() * design;
      const Eigen::Vector3d coef = normal.ldlt().solve(design.transpose() * y);
      if (!coef.allFinite()) continue;
      const double ssr = (design * coef - y).squaredNorm();
      if (ssr < best_ssr) {
        best_ssr = ssr;
        best << coef[0], coef[1], std::log(rates[g1]), coef[2], std::log(rates[g2]);
      }
    }
  }

  const auto residuals = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    const double mu1 = std::exp(p[2]), mu2 = std::exp(p[4]);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = s.t[i] - t_first;
      r[static_cast<Eigen::Index>(i)] = p[0] - p[1] * std::exp(-t / mu1) - p[3] * std::exp(-t / mu2) - s.y[i];
    }
  };
  const auto lm = levenberg_marquardt(residuals, best, static_cast<Eigen::Index>(n));
  if (!lm.converged || !lm.x.allFinite()) {
    throw FitError("fit_double_exponential: no convergence after " + std::to_string(lm.iterations) +
                       " iterations; last iterate " + describe(lm.x),
                   to_vector(lm.x));
  }

  fit.iterations = lm.iterations;
  fit.saturation = lm.x[0];
  fit.mu1 = std::exp(lm.x[2]);
  fit.mu2 = std::exp(lm.x[4]);
  fit.a1 = lm.x[1] * std::exp(t_first / fit.mu1);
  fit.a2 = lm.x[3] * std::exp(t_first / fit.mu2);
  if (fit.mu1 > fit.mu2) {
    std::swap(fit.mu1, fit.mu2);
    std::swap(fit.a1, fit.a2);
  }
  // Nested single-exponential model: when it explains the data as well, the
  // second rate is not identifiable.
  const auto single = fit_asymptote(s);
  double single_ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = evaluate(single, s.t[i]) - s.y[i];
    single_ssr += d * d;
  }
  const double double_ssr = 2.0 * lm.cost;
  const double big = std::max(std::abs(fit.a1), std::abs(fit.a2));
  if (single_ssr <= 1.01 * double_ssr + 1e-12 * ss_tot) {
    fit.saturation = single.saturation;
    fit.a1 = -single.coeff;
    fit.mu1 = fit.mu2 = single.rate;
    fit.a2 = 0.0;
    fit.second_rate_identified = false;
    fit.r_squared = std::clamp(1.0 - single_ssr / ss_tot, 0.0, 1.0);
    return fit;
  }
  if (std::abs(fit.a2) <= 1e-6 * big) {
    fit.a2 = 0.0;
    fit.second_rate_identified = false;
  } else if (std::abs(fit.a1) <= 1e-6 * big) {
    fit.a1 = fit.a2;
    fit.mu1 = fit.mu2;
    fit.a2 = 0.0;
    fit.second_rate_identified = false;
  } else if (fit.mu2 < fit.mu1 * (1.0 + 1e-3)) {
    fit.a1 += fit.a2;
    fit.a2 = 0.0;
    fit.second_rate_identified = false;
  }
  fit.r_squared = std::clamp(1.0 - 2.0 * lm.cost / ss_tot, 0.0, 1.0);
  return fit;
}

}  // namespace ptkho
