#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ptkho/params.hpp"

namespace ptkho {

// Sampled series y(t). t and y have equal length.
struct Series {
  std::vector<double> t;
  std::vector<double> y;

  std::size_t size() const noexcept { return t.size(); }
};

// Half-open sample index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
};

IndexRange full_range(const Series& s);
// Last 50% of the samples.
IndexRange late_half(const Series& s);
// Samples with t_min <= t <= t_max.
IndexRange time_window(const Series& s, double t_min, double t_max);
Series slice(const Series& s, IndexRange range);

// --- Asymptotic laws ---------------------------------------------------------

struct LinearFit {
  double slope = 0.0;  // G
  double intercept = 0.0;
  double r_squared = 0.0;
};

struct PowerLawFit {
  double prefactor = 0.0;  // beta
  double exponent = 0.0;   // alpha
  double r_squared = 0.0;  // in log-log space
};

struct QuadraticEnergyFit {
  double offset = 0.0;             // C in E = G^2 t^2 / 2 + C
  double relative_residual = 0.0;  // max |E - model| / |E| over the late half of the window
};

LinearFit fit_linear(const Series& s, IndexRange window);
PowerLawFit fit_power_law(const Series& s, IndexRange window);
QuadraticEnergyFit fit_quadratic_energy(const Series& s, double growth_rate, IndexRange window);
// Mean forward difference dy/dt over the late half of the series.
double drift_force(const Series& s);

// --- Wave-packet shape ---------------------------------------------------------

// rho(x) ~ amplitude * exp(-(x - center)^2 / width)
struct GaussianFit {
  double center = 0.0;
  double width = 0.0;
  double amplitude = 0.0;
  double r_squared = 0.0;
  bool refined = false;  // false when only the moment estimate was possible
};

GaussianFit fit_gaussian(std::span<const double> x, std::span<const double> density);

// --- Oscillations ------------------------------------------------------------

// y ~ saturation + coeff * exp(-t / rate)
struct AsymptoteFit {
  double saturation = 0.0;
  double coeff = 0.0;
  double rate = 1.0;
};

AsymptoteFit fit_asymptote(const Series& s);
double evaluate(const AsymptoteFit& a, double t);

enum class Detrend { none, mean, asymptote };

struct FrequencyEstimate {
  double omega = 0.0;  // angular frequency per unit t
  double peak_power = 0.0;
  double median_power = 0.0;
};

// Periodogram peak of the detrended series, refined by quadratic
// interpolation. Throws FitError when no peak stands above the noise floor.
FrequencyEstimate estimate_frequency(const Series& s, Detrend detrend = Detrend::asymptote);

// y minus its fitted exponential asymptote.
std::vector<double> oscillatory_part(const Series& s);
double pearson_correlation(std::span<const double> a, std::span<const double> b);

enum class Envelope { pure_exponential, exponential_times_power };
enum class CosineSign { minus_cosine, plus_cosine };

/**
 * y(t) = S + B exp(-t/mu) +/- A env(t) cos[omega (t - t_c(t))]
 *   env(t) = exp(-t/tau)                       (pure_exponential)
 *          = exp(-t/tau) (2 / (pi t))^(1/4)    (exponential_times_power)
 *   t_c(t) = t0 + D exp(gamma t)
 */
struct DampedCosineFit {
  double saturation = 0.0;
  double asymptote_coeff = 0.0;
  double asymptote_rate = 1.0;
  double amplitude_scale = 0.0;
  double decay_time = 1.0;
  Envelope envelope = Envelope::pure_exponential;
  double omega = 0.0;
  double t0 = 0.0;
  double phase_drift = 0.0;  // D
  double gamma = 0.01;
  CosineSign sign = CosineSign::minus_cosine;
  double r_squared = 0.0;
  int iterations = 0;

  double operator()(double t) const;
  double asymptote(double t) const;
  double envelope_at(double t) const;
};

struct DampedCosineOptions {
  double gamma = 0.01;
  bool free_gamma = false;
  int max_iterations = 200;
};

// Staged fit: asymptote, then periodogram frequency, then envelope and
// phase by linear least squares, then joint Levenberg-Marquardt. Throws
// FitError (with the last iterate) when the joint fit does not converge.
DampedCosineFit fit_damped_cosine(const Series& s, Envelope envelope, CosineSign sign,
                                  const DampedCosineOptions& options = {});

// y = saturation - a1 exp(-t/mu1) - a2 exp(-t/mu2), mu1 < mu2.
struct DoubleExponentialFit {
  double saturation = 0.0;
  double a1 = 0.0;
  double mu1 = 1.0;
  double a2 = 0.0;
  double mu2 = 1.0;
  double r_squared = 0.0;
  bool second_rate_identified = true;
  int iterations = 0;

  double operator()(double t) const;
};

DoubleExponentialFit fit_double_exponential(const Series& s);

// --- Hopping structure of the kick --------------------------------------------

/**
 * Momentum-basis matrix elements <phi_{m'+dm}| U_K |phi_{m'}> for
 * |dm| <= band, computed by periodic trapezoid quadrature.
 *
 * Elements are stored scaled by exp(-log_scale) with log_scale =
 * K lambda / hbar_eff so that strongly non-Hermitian kicks stay in range.
 * Scaled elements far below 1 carry an absolute error near 1e-14 from
 * cancellation in the quadrature sum.
 */
struct KickMatrixTable {
  int band = 0;
  int reference_m = 0;
  double log_scale = 0.0;
  int quadrature_points = 0;
  std::vector<std::complex<double>> scaled;  // index dm + band

  std::complex<double> scaled_element(int dm) const;
  // exp(log_scale) * scaled_element(dm); may overflow for extreme kicks.
  std::complex<double> element(int dm) const;
};

KickMatrixTable kick_matrix_elements(const FloquetParams& params, int band, int reference_m = 0);

// First-order hopping amplitudes of the kick potential cos theta + i lambda sin theta:
// forward = <phi_{m+1}|V|phi_m>, backward = <phi_{m-1}|V|phi_m>.
struct HoppingAmplitudes {
  std::complex<double> forward;
  std::complex<double> backward;
};

HoppingAmplitudes potential_hopping(double lambda, int reference_m = 0);

}  // namespace ptkho
