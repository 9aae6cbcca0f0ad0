// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "ptkho/analysis.hpp"
#include "ptkho/commands.hpp"
#include "ptkho/config.hpp"
#include "ptkho/error.hpp"
#include "ptkho/evolution.hpp"
#include "ptkho/io.hpp"

using namespace ptkho;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kOmegaC = 4.0 * std::numbers::pi / 15.0;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [x]");
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "ptkho_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Full-preset runs are shared between criteria and computed once.
struct StoredRun {
  EvolveOutput output;
  double seconds = 0.0;
};

const StoredRun& preset_run(const std::string& name) {
  static std::map<std::string, StoredRun> cache;
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  auto config = find_preset(name).config;
  config.output_dir = (work_dir() / name).string();
  const auto start = std::chrono::steady_clock::now();
  StoredRun run;
  run.output = cmd_evolve(config);
  run.seconds = seconds_since(start);
  return cache.emplace(name, std::move(run)).first->second;
}

Series from_first_kick(const std::vector<ObservableRecord>& records, const char* name) {
  const auto s = column(records, name);
  return slice(s, time_window(s, 1.0, std::numeric_limits<double>::infinity()));
}

void criterion_unitarity(Outcome& o) {
  auto config = find_preset("fig1_lambda0").config;
  config.renormalize = false;
  const auto grid = make_grid(config.grid_size, config.physics.hbar_eff);
  double worst_norm = 0.0, worst_p = 0.0;
  RunObserver obs;
  obs.on_state = [&](int, const WaveFunction& s) {
    worst_norm = std::max(worst_norm, std::abs(std::sqrt(s.norm_squared()) - 1.0));
  };
  obs.on_record = [&](const ObservableRecord& r) { worst_p = std::max(worst_p, std::abs(r.p_mean)); };
  const auto start = std::chrono::steady_clock::now();
  run(config.run_config(), grid, obs);
  const double secs = seconds_since(start);
  o.require(worst_norm < 1e-8, "max |norm - 1| = " + num(worst_norm) + " (< 1e-8)");
  o.require(worst_p < 1e-6, "max |<p>| = " + num(worst_p) + " (< 1e-6)");
  o.require(secs < 60.0, "runtime " + num(secs) + " s (< 60 s)");
}

void criterion_subdiffusion(Outcome& o) {
  const auto& records = preset_run("fig1_lambda0").output.records;
  const auto width = column(records, "width");
  const auto fit = fit_power_law(width, time_window(width, 50.0, 500.0));
  o.require(fit.exponent >= 0.7 && fit.exponent <= 0.9, "alpha = " + num(fit.exponent) + " (in [0.7, 0.9])");
}

void criterion_directed_current(Outcome& o) {
  const auto& run = preset_run("fig1_lambda3");
  const auto p = column(run.output.records, "p_mean");
  const auto lin = fit_linear(p, late_half(p));
  o.require(std::abs(lin.slope - kTwoPi) <= 0.05 * kTwoPi, "G = " + num(lin.slope) + " (2 pi +/- 5%)");
  const auto e_kin = column(run.output.records, "e_kin");
  const auto quad = fit_quadratic_energy(e_kin, lin.slope, full_range(e_kin));
  o.require(quad.relative_residual < 0.05, "E_k residual = " + num(quad.relative_residual) + " (< 5%)");
  const auto width = column(run.output.records, "width");
  const auto pw = fit_power_law(width, late_half(width));
  o.require(pw.exponent < 0.15, "width alpha = " + num(pw.exponent) + " (< 0.15)");
  o.require(run.seconds < 600.0, "runtime " + num(run.seconds) + " s (< 600 s)");
}

void criterion_gaussian_packet(Outcome& o) {
  const auto& run = preset_run("fig1_lambda3");
  const fs::path dir = work_dir() / "fig1_lambda3";
  const auto p_density = read_density(dir / "snapshot_t101_p.csv");
  const auto th_density = read_density(dir / "snapshot_t101_theta.csv");
  const double p_mean = run.output.records.at(101).p_mean;
  const auto gp = fit_gaussian(p_density.x, p_density.prob);
  o.require(gp.r_squared > 0.99, "momentum r^2 = " + num(gp.r_squared) + " (> 0.99)");
  o.require(std::abs(gp.center - p_mean) <= 0.02 * std::abs(p_mean),
            "p_c = " + num(gp.center) + " vs <p> = " + num(p_mean) + " (within 2%)");
  const auto gt = fit_gaussian(th_density.x, th_density.prob);
  o.require(gt.r_squared > 0.95, "coordinate r^2 = " + num(gt.r_squared) + " (> 0.95)");
}

void criterion_frequency(Outcome& o) {
  const auto& records = preset_run("fig3_lambda05").output.records;
  std::vector<double> omegas;
  for (const char* name : {"p_mean", "e_kin", "e_pot"}) {
    const double w = estimate_frequency(from_first_kick(records, name), Detrend::asymptote).omega;
    omegas.push_back(w);
    o.require(std::abs(w - kOmegaC) <= 0.05 * kOmegaC, std::string(name) + " omega = " + num(w) + " (4 pi/15 +/- 5%)");
  }
  const auto [lo, hi] = std::minmax_element(omegas.begin(), omegas.end());
  o.require(*hi - *lo <= 0.02 * *lo, "spread = " + num((*hi - *lo) / *lo) + " (<= 2%)");
}

void criterion_anti_phase(Outcome& o) {
  const auto& records = preset_run("fig3_lambda05").output.records;
  const auto kin = oscillatory_part(from_first_kick(records, "e_kin"));
  const auto pot = oscillatory_part(from_first_kick(records, "e_pot"));
  const double r = pearson_correlation(kin, pot);
  o.require(r < -0.8, "Pearson r = " + num(r) + " (< -0.8)");
}

void criterion_envelope(Outcome& o) {
  try {
    const auto p = from_first_kick(preset_run("fig3_lambda05").output.records, "p_mean");
    const auto f = fit_damped_cosine(p, Envelope::pure_exponential, CosineSign::minus_cosine);
    o.require(f.r_squared > 0.9, "lambda=0.5 r^2 = " + num(f.r_squared) + " (> 0.9)");
    o.require(f.decay_time >= 40.0 && f.decay_time <= 100.0, "tau = " + num(f.decay_time) + " (in [40, 100])");
  } catch (const FitError& e) {
    o.require(false, std::string("lambda=0.5 fit did not converge: ") + e.what());
  }
  try {
    const auto p = from_first_kick(preset_run("fig3_lambda1").output.records, "p_mean");
    const auto f = fit_damped_cosine(p, Envelope::exponential_times_power, CosineSign::minus_cosine);
    o.require(f.r_squared > 0.9, "lambda=1 r^2 = " + num(f.r_squared) + " (> 0.9)");
  } catch (const FitError& e) {
    o.require(false, std::string("lambda=1 fit did not converge: ") + e.what());
  }
}

void criterion_hermitian_saturation(Outcome& o) {
  try {
    const auto e_kin = from_first_kick(preset_run("fig3_lambda0").output.records, "e_kin");
    const auto f = fit_double_exponential(e_kin);
    o.require(f.r_squared > 0.95, "r^2 = " + num(f.r_squared) + " (> 0.95)");
    o.require(f.second_rate_identified && f.mu1 < f.mu2,
              "mu1 = " + num(f.mu1) + " < mu2 = " + num(f.mu2));
    o.require(f.mu1 >= 323.0 / 3.0 && f.mu1 <= 323.0 * 3.0, "mu1 within x3 of 323");
    o.require(f.mu2 >= 2730.0 / 3.0 && f.mu2 <= 2730.0 * 3.0, "mu2 within x3 of 2730");
  } catch (const FitError& e) {
    o.require(false, std::string("fit did not converge: ") + e.what());
  }
}

void criterion_hopping(Outcome& o) {
  FloquetParams p;
  p.kick_strength = 5.0;
  p.hbar_eff = 0.1;
  const auto table = kick_matrix_elements(p, 10);
  double worst = 0.0;
  const std::complex<double> minus_i{0.0, -1.0};
  for (int dm = -10; dm <= 10; ++dm) {
    const double j = (dm < 0 && (-dm) % 2 ? -1.0 : 1.0) * std::cyl_bessel_j(std::abs(dm), 50.0);
    worst = std::max(worst, std::abs(table.element(dm) - std::pow(minus_i, dm) * j));
  }
  o.require(worst < 1e-8, "max |U_K - (-i)^n J_n(50)| = " + num(worst) + " (< 1e-8)");

  double worst_v = 0.0;
  for (double lambda : {0.0, 0.01, 0.5, 1.0, 3.0}) {
    const auto h = potential_hopping(lambda);
    worst_v = std::max({worst_v, std::abs(h.forward - (1.0 + lambda) / 2.0), std::abs(h.backward - (1.0 - lambda) / 2.0)});
  }
  o.require(worst_v < 1e-12, "max potential hopping error = " + num(worst_v) + " (< 1e-12)");

  p.kick_strength = 0.1;
  p.lambda = 0.5;
  const auto weak = kick_matrix_elements(p, 1);
  const double fwd = std::abs(weak.element(1)), bwd = std::abs(weak.element(-1));
  o.require(fwd > bwd, "K=0.1, lambda=0.5: |forward| = " + num(fwd) + " > |backward| = " + num(bwd));
}

double max_diff(const ComplexVector& a, const ComplexVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

void criterion_split_step(Outcome& o) {
  // Self-consistency at the production grid and substeps, on the state
  // entering the first harmonic stage.
  const auto config = find_preset("fig3_lambda05").config;
  auto params = config.physics;
  params.lambda = 0.0;
  const auto grid = make_grid(config.grid_size, params.hbar_eff);
  const auto kicked = kick_apply(initial_state(grid), params, grid);
  const auto once = harmonic_apply(kicked, params, grid);
  auto doubled = params;
  doubled.substeps *= 2;
  const auto twice = harmonic_apply(kicked, doubled, grid);
  const double self = max_diff(once.amplitudes, twice.amplitudes);
  o.require(self < 1e-6, "N=" + std::to_string(params.substeps) + " vs 2N: " + num(self) + " (< 1e-6)");

  // Dense oracle on 32 points.
  const int d = 32;
  const double hbar = params.hbar_eff, eta = kTwoPi;
  const auto small = make_grid(d, hbar);
  Eigen::MatrixXcd f(d, d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) f(j, k) = std::polar(1.0 / std::sqrt(d), small.m_index(k) * small.thetas()[j]);
  }
  Eigen::VectorXcd kinetic(d), potential(d);
  for (int k = 0; k < d; ++k) kinetic[k] = 0.5 * small.momenta()[k] * small.momenta()[k];
  for (int j = 0; j < d; ++j) potential[j] = 0.5 * eta * eta * small.thetas()[j] * small.thetas()[j];
  const Eigen::MatrixXcd h = Eigen::MatrixXcd(kinetic.asDiagonal()) + f.adjoint() * potential.asDiagonal() * f;
  const Eigen::MatrixXcd u = (std::complex<double>(0.0, -1.0 / hbar) * h).exp();

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  WaveFunction random;
  random.amplitudes.resize(d);
  for (auto& a : random.amplitudes) a = {gauss(rng), gauss(rng)};
  const double norm = std::sqrt(random.norm_squared());
  for (auto& a : random.amplitudes) a /= norm;

  FloquetParams dense_params = params;
  dense_params.eta = eta;
  std::vector<double> errors;
  for (int n : {64, 128, 256}) {
    dense_params.substeps = n;
    double err = 0.0;
    for (const auto& state : {initial_state(small), random}) {
      const auto out = harmonic_apply(state, dense_params, small);
      const Eigen::Map<const Eigen::VectorXcd> in(state.amplitudes.data(), d);
      const Eigen::VectorXcd exact = u * in;
      for (int k = 0; k < d; ++k) err = std::max(err, std::abs(out.amplitudes[k] - exact[k]));
    }
    errors.push_back(err);
  }
  o.require(errors[0] < 1e-4, "D=32 oracle error at N=64: " + num(errors[0]) + " (< 1e-4)");
  const double order1 = std::log2(errors[0] / errors[1]), order2 = std::log2(errors[1] / errors[2]);
  o.require(std::abs(order1 - 2.0) < 0.3 && std::abs(order2 - 2.0) < 0.3,
            "observed order " + num(order1) + ", " + num(order2) + " (2 +/- 0.3)");
}

void criterion_sweep(Outcome& o) {
  auto base = find_preset("fig1_lambda05").config;
  base.output_dir = (work_dir() / "sweep").string();
  const std::vector<double> lambdas = {0.0, 0.01, 0.5, 1.0, 3.0};
  const auto out = cmd_sweep(base, lambdas, 1);
  std::ostringstream g_text, c_text;
  bool all_ok = true;
  for (const auto& row : out.rows) {
    if (!row.ok) {
      all_ok = false;
      o.require(false, "lambda=" + num(row.lambda) + " failed: " + row.error);
    }
    g_text << (g_text.tellp() > 0 ? ", " : "") << num(row.growth_rate);
    c_text << (c_text.tellp() > 0 ? ", " : "") << num(row.late_e_pot);
  }
  if (!all_ok) return;
  bool monotone = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    monotone = monotone && out.rows[i].growth_rate >= out.rows[i - 1].growth_rate;
  }
  o.require(monotone, "G = {" + g_text.str() + "} non-decreasing");
  const double last = out.rows.back().growth_rate;
  o.require(std::abs(last - kTwoPi) <= 0.05 * kTwoPi, "G(3) = " + num(last) + " (2 pi +/- 5%)");
  std::size_t argmin = 0;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (out.rows[i].late_e_pot < out.rows[argmin].late_e_pot) argmin = i;
  }
  o.require(argmin > 0 && argmin + 1 < out.rows.size(),
            "late e_pot = {" + c_text.str() + "} falls then rises (minimum at lambda=" +
                num(out.rows[argmin].lambda) + ")");
}

void criterion_determinism(Outcome& o) {
  for (const std::string name : {"fig3_lambda05", "fig1_lambda3"}) {
    preset_run(name);
    auto config = find_preset(name).config;
    const fs::path again = work_dir() / (name + "_again");
    config.output_dir = again.string();
    cmd_evolve(config);
    bool same = true;
    int files = 0;
    for (const auto& entry : fs::directory_iterator(again)) {
      const auto name_only = entry.path().filename();
      if (name_only == "config.json") continue;  // records its own output_dir
      ++files;
      same = same && read_text(entry.path()) == read_text(work_dir() / name / name_only);
    }
    o.require(same && files > 0, name + ": " + std::to_string(files) + " files byte-identical");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"unitarity baseline", criterion_unitarity},
      {"sub-diffusion exponent", criterion_subdiffusion},
      {"directed current", criterion_directed_current},
      {"Gaussian wave packet", criterion_gaussian_packet},
      {"resonant oscillation frequency", criterion_frequency},
      {"anti-phase energies", criterion_anti_phase},
      {"envelope decay", criterion_envelope},
      {"Hermitian resonant saturation", criterion_hermitian_saturation},
      {"hopping asymmetry oracle", criterion_hopping},
      {"split-step convergence", criterion_split_step},
      {"lambda-sweep monotonicity", criterion_sweep},
      {"determinism", criterion_determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("error: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
