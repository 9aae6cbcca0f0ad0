#include "ptkho/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "ptkho/error.hpp"
#include "ptkho/evolution.hpp"
#include "ptkho/io.hpp"

namespace ptkho {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const char* envelope_name(Envelope e) {
  return e == Envelope::pure_exponential ? "pure_exponential" : "exponential_times_power";
}

const char* sign_name(CosineSign s) { return s == CosineSign::minus_cosine ? "minus_cosine" : "plus_cosine"; }

// Fitted curve values (NaN where the fit has no curve) for the overlay table.
using Curve = std::vector<double>;

IndexRange default_window(const std::string& kind, const Series& s) {
  if (kind == "linear" || kind == "power_law" || kind == "quadratic_energy" || kind == "drift") {
    auto w = late_half(s);
    while (w.begin < w.end && s.t[w.begin] <= 0.0) ++w.begin;
    return w;
  }
  return time_window(s, 1.0, std::numeric_limits<double>::infinity());
}

IndexRange window_for(const FitSpec& spec, const Series& s) {
  if (!spec.from && !spec.to) return default_window(spec.kind, s);
  return time_window(s, spec.from.value_or(-std::numeric_limits<double>::infinity()),
                     spec.to.value_or(std::numeric_limits<double>::infinity()));
}

json window_json(const Series& s, IndexRange w) {
  if (w.size() == 0) return {{"points", 0}};
  return {{"t_min", s.t[w.begin]}, {"t_max", s.t[w.end - 1]}, {"points", w.size()}};
}

json fit_time_series(const FitSpec& spec, const Series& full, Curve& curve) {
  const auto w = window_for(spec, full);
  const Series part = slice(full, w);
  json out = {{"window", window_json(full, w)}};
  curve.assign(full.size(), std::numeric_limits<double>::quiet_NaN());

  if (spec.kind == "linear") {
    const auto f = fit_linear(full, w);
    out["parameters"] = {{"G", f.slope}, {"intercept", f.intercept}};
    out["r_squared"] = f.r_squared;
    for (std::size_t i = 0; i < full.size(); ++i) curve[i] = f.slope * full.t[i] + f.intercept;
  } else if (spec.kind == "power_law") {
    const auto f = fit_power_law(full, w);
    out["parameters"] = {{"beta", f.prefactor}, {"alpha", f.exponent}};
    out["r_squared"] = f.r_squared;
    for (std::size_t i = 0; i < full.size(); ++i) {
      if (full.t[i] > 0.0) curve[i] = f.prefactor * std::pow(full.t[i], f.exponent);
    }
  } else if (spec.kind == "quadratic_energy") {
    if (!spec.growth_rate) {
      throw ValidationError("quadratic_energy needs G=<value> (or is run via the p_mean fit in the report)");
    }
    const double g = *spec.growth_rate;
    const auto f = fit_quadratic_energy(full, g, w);
    out["parameters"] = {{"G", g}, {"C", f.offset}};
    out["relative_residual"] = f.relative_residual;
    for (std::size_t i = 0; i < full.size(); ++i) curve[i] = 0.5 * g * g * full.t[i] * full.t[i] + f.offset;
  } else if (spec.kind == "drift") {
    out["parameters"] = {{"force", drift_force(part)}};
  } else if (spec.kind == "frequency") {
    const auto f = estimate_frequency(part, Detrend::asymptote);
    out["parameters"] = {{"omega_c", f.omega}, {"peak_power", f.peak_power}, {"median_power", f.median_power}};
  } else if (spec.kind == "damped_cosine") {
    DampedCosineOptions opt;
    opt.gamma = spec.gamma;
    opt.free_gamma = spec.free_gamma;
    const auto f = fit_damped_cosine(part, spec.envelope, spec.sign, opt);
    out["parameters"] = {{"saturation", f.saturation}, {"B", f.asymptote_coeff},   {"mu", f.asymptote_rate},
                         {"amplitude", f.amplitude_scale}, {"tau", f.decay_time}, {"omega_c", f.omega},
                         {"t0", f.t0},                 {"D", f.phase_drift},        {"gamma", f.gamma}};
    out["envelope"] = envelope_name(f.envelope);
    out["sign"] = sign_name(f.sign);
    out["r_squared"] = f.r_squared;
    out["iterations"] = f.iterations;
    for (std::size_t i = w.begin; i < w.end; ++i) curve[i] = f(full.t[i]);
  } else if (spec.kind == "double_exponential") {
    const auto f = fit_double_exponential(part);
    out["parameters"] = {{"saturation", f.saturation}, {"A1", f.a1}, {"mu1", f.mu1}, {"A2", f.a2}, {"mu2", f.mu2}};
    out["second_rate_identified"] = f.second_rate_identified;
    out["r_squared"] = f.r_squared;
    out["iterations"] = f.iterations;
    for (std::size_t i = w.begin; i < w.end; ++i) curve[i] = f(full.t[i]);
  } else {
    throw ValidationError("fit '" + spec.kind + "' does not apply to a time series");
  }
  return out;
}

void write_overlay_row(std::ostringstream& out, double t, const std::vector<double>& values) {
  out << format_double(t);
  for (double v : values) {
    out << ',';
    if (std::isfinite(v)) out << format_double(v);
  }
  out << '\n';
}

}  // namespace

EvolveOutput cmd_evolve(const ExperimentConfig& config) {
  config.validate();
  const fs::path dir = config.output_dir;
  fs::create_directories(dir);
  write_text(dir / "config.json", render_config(config));

  EvolveOutput result;
  result.time_series = dir / "timeseries.csv";
  std::ofstream series(result.time_series, std::ios::binary | std::ios::trunc);
  if (!series) throw std::runtime_error("cannot write '" + result.time_series.string() + "'");
  write_time_series_header(series);

  const auto grid = make_grid(config.grid_size, config.physics.hbar_eff);
  RunObserver observer;
  observer.on_record = [&](const ObservableRecord& r) {
    write_record(series, r);
    result.records.push_back(r);
  };
  if (config.emit_snapshots) {
    observer.on_snapshot = [&](const DensitySnapshot& snap) {
      const auto stem = "snapshot_t" + std::to_string(snap.t);
      const auto p_file = dir / (stem + "_p.csv");
      const auto theta_file = dir / (stem + "_theta.csv");
      write_density(p_file, "p", snap.momentum_density);
      write_density(theta_file, "theta", snap.coordinate_density);
      result.snapshot_files.push_back(p_file);
      result.snapshot_files.push_back(theta_file);
    };
  }
  // Whatever was computed before a failure stays on disk.
  try {
    run(config.run_config(), grid, observer);
  } catch (...) {
    series.flush();
    throw;
  }
  series.flush();
  if (!series) throw std::runtime_error("write failed for '" + result.time_series.string() + "'");
  return result;
}

SweepRow summarize_run(double lambda, const std::vector<ObservableRecord>& records) {
  SweepRow row;
  row.lambda = lambda;
  try {
    const auto p = column(records, "p_mean");
    row.growth_rate = fit_linear(p, late_half(p)).slope;
    const auto width = column(records, "width");
    auto w = late_half(width);
    while (w.begin < w.end && width.t[w.begin] <= 0.0) ++w.begin;
    row.width_exponent = fit_power_law(width, w).exponent;
    const auto e_pot = column(records, "e_pot");
    const auto late = late_half(e_pot);
    double sum = 0.0;
    for (std::size_t i = late.begin; i < late.end; ++i) sum += e_pot.y[i];
    row.late_e_pot = sum / static_cast<double>(late.size());
    row.ok = true;
  } catch (const std::exception& e) {
    row.ok = false;
    row.error = e.what();
  }
  return row;
}

SweepOutput cmd_sweep(const ExperimentConfig& base, const std::vector<double>& lambdas, unsigned max_parallel) {
  if (lambdas.empty()) throw ValidationError("sweep needs at least one lambda");
  base.validate();
  const fs::path dir = base.output_dir;
  fs::create_directories(dir);

  const auto member = [&](double lambda) -> SweepRow {
    ExperimentConfig c = base;
    c.physics.lambda = lambda;
    c.output_dir = (dir / ("lambda_" + format_double(lambda))).string();
    try {
      c.validate();
      const auto out = cmd_evolve(c);
      return summarize_run(lambda, out.records);
    } catch (const std::exception& e) {
      SweepRow row;
      row.lambda = lambda;
      row.error = e.what();
      return row;
    }
  };

  unsigned workers = max_parallel ? max_parallel : std::max(1u, std::thread::hardware_concurrency());
  SweepOutput result;
  result.rows.resize(lambdas.size());
  for (std::size_t start = 0; start < lambdas.size(); start += workers) {
    std::vector<std::future<SweepRow>> batch;
    const std::size_t stop = std::min(lambdas.size(), start + workers);
    for (std::size_t i = start; i < stop; ++i) batch.push_back(std::async(std::launch::async, member, lambdas[i]));
    for (std::size_t i = start; i < stop; ++i) result.rows[i] = batch[i - start].get();
  }

  std::ostringstream summary;
  summary << "lambda,G,alpha,C,status\n";
  for (const auto& row : result.rows) {
    summary << format_double(row.lambda) << ',';
    if (row.ok) {
      summary << format_double(row.growth_rate) << ',' << format_double(row.width_exponent) << ','
              << format_double(row.late_e_pot) << ",ok\n";
    } else {
      std::string msg = row.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      summary << ",,," << "error: " << msg << '\n';
    }
  }
  result.summary = dir / "summary.csv";
  write_text(result.summary, summary.str());
  return result;
}

FitSpec parse_fit_spec(std::string_view text) {
  FitSpec spec;
  spec.text = std::string(text);
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == ':') {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  spec.kind = parts[0];
  static const std::vector<std::string> kinds = {"linear",    "power_law",     "quadratic_energy",   "drift",
                                                 "frequency", "damped_cosine", "double_exponential", "gaussian"};
  if (std::find(kinds.begin(), kinds.end(), spec.kind) == kinds.end()) {
    throw ValidationError("unknown fit kind '" + spec.kind + "'");
  }
  std::size_t i = 1;
  if (spec.kind != "gaussian") {
    if (parts.size() < 2 || parts[1].find('=') != std::string::npos) {
      throw ValidationError("fit '" + spec.text + "' needs a column, e.g. " + spec.kind + ":p_mean");
    }
    spec.column = parts[1];
    i = 2;
  }
  for (; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw ValidationError("fit option '" + parts[i] + "' is not key=value");
    const std::string key = parts[i].substr(0, eq);
    const std::string value = parts[i].substr(eq + 1);
    if (key == "from") spec.from = parse_double(value);
    else if (key == "to") spec.to = parse_double(value);
    else if (key == "gamma") spec.gamma = parse_double(value);
    else if (key == "G") spec.growth_rate = parse_double(value);
    else if (key == "free_gamma") {
      if (value != "true" && value != "false") throw ValidationError("free_gamma must be true or false");
      spec.free_gamma = value == "true";
    } else if (key == "envelope") {
      if (value == "exp") spec.envelope = Envelope::pure_exponential;
      else if (value == "exp_power") spec.envelope = Envelope::exponential_times_power;
      else throw ValidationError("envelope must be exp or exp_power");
    } else if (key == "sign") {
      if (value == "minus") spec.sign = CosineSign::minus_cosine;
      else if (value == "plus") spec.sign = CosineSign::plus_cosine;
      else throw ValidationError("sign must be minus or plus");
    } else {
      throw ValidationError("unknown fit option '" + key + "'");
    }
  }
  return spec;
}

AnalyzeOutput cmd_analyze(const fs::path& input, const std::vector<FitSpec>& fits) {
  if (fits.empty()) throw ValidationError("analyze needs at least one --fit");
  AnalyzeOutput result;
  json report = {{"input", input.string()}, {"fits", json::array()}};

  std::string header;
  {
    std::ifstream in(input);
    if (!in) throw ValidationError("cannot open '" + input.string() + "'");
    std::getline(in, header);
    if (!header.empty() && header.back() == '\r') header.pop_back();
  }

  std::ostringstream overlay;
  if (header == kTimeSeriesHeader) {
    const auto records = read_time_series(input);
    std::vector<std::string> columns;
    std::vector<Curve> curves;
    for (const auto& spec : fits) {
      json entry = {{"spec", spec.text}, {"fit", spec.kind}, {"column", spec.column}};
      Curve curve;
      try {
        const auto series = column(records, spec.column);
        FitSpec effective = spec;
        if (spec.kind == "quadratic_energy" && !spec.growth_rate) {
          // G from the momentum drift of the same file and window.
          const auto p = column(records, "p_mean");
          effective.growth_rate = fit_linear(p, window_for(spec, p)).slope;
        }
        const auto fitted = fit_time_series(effective, series, curve);
        entry.update(fitted);
        entry["status"] = "ok";
      } catch (const FitError& e) {
        entry["status"] = "non_convergence";
        entry["message"] = e.what();
        entry["last_iterate"] = e.last_iterate();
        result.any_non_convergence = true;
      } catch (const ValidationError& e) {
        entry["status"] = "invalid";
        entry["message"] = e.what();
        result.any_invalid = true;
      }
      report["fits"].push_back(entry);
      columns.push_back(spec.text);
      if (curve.empty()) curve.assign(records.size(), std::numeric_limits<double>::quiet_NaN());
      curves.push_back(std::move(curve));
    }

    overlay << kTimeSeriesHeader;
    for (const auto& c : columns) overlay << ',' << "fit[" << c << ']';
    overlay << '\n';
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      std::vector<double> values = {r.log_norm_growth, r.p_mean, r.e_kin, r.e_pot, r.e_tot, r.width};
      for (const auto& c : curves) values.push_back(c[i]);
      write_overlay_row(overlay, r.t, values);
    }
  } else if (header == "p,prob" || header == "theta,prob") {
    const auto table = read_density(input);
    std::vector<Curve> curves;
    overlay << table.axis << ",prob";
    for (const auto& spec : fits) {
      json entry = {{"spec", spec.text}, {"fit", spec.kind}, {"axis", table.axis}};
      Curve curve(table.x.size(), std::numeric_limits<double>::quiet_NaN());
      try {
        if (spec.kind != "gaussian") throw ValidationError("only gaussian fits apply to a density file");
        const auto g = fit_gaussian(table.x, table.prob);
        entry["parameters"] = {{"center", g.center}, {"sigma", g.width}, {"amplitude", g.amplitude}};
        entry["refined"] = g.refined;
        entry["r_squared"] = g.r_squared;
        entry["status"] = "ok";
        for (std::size_t i = 0; i < table.x.size(); ++i) {
          const double d = table.x[i] - g.center;
          curve[i] = g.amplitude * std::exp(-d * d / g.width);
        }
      } catch (const ValidationError& e) {
        entry["status"] = "invalid";
        entry["message"] = e.what();
        result.any_invalid = true;
      }
      report["fits"].push_back(entry);
      overlay << ",fit[" << spec.text << ']';
      curves.push_back(std::move(curve));
    }
    overlay << '\n';
    for (std::size_t i = 0; i < table.x.size(); ++i) {
      std::vector<double> values = {table.prob[i]};
      for (const auto& c : curves) values.push_back(c[i]);
      write_overlay_row(overlay, table.x[i], values);
    }
  } else {
    throw ValidationError("'" + input.string() + "' is neither a time series nor a density file");
  }

  result.report = report.dump(2) + "\n";
  result.overlay = overlay.str();
  return result;
}

}  // namespace ptkho
