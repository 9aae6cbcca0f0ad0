#include <algorithm>
#include <cmath>
#include <limits>

#include "ptkho/analysis.hpp"
#include "ptkho/error.hpp"

namespace ptkho {
namespace {

void require_consistent(const Series& s) {
  if (s.t.size() != s.y.size()) throw ValidationError("series t and y lengths differ");
}

IndexRange checked(const Series& s, IndexRange w, std::size_t min_points, const char* what) {
  require_consistent(s);
  if (w.end > s.size() || w.size() < min_points) {
    throw ValidationError(std::string(what) + ": need at least " + std::to_string(min_points) +
                          " points in the window, got " + std::to_string(w.size()));
  }
  return w;
}

struct LineResult {
  double slope, intercept, r_squared;
};

LineResult least_squares_line(std::span<const double> x, std::span<const double> y, const char* what) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0)) throw ValidationError(std::string(what) + ": degenerate window (all abscissae equal)");
  const double slope = sxy / sxx;
  const double ss_res = std::max(0.0, syy - slope * sxy);
  double r2 = syy > 0.0 ? 1.0 - ss_res / syy : (ss_res == 0.0 ? 1.0 : 0.0);
  return {slope, my - slope * mx, std::clamp(r2, 0.0, 1.0)};
}

}  // namespace

IndexRange full_range(const Series& s) { return {0, s.size()}; }

IndexRange late_half(const Series& s) { return {s.size() / 2, s.size()}; }

IndexRange time_window(const Series& s, double t_min, double t_max) {
  require_consistent(s);
  IndexRange r{s.size(), s.size()};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.t[i] >= t_min && s.t[i] <= t_max) {
      if (r.begin == s.size()) r.begin = i;
      r.end = i + 1;
    }
  }
  if (r.begin == s.size()) return {0, 0};
  return r;
}

Series slice(const Series& s, IndexRange range) {
  require_consistent(s);
  range.end = std::min(range.end, s.size());
  Series out;
  if (range.size() == 0) return out;
  out.t.assign(s.t.begin() + static_cast<std::ptrdiff_t>(range.begin),
               s.t.begin() + static_cast<std::ptrdiff_t>(range.end));
  out.y.assign(s.y.begin() + static_cast<std::ptrdiff_t>(range.begin),
               s.y.begin() + static_cast<std::ptrdiff_t>(range.end));
  return out;
}

LinearFit fit_linear(const Series& s, IndexRange window) {
  checked(s, window, 3, "fit_linear");
  const auto part = slice(s, window);
  const auto line = least_squares_line(part.t, part.y, "fit_linear");
  return {line.slope, line.intercept, line.r_squared};
}

PowerLawFit fit_power_law(const Series& s, IndexRange window) {
  checked(s, window, 3, "fit_power_law");
  std::vector<double> lx, ly;
  for (std::size_t i = window.begin; i < window.end; ++i) {
    if (!(s.t[i] > 0.0) || !(s.y[i] > 0.0)) {
      throw ValidationError("fit_power_law: non-positive value at t = " + std::to_string(s.t[i]));
    }
    lx.push_back(std::log(s.t[i]));
    ly.push_back(std::log(s.y[i]));
  }
  const auto line = least_squares_line(lx, ly, "fit_power_law");
  return {std::exp(line.intercept), line.slope, line.r_squared};
}

QuadraticEnergyFit fit_quadratic_energy(const Series& s, double growth_rate, IndexRange window) {
  checked(s, window, 3, "fit_quadratic_energy");
  const double half_g2 = 0.5 * growth_rate * growth_rate;
  // One free parameter: the least-squares offset is the mean deviation.
  double offset = 0.0;
  for (std::size_t i = window.begin; i < window.end; ++i) offset += s.y[i] - half_g2 * s.t[i] * s.t[i];
  offset /= static_cast<double>(window.size());

  double worst = 0.0;
  const std::size_t late = window.begin + window.size() / 2;
  for (std::size_t i = late; i < window.end; ++i) {
    const double model = half_g2 * s.t[i] * s.t[i] + offset;
    const double scale = std::max(std::abs(s.y[i]), std::numeric_limits<double>::min());
    worst = std::max(worst, std::abs(s.y[i] - model) / scale);
  }
  return {offset, worst};
}

double drift_force(const Series& s) {
  require_consistent(s);
  if (s.size() < 2) throw ValidationError("drift_force: need at least 2 points");
  std::size_t begin = s.size() / 2;
  if (begin + 1 >= s.size()) begin = s.size() - 2;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = begin; i + 1 < s.size(); ++i) {
    const double dt = s.t[i + 1] - s.t[i];
    if (dt == 0.0) throw ValidationError("drift_force: repeated time stamp");
    sum += (s.y[i + 1] - s.y[i]) / dt;
    ++count;
  }
  return sum / static_cast<double>(count);
}

}  // namespace ptkho
