#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ptkho/analysis.hpp"
#include "ptkho/error.hpp"

using namespace ptkho;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class F>
Series sample(int first, int last, F f) {
  Series s;
  for (int t = first; t <= last; ++t) {
    s.t.push_back(t);
    s.y.push_back(f(static_cast<double>(t)));
  }
  return s;
}

}  // namespace

TEST_CASE("windows") {
  const auto s = sample(0, 9, [](double t) { return t; });
  const auto late = late_half(s);
  CHECK(late.begin == 5);
  CHECK(late.end == 10);
  const auto w = time_window(s, 2.5, 6.0);
  CHECK(w.begin == 3);
  CHECK(w.end == 7);
  CHECK(slice(s, w).t == std::vector<double>{3, 4, 5, 6});
  CHECK(full_range(s).size() == 10);
}

TEST_CASE("linear fit") {
  const auto line = sample(0, 50, [](double t) { return kTwoPi * t; });
  const auto f = fit_linear(line, full_range(line));
  CHECK(f.slope == doctest::Approx(kTwoPi).epsilon(1e-13));
  CHECK(f.r_squared == doctest::Approx(1.0));

  const auto flat = sample(0, 50, [](double) { return 0.0; });
  CHECK(fit_linear(flat, full_range(flat)).slope == 0.0);

  Series degenerate{{1, 1, 1}, {1, 2, 3}};
  CHECK_THROWS_AS(fit_linear(degenerate, full_range(degenerate)), ValidationError);
  Series short_series{{1, 2}, {1, 2}};
  CHECK_THROWS_AS(fit_linear(short_series, full_range(short_series)), ValidationError);
}

TEST_CASE("power-law fit") {
  const auto s = sample(1, 200, [](double t) { return 3.0 * std::pow(t, 0.8); });
  const auto f = fit_power_law(s, full_range(s));
  CHECK(f.prefactor == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.exponent == doctest::Approx(0.8).epsilon(1e-12));

  const auto flat = sample(1, 50, [](double) { return 2.5; });
  CHECK(std::abs(fit_power_law(flat, full_range(flat)).exponent) < 1e-12);

  auto bad = s;
  bad.y[10] = 0.0;
  CHECK_THROWS_AS(fit_power_law(bad, full_range(bad)), ValidationError);
}

TEST_CASE("quadratic energy") {
  const auto s = sample(0, 100, [](double t) { return 0.5 * kTwoPi * kTwoPi * t * t + 5.0; });
  const auto f = fit_quadratic_energy(s, kTwoPi, full_range(s));
  CHECK(f.offset == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(f.relative_residual < 1e-12);

  const auto flat = sample(0, 100, [](double) { return 7.25; });
  const auto g = fit_quadratic_energy(flat, 0.0, full_range(flat));
  CHECK(g.offset == doctest::Approx(7.25));
  CHECK(g.relative_residual < 1e-15);

  CHECK_THROWS_AS(fit_quadratic_energy(s, kTwoPi, IndexRange{3, 3}), ValidationError);
}

TEST_CASE("drift force") {
  const auto line = sample(0, 80, [](double t) { return kTwoPi * t; });
  CHECK(drift_force(line) == doctest::Approx(kTwoPi).epsilon(1e-12));
  const auto flat = sample(0, 80, [](double) { return 4.0; });
  CHECK(drift_force(flat) == 0.0);
  Series one{{0}, {1}};
  CHECK_THROWS_AS(drift_force(one), ValidationError);

  // Agreement with the linear fit on nearly linear data.
  const auto wobbly = sample(0, 200, [](double t) { return 6.2 * t + 3.0 * std::sin(0.3 * t); });
  const auto lin = fit_linear(wobbly, late_half(wobbly));
  REQUIRE(lin.r_squared > 0.999);
  CHECK(drift_force(wobbly) == doctest::Approx(lin.slope).epsilon(0.02));
}

TEST_CASE("Gaussian fit") {
  std::vector<double> x, rho;
  for (int i = -200; i <= 200; ++i) {
    x.push_back(600.0 + 0.1 * i);
    rho.push_back(0.04 * std::exp(-std::pow(x.back() - 601.3, 2) / 1.7));
  }
  const auto f = fit_gaussian(x, rho);
  CHECK(f.center == doctest::Approx(601.3).epsilon(1e-9));
  CHECK(f.width == doctest::Approx(1.7).epsilon(1e-6));
  CHECK(f.amplitude == doctest::Approx(0.04).epsilon(1e-6));
  CHECK(f.r_squared > 0.999999);

  SUBCASE("uniform density returns moments with low r^2") {
    std::vector<double> th, u;
    for (int j = 0; j < 256; ++j) {
      th.push_back(-std::numbers::pi + kTwoPi * j / 256);
      u.push_back(1.0 / kTwoPi);
    }
    const auto g = fit_gaussian(th, u);
    CHECK(g.r_squared < 0.5);
    CHECK(g.width > 0.0);
    CHECK(std::abs(g.center) < 0.05);
  }
  SUBCASE("degenerate support") {
    std::vector<double> xs{0, 1, 2}, single{0, 1, 0}, zero{0, 0, 0};
    CHECK_THROWS_AS(fit_gaussian(xs, single), ValidationError);
    CHECK_THROWS_AS(fit_gaussian(xs, zero), ValidationError);
  }
}
