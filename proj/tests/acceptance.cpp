// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <string>
#include <vector>

#include "wavenorm/analysis.hpp"
#include "wavenorm/bessel.hpp"
#include "wavenorm/bounds.hpp"
#include "wavenorm/error.hpp"
#include "wavenorm/local_energy.hpp"
#include "wavenorm/oracles.hpp"
#include "wavenorm/spectral.hpp"

using namespace wavenorm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ProfilePair gaussian_2d() { return {Profile::zero(2), Profile(2, Gaussian{1.0, 1.0, {0.0, 0.0}})}; }
ProfilePair gaussian_1d() {
  return {Profile(1, Gaussian{0.5, 0.3, {0.0, 0.0}}), Profile(1, Gaussian{1.0, 1.0, {0.0, 0.0}})};
}

Outcome example_reproduction() {
  const auto start = std::chrono::steady_clock::now();
  double d = 0.0, s = 0.0, g = 0.0;
  for (const auto& r : verify_example({2.5, 5.0, 10.0, 100.0})) {
    d = std::max(d, r.rel_dalembert);
    s = std::max(s, r.rel_spectral);
    g = std::max(g, r.rel_grid);
  }
  const double secs = seconds_since(start);
  return {d <= 1e-9 && s <= 1e-6 && g <= 1e-6 && secs <= 30.0,
          fmt::format("rel err dalembert {:.2e} (<= 1e-9), spectral {:.2e} (<= 1e-6), grid {:.2e} (<= 1e-6), {:.1f} s",
                      d, s, g, secs)};
}

Outcome energy_conservation() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<double> times{0.0, 1.0, 10.0, 1e2, 1e3};
  double spectral = 0.0;
  for (const auto& pp : {gaussian_1d(), gaussian_2d()}) {
    const SpectralState s(pp);
    const double e0 = energy(s, 0.0).total();
    for (double t : times) spectral = std::max(spectral, std::fabs(energy(s, t).total() - e0) / e0);
  }
  double grid = 0.0;
  auto drift = [&](const ProfilePair& pp, double half, std::size_t points, const std::vector<double>& ts) {
    const double e0 = grid_solve(pp, half, points, 0.0).discrete_energy();
    for (double t : ts) grid = std::max(grid, std::fabs(grid_solve(pp, half, points, t).discrete_energy() - e0) / e0);
  };
  drift(gaussian_1d(), 2048.0, 1 << 16, times);
  // the 2D box certifies t < 250 only
  drift(gaussian_2d(), 256.0, 2048, {0.0, 1.0, 10.0, 1e2});
  const double secs = seconds_since(start);
  return {spectral <= 1e-8 && grid <= 1e-10 && secs <= 60.0,
          fmt::format("spectral drift {:.2e} (<= 1e-8), grid drift {:.2e} (<= 1e-10), {:.1f} s", spectral, grid, secs)};
}

Outcome one_dimensional_rate() {
  const auto times = log_space(1e2, 1e5, 40);
  double worst = 0.0;
  std::string parts;
  for (const auto& pp : {example_data(), gaussian_1d()}) {
    const double a = fit_power(norm_curve(SpectralState(pp), times), {1e2, 1e5}).param("alpha").value;
    worst = std::max(worst, std::fabs(a - 0.5));
    parts += fmt::format("{}alpha {:.5f}", parts.empty() ? "" : ", ", a);
  }
  return {worst <= 0.02, parts + " (0.50 +- 0.02)"};
}

Outcome two_dimensional_rate() {
  const auto curve = norm_curve(SpectralState(gaussian_2d()), log_space(1e3, 1e6, 40));
  const auto& c1 = fit_loglinear(curve, {1e3, 1e6}).param("c1");
  const double rel = c1.std_error / c1.value;
  double lo = INFINITY, hi = 0.0;
  for (const auto& smp : curve.samples) {
    if (smp.t < 1e5) continue;
    const double r = smp.M * smp.M / std::log(smp.t);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double variation = (hi - lo) / hi;
  return {c1.value > 0.0 && rel <= 0.05 && variation <= 0.10,
          fmt::format("c1 {:.6f} rel stderr {:.2e} (<= 5%), M^2/log t variation {:.2f}% (<= 10%)", c1.value, rel,
                      100.0 * variation)};
}

Outcome sandwich() {
  std::string parts;
  bool ok = true;
  const std::vector<std::pair<ProfilePair, std::vector<double>>> families{
      {example_data(), log_space(1.0, 1e5, 40)},
      {gaussian_2d(), log_space(4.0, 1e6, 40)},
  };
  for (const auto& [pp, times] : families) {
    const SpectralState s(pp);
    try {
      const auto rep = sandwich_report(s, times);
      std::size_t checks = 0, enclosed = 0;
      for (const auto& row : rep.rows) {
        checks += row.checks.size();
        if (row.t >= row.t_star) {
          ++enclosed;
          ok = ok && row.lower.final_lb <= row.actual;
        }
        ok = ok && row.actual <= row.upper.final_ub;
      }
      parts += fmt::format("{}n={}: {} terms hold, {} samples past t_star", parts.empty() ? "" : "; ",
                           pp.dimension(), checks, enclosed);
    } catch (const BoundViolation& e) {
      ok = false;
      parts += fmt::format("{}n={}: {}", parts.empty() ? "" : "; ", pp.dimension(), e.what());
    }
  }
  return {ok, parts};
}

Outcome zero_mean_bounded() {
  const ProfilePair pp(Profile::zero(2), Profile(2, PolynomialGaussian{1.0, {{1.0, 1, 0}}}));
  const auto curve = norm_curve(SpectralState(pp), log_space(1.0, 1e6, 60));
  double sup = 0.0, lo = INFINITY, hi = 0.0;
  for (const auto& smp : curve.samples) {
    sup = std::max(sup, smp.M);
    if (smp.t < 1e5) continue;
    lo = std::min(lo, smp.M);
    hi = std::max(hi, smp.M);
  }
  const double variation = (hi - lo) / hi;
  const auto sel = model_select(curve);
  const bool ok = std::isfinite(sup) && variation <= 0.01 && sel.chosen.model == RateModel::bounded;
  return {ok, fmt::format("sup M {:.6f}, last decade variation {:.2e} (<= 1%), selected {}", sup, variation,
                          to_string(sel.chosen.model))};
}

Outcome local_energy_decay() {
  const auto start = std::chrono::steady_clock::now();
  const SpectralState s(gaussian_2d());
  const std::vector<double> times{10.0, 20.0, 40.0, 60.0, 80.0, 100.0, 120.0, 150.0, 180.0, 200.0};
  const auto rep = local_energy_report(s, 5.0, times, {256.0, 2048});
  double residual = 0.0, slack = INFINITY, envelope = INFINITY;
  for (const auto& smp : rep.samples) {
    residual = std::max(residual, smp.morawetz_residual);
    slack = std::min(slack, smp.inequality_slack);
    envelope = std::min(envelope, *smp.decay_envelope - smp.E_R);
  }
  const double secs = seconds_since(start);
  const bool ok = residual <= 1e-6 && slack >= -1e-8 * (1.0 + rep.K0) && envelope >= 0.0 && secs <= 300.0;
  return {ok, fmt::format("max residual {:.2e} (<= 1e-6), min slack {:.4f}, min envelope margin {:.4f}, {:.1f} s",
                          residual, slack, envelope, secs)};
}

Outcome moment_remainder() {
  const std::vector<ProfilePair> catalog{
      example_data(),
      ProfilePair(Profile::zero(1), Profile(1, Gaussian{0.7, 1.0, {0.6, 0.0}})),
      ProfilePair(Profile::zero(1), Profile(1, PolynomialGaussian{1.0, {{1.0, 1, 0}, {0.5, 0, 0}}})),
      gaussian_2d(),
      ProfilePair(Profile::zero(2), Profile(2, Gaussian{1.0, 1.0, {1.5, -1.0}})),
      ProfilePair(Profile::zero(2), Profile(2, IndicatorDisk{2.0, 1.0})),
      ProfilePair(Profile::zero(2), Profile(2, PolynomialGaussian{1.0, {{1.0, 1, 0}}})),
  };
  double worst = 0.0;
  for (const auto& pp : catalog) worst = std::max(worst, moment_remainder_sup(SpectralState(pp)));
  return {worst <= std::sqrt(2.0), fmt::format("largest sup {:.6f} over {} profiles (<= sqrt 2)", worst, catalog.size())};
}

double series(int order, double x) {
  using Big = boost::multiprecision::cpp_bin_float_50;
  const Big half = Big(x) / 2;
  const Big q = -half * half;
  Big term = order == 0 ? Big(1) : half;
  Big sum = term;
  for (int k = 1; k < 400 && abs(term) >= Big("1e-45"); ++k) {
    term *= q / (Big(k) * (k + order));
    sum += term;
  }
  return static_cast<double>(sum);
}

Outcome bessel_accuracy() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double x = 20.0 * i / 1999.0;
    for (int order : {0, 1}) worst = std::max(worst, std::fabs(bessel_j(order, x) - series(order, x)));
  }
  const double secs = seconds_since(start);
  return {worst <= 1e-12 && secs <= 5.0, fmt::format("max abs err {:.2e} (<= 1e-12), {:.2f} s", worst, secs)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria{
      {"example reproduction", example_reproduction},
      {"energy conservation", energy_conservation},
      {"1D sqrt(t) rate", one_dimensional_rate},
      {"2D log rate", two_dimensional_rate},
      {"sandwich bounds", sandwich},
      {"zero-mean boundedness", zero_mean_bounded},
      {"local energy decay", local_energy_decay},
      {"moment remainder constant", moment_remainder},
      {"Bessel accuracy", bessel_accuracy},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    failed += !o.pass;
    fmt::print("[{}] criterion {}: {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
